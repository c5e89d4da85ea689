// SPDX-License-Identifier: Apache-2.0
#include "tfdiff/random.hpp"

#include <cmath>

namespace tfdiff {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::derive(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t key = splitmix64(seed);
  for (std::uint64_t t : tags) key = splitmix64(key ^ splitmix64(t + 0x632be59bd9b4e019ULL));
  return Rng(key);
}

std::uint64_t Rng::next_u64() { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::log_uniform_gain(double range_db) {
  return std::pow(10.0, uniform(-range_db, range_db) / 20.0);
}

double Rng::log_uniform(double lo, double hi) {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

}  // namespace tfdiff
