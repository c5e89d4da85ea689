// SPDX-License-Identifier: Apache-2.0
//
// Counter-based random streams. Every stream is derived from a seed plus a
// tuple of integer tags (case, band, grid point, trial), so work items draw
// the same numbers no matter which thread runs them or in which order.
#pragma once

#include <cstdint>
#include <initializer_list>

namespace tfdiff {

class Rng {
 public:
  // Key derived by folding the tags through the SplitMix64 finalizer.
  static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Log-uniform amplitude within +/- range_db around 1.
  double log_uniform_gain(double range_db);
  // exp(uniform(log lo, log hi)).
  double log_uniform(double lo, double hi);

 private:
  explicit Rng(std::uint64_t key) : key_(key) {}
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace tfdiff
