// SPDX-License-Identifier: Apache-2.0
#include "tfdiff/bessel.hpp"

#include "tfdiff/error.hpp"

#include <cmath>

namespace tfdiff {

namespace {

// Downward recurrence j_{n-1} = (2n+1)/x j_n - j_{n+1}, started well above
// the turning point and rescaled so that j_0 matches sin(x)/x.
std::vector<double> miller_j(int n_max, double x) {
  const int start = n_max + 16 + static_cast<int>(std::sqrt(40.0 * (n_max + x))) + static_cast<int>(x);
  std::vector<double> f(static_cast<std::size_t>(start) + 2, 0.0);
  f[static_cast<std::size_t>(start) + 1] = 0.0;
  f[static_cast<std::size_t>(start)] = 1e-300;
  for (int n = start; n >= 1; --n) {
    const auto i = static_cast<std::size_t>(n);
    f[i - 1] = (2.0 * n + 1.0) / x * f[i] - f[i + 1];
    if (std::abs(f[i - 1]) > 1e250) {
      for (std::size_t k = i - 1; k < f.size(); ++k) f[k] *= 1e-250;
    }
  }
  // Normalize against whichever of j_0, j_1 is better conditioned.
  const double j0 = std::sin(x) / x;
  const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  const double scale = std::abs(j0) > std::abs(j1) ? j0 / f[0] : j1 / f[1];
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) out[static_cast<std::size_t>(n)] = f[static_cast<std::size_t>(n)] * scale;
  return out;
}

}  // namespace

SphericalBesselTable spherical_bessel(int n_max, double x) {
  if (!(x > 0.0)) throw DomainError("spherical Bessel argument must be positive");
  if (n_max < 0) throw DomainError("negative Bessel order");
  const auto size = static_cast<std::size_t>(n_max) + 1;
  SphericalBesselTable t;
  // One order beyond n_max is needed only through the derivative relation
  // f_n' = f_{n-1} - (n+1)/x f_n, which uses lower orders.
  t.j = miller_j(n_max, x);
  t.y.resize(size);
  t.y[0] = -std::cos(x) / x;
  if (n_max >= 1) t.y[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
  for (std::size_t n = 2; n < size; ++n) {
    t.y[n] = (2.0 * static_cast<double>(n) - 1.0) / x * t.y[n - 1] - t.y[n - 2];
  }
  t.dj.resize(size);
  t.dy.resize(size);
  // n = 0: f_0' = -f_1.
  const double j1 = n_max >= 1 ? t.j[1] : std::sin(x) / (x * x) - std::cos(x) / x;
  const double y1 = n_max >= 1 ? t.y[1] : -std::cos(x) / (x * x) - std::sin(x) / x;
  t.dj[0] = -j1;
  t.dy[0] = -y1;
  for (std::size_t n = 1; n < size; ++n) {
    const double k = (static_cast<double>(n) + 1.0) / x;
    t.dj[n] = t.j[n - 1] - k * t.j[n];
    t.dy[n] = t.y[n - 1] - k * t.y[n];
  }
  return t;
}

}  // namespace tfdiff
