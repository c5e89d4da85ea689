// Independent reference computations for the tests. Nothing here calls the
// library; every oracle is a brute-force or textbook formula.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

// Roots of det(C - x I) = -x^3 + t x^2 - m x + d for a Hermitian 3x3, found by
// bisection on the monotonic pieces between the critical points. The
// invariants and the bisection run in 128-bit floating point: in double
// precision a double root moves by sqrt(eps) ~ 1e-8, which would hide the
// accuracy being tested.
inline std::array<double, 3> char_poly_roots(const Eigen::Matrix3cd& C) {
  using q = __float128;
  auto re = [&](int i, int j) { return static_cast<q>(C(i, j).real()); };
  auto im = [&](int i, int j) { return static_cast<q>(C(i, j).imag()); };
  auto abs2 = [&](int i, int j) { return re(i, j) * re(i, j) + im(i, j) * im(i, j); };
  const q a0 = re(0, 0), a1 = re(1, 1), a2 = re(2, 2);
  const q t = a0 + a1 + a2;
  const q m = a0 * a1 - abs2(0, 1) + a0 * a2 - abs2(0, 2) + a1 * a2 - abs2(1, 2);
  // Re(C01 C12 C20)
  const q xr = re(0, 1) * re(1, 2) - im(0, 1) * im(1, 2);
  const q xi = re(0, 1) * im(1, 2) + im(0, 1) * re(1, 2);
  const q triple = xr * re(2, 0) - xi * im(2, 0);
  const q d = a0 * a1 * a2 + 2 * triple - a0 * abs2(1, 2) - a1 * abs2(0, 2) - a2 * abs2(0, 1);
  auto f = [&](q x) { return ((x - t) * x + m) * x - d; };  // monic, sign-flipped

  q bound = 1;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) bound += static_cast<q>(std::abs(C(i, j)));

  // Critical points of f: Newton-polished square root of the discriminant.
  std::vector<q> knots{-bound};
  const q disc = t * t - 3 * m;  // f'(x) = 3x^2 - 2tx + m
  if (disc > 0) {
    q s = static_cast<q>(std::sqrt(static_cast<long double>(disc)));
    for (int it = 0; it < 4; ++it) s = (s + disc / s) / 2;
    knots.push_back((t - s) / 3);
    knots.push_back((t + s) / 3);
  }
  knots.push_back(bound);

  std::vector<q> roots;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    q lo = knots[k], hi = knots[k + 1];
    q flo = f(lo);
    const q fhi = f(hi);
    if (flo == 0) {
      roots.push_back(lo);
      continue;
    }
    if ((flo > 0) == (fhi > 0)) continue;
    for (int it = 0; it < 240; ++it) {
      const q mid = (lo + hi) / 2;
      const q fm = f(mid);
      if ((fm > 0) == (flo > 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    roots.push_back((lo + hi) / 2);
  }
  // A double root sits on a critical point without a sign change.
  while (roots.size() < 3 && knots.size() == 4) {
    const q a = knots[1], b = knots[2];
    const q fa = f(a) < 0 ? -f(a) : f(a);
    const q fb = f(b) < 0 ? -f(b) : f(b);
    roots.push_back(fa < fb ? a : b);
  }
  while (roots.size() < 3) roots.push_back(t / 3);
  std::array<double, 3> out{};
  for (int k = 0; k < 3; ++k) out[static_cast<std::size_t>(k)] = static_cast<double>(roots[static_cast<std::size_t>(k)]);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// Real SH with the 1/sqrt(4 pi) SN3D scaling, ACN order, no Condon-Shortley
// phase. std::assoc_legendre already omits the (-1)^m factor.
inline double real_sh(int n, int m, double azimuth, double zenith) {
  const int am = std::abs(m);
  double ratio = 1.0;
  for (int k = n - am + 1; k <= n + am; ++k) ratio /= k;
  const double norm = std::sqrt((m == 0 ? 1.0 : 2.0) * ratio / (4.0 * std::numbers::pi));
  const double P = std::assoc_legendre(static_cast<unsigned>(n), static_cast<unsigned>(am), std::cos(zenith));
  if (m > 0) return norm * P * std::cos(am * azimuth);
  if (m < 0) return norm * P * std::sin(am * azimuth);
  return norm * P;
}

// Rigid-sphere modal gain from the standard library special functions.
inline std::complex<double> rigid_bn(int n, double x) {
  using cd = std::complex<double>;
  auto j = [](int k, double z) { return std::sph_bessel(static_cast<unsigned>(k), z); };
  auto y = [](int k, double z) { return std::sph_neumann(static_cast<unsigned>(k), z); };
  const double jn = j(n, x);
  const double djn = n / x * jn - j(n + 1, x);
  const double yn = y(n, x);
  const double dyn = n / x * yn - y(n + 1, x);
  const cd h(jn, -yn), dh(djn, -dyn);
  return 4.0 * std::numbers::pi * std::pow(cd(0.0, 1.0), n) * (jn - djn / dh * h);
}

// Minimum pairwise angle in degrees by exhaustive search.
template <typename Dirs>
double min_separation_deg(const Dirs& d) {
  double best = 180.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j)
      best = std::min(best, std::acos(std::clamp(d[i].dot(d[j]), -1.0, 1.0)) * 180.0 / std::numbers::pi);
  return best;
}

}  // namespace oracle
