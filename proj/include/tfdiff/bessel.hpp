// SPDX-License-Identifier: Apache-2.0
//
// Spherical Bessel functions of the first and second kind for orders
// 0..n_max at one argument, plus derivatives.
#pragma once

#include <complex>
#include <vector>

namespace tfdiff {

struct SphericalBesselTable {
  std::vector<double> j, y;    // j_n(x), y_n(x)
  std::vector<double> dj, dy;  // derivatives with respect to x

  // h_n = j_n - i y_n, the outgoing wave for the e^{+i w t} convention.
  std::complex<double> h(int n) const { return {j[n], -y[n]}; }
  std::complex<double> dh(int n) const { return {dj[n], -dy[n]}; }
};

// j_n by Miller's downward recurrence normalized to j_0, y_n by upward
// recurrence. Requires x > 0.
SphericalBesselTable spherical_bessel(int n_max, double x);

}  // namespace tfdiff
