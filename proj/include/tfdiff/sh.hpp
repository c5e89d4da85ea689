// SPDX-License-Identifier: Apache-2.0
//
// Real spherical harmonics in ACN order with SN3D normalization,
//   Y_nm = sqrt((2 - delta_m0) / 4pi) * sqrt((n-|m|)!/(n+|m|)!) * P_n^|m|(cos zen)
//          * { cos(m az)   m >= 0
//            { sin(|m| az) m <  0
// without the Condon-Shortley phase. Then Y_00 = 1/sqrt(4pi), the integral
// of Y_nm^2 over the sphere is 1/(2n+1) and
//   sum_m Y_nm(a) Y_nm(b) = P_n(a.b) / 4pi.
//
// A unit plane wave arriving from s expands as
//   exp(i k r.s) = sum_nm a_nm b_n(kr) Y_nm(r^),  a_nm = (2n+1) Y_nm(s)
// with b_n = 4pi i^n j_n in free space. On a rigid sphere of radius a the
// radial filter becomes
//   b_n(ka) = 4pi i^n [ j_n - (j_n'/h_n') h_n ] = 4pi i^n (-i) / ((ka)^2 h_n'(ka)).
#pragma once

#include "tfdiff/arrays.hpp"
#include "tfdiff/wavefield.hpp"

#include <Eigen/Core>

#include <complex>
#include <iosfwd>
#include <span>

namespace tfdiff {

inline constexpr int acn(int n, int m) { return n * n + n + m; }
inline constexpr int sh_count(int order) { return (order + 1) * (order + 1); }

// One row of SH values for a direction, length (N+1)^2.
Eigen::VectorXd sh_row(const Direction& d, int order);
// Q x (N+1)^2.
Eigen::MatrixXd sh_matrix(std::span<const Direction> dirs, int order);

// Legendre polynomials P_0..P_N at x.
Eigen::VectorXd legendre(int order, double x);

// Rigid-sphere radial filters b_0..b_N (subtraction form). ka <= 0 throws.
Eigen::VectorXcd radial_filters(double ka, int order);
// Same quantity through the Wronskian identity; used as a cross-check.
Eigen::VectorXcd radial_filters_wronskian(double ka, int order);

// Smallest n > ka with |b_n| < rel_tol * max|b|, limited to max_order.
int rigid_truncation_order(double ka, double rel_tol = 1e-8, int max_order = 80);

// a_nm for a unit plane wave arriving from `from`.
Eigen::VectorXd plane_wave_coefficients(const Direction& from, int order);

struct HoaCoefficients {
  int order = 0;
  Eigen::VectorXcd a;  // ACN / SN3D
};

// Regularized least squares in the SH domain followed by radial
// equalization: a = B^-1 (Y^T Y + lambda I)^-1 Y^T p.
class HoaEstimator {
 public:
  HoaEstimator(const ArraySpec& array, int order = 4, double lambda = 1e-4);

  int order() const { return order_; }
  double lambda() const { return lambda_; }
  HoaCoefficients estimate(const PressureSnapshot& snap, const Medium& medium) const;

 private:
  int order_;
  double lambda_;
  double radius_;
  std::size_t sensors_;
  Eigen::MatrixXd pinv_;  // (N+1)^2 x Q
};

HoaCoefficients estimate_hoa(const PressureSnapshot& snap, const ArraySpec& array,
                             const Medium& medium, int order = 4, double lambda = 1e-4);

struct PressureVelocity {
  std::complex<double> p;
  Eigen::Vector3cd u;
};

// p = sqrt(4pi) a_00,  u = -sqrt(4pi) / (3 Z0) [a_3, a_1, a_2]  (x, y, z).
// Throws MissingOrderError when order < 1.
PressureVelocity foa_from_hoa(const HoaCoefficients& a, const Medium& medium);

void write_hoa_csv(std::ostream& os, const HoaCoefficients& a);

}  // namespace tfdiff
