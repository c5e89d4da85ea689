// SPDX-License-Identifier: Apache-2.0
#include "tfdiff/sh.hpp"

#include "tfdiff/bessel.hpp"
#include "tfdiff/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace tfdiff {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

std::complex<double> i_pow(int n) {
  switch (n & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

Eigen::VectorXd sh_row(const Direction& d, int order) {
  if (order < 0) throw DomainError("SH order must be >= 0");
  Eigen::VectorXd row(sh_count(order));
  const double c = std::clamp(d.z(), -1.0, 1.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  const double az = std::atan2(d.y(), d.x());

  // q(n, m) = sqrt((n-m)!/(n+m)!) P_n^m, built column by column in m.
  std::vector<double> qmm(static_cast<std::size_t>(order) + 1);
  qmm[0] = 1.0;
  for (int m = 1; m <= order; ++m) {
    qmm[static_cast<std::size_t>(m)] =
        qmm[static_cast<std::size_t>(m) - 1] * s * std::sqrt((2.0 * m - 1.0) / (2.0 * m));
  }
  for (int m = 0; m <= order; ++m) {
    const double norm = std::sqrt((m == 0 ? 1.0 : 2.0) / kFourPi);
    const double cm = std::cos(m * az);
    const double sm = std::sin(m * az);
    double q_prev = 0.0;
    double q = qmm[static_cast<std::size_t>(m)];
    for (int n = m; n <= order; ++n) {
      if (n > m) {
        const double q_next = n == m + 1
                                  ? std::sqrt(2.0 * m + 1.0) * c * q
                                  : ((2.0 * n - 1.0) * c * q -
                                     std::sqrt((n + m - 1.0) * (n - m - 1.0)) * q_prev) /
                                        std::sqrt((n - m) * static_cast<double>(n + m));
        q_prev = q;
        q = q_next;
      }
      row(acn(n, m)) = norm * q * cm;
      if (m > 0) row(acn(n, -m)) = norm * q * sm;
    }
  }
  return row;
}

Eigen::MatrixXd sh_matrix(std::span<const Direction> dirs, int order) {
  Eigen::MatrixXd Y(static_cast<Eigen::Index>(dirs.size()), sh_count(order));
  for (std::size_t q = 0; q < dirs.size(); ++q) {
    Y.row(static_cast<Eigen::Index>(q)) = sh_row(dirs[q], order).transpose();
  }
  return Y;
}

Eigen::VectorXd legendre(int order, double x) {
  Eigen::VectorXd P(order + 1);
  P(0) = 1.0;
  if (order >= 1) P(1) = x;
  for (int n = 1; n < order; ++n) P(n + 1) = ((2.0 * n + 1.0) * x * P(n) - n * P(n - 1)) / (n + 1.0);
  return P;
}

Eigen::VectorXcd radial_filters(double ka, int order) {
  if (!(ka > 0.0)) throw DomainError("radial filters need ka > 0");
  const auto t = spherical_bessel(order, ka);
  Eigen::VectorXcd b(order + 1);
  for (int n = 0; n <= order; ++n) {
    const std::complex<double> ratio = t.dj[n] / t.dh(n);
    b(n) = kFourPi * i_pow(n) * (t.j[n] - ratio * t.h(n));
  }
  return b;
}

Eigen::VectorXcd radial_filters_wronskian(double ka, int order) {
  if (!(ka > 0.0)) throw DomainError("radial filters need ka > 0");
  const auto t = spherical_bessel(order, ka);
  Eigen::VectorXcd b(order + 1);
  const std::complex<double> minus_i(0.0, -1.0);
  for (int n = 0; n <= order; ++n) b(n) = kFourPi * i_pow(n) * minus_i / (ka * ka * t.dh(n));
  return b;
}

int rigid_truncation_order(double ka, double rel_tol, int max_order) {
  const auto b = radial_filters_wronskian(ka, max_order);
  double peak = 0.0;
  for (int n = 0; n <= max_order; ++n) {
    peak = std::max(peak, std::abs(b(n)));
    if (n > ka && std::abs(b(n)) < rel_tol * peak) return n;
  }
  return max_order;
}

Eigen::VectorXd plane_wave_coefficients(const Direction& from, int order) {
  Eigen::VectorXd a = sh_row(from, order);
  for (int n = 0; n <= order; ++n) {
    for (int m = -n; m <= n; ++m) a(acn(n, m)) *= 2.0 * n + 1.0;
  }
  return a;
}

HoaEstimator::HoaEstimator(const ArraySpec& array, int order, double lambda)
    : order_(order), lambda_(lambda), sensors_(array.size()) {
  if (array.baffle.type != Baffle::Type::RigidSphere) {
    throw WrongModelError("HOA estimation needs a rigid-sphere array");
  }
  if (order < 0) throw DomainError("HOA order must be >= 0");
  if (!(lambda >= 0.0)) throw DomainError("regularization must be >= 0");
  radius_ = array.baffle.radius;
  std::vector<Direction> dirs;
  dirs.reserve(array.size());
  for (const auto& s : array.sensors) dirs.push_back(Direction::from_vector(s.position));
  const Eigen::MatrixXd Y = sh_matrix(dirs, order);
  const Eigen::MatrixXd G =
      Y.transpose() * Y + lambda * Eigen::MatrixXd::Identity(Y.cols(), Y.cols());
  pinv_ = G.ldlt().solve(Y.transpose());
}

HoaCoefficients HoaEstimator::estimate(const PressureSnapshot& snap, const Medium& medium) const {
  if (static_cast<std::size_t>(snap.p.size()) != sensors_) {
    throw DomainError("snapshot has " + std::to_string(snap.p.size()) + " channels, array has " +
                      std::to_string(sensors_));
  }
  const double ka = medium.wavenumber(snap.frequency) * radius_;
  const Eigen::VectorXcd b = radial_filters(ka, order_);
  HoaCoefficients out;
  out.order = order_;
  out.a = pinv_.cast<std::complex<double>>() * snap.p;
  for (int n = 0; n <= order_; ++n) {
    for (int m = -n; m <= n; ++m) out.a(acn(n, m)) /= b(n);
  }
  return out;
}

HoaCoefficients estimate_hoa(const PressureSnapshot& snap, const ArraySpec& array,
                             const Medium& medium, int order, double lambda) {
  return HoaEstimator(array, order, lambda).estimate(snap, medium);
}

PressureVelocity foa_from_hoa(const HoaCoefficients& a, const Medium& medium) {
  if (a.order < 1 || a.a.size() < 4) throw MissingOrderError("FOA extraction needs order >= 1");
  const double root = std::sqrt(kFourPi);
  PressureVelocity pv;
  pv.p = root * a.a(0);
  const double g = -root / (3.0 * medium.impedance());
  pv.u = Eigen::Vector3cd(g * a.a(3), g * a.a(1), g * a.a(2));
  return pv;
}

void write_hoa_csv(std::ostream& os, const HoaCoefficients& a) {
  os << "acn,re,im\n";
  char buf[96];
  for (Eigen::Index i = 0; i < a.a.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g\n", static_cast<long>(i), a.a(i).real(), a.a(i).imag());
    os << buf;
  }
}

}  // namespace tfdiff
