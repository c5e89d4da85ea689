// SPDX-License-Identifier: Apache-2.0
#include "tfdiff/spatial.hpp"

#include "tfdiff/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace tfdiff {

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
}

Direction Direction::from_vector(const Eigen::Vector3d& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw DomainError("direction from a zero or non-finite vector");
  }
  return Direction(v / n);
}

Direction Direction::from_angles(double azimuth_deg, double zenith_deg) {
  if (!(zenith_deg >= 0.0 && zenith_deg <= 180.0)) {
    throw DomainError("zenith angle outside [0, 180] degrees");
  }
  const double az = azimuth_deg * kDeg;
  const double zen = zenith_deg * kDeg;
  return Direction(Eigen::Vector3d(std::sin(zen) * std::cos(az),
                                   std::sin(zen) * std::sin(az), std::cos(zen)));
}

Angles Direction::angles() const {
  const double zen = std::acos(std::clamp(v_.z(), -1.0, 1.0)) / kDeg;
  double az = std::atan2(v_.y(), v_.x()) / kDeg;
  if (az < 0.0) az += 360.0;
  if (az >= 360.0) az -= 360.0;
  return {az, zen};
}

Direction direction_from_angles(double azimuth_deg, double zenith_deg) {
  return Direction::from_angles(azimuth_deg, zenith_deg);
}

Angles angles_of(const Direction& d) { return d.angles(); }

double angle_between(const Direction& a, const Direction& b) {
  return std::acos(std::clamp(a.dot(b), -1.0, 1.0)) / kDeg;
}

std::vector<Direction> fibonacci_sphere(std::size_t n) {
  if (n == 0) throw DomainError("fibonacci_sphere needs n >= 1");
  const double phi = std::numbers::phi;
  const double golden_angle = 2.0 * std::numbers::pi / (phi * phi);
  std::vector<Direction> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double az = golden_angle * static_cast<double>(k);
    out.push_back(Direction::from_vector({r * std::cos(az), r * std::sin(az), z}));
  }
  return out;
}

DirectionMatrix to_matrix(std::span<const Direction> dirs) {
  DirectionMatrix R(static_cast<Eigen::Index>(dirs.size()), 3);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    R.row(static_cast<Eigen::Index>(i)) = dirs[i].vec().transpose();
  }
  return R;
}

FrameConstant frame_constant(const DirectionMatrix& R, double tol) {
  for (Eigen::Index i = 0; i < R.rows(); ++i) {
    if (std::abs(R.row(i).norm() - 1.0) > 1e-9) {
      throw DomainError("frame_constant: row " + std::to_string(i) + " is not unit norm");
    }
  }
  const Eigen::Matrix3d G = R.transpose() * R;
  FrameConstant fc;
  fc.A = G.trace() / 3.0;
  fc.max_offdiag = (G - fc.A * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  fc.is_tight = fc.max_offdiag < tol;
  return fc;
}

Eigen::Matrix3d rotation_from_z(const Direction& axis) {
  const Eigen::Vector3d z(0.0, 0.0, 1.0);
  const Eigen::Vector3d a = z.cross(axis.vec());
  const double s = a.norm();
  const double c = axis.z();
  if (s < 1e-15) {
    if (c > 0.0) return Eigen::Matrix3d::Identity();
    // Half turn about x.
    return Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal();
  }
  const Eigen::Vector3d k = a / s;
  Eigen::Matrix3d K;
  K << 0.0, -k.z(), k.y(), k.z(), 0.0, -k.x(), -k.y(), k.x(), 0.0;
  return Eigen::Matrix3d::Identity() + s * K + (1.0 - c) * K * K;
}

void write_directions_csv(std::ostream& os, std::span<const Direction> dirs) {
  os << "x,y,z\n";
  char buf[96];
  for (const auto& d : dirs) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", d.x(), d.y(), d.z());
    os << buf;
  }
}

}  // namespace tfdiff
