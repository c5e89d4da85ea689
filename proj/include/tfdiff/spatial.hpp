// SPDX-License-Identifier: Apache-2.0
//
// Coordinate conventions and direction algebra.
//
// Right-handed frame: azimuth is measured from +x toward +y, zenith from +z.
//   x = sin(zen) cos(az),  y = sin(zen) sin(az),  z = cos(zen)
#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <span>
#include <vector>

namespace tfdiff {

struct Angles {
  double azimuth_deg;  // [0, 360)
  double zenith_deg;   // [0, 180]
};

// Unit vector on the sphere. Construction always normalizes.
class Direction {
 public:
  Direction() : v_(0.0, 0.0, 1.0) {}

  // Throws DomainError on a zero (or non-finite) vector.
  static Direction from_vector(const Eigen::Vector3d& v);
  static Direction from_angles(double azimuth_deg, double zenith_deg);

  const Eigen::Vector3d& vec() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  Angles angles() const;

  Direction operator-() const { return Direction(-v_); }
  double dot(const Direction& o) const { return v_.dot(o.v_); }

 private:
  explicit Direction(const Eigen::Vector3d& unit) : v_(unit) {}
  Eigen::Vector3d v_;
};

// N x 3, one unit direction per row.
using DirectionMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3>;

Direction direction_from_angles(double azimuth_deg, double zenith_deg);
Angles angles_of(const Direction& d);

// Angle in degrees, in [0, 180].
double angle_between(const Direction& a, const Direction& b);

// Offset equal-area golden-angle lattice:
//   z_k = 1 - (2k+1)/n,  phi_k = 2*pi*k / Phi^2
std::vector<Direction> fibonacci_sphere(std::size_t n);

DirectionMatrix to_matrix(std::span<const Direction> dirs);

struct FrameConstant {
  double A = 0.0;            // trace(R^T R) / 3
  double max_offdiag = 0.0;  // max |R^T R - A I|
  bool is_tight = false;
};

// Throws DomainError when a row is not unit norm (within 1e-9).
FrameConstant frame_constant(const DirectionMatrix& R, double tol = 1e-10);

// Rotation taking +z onto `axis` (Rodrigues). Used to place spherical caps.
Eigen::Matrix3d rotation_from_z(const Direction& axis);

void write_directions_csv(std::ostream& os, std::span<const Direction> dirs);

}  // namespace tfdiff
