// SPDX-License-Identifier: Apache-2.0
//
// Geometry and channel layout of the three arrays:
//   afmt   - tetrahedral A-format, 4 cardioid capsules 6 mm from the origin
//   fibo64 - 64 omnidirectional sensors on a rigid sphere of radius 42 mm
//   tf24   - 12 antipodal pairs of directional capsules, 10 mm from the origin
#pragma once

#include "tfdiff/directivity.hpp"
#include "tfdiff/spatial.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace tfdiff {

enum class ArrayKind { Afmt, Fibo64, Tf24 };

const char* array_kind_name(ArrayKind kind);
ArrayKind parse_array_kind(const std::string& name);  // throws UsageError

struct Sensor {
  Eigen::Vector3d position;  // m
  Direction orientation;
  std::string directivity;   // key into ArraySpec::directivities
  double sensitivity = 1.0;  // on-axis S_m
};

struct Baffle {
  enum class Type { None, RigidSphere } type = Type::None;
  double radius = 0.0;  // m
};

// One tight-frame velocity axis: sensor `plus` sits at +d*axis facing +axis.
struct PairAxis {
  Direction axis;
  std::size_t plus;
  std::size_t minus;
};

struct ArraySpec {
  std::string name;
  ArrayKind kind = ArrayKind::Afmt;
  std::vector<Sensor> sensors;
  Baffle baffle;
  std::vector<PairAxis> pairs;  // TF24 only
  std::map<std::string, DirectivityPolynomial> directivities;

  std::size_t size() const { return sensors.size(); }
  // Throws ConfigError when a sensor references a missing model.
  const DirectivityPolynomial& directivity_of(const Sensor& s) const;
};

inline constexpr double kAfmtCapsuleDistance = 0.006;
inline constexpr double kFibo64Radius = 0.042;
inline constexpr double kTf24HalfSpacing = 0.010;

ArraySpec make_afmt();
ArraySpec make_fibo64();
ArraySpec make_tf24();
ArraySpec make_array(ArrayKind kind);

// Rows of the 12 x 3 tight-frame direction matrix (A = 4).
DirectionMatrix tf24_direction_matrix();
// Capsule axes d1..d4 in FLU, FRD, BLD, BRU order.
std::vector<Direction> afmt_capsule_directions();

// Returns a copy with one directivity model replaced or added.
ArraySpec with_directivity(ArraySpec spec, const std::string& id, DirectivityPolynomial model);

// Structured text (JSON) round trip.
std::string array_to_json(const ArraySpec& spec);
ArraySpec array_from_json(const std::string& text);
ArraySpec load_array_file(const std::string& path);

}  // namespace tfdiff
