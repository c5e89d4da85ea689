// SPDX-License-Identifier: Apache-2.0
#include "tfdiff/arrays.hpp"

#include "tfdiff/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace tfdiff {

using json = nlohmann::json;

const char* array_kind_name(ArrayKind kind) {
  switch (kind) {
    case ArrayKind::Afmt: return "afmt";
    case ArrayKind::Fibo64: return "fibo64";
    case ArrayKind::Tf24: return "tf24";
  }
  return "?";
}

ArrayKind parse_array_kind(const std::string& name) {
  if (name == "afmt") return ArrayKind::Afmt;
  if (name == "fibo64") return ArrayKind::Fibo64;
  if (name == "tf24") return ArrayKind::Tf24;
  throw UsageError("unknown array '" + name + "' (expected afmt|fibo64|tf24)");
}

const DirectivityPolynomial& ArraySpec::directivity_of(const Sensor& s) const {
  auto it = directivities.find(s.directivity);
  if (it == directivities.end()) {
    throw ConfigError("array '" + name + "' has no directivity model '" + s.directivity + "'");
  }
  return it->second;
}

std::vector<Direction> afmt_capsule_directions() {
  return {
      Direction::from_vector({+1, +1, +1}),  // FLU
      Direction::from_vector({+1, -1, -1}),  // FRD
      Direction::from_vector({-1, +1, -1}),  // BLD
      Direction::from_vector({-1, -1, +1}),  // BRU
  };
}

ArraySpec make_afmt() {
  ArraySpec a;
  a.name = "afmt";
  a.kind = ArrayKind::Afmt;
  for (const auto& d : afmt_capsule_directions()) {
    a.sensors.push_back({kAfmtCapsuleDistance * d.vec(), d, "cardioid", 1.0});
  }
  a.directivities.emplace("cardioid", DirectivityPolynomial::cardioid());
  return a;
}

ArraySpec make_fibo64() {
  ArraySpec a;
  a.name = "fibo64";
  a.kind = ArrayKind::Fibo64;
  a.baffle = {Baffle::Type::RigidSphere, kFibo64Radius};
  for (const auto& d : fibonacci_sphere(64)) {
    a.sensors.push_back({kFibo64Radius * d.vec(), d, "omni", 1.0});
  }
  a.directivities.emplace("omni", DirectivityPolynomial::omni());
  return a;
}

DirectionMatrix tf24_direction_matrix() {
  const double h = 1.0 / std::sqrt(2.0);
  DirectionMatrix R(12, 3);
  R << 0.0, h, h,
       0.5, 0.5, h,
       h, 0.0, h,
       0.5, -0.5, h,
       0.0, -h, h,
       -0.5, -0.5, h,
       -h, 0.0, h,
       -0.5, 0.5, h,
       0.0, 1.0, 0.0,
       h, h, 0.0,
       1.0, 0.0, 0.0,
       h, -h, 0.0;
  return R;
}

ArraySpec make_tf24() {
  ArraySpec a;
  a.name = "tf24";
  a.kind = ArrayKind::Tf24;
  const DirectionMatrix R = tf24_direction_matrix();
  for (Eigen::Index i = 0; i < R.rows(); ++i) {
    const Direction axis = Direction::from_vector(R.row(i).transpose());
    const std::size_t plus = a.sensors.size();
    a.sensors.push_back({kTf24HalfSpacing * axis.vec(), axis, "tf24", 1.0});
    a.sensors.push_back({-kTf24HalfSpacing * axis.vec(), -axis, "tf24", 1.0});
    a.pairs.push_back({axis, plus, plus + 1});
  }
  a.directivities.emplace("tf24", tf24_synthetic_directivity());
  return a;
}

ArraySpec make_array(ArrayKind kind) {
  switch (kind) {
    case ArrayKind::Afmt: return make_afmt();
    case ArrayKind::Fibo64: return make_fibo64();
    case ArrayKind::Tf24: return make_tf24();
  }
  throw DomainError("unknown array kind");
}

ArraySpec with_directivity(ArraySpec spec, const std::string& id, DirectivityPolynomial model) {
  spec.directivities[id] = std::move(model);
  return spec;
}

namespace {

json vec_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d json_vec(const json& j) {
  if (!j.is_array() || j.size() != 3) throw FormatError("expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

std::string array_to_json(const ArraySpec& spec) {
  json j;
  j["name"] = spec.name;
  j["kind"] = array_kind_name(spec.kind);
  j["baffle"] = spec.baffle.type == Baffle::Type::RigidSphere
                    ? json{{"type", "rigid_sphere"}, {"radius", spec.baffle.radius}}
                    : json{{"type", "none"}};
  j["sensors"] = json::array();
  for (const auto& s : spec.sensors) {
    j["sensors"].push_back({{"position", vec_json(s.position)},
                            {"orientation", vec_json(s.orientation.vec())},
                            {"directivity", s.directivity},
                            {"sensitivity", s.sensitivity}});
  }
  j["pairs"] = json::array();
  for (const auto& p : spec.pairs) {
    j["pairs"].push_back({{"axis", vec_json(p.axis.vec())}, {"plus", p.plus}, {"minus", p.minus}});
  }
  j["directivities"] = json::object();
  for (const auto& [id, model] : spec.directivities) {
    json bands = json::array();
    for (const auto& b : model.bands()) bands.push_back({{"band_hz", b.band_hz}, {"coeffs", b.coeffs}});
    j["directivities"][id] = bands;
  }
  return j.dump(2);
}

ArraySpec array_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("array layout: ") + e.what());
  }
  try {
    ArraySpec a;
    a.name = j.at("name").get<std::string>();
    a.kind = parse_array_kind(j.at("kind").get<std::string>());
    const auto& baffle = j.at("baffle");
    if (baffle.at("type") == "rigid_sphere") {
      a.baffle = {Baffle::Type::RigidSphere, baffle.at("radius").get<double>()};
    } else if (baffle.at("type") != "none") {
      throw FormatError("unknown baffle type");
    }
    for (const auto& s : j.at("sensors")) {
      a.sensors.push_back({json_vec(s.at("position")),
                           Direction::from_vector(json_vec(s.at("orientation"))),
                           s.at("directivity").get<std::string>(),
                           s.value("sensitivity", 1.0)});
    }
    for (const auto& p : j.value("pairs", json::array())) {
      a.pairs.push_back({Direction::from_vector(json_vec(p.at("axis"))),
                         p.at("plus").get<std::size_t>(), p.at("minus").get<std::size_t>()});
    }
    for (const auto& [id, bands] : j.at("directivities").items()) {
      std::vector<DirectivityPolynomial::Band> bs;
      for (const auto& b : bands) {
        bs.push_back({b.at("band_hz").get<double>(), b.at("coeffs").get<std::vector<double>>()});
      }
      a.directivities.emplace(id, DirectivityPolynomial(std::move(bs)));
    }
    for (const auto& s : a.sensors) (void)a.directivity_of(s);
    for (const auto& p : a.pairs) {
      if (p.plus >= a.size() || p.minus >= a.size()) throw FormatError("pair sensor index out of range");
    }
    return a;
  } catch (const json::exception& e) {
    throw FormatError(std::string("array layout: ") + e.what());
  }
}

ArraySpec load_array_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open array file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return array_from_json(ss.str());
}

}  // namespace tfdiff
