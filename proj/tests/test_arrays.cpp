#include <doctest.h>

#include "tfdiff/arrays.hpp"
#include "tfdiff/error.hpp"

using namespace tfdiff;
using doctest::Approx;

TEST_CASE("Afmt layout") {
  const auto a = make_afmt();
  REQUIRE(a.size() == 4);
  const double s = 1.0 / std::sqrt(3.0);
  CHECK((a.sensors[0].orientation.vec() - Eigen::Vector3d(s, s, s)).norm() < 1e-15);
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  std::vector<Direction> dirs;
  for (const auto& m : a.sensors) {
    sum += m.orientation.vec();
    dirs.push_back(m.orientation);
    CHECK(m.position.norm() == Approx(0.006));
    CHECK((m.position - 0.006 * m.orientation.vec()).norm() < 1e-15);
  }
  CHECK(sum.norm() < 1e-15);
  const auto fc = frame_constant(to_matrix(dirs));
  CHECK(fc.A == Approx(4.0 / 3.0));
  CHECK(fc.is_tight);
  CHECK(a.directivity_of(a.sensors[0]).gain(1.0, 1000) == Approx(1.0));
}

TEST_CASE("Fibo64 layout") {
  const auto a = make_fibo64();
  REQUIRE(a.size() == 64);
  CHECK(a.baffle.type == Baffle::Type::RigidSphere);
  CHECK(a.baffle.radius == 0.042);
  for (const auto& m : a.sensors) {
    CHECK(m.position.norm() == Approx(0.042));
    CHECK((m.orientation.vec() - m.position / 0.042).norm() < 1e-15);
    CHECK(std::abs(m.orientation.vec().norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("TF24 layout") {
  const auto a = make_tf24();
  REQUIRE(a.size() == 24);
  REQUIRE(a.pairs.size() == 12);
  CHECK((a.pairs[10].axis.vec() - Eigen::Vector3d::UnitX()).norm() < 1e-15);
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  std::vector<Direction> axes;
  for (const auto& p : a.pairs) {
    const auto& plus = a.sensors[p.plus];
    const auto& minus = a.sensors[p.minus];
    CHECK((plus.position - minus.position).norm() == Approx(0.020));
    CHECK((plus.position - 0.010 * p.axis.vec()).norm() < 1e-15);
    CHECK((plus.orientation.vec() - p.axis.vec()).norm() < 1e-15);
    CHECK((minus.orientation.vec() + p.axis.vec()).norm() < 1e-15);
    axes.push_back(p.axis);
  }
  for (const auto& m : a.sensors) sum += m.position;
  CHECK(sum.norm() < 1e-15);
  CHECK(frame_constant(to_matrix(axes)).A == Approx(4.0));
}

TEST_CASE("array layouts survive a JSON round trip") {
  for (auto kind : {ArrayKind::Afmt, ArrayKind::Fibo64, ArrayKind::Tf24}) {
    const auto a = make_array(kind);
    const auto b = array_from_json(array_to_json(a));
    CHECK(b.name == a.name);
    CHECK(b.kind == a.kind);
    CHECK(b.baffle.radius == a.baffle.radius);
    REQUIRE(b.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(b.sensors[i].position == a.sensors[i].position);
      CHECK(b.sensors[i].directivity == a.sensors[i].directivity);
    }
    CHECK(b.pairs.size() == a.pairs.size());
    CHECK(b.directivities == a.directivities);
  }
}

TEST_CASE("malformed layouts are rejected") {
  CHECK_THROWS_AS(array_from_json("{"), FormatError);
  CHECK_THROWS_AS(array_from_json(R"({"name":"x"})"), FormatError);
  CHECK_THROWS_AS(array_from_json(R"({"name":"x","kind":"tf24","baffle":{"type":"none"},
      "sensors":[{"position":[0,0,0],"orientation":[0,0,1],"directivity":"nope"}],"directivities":{}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_array_kind("eigenmike"), UsageError);
  CHECK_THROWS_AS(load_array_file("/nonexistent/layout.json"), IoError);
}

TEST_CASE("with_directivity replaces one model") {
  const auto a = with_directivity(make_tf24(), "tf24", DirectivityPolynomial::cardioid());
  CHECK(a.directivity_of(a.sensors[3]).gain(-1.0, 500) == Approx(0.0));
}
