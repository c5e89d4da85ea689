#include <doctest.h>

#include "oracles.hpp"
#include "tfdiff/arrays.hpp"
#include "tfdiff/error.hpp"
#include "tfdiff/spatial.hpp"

#include <sstream>

using namespace tfdiff;
using doctest::Approx;

TEST_CASE("direction_from_angles follows the azimuth/zenith frame") {
  const auto z = direction_from_angles(0, 0);
  CHECK(z.x() == Approx(0.0));
  CHECK(z.z() == Approx(1.0));
  const auto x = direction_from_angles(0, 90);
  CHECK(x.x() == Approx(1.0));
  CHECK(x.z() == Approx(0.0).epsilon(1e-15));
  const auto r1 = direction_from_angles(90, 45);
  CHECK(r1.x() == Approx(0.0).epsilon(1e-15));
  CHECK(r1.y() == Approx(1.0 / std::sqrt(2.0)));
  CHECK(r1.z() == Approx(1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(direction_from_angles(0, 180.5), DomainError);
  CHECK_THROWS_AS(direction_from_angles(0, -1), DomainError);
}

TEST_CASE("angle round trip away from the poles") {
  for (double az = 0; az < 360; az += 7.5) {
    for (double zen = 0.5; zen < 180; zen += 4.75) {
      const auto a = angles_of(direction_from_angles(az, zen));
      CHECK(std::abs(a.azimuth_deg - az) < 1e-9);
      CHECK(std::abs(a.zenith_deg - zen) < 1e-9);
      CHECK(std::abs(direction_from_angles(az, zen).vec().norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("angle_between") {
  const auto z = Direction::from_vector({0, 0, 1});
  CHECK(angle_between(z, z) == Approx(0.0));
  CHECK(angle_between(z, Direction::from_vector({1, 0, 0})) == Approx(90.0));
  CHECK(angle_between(z, Direction::from_vector({0, 0, -1})) == Approx(180.0));
  CHECK_THROWS_AS(Direction::from_vector({0, 0, 0}), DomainError);
}

TEST_CASE("fibonacci_sphere") {
  SUBCASE("n = 1 sits on the equator") {
    const auto d = fibonacci_sphere(1);
    REQUIRE(d.size() == 1);
    CHECK(d[0].z() == Approx(0.0));
    CHECK(d[0].x() == Approx(1.0));
  }
  SUBCASE("n = 64 is well spread") {
    const auto d = fibonacci_sphere(64);
    REQUIRE(d.size() == 64);
    CHECK(oracle::min_separation_deg(d) > 18.0);
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& v : d) mean += v.vec();
    CHECK((mean / 64.0).norm() < 0.05);
    for (std::size_t k = 0; k < d.size(); ++k) {
      CHECK(d[k].z() == Approx(1.0 - (2.0 * k + 1.0) / 64.0));
    }
  }
  SUBCASE("deterministic") {
    const auto a = fibonacci_sphere(100), b = fibonacci_sphere(100);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].vec() == b[k].vec());
  }
  CHECK_THROWS_AS(fibonacci_sphere(0), DomainError);
}

TEST_CASE("frame_constant") {
  const auto tf = frame_constant(tf24_direction_matrix());
  CHECK(std::abs(tf.A - 4.0) < 1e-12);
  CHECK(tf.max_offdiag < 1e-12);
  CHECK(tf.is_tight);

  const auto id = frame_constant(DirectionMatrix(Eigen::Matrix3d::Identity()));
  CHECK(id.A == Approx(1.0));
  CHECK(id.is_tight);

  DirectionMatrix R(3, 3);
  R << 1, 0, 0, 1, 0, 0, 0, 1, 0;
  CHECK_FALSE(frame_constant(R).is_tight);

  DirectionMatrix bad(1, 3);
  bad << 1, 1, 0;
  CHECK_THROWS_AS(frame_constant(bad), DomainError);
}

TEST_CASE("rotation_from_z maps +z onto the axis") {
  for (const auto& d : fibonacci_sphere(50)) {
    const Eigen::Matrix3d Q = rotation_from_z(d);
    CHECK((Q * Eigen::Vector3d::UnitZ() - d.vec()).norm() < 1e-12);
    CHECK((Q.transpose() * Q - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK(Q.determinant() == Approx(1.0));
  }
  const auto down = Direction::from_vector({0, 0, -1});
  CHECK((rotation_from_z(down) * Eigen::Vector3d::UnitZ() - down.vec()).norm() < 1e-15);
}

TEST_CASE("directions export as CSV") {
  std::ostringstream os;
  const auto d = fibonacci_sphere(3);
  write_directions_csv(os, d);
  const std::string s = os.str();
  CHECK(s.rfind("x,y,z\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 4);
}
