#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rendermem/rng.hpp"
#include "rendermem/viewpoint.hpp"

using namespace rendermem;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double deg(double d) { return d * kPi / 180.0; }
const Vec3 kUp{0.0, 1.0, 0.0};
}  // namespace

TEST_CASE("effective half-FOV") {
  CHECK(effective_half_fov(deg(90), 1.0) == doctest::Approx(deg(45)).epsilon(1e-12));
  // aspect < 1: horizontal constraint wins
  CHECK(effective_half_fov(deg(90), 0.5) ==
        doctest::Approx(0.4636476090008061).epsilon(1e-12));
  // aspect > 1: vertical branch wins (horizontal ~49.1 deg > 30 deg)
  CHECK(effective_half_fov(deg(60), 2.0) == doctest::Approx(deg(30)).epsilon(1e-12));

  CHECK_THROWS_AS(effective_half_fov(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(effective_half_fov(kPi, 1.0), DomainError);
  CHECK_THROWS_AS(effective_half_fov(deg(90), 0.0), DomainError);
  CHECK_THROWS_AS(effective_half_fov(deg(90), -1.0), DomainError);
}

TEST_CASE("effective half-FOV is monotone in aspect, capped at fov_v/2") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double fov = rng.uniform(0.05, 3.0);
    const double a1 = rng.uniform(0.05, 4.0);
    const double a2 = a1 + rng.uniform(0.0, 2.0);
    CHECK(effective_half_fov(fov, a1) <= effective_half_fov(fov, a2) + 1e-15);
    const double wide = rng.uniform(1.0, 5.0);
    CHECK(effective_half_fov(fov, wide) == doctest::Approx(fov / 2).epsilon(1e-12));
  }
}

TEST_CASE("minimum camera distance") {
  CHECK(min_camera_distance(1.0, deg(45)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(min_camera_distance(1.0, deg(90)) == doctest::Approx(1.0).epsilon(1e-12));
  // unit-cube sphere radius at beta = 45 deg; cross-check asin(r/d) = beta
  const double r = 0.8660254;
  const double d = min_camera_distance(r, deg(45));
  CHECK(d == doctest::Approx(1.2247449).epsilon(1e-6));
  CHECK(std::asin(r / d) == doctest::Approx(deg(45)).epsilon(1e-12));
  CHECK(min_camera_distance(0.0, deg(45)) == 0.0);
  CHECK_THROWS_AS(min_camera_distance(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(min_camera_distance(1.0, -0.1), DomainError);
  CHECK_THROWS_AS(min_camera_distance(-1.0, deg(45)), DomainError);
}

TEST_CASE("surround ring: worked K=4 configuration") {
  const BoundingSphere sphere{{0, 0, 0}, 1.0};
  CameraIntrinsics intr;
  intr.fov_v = deg(90);
  intr.aspect = 1.0;
  const auto poses = surround_poses(sphere, intr, 1.0, 4, 0.0, kUp);
  REQUIRE(poses.size() == 4);
  const double d = std::sqrt(2.0);
  const Vec3 expected[4] = {{d, 0, 0}, {0, 0, d}, {-d, 0, 0}, {0, 0, -d}};
  for (int i = 0; i < 4; ++i) {
    CHECK((poses[i].position - expected[i]).norm() < 1e-12);
    // forward points back at the center
    CHECK((poses[i].forward - (-poses[i].position.normalized())).norm() < 1e-12);
  }
}

TEST_CASE("surround ring: K=1 sits on the p axis") {
  const BoundingSphere sphere{{2, 1, -3}, 0.5};
  CameraIntrinsics intr;
  intr.fov_v = deg(90);
  intr.aspect = 1.0;
  const auto poses = surround_poses(sphere, intr, 1.0, 1, 0.0, kUp);
  REQUIRE(poses.size() == 1);
  const double d = 0.5 * std::sqrt(2.0);
  CHECK((poses[0].position - (sphere.center + Vec3{d, 0, 0})).norm() < 1e-12);
  CHECK((poses[0].forward - Vec3{-1, 0, 0}).norm() < 1e-12);
}

TEST_CASE("surround ring: azimuth gaps and elevation") {
  Rng rng(4242);
  for (int k = 2; k <= 12; ++k) {
    const BoundingSphere sphere{{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)},
                                rng.uniform(0.2, 2.0)};
    CameraIntrinsics intr;
    intr.fov_v = rng.uniform(0.4, 2.6);
    intr.aspect = rng.uniform(0.4, 2.5);
    const double alpha = rng.uniform(1.0, 3.0);
    const double phi = rng.uniform(-1.2, 1.2);
    const auto poses = surround_poses(sphere, intr, alpha, k, phi, kUp);
    REQUIRE(static_cast<int>(poses.size()) == k);

    const double beta = effective_half_fov(intr.fov_v, intr.aspect);
    const double d = alpha * min_camera_distance(sphere.radius, beta);
    for (int i = 0; i < k; ++i) {
      const Vec3 offset = poses[i].position - sphere.center;
      CHECK(std::abs(offset.norm() - d) < 1e-9 * std::max(1.0, d));
      // constant elevation
      CHECK(std::asin(offset.y / offset.norm()) == doctest::Approx(phi).epsilon(1e-9));
      // consecutive azimuth gap = 2*pi/K
      const Vec3 a{offset.x, 0, offset.z};
      const Vec3 next = poses[(i + 1) % k].position - sphere.center;
      const Vec3 b{next.x, 0, next.z};
      const double cosang =
          std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0);
      CHECK(std::acos(cosang) ==
            doctest::Approx(2 * kPi / k > kPi ? 2 * kPi - 2 * kPi / k : 2 * kPi / k)
                .epsilon(1e-9));
      // orthonormal pose
      CHECK(std::abs(poses[i].forward.norm() - 1.0) < 1e-9);
      CHECK(std::abs(poses[i].up.norm() - 1.0) < 1e-9);
      CHECK(std::abs(poses[i].forward.dot(poses[i].up)) <= 1e-9);
    }
  }
}

TEST_CASE("surround ring: frustum fit and scale equivariance") {
  Rng rng(31337);
  for (int trial = 0; trial < 300; ++trial) {
    const BoundingSphere sphere{{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)},
                                rng.uniform(0.05, 3.0)};
    CameraIntrinsics intr;
    intr.fov_v = rng.uniform(0.3, 2.8);
    intr.aspect = rng.uniform(0.3, 3.0);
    const double beta = effective_half_fov(intr.fov_v, intr.aspect);

    const auto tight = surround_poses(sphere, intr, 1.0, 3, 0.3, kUp);
    const double d_tight = (tight[0].position - sphere.center).norm();
    CHECK(std::asin(sphere.radius / d_tight) == doctest::Approx(beta).epsilon(1e-12));

    const double alpha = rng.uniform(1.0 + 1e-6, 4.0);
    const auto loose = surround_poses(sphere, intr, alpha, 3, 0.3, kUp);
    const double d_loose = (loose[0].position - sphere.center).norm();
    CHECK(std::asin(sphere.radius / d_loose) < beta);

    // scaling the configuration scales positions, keeps directions
    const double s = rng.uniform(0.1, 10.0);
    const BoundingSphere scaled{sphere.center * s, sphere.radius * s};
    const auto scaled_poses = surround_poses(scaled, intr, alpha, 3, 0.3, kUp);
    for (int i = 0; i < 3; ++i) {
      const Vec3 want = sphere.center * s + (loose[i].position - sphere.center) * s;
      CHECK((scaled_poses[i].position - want).norm() < 1e-9 * std::max(1.0, want.norm()));
      CHECK((scaled_poses[i].forward - loose[i].forward).norm() < 1e-9);
    }
  }
}

TEST_CASE("surround ring: degenerate inputs") {
  const BoundingSphere sphere{{0, 0, 0}, 1.0};
  CameraIntrinsics intr;
  CHECK_THROWS_AS(surround_poses(sphere, intr, 1.0, 4, kPi / 2, kUp),
                  DegenerateElevation);
  CHECK_THROWS_AS(surround_poses(sphere, intr, 1.0, 4, -kPi / 2, kUp),
                  DegenerateElevation);
  CHECK_THROWS_AS(surround_poses(sphere, intr, 0.99, 4, 0.0, kUp), DomainError);
  CHECK_THROWS_AS(surround_poses(sphere, intr, 1.0, 0, 0.0, kUp), DomainError);
  const BoundingSphere point{{1, 2, 3}, 0.0};
  CHECK_THROWS_AS(surround_poses(point, intr, 1.0, 4, 0.0, kUp), DegenerateSphere);
}

TEST_CASE("directional pose: axis-aligned case") {
  const BoundingSphere source{{0, 0, 0}, 1.0};
  const CameraPose pose = directional_pose(source, {5, 0, 0}, kUp);
  CHECK((pose.position - Vec3{1, 0, 0}).norm() < 1e-12);
  CHECK((pose.forward - Vec3{1, 0, 0}).norm() < 1e-12);
}

TEST_CASE("directional pose: target inside the source sphere") {
  const BoundingSphere source{{0, 0, 0}, 1.0};
  CHECK_THROWS_AS(directional_pose(source, {0.5, 0, 0}, kUp), DegenerateAnchors);
  CHECK_THROWS_AS(directional_pose(source, {0, 0, 0}, kUp), DegenerateAnchors);
}

TEST_CASE("directional pose: 500 random valid pairs") {
  Rng rng(555);
  for (int trial = 0; trial < 500; ++trial) {
    const BoundingSphere source{
        {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)},
        rng.uniform(0.05, 2.0)};
    Vec3 target;
    do {
      target = {rng.uniform(-8, 8), rng.uniform(-8, 8), rng.uniform(-8, 8)};
    } while ((target - source.center).norm() <= source.radius * 1.01);
    const CameraPose pose = directional_pose(source, target, kUp);
    CHECK(std::abs((pose.position - source.center).norm() - source.radius) <
          1e-9 * std::max(1.0, source.radius));
    CHECK(pose.forward.dot(target - pose.position) > 0.0);
    CHECK(std::abs(pose.forward.norm() - 1.0) < 1e-9);
    CHECK(std::abs(pose.up.norm() - 1.0) < 1e-9);
    CHECK(std::abs(pose.forward.dot(pose.up)) <= 1e-9);
  }
}

TEST_CASE("look-at handles near-vertical forward") {
  const CameraPose pose = look_at_pose({0, 0, 0}, {0, 1, 0}, kUp);
  CHECK(std::abs(pose.forward.dot(pose.up)) <= 1e-9);
  CHECK(std::abs(pose.up.norm() - 1.0) < 1e-9);
}
