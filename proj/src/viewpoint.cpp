#include "rendermem/viewpoint.hpp"

#include <cmath>

namespace rendermem {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = 1.5707963267948966;
}  // namespace

void CameraIntrinsics::validate() const {
  if (!(fov_v > 0.0) || !(fov_v < kPi) || !std::isfinite(fov_v)) {
    throw DomainError("fov_v must lie in (0, pi)");
  }
  if (!(aspect > 0.0) || !std::isfinite(aspect)) {
    throw DomainError("aspect must be positive");
  }
  if (!(near > 0.0) || !std::isfinite(near)) {
    throw DomainError("near must be positive");
  }
}

double effective_half_fov(double fov_v, double aspect) {
  if (!(fov_v > 0.0) || !(fov_v < kPi) || !std::isfinite(fov_v)) {
    throw DomainError("fov_v must lie in (0, pi)");
  }
  if (!(aspect > 0.0) || !std::isfinite(aspect)) {
    throw DomainError("aspect must be positive");
  }
  const double half_v = fov_v / 2.0;
  return std::min(half_v, std::atan(std::tan(half_v) * aspect));
}

double min_camera_distance(double radius, double beta) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw DomainError("radius must be >= 0");
  }
  if (!(beta > 0.0) || beta > kHalfPi) {
    throw DomainError("beta must lie in (0, pi/2]");
  }
  if (radius == 0.0) {
    return 0.0;
  }
  return radius / std::sin(beta);
}

CameraPose look_at_pose(const Vec3& position, const Vec3& forward_unnormalized,
                        const Vec3& world_up) {
  const Vec3 forward = forward_unnormalized.normalized();
  Vec3 right = forward.cross(world_up);
  if (right.norm() < 1e-6) {
    right = forward.cross(Vec3{1.0, 0.0, 0.0});
  }
  right = right.normalized();
  return {position, forward, right.cross(forward).normalized()};
}

std::vector<CameraPose> surround_poses(const BoundingSphere& sphere,
                                       const CameraIntrinsics& intrinsics,
                                       double alpha, int view_count, double phi,
                                       const Vec3& up) {
  intrinsics.validate();
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    throw DomainError("alpha must be >= 1");
  }
  if (view_count < 1) {
    throw DomainError("view_count must be >= 1");
  }
  if (!(std::abs(phi) < kHalfPi)) {
    throw DegenerateElevation("|phi| must be < pi/2");
  }
  const Vec3 u = up.normalized();
  const double beta = effective_half_fov(intrinsics.fov_v, intrinsics.aspect);
  const double d = alpha * min_camera_distance(sphere.radius, beta);
  if (d == 0.0) {
    throw DegenerateSphere("zero camera distance for zero-radius sphere");
  }

  // Horizontal basis: p is +X projected off the up axis, falling back to +Z
  // when up is parallel to +X; q completes the azimuth plane so that i = 1
  // advances toward q.
  Vec3 p = Vec3{1.0, 0.0, 0.0} - u * u.dot(Vec3{1.0, 0.0, 0.0});
  if (p.norm() < 1e-9) {
    p = Vec3{0.0, 0.0, 1.0} - u * u.dot(Vec3{0.0, 0.0, 1.0});
  }
  p = p.normalized();
  const Vec3 q = p.cross(u).normalized();

  std::vector<CameraPose> poses;
  poses.reserve(view_count);
  const double cos_phi = std::cos(phi);
  const double sin_phi = std::sin(phi);
  for (int i = 0; i < view_count; ++i) {
    const double theta = 2.0 * kPi * i / view_count;
    const Vec3 offset =
        ((p * std::cos(theta) + q * std::sin(theta)) * cos_phi + u * sin_phi)
            .normalized();
    const Vec3 position = sphere.center + offset * d;
    poses.push_back(look_at_pose(position, sphere.center - position, u));
  }
  return poses;
}

CameraPose directional_pose(const BoundingSphere& source, const Vec3& target_center,
                            const Vec3& up) {
  const Vec3 delta = target_center - source.center;
  const double dist = delta.norm();
  if (!(dist > source.radius)) {
    throw DegenerateAnchors("target must lie strictly outside the source sphere");
  }
  const Vec3 u = delta * (1.0 / dist);
  return look_at_pose(source.center + u * source.radius, u, up);
}

}  // namespace rendermem
