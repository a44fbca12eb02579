#pragma once

#include <string>
#include <vector>

#include "rendermem/geometry.hpp"

namespace rendermem {

struct CameraIntrinsics {
  double fov_v = 1.5707963267948966;  // vertical field of view, radians
  double aspect = 1.0;                // width / height
  double near = 0.05;                 // meters

  void validate() const;
};

struct CameraPose {
  Vec3 position;
  Vec3 forward;  // unit
  Vec3 up;       // unit, orthogonal to forward
};

enum class RenderMode { Surround, Directional };

// Rendering specification: mode plus mode-dependent object anchors, with the
// camera parameters that shape the synthesized views.
struct RenderSpec {
  RenderMode mode = RenderMode::Surround;
  std::string object_id;            // surround anchor
  std::string source_id;            // directional anchors
  std::string target_id;
  double alpha = 1.5;               // distance scale, >= 1
  int view_count = 8;               // K, >= 1
  double elevation = 0.3490658503988659;  // phi, radians (20 deg)
};

// Tighter of the vertical and aspect-derived horizontal half field-of-view.
double effective_half_fov(double fov_v, double aspect);

// Minimum camera distance for a sphere of `radius` to fit a frustum with
// effective half-FOV `beta`.
double min_camera_distance(double radius, double beta);

// Camera up from a forward direction and the world up, with a fallback axis
// when forward is nearly vertical.
CameraPose look_at_pose(const Vec3& position, const Vec3& forward_unnormalized,
                        const Vec3& world_up);

// K poses on a ring of radius alpha*d_min around the sphere center at fixed
// elevation, each looking at the center.
std::vector<CameraPose> surround_poses(const BoundingSphere& sphere,
                                       const CameraIntrinsics& intrinsics,
                                       double alpha, int view_count, double phi,
                                       const Vec3& up);

// Single pose on the source sphere surface at the point nearest the target,
// looking at the target center.
CameraPose directional_pose(const BoundingSphere& source, const Vec3& target_center,
                            const Vec3& up);

}  // namespace rendermem
