#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "rendermem/scene.hpp"
#include "rendermem/viewpoint.hpp"

namespace rendermem {

// Depth value recorded for pixels whose ray hits nothing. The ID buffer is
// authoritative for misses; depth is never serialized.
inline constexpr double kDepthMiss = std::numeric_limits<double>::max();

inline constexpr Rgb kBackgroundColor{40, 40, 40};

struct RenderedView {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> rgb;     // 3 * width * height, row-major
  std::vector<uint16_t> ids;    // width * height, 0 = background
  std::vector<double> depth;    // width * height, kDepthMiss on miss
  CameraPose pose;
  CameraIntrinsics intrinsics;

  size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

struct RayHit {
  uint16_t object_numeric_id = 0;
  double distance = 0.0;
  Rgb shaded_color;
};

// Watertight ray/triangle test; returns the hit distance, or nullopt.
// Two-sided, orientation-independent.
std::optional<double> intersect_triangle(const Vec3& origin, const Vec3& direction,
                                         const Vec3& v0, const Vec3& v1, const Vec3& v2);

// Nearest hit over all scene triangles. Triangles owned by `skip_object` are
// excluded when their hit distance is below `skip_within` (default: always).
std::optional<RayHit> ray_cast(const SceneState& scene, const Vec3& origin,
                               const Vec3& direction,
                               std::optional<uint16_t> skip_object = std::nullopt,
                               double skip_within = std::numeric_limits<double>::infinity());

// Pinhole render of the scene: one ray per pixel center, nearest hit beyond
// `near`, headlight-Lambert shading. Bit-deterministic for identical inputs
// regardless of `threads` (0 = hardware concurrency).
//
// `self_skip` implements directional self-occlusion avoidance: triangles of
// that object are ignored closer than 2 * near.
RenderedView render(const SceneState& scene, const CameraPose& pose,
                    const CameraIntrinsics& intrinsics, int width, int height,
                    std::optional<uint16_t> self_skip = std::nullopt, int threads = 0);

}  // namespace rendermem
