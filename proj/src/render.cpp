#include "rendermem/render.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace rendermem {

namespace {

// Woop/Benthin/Wald style watertight intersection: ray-space shear, signed
// edge functions, long-double recomputation when an edge function lands
// exactly on zero.
struct RayFrame {
  Vec3 origin;
  Vec3 direction;
  int kx = 0, ky = 1, kz = 2;
  double sx = 0.0, sy = 0.0, sz = 0.0;

  RayFrame(const Vec3& o, const Vec3& d) : origin(o), direction(d) {
    const double ax = std::abs(d.x), ay = std::abs(d.y), az = std::abs(d.z);
    kz = 0;
    if (ay > ax && ay >= az) kz = 1;
    if (az > ax && az > ay) kz = 2;
    kx = (kz + 1) % 3;
    ky = (kx + 1) % 3;
    if (comp(d, kz) < 0.0) std::swap(kx, ky);
    sx = comp(d, kx) / comp(d, kz);
    sy = comp(d, ky) / comp(d, kz);
    sz = 1.0 / comp(d, kz);
  }

  static double comp(const Vec3& v, int k) {
    return k == 0 ? v.x : (k == 1 ? v.y : v.z);
  }
};

std::optional<double> intersect_with_frame(const RayFrame& f, const Vec3& v0,
                                           const Vec3& v1, const Vec3& v2) {
  const Vec3 a = v0 - f.origin;
  const Vec3 b = v1 - f.origin;
  const Vec3 c = v2 - f.origin;

  const double akz = RayFrame::comp(a, f.kz);
  const double bkz = RayFrame::comp(b, f.kz);
  const double ckz = RayFrame::comp(c, f.kz);

  const double ax = RayFrame::comp(a, f.kx) - f.sx * akz;
  const double ay = RayFrame::comp(a, f.ky) - f.sy * akz;
  const double bx = RayFrame::comp(b, f.kx) - f.sx * bkz;
  const double by = RayFrame::comp(b, f.ky) - f.sy * bkz;
  const double cx = RayFrame::comp(c, f.kx) - f.sx * ckz;
  const double cy = RayFrame::comp(c, f.ky) - f.sy * ckz;

  double u = cx * by - cy * bx;
  double v = ax * cy - ay * cx;
  double w = bx * ay - by * ax;

  if (u == 0.0 || v == 0.0 || w == 0.0) {
    u = static_cast<double>(static_cast<long double>(cx) * by -
                            static_cast<long double>(cy) * bx);
    v = static_cast<double>(static_cast<long double>(ax) * cy -
                            static_cast<long double>(ay) * cx);
    w = static_cast<double>(static_cast<long double>(bx) * ay -
                            static_cast<long double>(by) * ax);
  }

  if ((u < 0.0 || v < 0.0 || w < 0.0) && (u > 0.0 || v > 0.0 || w > 0.0)) {
    return std::nullopt;
  }
  const double det = u + v + w;
  if (det == 0.0) {
    return std::nullopt;
  }
  const double t = (u * f.sz * akz + v * f.sz * bkz + w * f.sz * ckz) / det;
  if (!(t > 0.0) || !std::isfinite(t)) {
    return std::nullopt;
  }
  return t;
}

// Entry distance of a ray into a sphere, or nullopt when the ray misses or
// the sphere lies entirely behind the origin. Inside the sphere -> 0.
std::optional<double> sphere_entry(const Vec3& origin, const Vec3& direction,
                                   const BoundingSphere& s) {
  const Vec3 oc = s.center - origin;
  const double proj = oc.dot(direction);
  const double d2 = oc.norm_sq() - proj * proj;
  const double r2 = s.radius * s.radius;
  if (d2 > r2) return std::nullopt;
  const double half = std::sqrt(std::max(0.0, r2 - d2));
  const double t_far = proj + half;
  if (t_far < 0.0) return std::nullopt;
  return std::max(0.0, proj - half);
}

struct NearestHit {
  double t = std::numeric_limits<double>::infinity();
  const TriangleMesh* mesh = nullptr;
  uint32_t tri = 0;
};

// Nearest accepted hit; triangles owned by skip_object are ignored when
// closer than skip_within.
NearestHit nearest_hit(const SceneState& scene, const RayFrame& frame,
                       double t_min, std::optional<uint16_t> skip_object,
                       double skip_within) {
  NearestHit best;
  for (const TriangleMesh& mesh : scene.meshes) {
    const auto mesh_entry = sphere_entry(frame.origin, frame.direction, mesh.bounds);
    if (!mesh_entry || *mesh_entry >= best.t) continue;
    const bool skippable = skip_object && mesh.owner == *skip_object;
    for (const TriangleMesh::Chunk& chunk : mesh.chunks) {
      const auto entry = sphere_entry(frame.origin, frame.direction, chunk.bounds);
      if (!entry || *entry >= best.t) continue;
      for (uint32_t i = chunk.begin; i < chunk.end; ++i) {
        const auto& tri = mesh.triangles[i];
        const auto t = intersect_with_frame(frame, mesh.vertices[tri[0]],
                                            mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
        if (!t || *t <= t_min || *t >= best.t) continue;
        if (skippable && *t < skip_within) continue;
        best.t = *t;
        best.mesh = &mesh;
        best.tri = i;
      }
    }
  }
  return best;
}

Rgb shade(const TriangleMesh& mesh, uint32_t tri_index, const Vec3& ray_dir,
          const Rgb& base) {
  const auto& tri = mesh.triangles[tri_index];
  const Vec3& v0 = mesh.vertices[tri[0]];
  Vec3 n = (mesh.vertices[tri[1]] - v0).cross(mesh.vertices[tri[2]] - v0);
  const double norm = n.norm();
  if (norm == 0.0) {
    return {0, 0, 0};
  }
  n = n * (1.0 / norm);
  if (n.dot(ray_dir) > 0.0) {
    n = -n;  // two-sided
  }
  const double lambert = std::max(0.0, -ray_dir.dot(n));
  return {static_cast<uint8_t>(std::lround(base.r * lambert)),
          static_cast<uint8_t>(std::lround(base.g * lambert)),
          static_cast<uint8_t>(std::lround(base.b * lambert))};
}

}  // namespace

std::optional<double> intersect_triangle(const Vec3& origin, const Vec3& direction,
                                         const Vec3& v0, const Vec3& v1, const Vec3& v2) {
  return intersect_with_frame(RayFrame(origin, direction), v0, v1, v2);
}

std::optional<RayHit> ray_cast(const SceneState& scene, const Vec3& origin,
                               const Vec3& direction,
                               std::optional<uint16_t> skip_object,
                               double skip_within) {
  if (std::abs(direction.norm() - 1.0) > 1e-9) {
    throw NonUnitDirection("ray direction must be unit length");
  }
  const RayFrame frame(origin, direction);
  const NearestHit best = nearest_hit(scene, frame, 0.0, skip_object, skip_within);
  if (!best.mesh) {
    return std::nullopt;
  }
  Rgb base = best.mesh->color;
  if (best.mesh->owner != 0) {
    if (const ObjectRecord* o = scene.find_numeric(best.mesh->owner)) {
      base = effective_color(*o);
    }
  }
  return RayHit{best.mesh->owner, best.t, shade(*best.mesh, best.tri, direction, base)};
}

RenderedView render(const SceneState& scene, const CameraPose& pose,
                    const CameraIntrinsics& intrinsics, int width, int height,
                    std::optional<uint16_t> self_skip, int threads) {
  if (width < 1 || height < 1) {
    throw ResolutionError("render target must be at least 1x1");
  }
  intrinsics.validate();

  RenderedView view;
  view.width = width;
  view.height = height;
  view.pose = pose;
  view.intrinsics = intrinsics;
  view.rgb.assign(view.pixel_count() * 3, 0);
  view.ids.assign(view.pixel_count(), 0);
  view.depth.assign(view.pixel_count(), kDepthMiss);

  // Current render color per mesh, resolved once per frame.
  std::vector<Rgb> mesh_color(scene.meshes.size());
  for (size_t m = 0; m < scene.meshes.size(); ++m) {
    mesh_color[m] = scene.meshes[m].color;
    if (scene.meshes[m].owner != 0) {
      if (const ObjectRecord* o = scene.find_numeric(scene.meshes[m].owner)) {
        mesh_color[m] = effective_color(*o);
      }
    }
  }

  const Vec3 forward = pose.forward.normalized();
  Vec3 right = forward.cross(pose.up);
  if (right.norm() < 1e-9) {
    throw DomainError("camera pose up is parallel to forward");
  }
  right = right.normalized();
  const Vec3 up = right.cross(forward).normalized();

  const double tan_half_v = std::tan(intrinsics.fov_v / 2.0);
  const double image_aspect = static_cast<double>(width) / height;
  const double skip_within = self_skip ? 2.0 * intrinsics.near
                                       : std::numeric_limits<double>::infinity();

  const auto render_rows = [&](int row_begin, int row_end) {
    for (int py = row_begin; py < row_end; ++py) {
      const double ndc_y = 1.0 - 2.0 * (py + 0.5) / height;
      for (int px = 0; px < width; ++px) {
        const double ndc_x = 2.0 * (px + 0.5) / width - 1.0;
        const Vec3 dir = (forward + right * (ndc_x * tan_half_v * image_aspect) +
                          up * (ndc_y * tan_half_v))
                             .normalized();
        const RayFrame frame(pose.position, dir);
        const NearestHit best =
            nearest_hit(scene, frame, intrinsics.near, self_skip, skip_within);
        const size_t p = static_cast<size_t>(py) * width + px;
        if (best.mesh) {
          const size_t mesh_index = best.mesh - scene.meshes.data();
          const Rgb c = shade(*best.mesh, best.tri, dir, mesh_color[mesh_index]);
          view.rgb[p * 3 + 0] = c.r;
          view.rgb[p * 3 + 1] = c.g;
          view.rgb[p * 3 + 2] = c.b;
          // Structure (owner 0) shades RGB only; ids/depth track objects, so
          // id 0 always pairs with the miss sentinel.
          if (best.mesh->owner != 0) {
            view.ids[p] = best.mesh->owner;
            view.depth[p] = best.t;
          }
        } else {
          view.rgb[p * 3 + 0] = kBackgroundColor.r;
          view.rgb[p * 3 + 1] = kBackgroundColor.g;
          view.rgb[p * 3 + 2] = kBackgroundColor.b;
        }
      }
    }
  };

  int worker_count = threads;
  if (worker_count <= 0) {
    worker_count = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  worker_count = std::min(worker_count, height);
  if (worker_count <= 1) {
    render_rows(0, height);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(worker_count);
    const int rows_per_worker = (height + worker_count - 1) / worker_count;
    for (int w = 0; w < worker_count; ++w) {
      const int begin = w * rows_per_worker;
      const int end = std::min(begin + rows_per_worker, height);
      if (begin >= end) break;
      workers.emplace_back(render_rows, begin, end);
    }
    for (std::thread& t : workers) {
      t.join();
    }
  }
  return view;
}

}  // namespace rendermem
