#pragma once

#include <array>
#include <cmath>

#include "rendermem/errors.hpp"

namespace rendermem {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  bool operator==(const Vec3& o) const = default;

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm_sq() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm_sq()); }
  bool is_finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }

  // Throws DomainError on the zero vector.
  Vec3 normalized() const;
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

struct BoundingSphere {
  Vec3 center;
  double radius = 0.0;

  bool operator==(const BoundingSphere& o) const = default;
  bool contains(const Vec3& p, double rel_tol = 1e-9) const {
    return (p - center).norm() <= radius * (1.0 + rel_tol);
  }
};

// Sphere through the mean of the 8 points, radius = farthest point distance.
// The points are typically bounding-box corners but any 8 points are accepted.
BoundingSphere compute_bounding_sphere(const std::array<Vec3, 8>& corners);

}  // namespace rendermem
