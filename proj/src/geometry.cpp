#include "rendermem/geometry.hpp"

namespace rendermem {

Vec3 Vec3::normalized() const {
  const double n = norm();
  if (n == 0.0 || !std::isfinite(n)) {
    throw DomainError("cannot normalize zero or non-finite vector");
  }
  return {x / n, y / n, z / n};
}

BoundingSphere compute_bounding_sphere(const std::array<Vec3, 8>& corners) {
  for (const Vec3& p : corners) {
    if (!p.is_finite()) {
      throw NonFiniteInput("bounding sphere input contains NaN/Inf");
    }
  }
  Vec3 sum;
  for (const Vec3& p : corners) {
    sum += p;
  }
  const Vec3 center = sum * (1.0 / 8.0);
  double radius = 0.0;
  for (const Vec3& p : corners) {
    radius = std::max(radius, (p - center).norm());
  }
  return {center, radius};
}

}  // namespace rendermem
