#include "rendermem/perturb.hpp"

#include <algorithm>
#include <cmath>

#include "rendermem/errors.hpp"

namespace rendermem {

namespace {

int clamp_index(int v, int limit) { return std::clamp(v, 0, limit - 1); }

void check_image(const std::vector<uint8_t>& rgb, int width, int height) {
  if (width < 1 || height < 1 ||
      rgb.size() != static_cast<size_t>(width) * height * 3) {
    throw DomainError("image buffer size does not match dimensions");
  }
}

}  // namespace

GhostOffsets default_ghost_offsets(int width) {
  const double scale = width / 256.0;
  GhostOffsets o;
  o.dx1 = static_cast<int>(std::lround(8.0 * scale));
  o.dy1 = 0;
  o.dx2 = static_cast<int>(std::lround(-4.0 * scale));
  o.dy2 = static_cast<int>(std::lround(4.0 * scale));
  return o;
}

std::vector<uint8_t> apply_blur(const std::vector<uint8_t>& rgb, int width,
                                int height, double delta) {
  check_image(rgb, width, height);
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw DomainError("delta must be >= 0");
  }
  const double sigma = 0.5 + 6.0 * delta;
  const int hw = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * hw + 1);
  double sum = 0.0;
  for (int i = -hw; i <= hw; ++i) {
    kernel[i + hw] = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
    sum += kernel[i + hw];
  }
  for (double& k : kernel) {
    k /= sum;
  }

  // Horizontal then vertical pass; intermediate kept in doubles so the
  // result matches a dense 2-D convolution up to one final rounding.
  std::vector<double> tmp(rgb.size());
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (int i = -hw; i <= hw; ++i) {
          const int sx = clamp_index(x + i, width);
          acc += kernel[i + hw] * rgb[(static_cast<size_t>(y) * width + sx) * 3 + c];
        }
        tmp[(static_cast<size_t>(y) * width + x) * 3 + c] = acc;
      }
    }
  }
  std::vector<uint8_t> out(rgb.size());
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (int i = -hw; i <= hw; ++i) {
          const int sy = clamp_index(y + i, height);
          acc += kernel[i + hw] * tmp[(static_cast<size_t>(sy) * width + x) * 3 + c];
        }
        out[(static_cast<size_t>(y) * width + x) * 3 + c] =
            static_cast<uint8_t>(std::clamp<long>(std::lround(acc), 0, 255));
      }
    }
  }
  return out;
}

std::vector<uint8_t> apply_ghosting(const std::vector<uint8_t>& rgb, int width,
                                    int height, double gamma,
                                    const GhostOffsets& offsets) {
  check_image(rgb, width, height);
  if (!(gamma >= 0.0) || !(gamma <= 1.0)) {
    throw DomainError("gamma must lie in [0, 1]");
  }
  std::vector<uint8_t> out(rgb.size());
  const auto sample = [&](int x, int y, int dx, int dy, int c) -> double {
    const int sx = clamp_index(x - dx, width);
    const int sy = clamp_index(y - dy, height);
    return rgb[(static_cast<size_t>(sy) * width + sx) * 3 + c];
  };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < 3; ++c) {
        const double base = rgb[(static_cast<size_t>(y) * width + x) * 3 + c];
        const double blended = (1.0 - gamma) * base +
                               0.6 * gamma * sample(x, y, offsets.dx1, offsets.dy1, c) +
                               0.4 * gamma * sample(x, y, offsets.dx2, offsets.dy2, c);
        out[(static_cast<size_t>(y) * width + x) * 3 + c] =
            static_cast<uint8_t>(std::clamp<long>(std::lround(blended), 0, 255));
      }
    }
  }
  return out;
}

BoundingSphere perturb_sphere(const BoundingSphere& sphere, double lambda, Rng& rng) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("lambda must be >= 0");
  }
  if (!(sphere.radius > 0.0)) {
    throw DomainError("perturb_sphere needs a positive radius");
  }
  // Fixed draw order: center x, y, z, then radius.
  const double zx = rng.normal();
  const double zy = rng.normal();
  const double zz = rng.normal();
  const double zr = rng.normal();
  if (lambda == 0.0) {
    return sphere;
  }
  const double center_std = lambda * sphere.radius;
  BoundingSphere out;
  out.center = sphere.center + Vec3{center_std * zx, center_std * zy, center_std * zz};
  out.radius = std::max(sphere.radius * (1.0 + lambda * zr), 1e-6 * sphere.radius);
  return out;
}

}  // namespace rendermem
