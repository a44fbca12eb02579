#pragma once

#include <cstdint>
#include <vector>

#include "rendermem/geometry.hpp"
#include "rendermem/rng.hpp"

namespace rendermem {

struct GhostOffsets {
  int dx1 = 8;
  int dy1 = 0;
  int dx2 = -4;
  int dy2 = 4;
};

// Defaults are specified at 256 px width and scale proportionally.
GhostOffsets default_ghost_offsets(int width);

struct PerturbConfig {
  double delta = 0.0;   // reconstruction degradation severity, >= 0
  double gamma = 0.0;   // ghosting intensity, [0, 1]
  double lambda = 0.0;  // localization magnitude, >= 0
  uint64_t rng_seed = 0;

  bool corrupts_images() const { return delta > 0.0 || gamma > 0.0; }
};

// Gaussian smoothing with sigma = 0.5 + 6*delta, kernel half-width
// ceil(3*sigma), clamp-to-edge borders, rounded once to 8 bits.
std::vector<uint8_t> apply_blur(const std::vector<uint8_t>& rgb, int width,
                                int height, double delta);

// Blend with two shifted copies: (1-g)*I + 0.6g*T1(I) + 0.4g*T2(I).
// Shifts use clamp-to-edge fill; T moves content by (dx, dy) pixels.
std::vector<uint8_t> apply_ghosting(const std::vector<uint8_t>& rgb, int width,
                                    int height, double gamma,
                                    const GhostOffsets& offsets);

// Gaussian noise on the sphere: center jitter with std lambda*radius per
// axis, radius scaled by (1 + N(0, lambda^2)), clamped to stay positive.
// Draws exactly four normal variates (cx, cy, cz, radius) per call.
BoundingSphere perturb_sphere(const BoundingSphere& sphere, double lambda, Rng& rng);

}  // namespace rendermem
