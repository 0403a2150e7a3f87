#pragma once

// Synthetic labelled scenes: one coloured rectangle or ellipse covering
// 10-40% of the frame on a low-texture background.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "eigensal/imagekit.hpp"
#include "eigensal/plane.hpp"

namespace eigensal::synthetic {

struct Scene {
  RgbImage image;
  BinaryMap mask;
};

inline Scene rectangle_scene(std::size_t size, std::size_t r0, std::size_t c0, std::size_t side,
                             const std::array<double, 3>& background, const std::array<double, 3>& object) {
  Plane ch[3] = {Plane(size, size), Plane(size, size), Plane(size, size)};
  BinaryMap mask(size, size);
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      const bool in = r >= r0 && r < r0 + side && c >= c0 && c < c0 + side;
      mask.set(r, c, in);
      for (int k = 0; k < 3; ++k) ch[k](r, c) = in ? object[k] : background[k];
    }
  }
  return {RgbImage(ch[0], ch[1], ch[2]), mask};
}

inline Scene random_scene(std::size_t size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double area = 0.10 + 0.30 * u(rng);
  const bool ellipse = u(rng) < 0.5;
  const double aspect = 0.6 + 0.8 * u(rng);
  const double n = static_cast<double>(size);
  // Object extent (half-axes) chosen to hit the target area fraction.
  double half_h, half_w;
  if (ellipse) {
    const double ab = area * n * n / std::numbers::pi;
    half_h = std::sqrt(ab * aspect);
    half_w = ab / half_h;
  } else {
    const double hw = area * n * n / 4.0;
    half_h = std::sqrt(hw * aspect);
    half_w = hw / half_h;
  }
  half_h = std::min(half_h, 0.45 * n);
  half_w = std::min(half_w, 0.45 * n);
  const double cy = half_h + 2 + u(rng) * (n - 2 * half_h - 4);
  const double cx = half_w + 2 + u(rng) * (n - 2 * half_w - 4);

  std::array<double, 3> bg, fg;
  for (int k = 0; k < 3; ++k) bg[k] = 60.0 + 120.0 * u(rng);
  // Keep the object well separated from the background colour.
  do {
    for (int k = 0; k < 3; ++k) fg[k] = 255.0 * u(rng);
  } while (std::abs(fg[0] - bg[0]) + std::abs(fg[1] - bg[1]) + std::abs(fg[2] - bg[2]) < 150.0);

  std::normal_distribution<double> noise(0.0, 4.0);
  Plane ch[3] = {Plane(size, size), Plane(size, size), Plane(size, size)};
  BinaryMap mask(size, size);
  const double wave = 2.0 * std::numbers::pi / (n / (2.0 + 3.0 * u(rng)));
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      const double dy = (static_cast<double>(r) + 0.5 - cy) / half_h;
      const double dx = (static_cast<double>(c) + 0.5 - cx) / half_w;
      const bool in = ellipse ? dx * dx + dy * dy <= 1.0 : std::abs(dx) <= 1.0 && std::abs(dy) <= 1.0;
      mask.set(r, c, in);
      const double texture = 6.0 * std::sin(wave * static_cast<double>(r + c));
      for (int k = 0; k < 3; ++k) {
        const double v = (in ? fg[k] : bg[k] + texture) + noise(rng);
        ch[k](r, c) = std::round(std::clamp(v, 0.0, 255.0));
      }
    }
  }
  return {RgbImage(ch[0], ch[1], ch[2]), mask};
}

/// Writes images/<i>.png and masks/<i>.png under `root`.
inline void write_dataset(const std::filesystem::path& root, std::size_t count, std::size_t size,
                          std::uint64_t seed) {
  std::filesystem::create_directories(root / "images");
  std::filesystem::create_directories(root / "masks");
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const Scene s = random_scene(size, rng);
    char name[32];
    std::snprintf(name, sizeof name, "scene_%03zu.png", i);
    save_rgb(s.image, root / "images" / name);
    save_binary(s.mask, root / "masks" / name);
  }
}

}  // namespace eigensal::synthetic
