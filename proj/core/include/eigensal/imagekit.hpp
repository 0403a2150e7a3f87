#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "eigensal/plane.hpp"

namespace eigensal {

// ---------------------------------------------------------------------------
// File I/O
// ---------------------------------------------------------------------------

/// Decode a PNG, BMP or PPM/PGM file into 8-bit RGB. Grayscale sources are
/// replicated into all three channels; alpha is dropped.
RgbImage load_image(const std::filesystem::path& path);

/// Write `normalize_unit(p)` as an 8-bit grayscale PNG, rounding half-up.
void save_plane(const Plane& p, const std::filesystem::path& path);

/// Write a {0,1} map as an 8-bit grayscale PNG with values {0,255}.
void save_binary(const BinaryMap& m, const std::filesystem::path& path);

/// Write an RGB image as 8-bit PNG; values are rounded half-up and clamped.
void save_rgb(const RgbImage& img, const std::filesystem::path& path);

/// Quantize a [0,1] value to 0..255 with the half-up rule used by save_plane.
std::uint8_t quantize_unit(double v) noexcept;

// ---------------------------------------------------------------------------
// Filtering and normalization
// ---------------------------------------------------------------------------

/// Normalized 1-D Gaussian taps for offsets -radius..radius, radius = ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian convolution with half-sample symmetric (mirror)
/// boundary extension. Output has the input's dimensions.
Plane gaussian_blur(const Plane& p, double sigma);

RgbImage gaussian_blur(const RgbImage& img, double sigma);

/// (v - min) / (max - min). A plane whose spread is below 1e-12 of its
/// magnitude counts as constant and maps to all zeros.
Plane normalize_unit(const Plane& p);

/// Map a coordinate outside [0, n) back inside by half-sample reflection
/// (..., 1, 0 | 0, 1, ..., n-1 | n-1, n-2, ...). Valid for any offset.
std::ptrdiff_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t n) noexcept;

// ---------------------------------------------------------------------------
// Color
// ---------------------------------------------------------------------------

struct LabPlanes {
  Plane l;  // 0..100
  Plane a;
  Plane b;
};

/// sRGB (D65, IEC 61966-2-1 transfer curve) -> CIE XYZ -> CIELAB.
LabPlanes rgb_to_lab(const RgbImage& img);

}  // namespace eigensal
