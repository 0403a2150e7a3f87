#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "eigensal/plane.hpp"

namespace eigensal {

enum class WaveletKind { Haar, Db2, Db4 };

std::string_view to_string(WaveletKind kind) noexcept;
/// Accepts "haar", "db1" (alias of haar), "db2", "db4". Throws InvalidArgument.
WaveletKind parse_wavelet(std::string_view name);

/// Orthonormal two-channel filter bank. The highpass taps are the
/// alternating flip of the lowpass: g[j] = (-1)^j h[L-1-j].
struct WaveletBasis {
  WaveletKind kind = WaveletKind::Db4;
  std::vector<double> lowpass;
  std::vector<double> highpass;

  static WaveletBasis make(WaveletKind kind);
  std::string_view name() const noexcept { return to_string(kind); }
};

struct Dims {
  std::size_t height = 0;
  std::size_t width = 0;
  friend bool operator==(const Dims&, const Dims&) = default;
};

struct DetailBands {
  Plane horizontal;  // highpass along x, lowpass along y
  Plane vertical;    // lowpass along x, highpass along y
  Plane diagonal;    // highpass along both
};

/// Multilevel decomposition. details[s-1] holds the level-s bands and
/// input_dims[s-1] is the size of the signal level s decomposed
/// (input_dims[0] is the original plane), so synthesis can crop exactly.
struct WaveletPyramid {
  WaveletKind kind = WaveletKind::Db4;
  std::size_t levels = 0;
  Plane approx;
  std::vector<DetailBands> details;
  std::vector<Dims> input_dims;
};

constexpr std::size_t kMaxWaveletLevels = 8;

/// min(8, floor(log2(min(height, width)))). Throws ImageTooSmall below 2x2.
std::size_t max_levels(std::size_t height, std::size_t width);

/// Separable analysis with dyadic downsampling. Odd-length signals are
/// extended by one half-sample mirrored sample and then filtered
/// periodically, so every level keeps ceil(n/2) coefficients per axis and
/// the transform stays exactly invertible for all three bases.
WaveletPyramid dwt2(const Plane& p, std::size_t levels, const WaveletBasis& basis);

/// Full synthesis back to the original dimensions. Throws ShapeMismatch if
/// the band sizes are inconsistent with the recorded input dimensions.
Plane idwt2(const WaveletPyramid& pyr);

/// Squared reconstruction from the level-s detail bands alone (every other
/// band, including the approximation, zeroed). 1 <= s <= levels.
Plane feature_map(const WaveletPyramid& pyr, std::size_t level);

/// Reconstruction from the approximation band alone.
Plane approximation_only(const WaveletPyramid& pyr);

/// Affine rescale of a channel to [0, 255] (constant channels map to 0).
Plane to_byte_range(const Plane& channel);

/// Feature maps for levels 1..max_levels of a channel already in [0, 255].
std::vector<Plane> feature_maps(const Plane& byte_channel, const WaveletBasis& basis);

/// Gaussian sigma used to smooth summed feature maps: 2% of the larger side.
double conspicuity_sigma(std::size_t height, std::size_t width) noexcept;

/// Smooth with conspicuity_sigma and rescale to [0, 1].
Plane smooth_and_normalize(const Plane& summed);

/// Per-channel conspicuity: rescale to [0, 255], sum the feature maps of
/// every level up to max_levels, then smooth and normalize to [0, 1].
Plane conspicuity_map(const Plane& channel, const WaveletBasis& basis);

}  // namespace eigensal
