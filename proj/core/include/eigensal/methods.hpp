#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "eigensal/mpcnn.hpp"
#include "eigensal/pca.hpp"
#include "eigensal/plane.hpp"
#include "eigensal/wavelet.hpp"

namespace eigensal {

enum class MethodId {
  Proposed,     // PCA channels -> wavelet conspicuity -> m-PCNN fusion
  WtBaseline,   // wavelet conspicuity on Lab, max across channels per level
  Ft,           // global-mean contrast on Lab
  FtPcaMpcnn,   // global-mean contrast on PCA channels -> m-PCNN fusion
};

std::string_view to_string(MethodId id) noexcept;
/// "proposed", "wt-baseline", "ft", "ft-pca-mpcnn". Throws InvalidArgument.
MethodId parse_method(std::string_view name);
std::span<const MethodId> all_methods() noexcept;

/// Channel space for the wavelet baseline.
enum class BaselineSpace { Lab, Rgb };
std::string_view to_string(BaselineSpace space) noexcept;
BaselineSpace parse_baseline_space(std::string_view name);

struct MethodConfig {
  double blur_sigma = 1.0;  // pre-filter applied before any colour analysis
  WaveletKind wavelet = WaveletKind::Db4;
  BaselineSpace baseline_space = BaselineSpace::Lab;
  PcnnParams pcnn;  // betas are ignored; the eigenvalue shares are used

  void validate() const;
};

constexpr std::size_t kMinWaveletSide = 16;

/// Every intermediate of the proposed pipeline, for inspection dumps.
struct ProposedTrace {
  PcaBasis basis;
  Vec3 weights{};
  std::array<Plane, 3> pct;                       // C_1..C_3
  std::array<std::vector<Plane>, 3> feature_maps;  // f_s per channel, s = 1..N
  std::array<Plane, 3> conspicuity;               // F^1..F^3
  Plane saliency;
};

ProposedTrace proposed_trace(const RgbImage& img, const MethodConfig& cfg);

Plane proposed_saliency(const RgbImage& img, const MethodConfig& cfg);

/// Fusion rule of the wavelet baseline on already-prepared channels: per
/// level, pixelwise maximum of the channels' feature maps; sum over levels;
/// smooth and normalize.
Plane wt_max_fusion(std::span<const Plane> channels, const WaveletBasis& basis);

Plane wt_baseline_saliency(const RgbImage& img, const MethodConfig& cfg);

/// Euclidean distance of each blurred Lab pixel from the mean Lab colour.
Plane ft_saliency(const RgbImage& img, double blur_sigma = 1.0);

/// normalize_unit(|C - mean(C)|) for each PCA channel.
std::array<Plane, 3> ft_pca_conspicuity(const RgbImage& img, double blur_sigma, Vec3* weights = nullptr);

Plane ft_pca_mpcnn_saliency(const RgbImage& img, const MethodConfig& cfg);

Plane run_method(MethodId id, const RgbImage& img, const MethodConfig& cfg);

}  // namespace eigensal
