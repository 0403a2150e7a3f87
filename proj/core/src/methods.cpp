#include "eigensal/methods.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eigensal/error.hpp"
#include "eigensal/imagekit.hpp"

namespace eigensal {

namespace {

constexpr std::array<MethodId, 4> kAllMethods = {MethodId::Proposed, MethodId::WtBaseline,
                                                  MethodId::Ft, MethodId::FtPcaMpcnn};

void require_wavelet_size(const RgbImage& img) {
  if (img.height() < kMinWaveletSide || img.width() < kMinWaveletSide) {
    throw Error(ErrorCode::ImageTooSmall, std::to_string(img.height()) + "x" +
                                              std::to_string(img.width()) + " is below 16x16");
  }
}

// Axes with no variance carry only round-off; keep them exactly zero.
std::array<Plane, 3> pct_channels(const RgbImage& blurred, const PcaBasis& basis) {
  std::array<Plane, 3> pct;
  for (int i = 0; i < 3; ++i) {
    pct[static_cast<std::size_t>(i)] = basis.eigvals[static_cast<std::size_t>(i)] > 0.0
                                           ? project_channel(blurred, basis, i + 1)
                                           : Plane(blurred.height(), blurred.width());
  }
  return pct;
}

Plane fuse_three(const std::array<Plane, 3>& maps, const Vec3& weights, const PcnnParams& params) {
  return mpcnn_fuse(std::span<const Plane>(maps.data(), maps.size()),
                    std::span<const double>(weights.data(), weights.size()), params);
}

}  // namespace

std::string_view to_string(MethodId id) noexcept {
  switch (id) {
    case MethodId::Proposed: return "proposed";
    case MethodId::WtBaseline: return "wt-baseline";
    case MethodId::Ft: return "ft";
    case MethodId::FtPcaMpcnn: return "ft-pca-mpcnn";
  }
  return "proposed";
}

MethodId parse_method(std::string_view name) {
  for (MethodId id : kAllMethods) {
    if (to_string(id) == name) return id;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

std::span<const MethodId> all_methods() noexcept { return kAllMethods; }

std::string_view to_string(BaselineSpace space) noexcept {
  return space == BaselineSpace::Lab ? "lab" : "rgb";
}

BaselineSpace parse_baseline_space(std::string_view name) {
  if (name == "lab") return BaselineSpace::Lab;
  if (name == "rgb") return BaselineSpace::Rgb;
  throw Error(ErrorCode::InvalidArgument, "unknown baseline space '" + std::string(name) + "'");
}

void MethodConfig::validate() const {
  if (!(blur_sigma > 0.0) || !std::isfinite(blur_sigma)) {
    throw Error(ErrorCode::NonPositiveSigma, "blur sigma = " + std::to_string(blur_sigma));
  }
  pcnn.validate();
}

ProposedTrace proposed_trace(const RgbImage& img, const MethodConfig& cfg) {
  require_wavelet_size(img);
  cfg.validate();
  const RgbImage blurred = gaussian_blur(img, cfg.blur_sigma);
  const WaveletBasis basis = WaveletBasis::make(cfg.wavelet);

  ProposedTrace trace;
  trace.basis = fit_pca(blurred);
  trace.weights = channel_weights(trace.basis);
  trace.pct = pct_channels(blurred, trace.basis);
  for (std::size_t i = 0; i < 3; ++i) {
    trace.feature_maps[i] = feature_maps(to_byte_range(trace.pct[i]), basis);
    Plane sum(img.height(), img.width());
    for (const Plane& f : trace.feature_maps[i]) {
      std::transform(sum.values().begin(), sum.values().end(), f.values().begin(),
                     sum.values().begin(), std::plus<>());
    }
    trace.conspicuity[i] = smooth_and_normalize(sum);
  }
  trace.saliency = fuse_three(trace.conspicuity, trace.weights, cfg.pcnn);
  return trace;
}

Plane proposed_saliency(const RgbImage& img, const MethodConfig& cfg) {
  require_wavelet_size(img);
  cfg.validate();
  const RgbImage blurred = gaussian_blur(img, cfg.blur_sigma);
  const WaveletBasis basis = WaveletBasis::make(cfg.wavelet);
  const PcaBasis pca = fit_pca(blurred);
  const std::array<Plane, 3> pct = pct_channels(blurred, pca);
  std::array<Plane, 3> conspicuity;
  for (std::size_t i = 0; i < 3; ++i) conspicuity[i] = conspicuity_map(pct[i], basis);
  return fuse_three(conspicuity, channel_weights(pca), cfg.pcnn);
}

Plane wt_max_fusion(std::span<const Plane> channels, const WaveletBasis& basis) {
  if (channels.empty()) throw Error(ErrorCode::EmptyInput, "no channels to fuse");
  for (const Plane& c : channels) {
    if (!c.same_shape(channels.front())) throw Error(ErrorCode::ShapeMismatch, "channels differ in size");
  }
  std::vector<std::vector<Plane>> maps;
  for (const Plane& c : channels) maps.push_back(feature_maps(c, basis));

  Plane sum(channels.front().height(), channels.front().width());
  auto acc = sum.values();
  for (std::size_t s = 0; s < maps.front().size(); ++s) {
    for (std::size_t i = 0; i < acc.size(); ++i) {
      double best = maps[0][s].values()[i];
      for (std::size_t c = 1; c < maps.size(); ++c) best = std::max(best, maps[c][s].values()[i]);
      acc[i] += best;
    }
  }
  return smooth_and_normalize(sum);
}

Plane wt_baseline_saliency(const RgbImage& img, const MethodConfig& cfg) {
  require_wavelet_size(img);
  cfg.validate();
  const RgbImage blurred = gaussian_blur(img, cfg.blur_sigma);
  std::array<Plane, 3> channels;
  if (cfg.baseline_space == BaselineSpace::Lab) {
    LabPlanes lab = rgb_to_lab(blurred);
    channels = {std::move(lab.l), std::move(lab.a), std::move(lab.b)};
  } else {
    channels = {blurred.r(), blurred.g(), blurred.b()};
  }
  for (Plane& c : channels) c = to_byte_range(c);
  return wt_max_fusion(channels, WaveletBasis::make(cfg.wavelet));
}

Plane ft_saliency(const RgbImage& img, double blur_sigma) {
  const LabPlanes lab = rgb_to_lab(gaussian_blur(img, blur_sigma));
  const double ml = mean(lab.l);
  const double ma = mean(lab.a);
  const double mb = mean(lab.b);
  Plane out(img.height(), img.width());
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double dl = lab.l.values()[i] - ml;
    const double da = lab.a.values()[i] - ma;
    const double db = lab.b.values()[i] - mb;
    dst[i] = std::sqrt(dl * dl + da * da + db * db);
  }
  return normalize_unit(out);
}

std::array<Plane, 3> ft_pca_conspicuity(const RgbImage& img, double blur_sigma, Vec3* weights) {
  const RgbImage blurred = gaussian_blur(img, blur_sigma);
  const PcaBasis basis = fit_pca(blurred);
  std::array<Plane, 3> maps = pct_channels(blurred, basis);
  for (Plane& c : maps) {
    const double m = mean(c);
    for (double& v : c.values()) v = std::abs(v - m);
    c = normalize_unit(c);
  }
  if (weights != nullptr) *weights = channel_weights(basis);
  return maps;
}

Plane ft_pca_mpcnn_saliency(const RgbImage& img, const MethodConfig& cfg) {
  cfg.validate();
  Vec3 weights{};
  const std::array<Plane, 3> maps = ft_pca_conspicuity(img, cfg.blur_sigma, &weights);
  return fuse_three(maps, weights, cfg.pcnn);
}

Plane run_method(MethodId id, const RgbImage& img, const MethodConfig& cfg) {
  switch (id) {
    case MethodId::Proposed: return proposed_saliency(img, cfg);
    case MethodId::WtBaseline: return wt_baseline_saliency(img, cfg);
    case MethodId::Ft:
      cfg.validate();
      return ft_saliency(img, cfg.blur_sigma);
    case MethodId::FtPcaMpcnn: return ft_pca_mpcnn_saliency(img, cfg);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method");
}

}  // namespace eigensal
