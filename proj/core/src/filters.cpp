#include <algorithm>
#include <cmath>
#include <string>

#include "eigensal/error.hpp"
#include "eigensal/imagekit.hpp"

namespace eigensal {

namespace {

// Convolve `n` samples read through `at(i)` with symmetric taps; the pairwise
// form k[j]*(x[i-j] + x[i+j]) makes the result bit-identical under reversal.
template <typename Fetch, typename Store>
void convolve_line(std::size_t n, const std::vector<double>& half, std::vector<double>& ext,
                   Fetch at, Store store) {
  const auto radius = static_cast<std::ptrdiff_t>(half.size()) - 1;
  const auto len = static_cast<std::ptrdiff_t>(n);
  ext.resize(n + 2 * half.size());
  for (std::ptrdiff_t i = -radius; i < len + radius; ++i) {
    ext[static_cast<std::size_t>(i + radius)] = at(static_cast<std::size_t>(reflect_index(i, len)));
  }
  for (std::ptrdiff_t i = 0; i < len; ++i) {
    const double* center = ext.data() + i + radius;
    double acc = half[0] * center[0];
    for (std::ptrdiff_t j = 1; j <= radius; ++j) {
      acc += half[static_cast<std::size_t>(j)] * (center[-j] + center[j]);
    }
    store(static_cast<std::size_t>(i), acc);
  }
}

}  // namespace

std::ptrdiff_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t n) noexcept {
  if (i >= 0 && i < n) return i;
  const std::ptrdiff_t period = 2 * n;
  std::ptrdiff_t m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::NonPositiveSigma, "sigma = " + std::to_string(sigma));
  }
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * static_cast<double>(i * i) / (sigma * sigma));
    taps[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& t : taps) t /= sum;
  return taps;
}

Plane gaussian_blur(const Plane& p, double sigma) {
  const std::vector<double> taps = gaussian_kernel(sigma);
  const std::size_t radius = taps.size() / 2;
  const std::vector<double> half(taps.begin() + static_cast<std::ptrdiff_t>(radius), taps.end());

  Plane tmp(p.height(), p.width());
  Plane out(p.height(), p.width());
  std::vector<double> ext;
  for (std::size_t r = 0; r < p.height(); ++r) {
    const auto src = p.row(r);
    auto dst = tmp.row(r);
    convolve_line(
        p.width(), half, ext, [&](std::size_t i) { return src[i]; },
        [&](std::size_t i, double v) { dst[i] = v; });
  }
  for (std::size_t c = 0; c < p.width(); ++c) {
    convolve_line(
        p.height(), half, ext, [&](std::size_t i) { return tmp(i, c); },
        [&](std::size_t i, double v) { out(i, c) = v; });
  }
  return out;
}

RgbImage gaussian_blur(const RgbImage& img, double sigma) {
  // A normalized nonnegative kernel keeps values inside [0, 255], but
  // rounding can push an extreme sample one ulp past the bound.
  auto blur_clamped = [sigma](const Plane& p) {
    Plane out = gaussian_blur(p, sigma);
    for (double& v : out.values()) v = std::clamp(v, 0.0, 255.0);
    return out;
  };
  return RgbImage(blur_clamped(img.r()), blur_clamped(img.g()), blur_clamped(img.b()));
}

Plane normalize_unit(const Plane& p) {
  Plane out(p.height(), p.width());
  const double lo = min_value(p);
  const double hi = max_value(p);
  const double range = hi - lo;
  // Spreads at round-off level are treated as flat.
  if (!(range > 1e-12 * std::max(std::abs(lo), std::abs(hi)))) return out;
  std::transform(p.values().begin(), p.values().end(), out.values().begin(),
                 [lo, range](double v) { return (v - lo) / range; });
  return out;
}

}  // namespace eigensal
