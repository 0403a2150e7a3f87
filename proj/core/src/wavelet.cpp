#include "eigensal/wavelet.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "eigensal/error.hpp"
#include "eigensal/imagekit.hpp"

namespace eigensal {

namespace {

// Orthonormal Daubechies scaling filters, sum = sqrt(2).
const std::vector<double>& lowpass_taps(WaveletKind kind) {
  static const std::vector<double> haar = {0.70710678118654752440, 0.70710678118654752440};
  static const std::vector<double> db2 = {
      0.48296291314453414337, 0.83651630373780790557, 0.22414386804201338103,
      -0.12940952255126038117};
  static const std::vector<double> db4 = {
      0.23037781330889650086,  0.71484657055291564709,  0.63088076792985890788,
      -0.02798376941685985421, -0.18703481171909308408, 0.03084138183556076363,
      0.03288301166688519974,  -0.01059740178506903210};
  switch (kind) {
    case WaveletKind::Haar: return haar;
    case WaveletKind::Db2: return db2;
    case WaveletKind::Db4: return db4;
  }
  return db4;
}

std::size_t half_length(std::size_t n) { return (n + 1) / 2; }

// One analysis stage along a strided line of n samples.
class LineFilter {
 public:
  explicit LineFilter(const WaveletBasis& basis) : basis_(basis) {}

  // in: n samples; lo/hi: ceil(n/2) outputs each.
  void analyze(const double* in, std::size_t n, double* lo, double* hi) {
    const std::size_t m = n + (n % 2);
    buf_.assign(in, in + n);
    if (m != n) buf_.push_back(in[n - 1]);
    const std::size_t taps = basis_.lowpass.size();
    for (std::size_t k = 0; k < m / 2; ++k) {
      double a = 0.0;
      double d = 0.0;
      for (std::size_t j = 0; j < taps; ++j) {
        const double x = buf_[(2 * k + j) % m];
        a += basis_.lowpass[j] * x;
        d += basis_.highpass[j] * x;
      }
      lo[k] = a;
      hi[k] = d;
    }
  }

  // lo/hi: ceil(n/2) coefficients each; out: n samples.
  void synthesize(const double* lo, const double* hi, std::size_t n, double* out) {
    const std::size_t m = n + (n % 2);
    buf_.assign(m, 0.0);
    const std::size_t taps = basis_.lowpass.size();
    for (std::size_t k = 0; k < m / 2; ++k) {
      for (std::size_t j = 0; j < taps; ++j) {
        buf_[(2 * k + j) % m] += basis_.lowpass[j] * lo[k] + basis_.highpass[j] * hi[k];
      }
    }
    std::copy_n(buf_.begin(), n, out);
  }

 private:
  const WaveletBasis& basis_;
  std::vector<double> buf_;
};

struct Quad {
  Plane approx;
  DetailBands details;
};

Quad analyze_2d(const Plane& p, const WaveletBasis& basis) {
  const std::size_t h = p.height();
  const std::size_t w = p.width();
  const std::size_t h2 = half_length(h);
  const std::size_t w2 = half_length(w);
  LineFilter filter(basis);

  Plane lo_x(h, w2), hi_x(h, w2);
  for (std::size_t r = 0; r < h; ++r) {
    filter.analyze(p.row(r).data(), w, lo_x.row(r).data(), hi_x.row(r).data());
  }

  Quad q{Plane(h2, w2), {Plane(h2, w2), Plane(h2, w2), Plane(h2, w2)}};
  std::vector<double> col(h), lo(h2), hi(h2);
  auto split_columns = [&](const Plane& src, Plane& low_y, Plane& high_y) {
    for (std::size_t c = 0; c < w2; ++c) {
      for (std::size_t r = 0; r < h; ++r) col[r] = src(r, c);
      filter.analyze(col.data(), h, lo.data(), hi.data());
      for (std::size_t r = 0; r < h2; ++r) {
        low_y(r, c) = lo[r];
        high_y(r, c) = hi[r];
      }
    }
  };
  split_columns(lo_x, q.approx, q.details.vertical);
  split_columns(hi_x, q.details.horizontal, q.details.diagonal);
  return q;
}

Plane synthesize_2d(const Plane& approx, const DetailBands& d, Dims out_dims,
                    const WaveletBasis& basis) {
  const std::size_t h = out_dims.height;
  const std::size_t w = out_dims.width;
  const std::size_t h2 = half_length(h);
  const std::size_t w2 = half_length(w);
  for (const Plane* band : {&approx, &d.horizontal, &d.vertical, &d.diagonal}) {
    if (band->height() != h2 || band->width() != w2) {
      throw Error(ErrorCode::ShapeMismatch, "band " + std::to_string(band->height()) + "x" +
                                                std::to_string(band->width()) + " cannot rebuild " +
                                                std::to_string(h) + "x" + std::to_string(w));
    }
  }
  LineFilter filter(basis);
  Plane lo_x(h, w2), hi_x(h, w2);
  std::vector<double> lo(h2), hi(h2), col(h);
  auto merge_columns = [&](const Plane& low_y, const Plane& high_y, Plane& dst) {
    for (std::size_t c = 0; c < w2; ++c) {
      for (std::size_t r = 0; r < h2; ++r) {
        lo[r] = low_y(r, c);
        hi[r] = high_y(r, c);
      }
      filter.synthesize(lo.data(), hi.data(), h, col.data());
      for (std::size_t r = 0; r < h; ++r) dst(r, c) = col[r];
    }
  };
  merge_columns(approx, d.vertical, lo_x);
  merge_columns(d.horizontal, d.diagonal, hi_x);

  Plane out(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    filter.synthesize(lo_x.row(r).data(), hi_x.row(r).data(), w, out.row(r).data());
  }
  return out;
}

DetailBands zero_bands(const DetailBands& like) {
  return {Plane(like.horizontal.height(), like.horizontal.width()),
          Plane(like.vertical.height(), like.vertical.width()),
          Plane(like.diagonal.height(), like.diagonal.width())};
}

void check_structure(const WaveletPyramid& pyr) {
  if (pyr.levels == 0 || pyr.details.size() != pyr.levels || pyr.input_dims.size() != pyr.levels) {
    throw Error(ErrorCode::ShapeMismatch, "pyramid level count inconsistent");
  }
}

}  // namespace

std::string_view to_string(WaveletKind kind) noexcept {
  switch (kind) {
    case WaveletKind::Haar: return "haar";
    case WaveletKind::Db2: return "db2";
    case WaveletKind::Db4: return "db4";
  }
  return "db4";
}

WaveletKind parse_wavelet(std::string_view name) {
  if (name == "haar" || name == "db1") return WaveletKind::Haar;
  if (name == "db2") return WaveletKind::Db2;
  if (name == "db4") return WaveletKind::Db4;
  throw Error(ErrorCode::InvalidArgument, "unknown wavelet '" + std::string(name) + "'");
}

WaveletBasis WaveletBasis::make(WaveletKind kind) {
  WaveletBasis basis;
  basis.kind = kind;
  basis.lowpass = lowpass_taps(kind);
  const std::size_t len = basis.lowpass.size();
  basis.highpass.resize(len);
  for (std::size_t j = 0; j < len; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    basis.highpass[j] = sign * basis.lowpass[len - 1 - j];
  }
  return basis;
}

std::size_t max_levels(std::size_t height, std::size_t width) {
  const std::size_t side = std::min(height, width);
  if (side < 2) {
    throw Error(ErrorCode::ImageTooSmall,
                std::to_string(height) + "x" + std::to_string(width) + " has no dyadic level");
  }
  const auto log2_floor = static_cast<std::size_t>(std::bit_width(side) - 1);
  return std::min(kMaxWaveletLevels, log2_floor);
}

WaveletPyramid dwt2(const Plane& p, std::size_t levels, const WaveletBasis& basis) {
  const std::size_t limit = max_levels(p.height(), p.width());
  if (levels < 1 || levels > limit) {
    throw Error(ErrorCode::TooManyLevels,
                std::to_string(levels) + " levels requested, at most " + std::to_string(limit));
  }
  WaveletPyramid pyr;
  pyr.kind = basis.kind;
  pyr.levels = levels;
  Plane current = p;
  for (std::size_t s = 0; s < levels; ++s) {
    pyr.input_dims.push_back({current.height(), current.width()});
    Quad q = analyze_2d(current, basis);
    pyr.details.push_back(std::move(q.details));
    current = std::move(q.approx);
  }
  pyr.approx = std::move(current);
  return pyr;
}

Plane idwt2(const WaveletPyramid& pyr) {
  check_structure(pyr);
  const WaveletBasis basis = WaveletBasis::make(pyr.kind);
  Plane current = pyr.approx;
  for (std::size_t s = pyr.levels; s-- > 0;) {
    current = synthesize_2d(current, pyr.details[s], pyr.input_dims[s], basis);
  }
  return current;
}

Plane feature_map(const WaveletPyramid& pyr, std::size_t level) {
  check_structure(pyr);
  if (level < 1 || level > pyr.levels) {
    throw Error(ErrorCode::LevelOutOfRange,
                "level " + std::to_string(level) + " of " + std::to_string(pyr.levels));
  }
  WaveletPyramid band;
  band.kind = pyr.kind;
  band.levels = pyr.levels;
  band.input_dims = pyr.input_dims;
  band.approx = Plane(pyr.approx.height(), pyr.approx.width());
  for (std::size_t s = 0; s < pyr.levels; ++s) {
    band.details.push_back(s + 1 == level ? pyr.details[s] : zero_bands(pyr.details[s]));
  }
  Plane out = idwt2(band);
  for (double& v : out.values()) v *= v;
  return out;
}

Plane approximation_only(const WaveletPyramid& pyr) {
  check_structure(pyr);
  WaveletPyramid band = pyr;
  for (auto& d : band.details) d = zero_bands(d);
  return idwt2(band);
}

Plane to_byte_range(const Plane& channel) {
  Plane out = normalize_unit(channel);
  for (double& v : out.values()) v *= 255.0;
  return out;
}

std::vector<Plane> feature_maps(const Plane& byte_channel, const WaveletBasis& basis) {
  const std::size_t levels = max_levels(byte_channel.height(), byte_channel.width());
  const WaveletPyramid pyr = dwt2(byte_channel, levels, basis);
  std::vector<Plane> maps;
  maps.reserve(levels);
  for (std::size_t s = 1; s <= levels; ++s) maps.push_back(feature_map(pyr, s));
  return maps;
}

double conspicuity_sigma(std::size_t height, std::size_t width) noexcept {
  return 0.02 * static_cast<double>(std::max(height, width));
}

Plane smooth_and_normalize(const Plane& summed) {
  return normalize_unit(gaussian_blur(summed, conspicuity_sigma(summed.height(), summed.width())));
}

Plane conspicuity_map(const Plane& channel, const WaveletBasis& basis) {
  const std::vector<Plane> maps = feature_maps(to_byte_range(channel), basis);
  Plane sum(channel.height(), channel.width());
  for (const Plane& m : maps) {
    std::transform(sum.values().begin(), sum.values().end(), m.values().begin(),
                   sum.values().begin(), std::plus<>());
  }
  return smooth_and_normalize(sum);
}

}  // namespace eigensal
