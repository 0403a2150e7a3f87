#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "eigensal/error.hpp"
#include "eigensal/wavelet.hpp"

namespace eigensal {
namespace {

const WaveletKind kAllKinds[] = {WaveletKind::Haar, WaveletKind::Db2, WaveletKind::Db4};

double max_abs(const Plane& p) {
  double m = 0.0;
  for (double v : p.values()) m = std::max(m, std::abs(v));
  return m;
}

double sum_sq(const Plane& p) {
  double s = 0.0;
  for (double v : p.values()) s += v * v;
  return s;
}

double sum(const Plane& p) {
  double s = 0.0;
  for (double v : p.values()) s += v;
  return s;
}

template <typename Fn>
void expect_error(ErrorCode code, Fn&& fn) {
  try {
    fn();
    FAIL() << "expected error code " << static_cast<int>(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(MaxLevels, Examples) {
  EXPECT_EQ(max_levels(256, 256), 8u);
  EXPECT_EQ(max_levels(300, 400), 8u);
  EXPECT_EQ(max_levels(64, 512), 6u);
  EXPECT_EQ(max_levels(2, 2), 1u);
  EXPECT_EQ(max_levels(37, 53), 5u);
  EXPECT_EQ(max_levels(4096, 4096), 8u);
  expect_error(ErrorCode::ImageTooSmall, [] { max_levels(1, 100); });
}

TEST(WaveletBasis, FiltersAreOrthonormal) {
  for (WaveletKind kind : kAllKinds) {
    const WaveletBasis b = WaveletBasis::make(kind);
    const std::size_t n = b.lowpass.size();
    ASSERT_EQ(b.highpass.size(), n);
    double dc = 0.0;
    for (double v : b.lowpass) dc += v;
    EXPECT_NEAR(dc, std::sqrt(2.0), 1e-12) << to_string(kind);
    for (std::size_t shift = 0; shift < n; shift += 2) {
      double ll = 0.0, hh = 0.0, lh = 0.0;
      for (std::size_t j = 0; j + shift < n; ++j) {
        ll += b.lowpass[j] * b.lowpass[j + shift];
        hh += b.highpass[j] * b.highpass[j + shift];
        lh += b.lowpass[j] * b.highpass[j + shift];
      }
      EXPECT_NEAR(ll, shift == 0 ? 1.0 : 0.0, 1e-12) << to_string(kind) << " shift " << shift;
      EXPECT_NEAR(hh, shift == 0 ? 1.0 : 0.0, 1e-12) << to_string(kind) << " shift " << shift;
      EXPECT_NEAR(lh, 0.0, 1e-12);
    }
  }
  EXPECT_EQ(parse_wavelet("db1"), WaveletKind::Haar);
  EXPECT_EQ(parse_wavelet("db4"), WaveletKind::Db4);
  expect_error(ErrorCode::InvalidArgument, [] { parse_wavelet("sym8"); });
}

TEST(Dwt2, HaarTwoByTwoByHand) {
  const double a = 9, b = 4, c = 1, d = 6;
  const WaveletPyramid pyr = dwt2(Plane(2, 2, {a, b, c, d}), 1, WaveletBasis::make(WaveletKind::Haar));
  ASSERT_EQ(pyr.approx.size(), 1u);
  EXPECT_NEAR(pyr.approx(0, 0), (a + b + c + d) / 2, 1e-12);
  EXPECT_NEAR(pyr.details[0].horizontal(0, 0), (a - b + c - d) / 2, 1e-12);
  EXPECT_NEAR(pyr.details[0].vertical(0, 0), (a + b - c - d) / 2, 1e-12);
  EXPECT_NEAR(pyr.details[0].diagonal(0, 0), (a - b - c + d) / 2, 1e-12);
}

TEST(Dwt2, ConstantPlaneHasNoDetail) {
  for (WaveletKind kind : kAllKinds) {
    const Plane p(40, 27, 113.0);
    const WaveletPyramid pyr = dwt2(p, max_levels(40, 27), WaveletBasis::make(kind));
    for (const DetailBands& d : pyr.details) {
      EXPECT_LT(max_abs(d.horizontal), 1e-9);
      EXPECT_LT(max_abs(d.vertical), 1e-9);
      EXPECT_LT(max_abs(d.diagonal), 1e-9);
    }
  }
}

TEST(Dwt2, LevelSizesHalveRoundingUp) {
  const WaveletPyramid pyr = dwt2(Plane(37, 53, 1.0), 3, WaveletBasis::make(WaveletKind::Db2));
  ASSERT_EQ(pyr.details.size(), 3u);
  EXPECT_EQ(pyr.details[0].horizontal.height(), 19u);
  EXPECT_EQ(pyr.details[0].horizontal.width(), 27u);
  EXPECT_EQ(pyr.details[1].vertical.height(), 10u);
  EXPECT_EQ(pyr.details[1].vertical.width(), 14u);
  EXPECT_EQ(pyr.approx.height(), 5u);
  EXPECT_EQ(pyr.approx.width(), 7u);
}

TEST(Dwt2, PerfectReconstruction) {
  std::mt19937_64 rng(17);
  const std::pair<std::size_t, std::size_t> sizes[] = {{16, 16}, {37, 53}, {300, 400}, {2, 2}, {5, 3}};
  for (WaveletKind kind : kAllKinds) {
    const WaveletBasis basis = WaveletBasis::make(kind);
    for (auto [h, w] : sizes) {
      const Plane p = oracle::random_plane(h, w, rng, 0.0, 255.0);
      for (std::size_t n = 1; n <= max_levels(h, w); ++n) {
        const Plane back = idwt2(dwt2(p, n, basis));
        ASSERT_TRUE(back.same_shape(p));
        double err = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) err = std::max(err, std::abs(back.values()[i] - p.values()[i]));
        EXPECT_LE(err / max_abs(p), 1e-9) << to_string(kind) << " " << h << "x" << w << " N=" << n;
      }
    }
  }
}

TEST(Dwt2, ZeroPlaneRoundTripsToZero) {
  for (WaveletKind kind : kAllKinds) {
    const Plane back = idwt2(dwt2(Plane(33, 20), 4, WaveletBasis::make(kind)));
    EXPECT_EQ(max_abs(back), 0.0);
  }
}

TEST(Dwt2, EnergySplitsAcrossLevelsOnDyadicSizes) {
  std::mt19937_64 rng(19);
  for (WaveletKind kind : kAllKinds) {
    const WaveletBasis basis = WaveletBasis::make(kind);
    for (auto [h, w] : {std::pair<std::size_t, std::size_t>{64, 64}, {32, 128}}) {
      const Plane p = oracle::random_plane(h, w, rng, 0.0, 255.0);
      const WaveletPyramid pyr = dwt2(p, max_levels(h, w), basis);
      double total = sum_sq(approximation_only(pyr));
      for (std::size_t s = 1; s <= pyr.levels; ++s) {
        const Plane f = feature_map(pyr, s);
        for (double v : f.values()) EXPECT_GE(v, 0.0);
        total += sum(f);
      }
      EXPECT_NEAR(total, sum_sq(p), 1e-6 * sum_sq(p)) << to_string(kind);
    }
  }
}

TEST(FeatureMap, HaarTwoByTwoIsSquaredDeviationFromMean) {
  const Plane p(2, 2, {9, 4, 1, 6});
  const WaveletPyramid pyr = dwt2(p, 1, WaveletBasis::make(WaveletKind::Haar));
  const Plane f = feature_map(pyr, 1);
  const double m = (9 + 4 + 1 + 6) / 4.0;
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(f.values()[i], (p.values()[i] - m) * (p.values()[i] - m), 1e-12);
  }
}

TEST(FeatureMap, NonNegativeWithInputShape) {
  std::mt19937_64 rng(23);
  const Plane p = oracle::random_plane(45, 31, rng, 0.0, 255.0);
  for (WaveletKind kind : kAllKinds) {
    const WaveletPyramid pyr = dwt2(p, 4, WaveletBasis::make(kind));
    for (std::size_t s = 1; s <= 4; ++s) {
      const Plane f = feature_map(pyr, s);
      EXPECT_TRUE(f.same_shape(p));
      for (double v : f.values()) EXPECT_GE(v, 0.0);
    }
    expect_error(ErrorCode::LevelOutOfRange, [&] { feature_map(pyr, 0); });
    expect_error(ErrorCode::LevelOutOfRange, [&] { feature_map(pyr, 5); });
  }
}

TEST(ConspicuityMap, ConstantChannelIsZero) {
  for (WaveletKind kind : kAllKinds) {
    const Plane c = conspicuity_map(Plane(32, 48, 7.0), WaveletBasis::make(kind));
    EXPECT_EQ(max_abs(c), 0.0);
  }
}

TEST(ConspicuityMap, RangeAndAffineInvariance) {
  std::mt19937_64 rng(29);
  for (WaveletKind kind : kAllKinds) {
    const WaveletBasis basis = WaveletBasis::make(kind);
    const Plane p = oracle::random_plane(40, 36, rng, -3.0, 5.0);
    const Plane c = conspicuity_map(p, basis);
    EXPECT_DOUBLE_EQ(min_value(c), 0.0);
    EXPECT_DOUBLE_EQ(max_value(c), 1.0);
    Plane q = p;
    for (double& v : q.values()) v = 37.5 * v - 12.0;
    const Plane cq = conspicuity_map(q, basis);
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(cq.values()[i], c.values()[i], 1e-9);
  }
}

TEST(ConspicuityMap, HaarFlipEquivariantOnDyadicSizes) {
  std::mt19937_64 rng(31);
  const Plane p = oracle::random_plane(64, 64, rng, 0.0, 255.0);
  const WaveletBasis haar = WaveletBasis::make(WaveletKind::Haar);
  const Plane a = conspicuity_map(flip_horizontal(p), haar);
  const Plane b = flip_horizontal(conspicuity_map(p, haar));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.values()[i], b.values()[i], 1e-9);
}

TEST(ConspicuityMap, PatchOutranksFlatBackground) {
  Plane p(64, 64, 30.0);
  for (std::size_t r = 28; r < 36; ++r) {
    for (std::size_t c = 28; c < 36; ++c) p(r, c) = 240.0;
  }
  for (WaveletKind kind : kAllKinds) {
    const Plane c = conspicuity_map(p, WaveletBasis::make(kind));
    EXPECT_GT(c(32, 32), c(2, 2)) << to_string(kind);
    EXPECT_GT(c(32, 32), c(60, 5)) << to_string(kind);
  }
}

TEST(ToByteRange, RescalesAffinely) {
  const Plane b = to_byte_range(Plane(1, 3, {-1.0, 0.0, 3.0}));
  EXPECT_EQ(b.values()[0], 0.0);
  EXPECT_DOUBLE_EQ(b.values()[1], 63.75);
  EXPECT_EQ(b.values()[2], 255.0);
  EXPECT_EQ(max_abs(to_byte_range(Plane(2, 2, 9.0))), 0.0);
}

TEST(ConspicuitySigma, TwoPercentOfLargerSide) {
  EXPECT_DOUBLE_EQ(conspicuity_sigma(300, 400), 8.0);
  EXPECT_DOUBLE_EQ(conspicuity_sigma(256, 128), 5.12);
}

TEST(Dwt2, ErrorContract) {
  const WaveletBasis basis = WaveletBasis::make(WaveletKind::Haar);
  expect_error(ErrorCode::TooManyLevels, [&] { dwt2(Plane(16, 16), 5, basis); });
  expect_error(ErrorCode::ImageTooSmall, [&] { dwt2(Plane(1, 16), 1, basis); });
  WaveletPyramid pyr = dwt2(Plane(16, 16, 1.0), 2, basis);
  pyr.details[1].diagonal = Plane(3, 3);
  expect_error(ErrorCode::ShapeMismatch, [&] { idwt2(pyr); });
}

}  // namespace
}  // namespace eigensal
