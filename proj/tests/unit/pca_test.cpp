#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "../support/oracles.hpp"
#include "eigensal/error.hpp"
#include "eigensal/pca.hpp"

namespace eigensal {
namespace {

RgbImage from_gray(const Plane& gray) { return RgbImage(gray, gray, gray); }

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// Same axis up to sign.
double axis_error(const Vec3& a, const Vec3& b) { return 1.0 - std::abs(dot(a, b)); }

double variance(const Plane& p) {
  const double m = mean(p);
  double acc = 0.0;
  for (double v : p.values()) acc += (v - m) * (v - m);
  return acc / static_cast<double>(p.size() - 1);
}

TEST(FitPca, GrayImageHasOneAxis) {
  std::mt19937_64 rng(1);
  Plane gray = oracle::random_plane(12, 9, rng, 0.0, 255.0);
  for (double& v : gray.values()) v = std::round(v);
  const PcaBasis basis = fit_pca(from_gray(gray));
  const double k = 1.0 / std::sqrt(3.0);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(basis.eigvecs[0][i], k, 1e-12);
  EXPECT_NEAR(basis.eigvals[0], 3.0 * variance(gray), 1e-9 * basis.eigvals[0]);
  EXPECT_EQ(basis.eigvals[1], 0.0);
  EXPECT_EQ(basis.eigvals[2], 0.0);
  const Vec3 w = channel_weights(basis);
  EXPECT_EQ(w[0], 1.0);
  EXPECT_EQ(w[1], 0.0);
  EXPECT_EQ(w[2], 0.0);

  // C_1 = sqrt(3) (gray - mean(gray)).
  const Plane c1 = project_channel(from_gray(gray), basis, 1);
  const double m = mean(gray);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    EXPECT_NEAR(c1.values()[i], std::sqrt(3.0) * (gray.values()[i] - m), 1e-9);
  }
}

TEST(FitPca, RedOnlyVariationGivesRedAxis) {
  std::mt19937_64 rng(2);
  Plane r = oracle::random_plane(10, 10, rng, 0.0, 255.0);
  const RgbImage img(r, Plane(10, 10, 40.0), Plane(10, 10, 200.0));
  const PcaBasis basis = fit_pca(img);
  EXPECT_NEAR(basis.eigvecs[0][0], 1.0, 1e-12);
  EXPECT_NEAR(basis.eigvecs[0][1], 0.0, 1e-12);
  EXPECT_NEAR(basis.eigvecs[0][2], 0.0, 1e-12);
  EXPECT_NEAR(basis.eigvals[0], variance(r), 1e-9 * basis.eigvals[0]);
  EXPECT_EQ(basis.eigvals[1], 0.0);
}

TEST(FitPca, UncorrelatedChannelsGiveCoordinateAxes) {
  // Three channels varying on disjoint pixels with distinct spreads.
  Plane r(1, 6), g(1, 6), b(1, 6);
  r(0, 0) = 90.0;
  g(0, 2) = 60.0;
  b(0, 4) = 30.0;
  const PcaBasis basis = fit_pca(RgbImage(r, g, b));
  // Covariance is not diagonal here (shared zero pixels), so compare against Jacobi.
  oracle::Vec3 means{};
  const auto ref = oracle::jacobi_eigen(oracle::covariance(RgbImage(r, g, b), means));
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(basis.eigvals[i], ref.values[i], 1e-9 * ref.values[0]);
    EXPECT_LT(axis_error(basis.eigvecs[i], ref.vectors[i]), 1e-9);
  }
}

TEST(FitPca, DiagonalCovarianceAxes) {
  // +-1 patterns that are mutually orthogonal make the covariance diagonal.
  const std::vector<double> a{1, 1, -1, -1}, b{1, -1, 1, -1}, c{1, -1, -1, 1};
  Plane r(1, 4), g(1, 4), bl(1, 4);
  for (int i = 0; i < 4; ++i) {
    r.values()[i] = 100 + 9 * a[i];
    g.values()[i] = 100 + 30 * b[i];
    bl.values()[i] = 100 + 4 * c[i];
  }
  const PcaBasis basis = fit_pca(RgbImage(r, g, bl));
  EXPECT_NEAR(basis.eigvecs[0][1], 1.0, 1e-12);
  EXPECT_NEAR(basis.eigvecs[1][0], 1.0, 1e-12);
  EXPECT_NEAR(basis.eigvecs[2][2], 1.0, 1e-12);
  EXPECT_NEAR(basis.eigvals[0], 900.0 * 4 / 3, 1e-9);
  EXPECT_NEAR(basis.eigvals[1], 81.0 * 4 / 3, 1e-9);
  EXPECT_NEAR(basis.eigvals[2], 16.0 * 4 / 3, 1e-9);
}

TEST(FitPca, MatchesJacobiOnRandomImages) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const RgbImage img = oracle::random_image(8 + trial % 7, 11, rng);
    const PcaBasis basis = fit_pca(img);
    oracle::Vec3 means{};
    const auto ref = oracle::jacobi_eigen(oracle::covariance(img, means));
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(basis.means[i], means[i], 1e-9);
      EXPECT_NEAR(basis.eigvals[i], ref.values[i], 1e-9 * ref.values[0]);
      EXPECT_LT(axis_error(basis.eigvecs[i], ref.vectors[i]), 1e-9);
    }
    // Unit, orthogonal, sign rule.
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(dot(basis.eigvecs[i], basis.eigvecs[i]), 1.0, 1e-12);
      for (int j = i + 1; j < 3; ++j) EXPECT_NEAR(dot(basis.eigvecs[i], basis.eigvecs[j]), 0.0, 1e-12);
      int big = 0;
      for (int k = 1; k < 3; ++k) {
        if (std::abs(basis.eigvecs[i][k]) > std::abs(basis.eigvecs[i][big])) big = k;
      }
      EXPECT_GT(basis.eigvecs[i][big], 0.0);
    }
    EXPECT_GE(basis.eigvals[0], basis.eigvals[1]);
    EXPECT_GE(basis.eigvals[1], basis.eigvals[2]);
    EXPECT_GE(basis.eigvals[2], 0.0);
  }
}

TEST(SymmetricEigen3, HandlesRepeatedAndDiagonalSpectra) {
  const auto check = [](const Mat3& a) {
    const SymmetricEigen3 eig = symmetric_eigen3(a);
    for (int i = 0; i < 3; ++i) {
      // A v = lambda v
      for (int r = 0; r < 3; ++r) {
        const double av = dot(a[r], eig.vectors[i]);
        EXPECT_NEAR(av, eig.values[i] * eig.vectors[i][r], 1e-9);
      }
    }
    EXPECT_LE(eig.values[0], eig.values[1]);
    EXPECT_LE(eig.values[1], eig.values[2]);
  };
  check({{{5, 0, 0}, {0, 5, 0}, {0, 0, 5}}});
  check({{{2, 0, 0}, {0, 7, 0}, {0, 0, 3}}});
  check({{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}});
  check({{{4, 1, 0}, {1, 4, 0}, {0, 0, 5}}});
  check({{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}});
}

TEST(ProjectChannel, ZeroMeanAndVarianceEqualsEigenvalue) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const RgbImage img = oracle::random_image(15, 13, rng);
    const PcaBasis basis = fit_pca(img);
    for (int i = 1; i <= 3; ++i) {
      const Plane c = project_channel(img, basis, i);
      EXPECT_NEAR(mean(c), 0.0, 1e-9);
      EXPECT_NEAR(variance(c), basis.eigvals[i - 1], 1e-9 * basis.eigvals[0]);
    }
  }
}

TEST(ProjectChannel, ChannelsReconstructTheImage) {
  std::mt19937_64 rng(5);
  const RgbImage img = oracle::random_image(9, 9, rng);
  const PcaBasis basis = fit_pca(img);
  const Plane c[3] = {project_channel(img, basis, 1), project_channel(img, basis, 2),
                      project_channel(img, basis, 3)};
  for (std::size_t p = 0; p < img.pixel_count(); ++p) {
    for (int ch = 0; ch < 3; ++ch) {
      double v = basis.means[ch];
      for (int k = 0; k < 3; ++k) v += c[k].values()[p] * basis.eigvecs[k][ch];
      EXPECT_NEAR(v, img.channel(ch).values()[p], 1e-9);
    }
  }
}

TEST(ChannelWeights, Examples) {
  PcaBasis basis;
  basis.eigvals = {2.0, 1.0, 1.0};
  const Vec3 w = channel_weights(basis);
  EXPECT_DOUBLE_EQ(w[0], 0.5);
  EXPECT_DOUBLE_EQ(w[1], 0.25);
  EXPECT_DOUBLE_EQ(w[2], 0.25);

  basis.eigvals = {0.0, 0.0, 0.0};
  const Vec3 u = channel_weights(basis);
  for (double v : u) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);

  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3 r = channel_weights(fit_pca(oracle::random_image(6, 6, rng)));
    EXPECT_NEAR(r[0] + r[1] + r[2], 1.0, 1e-12);
    EXPECT_GE(r[0], r[1]);
    EXPECT_GE(r[1], r[2]);
  }
}

TEST(ChannelWeights, InvariantToIntensityScaling) {
  std::mt19937_64 rng(7);
  const RgbImage img = oracle::random_image(10, 10, rng);
  auto scaled = [&](double k) {
    Plane ch[3];
    for (int c = 0; c < 3; ++c) {
      ch[c] = img.channel(c);
      for (double& v : ch[c].values()) v *= k;
    }
    return RgbImage(ch[0], ch[1], ch[2]);
  };
  const Vec3 w = channel_weights(fit_pca(img));
  const Vec3 w2 = channel_weights(fit_pca(scaled(0.5)));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(w[i], w2[i], 1e-12);
}

TEST(FitPca, ErrorContract) {
  try {
    fit_pca(RgbImage(Plane(1, 1, 3.0), Plane(1, 1, 3.0), Plane(1, 1, 3.0)));
    FAIL() << "expected TooFewPixels";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewPixels);
  }
  std::mt19937_64 rng(8);
  const RgbImage img = oracle::random_image(4, 4, rng);
  const PcaBasis basis = fit_pca(img);
  for (int bad : {0, 4, -1}) {
    try {
      project_channel(img, basis, bad);
      FAIL() << "expected IndexOutOfRange for " << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
    }
  }
}

}  // namespace
}  // namespace eigensal
