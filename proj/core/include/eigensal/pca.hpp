#pragma once

#include <array>
#include <cstddef>

#include "eigensal/plane.hpp"

namespace eigensal {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

/// Principal axes of the per-pixel (R, G, B) distribution.
/// eigvecs[i] is the unit eigenvector for eigvals[i]; eigenvalues are sorted
/// in descending order and clamped at zero. Each eigenvector is oriented so
/// that its largest-magnitude component is positive.
struct PcaBasis {
  std::array<Vec3, 3> eigvecs{};
  Vec3 eigvals{};
  Vec3 means{};
};

/// Eigen-decomposition of a symmetric 3x3 matrix: closed-form eigenvalues
/// (trigonometric cubic solution) and eigenvectors from cross products of
/// the shifted rows, refined by Rayleigh quotients. Results are in
/// ascending eigenvalue order and form a right-handed orthonormal set.
struct SymmetricEigen3 {
  Vec3 values{};
  std::array<Vec3, 3> vectors{};
};
SymmetricEigen3 symmetric_eigen3(const Mat3& a);

/// Sample covariance (divisor n - 1) of the three channels.
Mat3 channel_covariance(const RgbImage& img, Vec3* means = nullptr);

/// Fit the RGB principal axes. Throws TooFewPixels for images with fewer
/// than two pixels.
PcaBasis fit_pca(const RgbImage& img);

/// C_i: projection of the zero-meaned pixel vectors onto eigenvector i
/// (1-based, i = 1 carries the most variance).
Plane project_channel(const RgbImage& img, const PcaBasis& basis, int index);

/// Eigenvalue shares lambda_k / sum(lambda); uniform thirds when the image
/// has no variance at all.
Vec3 channel_weights(const PcaBasis& basis);

}  // namespace eigensal
