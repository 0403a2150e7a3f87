#include "eigensal/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "eigensal/error.hpp"

namespace eigensal {

namespace {

Vec3 cross(const Vec3& u, const Vec3& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

double dot(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

Vec3 scaled(const Vec3& u, double s) { return {u[0] * s, u[1] * s, u[2] * s}; }

Vec3 mul(const Mat3& a, const Vec3& v) { return {dot(a[0], v), dot(a[1], v), dot(a[2], v)}; }

Vec3 normalized(const Vec3& u) { return scaled(u, 1.0 / std::sqrt(dot(u, u))); }

// Any unit vector orthogonal to w (w must be unit length).
void orthogonal_complement(const Vec3& w, Vec3& u, Vec3& v) {
  if (std::abs(w[0]) > std::abs(w[1])) {
    u = normalized(Vec3{-w[2], 0.0, w[0]});
  } else {
    u = normalized(Vec3{0.0, w[2], -w[1]});
  }
  v = cross(w, u);
}

// Eigenvector of a well-separated eigenvalue: the null direction of
// (A - lambda I), taken as the longest cross product of two of its rows.
Vec3 eigenvector_separated(const Mat3& a, double lambda) {
  Mat3 m = a;
  for (int i = 0; i < 3; ++i) m[i][i] -= lambda;
  const Vec3 c01 = cross(m[0], m[1]);
  const Vec3 c02 = cross(m[0], m[2]);
  const Vec3 c12 = cross(m[1], m[2]);
  const double d01 = dot(c01, c01);
  const double d02 = dot(c02, c02);
  const double d12 = dot(c12, c12);
  const double dmax = std::max({d01, d02, d12});
  if (dmax == 0.0) return {1.0, 0.0, 0.0};  // A = lambda I
  if (dmax == d01) return scaled(c01, 1.0 / std::sqrt(d01));
  if (dmax == d02) return scaled(c02, 1.0 / std::sqrt(d02));
  return scaled(c12, 1.0 / std::sqrt(d12));
}

// Eigenvector for lambda restricted to the plane orthogonal to `known`.
Vec3 eigenvector_in_complement(const Mat3& a, const Vec3& known, double lambda) {
  Vec3 u, v;
  orthogonal_complement(known, u, v);
  const Vec3 au = mul(a, u);
  const Vec3 av = mul(a, v);
  double m00 = dot(u, au) - lambda;
  double m01 = dot(u, av);
  double m11 = dot(v, av) - lambda;
  const double abs00 = std::abs(m00);
  const double abs01 = std::abs(m01);
  const double abs11 = std::abs(m11);
  if (abs00 >= abs11) {
    if (std::max(abs00, abs01) == 0.0) return u;
    if (abs00 >= abs01) {
      m01 /= m00;
      m00 = 1.0 / std::sqrt(1.0 + m01 * m01);
      m01 *= m00;
    } else {
      m00 /= m01;
      m01 = 1.0 / std::sqrt(1.0 + m00 * m00);
      m00 *= m01;
    }
    return normalized(Vec3{m01 * u[0] - m00 * v[0], m01 * u[1] - m00 * v[1], m01 * u[2] - m00 * v[2]});
  }
  if (std::max(abs11, abs01) == 0.0) return u;
  if (abs11 >= abs01) {
    m01 /= m11;
    m11 = 1.0 / std::sqrt(1.0 + m01 * m01);
    m01 *= m11;
  } else {
    m11 /= m01;
    m01 = 1.0 / std::sqrt(1.0 + m11 * m11);
    m11 *= m01;
  }
  return normalized(Vec3{m11 * u[0] - m01 * v[0], m11 * u[1] - m01 * v[1], m11 * u[2] - m01 * v[2]});
}

}  // namespace

SymmetricEigen3 symmetric_eigen3(const Mat3& input) {
  SymmetricEigen3 out;
  double scale = 0.0;
  for (const auto& row : input) {
    for (double v : row) scale = std::max(scale, std::abs(v));
  }
  if (scale == 0.0) {
    out.vectors = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    return out;
  }
  Mat3 a = input;
  for (auto& row : a) {
    for (double& v : row) v /= scale;
  }

  const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
  if (off == 0.0) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a[i][i] < a[j][j]; });
    for (int k = 0; k < 3; ++k) {
      out.values[k] = a[order[k]][order[k]] * scale;
      out.vectors[k] = Vec3{0, 0, 0};
      out.vectors[k][order[k]] = 1.0;
    }
    if (dot(cross(out.vectors[0], out.vectors[1]), out.vectors[2]) < 0.0) {
      out.vectors[2] = scaled(out.vectors[2], -1.0);
    }
    return out;
  }

  const double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
  const double b00 = a[0][0] - q;
  const double b11 = a[1][1] - q;
  const double b22 = a[2][2] - q;
  const double p = std::sqrt((b00 * b00 + b11 * b11 + b22 * b22 + 2.0 * off) / 6.0);
  const double c00 = b11 * b22 - a[1][2] * a[1][2];
  const double c01 = a[0][1] * b22 - a[1][2] * a[0][2];
  const double c02 = a[0][1] * a[1][2] - b11 * a[0][2];
  const double det = (b00 * c00 - a[0][1] * c01 + a[0][2] * c02) / (p * p * p);
  const double half_det = std::clamp(0.5 * det, -1.0, 1.0);
  const double angle = std::acos(half_det) / 3.0;
  constexpr double kTwoThirdsPi = 2.0 * std::numbers::pi / 3.0;
  const double largest = q + 2.0 * p * std::cos(angle);
  const double smallest = q + 2.0 * p * std::cos(angle + kTwoThirdsPi);
  const double middle = 3.0 * q - largest - smallest;

  Vec3 v0, v1, v2;  // ascending eigenvalue order
  if (half_det >= 0.0) {
    v2 = eigenvector_separated(a, largest);
    v1 = eigenvector_in_complement(a, v2, middle);
    v0 = cross(v1, v2);
  } else {
    v0 = eigenvector_separated(a, smallest);
    v1 = eigenvector_in_complement(a, v0, middle);
    v2 = cross(v0, v1);
  }
  out.vectors = {v0, v1, v2};
  // Rayleigh quotients: second-order accurate in the eigenvector error.
  for (int k = 0; k < 3; ++k) {
    out.values[k] = dot(out.vectors[k], mul(a, out.vectors[k])) * scale;
  }
  return out;
}

Mat3 channel_covariance(const RgbImage& img, Vec3* means_out) {
  const std::size_t n = img.pixel_count();
  if (n < 2) throw Error(ErrorCode::TooFewPixels, std::to_string(n) + " pixel(s)");
  Vec3 means{};
  for (std::size_t c = 0; c < 3; ++c) means[c] = mean(img.channel(c));
  Mat3 cov{};
  const auto r = img.r().values();
  const auto g = img.g().values();
  const auto b = img.b().values();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 d{r[i] - means[0], g[i] - means[1], b[i] - means[2]};
    for (int j = 0; j < 3; ++j) {
      for (int k = j; k < 3; ++k) cov[j][k] += d[j] * d[k];
    }
  }
  const double denom = static_cast<double>(n - 1);
  for (int j = 0; j < 3; ++j) {
    for (int k = j; k < 3; ++k) {
      cov[j][k] /= denom;
      cov[k][j] = cov[j][k];
    }
  }
  if (means_out != nullptr) *means_out = means;
  return cov;
}

PcaBasis fit_pca(const RgbImage& img) {
  PcaBasis basis;
  const Mat3 cov = channel_covariance(img, &basis.means);
  const SymmetricEigen3 eig = symmetric_eigen3(cov);
  const double trace = cov[0][0] + cov[1][1] + cov[2][2];
  // Round-off floor: anything this small relative to the total variance is
  // treated as an exactly empty axis.
  const double floor = 1e-13 * trace;
  for (int k = 0; k < 3; ++k) {
    const int src = 2 - k;
    double lambda = eig.values[src];
    if (lambda < floor) lambda = 0.0;
    basis.eigvals[k] = lambda;
    Vec3 v = eig.vectors[src];
    std::size_t imax = 0;
    for (std::size_t c = 1; c < 3; ++c) {
      if (std::abs(v[c]) > std::abs(v[imax])) imax = c;
    }
    if (v[imax] < 0.0) v = scaled(v, -1.0);
    basis.eigvecs[k] = v;
  }
  return basis;
}

Plane project_channel(const RgbImage& img, const PcaBasis& basis, int index) {
  if (index < 1 || index > 3) {
    throw Error(ErrorCode::IndexOutOfRange, "eigenvector index " + std::to_string(index));
  }
  const Vec3& xi = basis.eigvecs[static_cast<std::size_t>(index - 1)];
  Plane out(img.height(), img.width());
  const auto r = img.r().values();
  const auto g = img.g().values();
  const auto b = img.b().values();
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = xi[0] * (r[i] - basis.means[0]) + xi[1] * (g[i] - basis.means[1]) +
             xi[2] * (b[i] - basis.means[2]);
  }
  return out;
}

Vec3 channel_weights(const PcaBasis& basis) {
  const double total = basis.eigvals[0] + basis.eigvals[1] + basis.eigvals[2];
  if (!(total > 0.0)) return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  return {basis.eigvals[0] / total, basis.eigvals[1] / total, basis.eigvals[2] / total};
}

}  // namespace eigensal
