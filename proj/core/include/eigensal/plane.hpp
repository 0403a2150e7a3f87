#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace eigensal {

/// Dense row-major 2-D field of doubles. Every image, map and intermediate
/// in the pipeline is carried as a Plane.
class Plane {
 public:
  Plane() = default;
  Plane(std::size_t height, std::size_t width, double fill = 0.0);
  Plane(std::size_t height, std::size_t width, std::vector<double> values);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double& operator()(std::size_t row, std::size_t col) noexcept {
    return values_[row * width_ + col];
  }
  double operator()(std::size_t row, std::size_t col) const noexcept {
    return values_[row * width_ + col];
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> row(std::size_t r) noexcept {
    return std::span<double>(values_).subspan(r * width_, width_);
  }
  std::span<const double> row(std::size_t r) const noexcept {
    return std::span<const double>(values_).subspan(r * width_, width_);
  }

  bool same_shape(const Plane& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> values_;
};

/// Binary {0,1} map, used for firing maps, thresholded saliency and
/// ground-truth masks.
class BinaryMap {
 public:
  BinaryMap() = default;
  BinaryMap(std::size_t height, std::size_t width, std::uint8_t fill = 0);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return bits_.size(); }

  std::uint8_t operator()(std::size_t row, std::size_t col) const noexcept {
    return bits_[row * width_ + col];
  }
  // Any nonzero value is stored as 1.
  void set(std::size_t row, std::size_t col, bool on) noexcept {
    bits_[row * width_ + col] = on ? 1 : 0;
  }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::size_t count() const noexcept;

  bool same_shape(const BinaryMap& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }
  bool same_shape(const Plane& other) const noexcept {
    return height_ == other.height() && width_ == other.width();
  }

  Plane to_plane() const;

  friend bool operator==(const BinaryMap&, const BinaryMap&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// 8-bit-range RGB image held as three planes with values in [0, 255].
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(Plane r, Plane g, Plane b);

  std::size_t height() const noexcept { return r_.height(); }
  std::size_t width() const noexcept { return r_.width(); }
  std::size_t pixel_count() const noexcept { return r_.size(); }

  const Plane& r() const noexcept { return r_; }
  const Plane& g() const noexcept { return g_; }
  const Plane& b() const noexcept { return b_; }
  const Plane& channel(std::size_t c) const;

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  Plane r_, g_, b_;
};

// Small helpers shared by modules and tests.
double mean(const Plane& p) noexcept;
double min_value(const Plane& p) noexcept;
double max_value(const Plane& p) noexcept;
Plane flip_horizontal(const Plane& p);
Plane rotate90(const Plane& p);  // counter-clockwise
BinaryMap flip_horizontal(const BinaryMap& m);
RgbImage flip_horizontal(const RgbImage& img);

}  // namespace eigensal
