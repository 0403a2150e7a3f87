#include "eigensal/plane.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "eigensal/error.hpp"

namespace eigensal {

namespace {

void require_dims(std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) {
    throw Error(ErrorCode::InvalidArgument, "plane dimensions must be at least 1x1");
  }
}

}  // namespace

Plane::Plane(std::size_t height, std::size_t width, double fill)
    : height_(height), width_(width), values_(height * width, fill) {
  require_dims(height, width);
}

Plane::Plane(std::size_t height, std::size_t width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
  require_dims(height, width);
  if (values_.size() != height * width) {
    throw Error(ErrorCode::ShapeMismatch,
                "value count " + std::to_string(values_.size()) + " != " +
                    std::to_string(height) + "x" + std::to_string(width));
  }
}

BinaryMap::BinaryMap(std::size_t height, std::size_t width, std::uint8_t fill)
    : height_(height), width_(width), bits_(height * width, fill ? 1 : 0) {
  require_dims(height, width);
}

std::size_t BinaryMap::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

Plane BinaryMap::to_plane() const {
  Plane p(height_, width_);
  std::transform(bits_.begin(), bits_.end(), p.values().begin(),
                 [](std::uint8_t b) { return static_cast<double>(b); });
  return p;
}

RgbImage::RgbImage(Plane r, Plane g, Plane b)
    : r_(std::move(r)), g_(std::move(g)), b_(std::move(b)) {
  if (!r_.same_shape(g_) || !r_.same_shape(b_)) {
    throw Error(ErrorCode::ShapeMismatch, "RGB planes differ in size");
  }
  for (const Plane* p : {&r_, &g_, &b_}) {
    for (double v : p->values()) {
      if (!(v >= 0.0 && v <= 255.0)) {
        throw Error(ErrorCode::InvalidArgument, "channel value outside [0, 255]");
      }
    }
  }
}

const Plane& RgbImage::channel(std::size_t c) const {
  switch (c) {
    case 0: return r_;
    case 1: return g_;
    case 2: return b_;
    default: throw Error(ErrorCode::IndexOutOfRange, "channel index " + std::to_string(c));
  }
}

double mean(const Plane& p) noexcept {
  if (p.empty()) return 0.0;
  return std::accumulate(p.values().begin(), p.values().end(), 0.0) /
         static_cast<double>(p.size());
}

double min_value(const Plane& p) noexcept {
  return p.empty() ? 0.0 : *std::min_element(p.values().begin(), p.values().end());
}

double max_value(const Plane& p) noexcept {
  return p.empty() ? 0.0 : *std::max_element(p.values().begin(), p.values().end());
}

Plane flip_horizontal(const Plane& p) {
  Plane out = p;
  for (std::size_t r = 0; r < p.height(); ++r) {
    auto row = out.row(r);
    std::reverse(row.begin(), row.end());
  }
  return out;
}

Plane rotate90(const Plane& p) {
  // out(r, c) = p(c, W-1-r); output is W x H.
  Plane out(p.width(), p.height());
  for (std::size_t r = 0; r < out.height(); ++r) {
    for (std::size_t c = 0; c < out.width(); ++c) {
      out(r, c) = p(c, p.width() - 1 - r);
    }
  }
  return out;
}

BinaryMap flip_horizontal(const BinaryMap& m) {
  BinaryMap out(m.height(), m.width());
  for (std::size_t r = 0; r < m.height(); ++r) {
    for (std::size_t c = 0; c < m.width(); ++c) {
      out.set(r, c, m(r, m.width() - 1 - c) != 0);
    }
  }
  return out;
}

RgbImage flip_horizontal(const RgbImage& img) {
  return RgbImage(flip_horizontal(img.r()), flip_horizontal(img.g()), flip_horizontal(img.b()));
}

}  // namespace eigensal
