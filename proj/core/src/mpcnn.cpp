#include "eigensal/mpcnn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "eigensal/error.hpp"
#include "eigensal/imagekit.hpp"

namespace eigensal {

std::string_view to_string(StopMode mode) noexcept {
  return mode == StopMode::Fixed ? "fixed" : "all-fired";
}

StopMode parse_stop_mode(std::string_view name) {
  if (name == "fixed") return StopMode::Fixed;
  if (name == "all-fired") return StopMode::AllFired;
  throw Error(ErrorCode::InvalidArgument, "unknown stop mode '" + std::string(name) + "'");
}

Plane linking_kernel(std::size_t radius) {
  if (radius < 1) throw Error(ErrorCode::NonPositiveRadius, "linking kernel radius must be >= 1");
  const std::size_t side = 2 * radius + 1;
  const auto r = static_cast<std::ptrdiff_t>(radius);
  Plane w(side, side);
  for (std::ptrdiff_t m = -r; m <= r; ++m) {
    for (std::ptrdiff_t n = -r; n <= r; ++n) {
      if (m == 0 && n == 0) continue;
      w(static_cast<std::size_t>(m + r), static_cast<std::size_t>(n + r)) =
          1.0 / static_cast<double>(m * m + n * n);
    }
  }
  return w;
}

void PcnnParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (!(alpha_feed > 0.0)) fail("alpha_H must be > 0");
  if (!(alpha_threshold > 0.0)) fail("alpha_T must be > 0");
  if (!(feed_gain > 0.0)) fail("V_H must be > 0");
  if (!(threshold_gain > 0.0)) fail("V_T must be > 0");
  for (double b : betas) {
    if (!(b >= 0.0) || !std::isfinite(b)) fail("beta weights must be finite and >= 0");
  }
  if (kernel.empty() || kernel.height() != kernel.width() || kernel.height() % 2 == 0) {
    fail("linking kernel must be square with odd side");
  }
  for (double v : kernel.values()) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail("linking kernel weights must be finite and >= 0");
  }
  if (n_iter < 1) fail("iteration count must be >= 1");
  if (max_iter < 1) fail("iteration cap must be >= 1");
}

PcnnState PcnnState::initial(std::span<const Plane> inputs) {
  if (inputs.empty()) throw Error(ErrorCode::EmptyInput, "m-PCNN needs at least one channel");
  const std::size_t h = inputs.front().height();
  const std::size_t w = inputs.front().width();
  PcnnState s;
  s.feed.assign(inputs.begin(), inputs.end());
  s.activity = Plane(h, w);
  s.fired = BinaryMap(h, w);
  s.threshold = Plane(h, w);
  return s;
}

LinkingField::LinkingField(const Plane& kernel) : radius_(kernel.height() / 2) {
  if (kernel.empty() || kernel.height() != kernel.width() || kernel.height() % 2 == 0) {
    throw Error(ErrorCode::InvalidArgument, "linking kernel must be square with odd side");
  }
  const auto r = static_cast<std::ptrdiff_t>(radius_);
  std::map<double, std::vector<std::pair<std::ptrdiff_t, std::ptrdiff_t>>> by_weight;
  for (std::ptrdiff_t dy = -r; dy <= r; ++dy) {
    for (std::ptrdiff_t dx = -r; dx <= r; ++dx) {
      const double wgt = kernel(static_cast<std::size_t>(dy + r), static_cast<std::size_t>(dx + r));
      if (wgt != 0.0) by_weight[wgt].emplace_back(dy, dx);
    }
  }
  for (auto& [wgt, offsets] : by_weight) groups_.push_back({wgt, std::move(offsets)});
}

Plane LinkingField::apply(const BinaryMap& fired) const {
  const std::size_t h = fired.height();
  const std::size_t w = fired.width();
  Plane out(h, w);
  if (groups_.empty() || fired.count() == 0) return out;

  const auto r = static_cast<std::ptrdiff_t>(radius_);
  const std::size_t pw = w + 2 * radius_;
  const std::size_t ph = h + 2 * radius_;
  std::vector<std::uint8_t> padded(ph * pw);
  for (std::size_t y = 0; y < ph; ++y) {
    const auto sy = static_cast<std::size_t>(
        reflect_index(static_cast<std::ptrdiff_t>(y) - r, static_cast<std::ptrdiff_t>(h)));
    for (std::size_t x = 0; x < pw; ++x) {
      const auto sx = static_cast<std::size_t>(
          reflect_index(static_cast<std::ptrdiff_t>(x) - r, static_cast<std::ptrdiff_t>(w)));
      padded[y * pw + x] = fired(sy, sx);
    }
  }

  std::vector<std::uint16_t> counts(h * w);
  auto acc = out.values();
  for (const Group& g : groups_) {
    std::fill(counts.begin(), counts.end(), std::uint16_t{0});
    for (const auto& [dy, dx] : g.offsets) {
      for (std::size_t y = 0; y < h; ++y) {
        // Y(p - o) lives at padded (y - dy + r, x - dx + r).
        const std::uint8_t* src = padded.data() + static_cast<std::size_t>(static_cast<std::ptrdiff_t>(y) - dy + r) * pw +
                                  static_cast<std::size_t>(r - dx);
        std::uint16_t* dst = counts.data() + y * w;
        for (std::size_t x = 0; x < w; ++x) dst[x] = static_cast<std::uint16_t>(dst[x] + src[x]);
      }
    }
    const double wgt = g.weight;
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += static_cast<double>(counts[i]) * wgt;
  }
  return out;
}

namespace {

void check_inputs(std::span<const Plane> inputs) {
  if (inputs.empty()) throw Error(ErrorCode::EmptyInput, "m-PCNN needs at least one channel");
  for (const Plane& p : inputs) {
    if (!p.same_shape(inputs.front())) throw Error(ErrorCode::ShapeMismatch, "m-PCNN channels differ in size");
  }
}

void check_state(const PcnnState& state, std::span<const Plane> inputs) {
  check_inputs(inputs);
  const Plane& ref = inputs.front();
  bool ok = state.feed.size() == inputs.size() && state.activity.same_shape(ref) &&
            state.threshold.same_shape(ref) && state.fired.same_shape(ref);
  for (const Plane& f : state.feed) ok = ok && f.same_shape(ref);
  if (!ok) throw Error(ErrorCode::ShapeMismatch, "m-PCNN state does not match the inputs");
}

}  // namespace

PcnnState mpcnn_step(const PcnnState& state, std::span<const Plane> inputs,
                     std::span<const double> betas, const PcnnParams& params,
                     const LinkingField& linking) {
  check_state(state, inputs);
  if (betas.size() != inputs.size()) {
    throw Error(ErrorCode::ShapeMismatch, std::to_string(betas.size()) + " betas for " +
                                              std::to_string(inputs.size()) + " channels");
  }
  const std::size_t k_count = inputs.size();
  const double feed_decay = std::exp(-params.alpha_feed);
  const double threshold_decay = std::exp(-params.alpha_threshold);
  const Plane link = linking.apply(state.fired);

  PcnnState next;
  next.iteration = state.iteration + 1;
  next.feed.reserve(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    Plane h(state.feed[k].height(), state.feed[k].width());
    const auto prev = state.feed[k].values();
    const auto in = inputs[k].values();
    const auto l = link.values();
    auto dst = h.values();
    for (std::size_t i = 0; i < dst.size(); ++i) {
      dst[i] = feed_decay * prev[i] + params.feed_gain * l[i] + in[i];
    }
    next.feed.push_back(std::move(h));
  }

  const std::size_t height = inputs.front().height();
  const std::size_t width = inputs.front().width();
  next.activity = Plane(height, width);
  next.fired = BinaryMap(height, width);
  next.threshold = Plane(height, width);
  std::vector<double> factors(k_count);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const std::size_t i = y * width + x;
      for (std::size_t k = 0; k < k_count; ++k) {
        factors[k] = 1.0 + betas[k] * next.feed[k].values()[i];
      }
      // Multiplying in sorted order makes U independent of channel order.
      std::sort(factors.begin(), factors.end());
      const double u = std::accumulate(factors.begin(), factors.end(), 1.0, std::multiplies<>());
      const double t_prev = state.threshold.values()[i];
      const bool pulse = u > t_prev;
      next.activity.values()[i] = u;
      next.fired.set(y, x, pulse);
      next.threshold.values()[i] = threshold_decay * t_prev + (pulse ? params.threshold_gain : 0.0);
    }
  }
  return next;
}

PcnnState mpcnn_step(const PcnnState& state, std::span<const Plane> inputs,
                     const PcnnParams& params) {
  const LinkingField linking(params.kernel);
  return mpcnn_step(state, inputs, params.betas, params, linking);
}

Plane mpcnn_fuse(std::span<const Plane> inputs, std::span<const double> betas,
                 const PcnnParams& params) {
  check_inputs(inputs);
  params.validate();
  if (betas.size() != inputs.size()) {
    throw Error(ErrorCode::ShapeMismatch, std::to_string(betas.size()) + " betas for " +
                                              std::to_string(inputs.size()) + " channels");
  }
  double beta_sum = 0.0;
  for (double b : betas) {
    if (!(b >= 0.0)) throw Error(ErrorCode::InvalidArgument, "beta weights must be >= 0");
    beta_sum += b;
  }
  if (std::abs(beta_sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "beta weights sum to " + std::to_string(beta_sum));
  }
  for (const Plane& p : inputs) {
    for (double v : p.values()) {
      if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::InvalidArgument, "m-PCNN inputs must lie in [0, 1]");
    }
  }

  const LinkingField linking(params.kernel);
  PcnnState state = PcnnState::initial(inputs);
  if (params.stop_mode == StopMode::Fixed) {
    for (std::size_t n = 0; n < params.n_iter; ++n) {
      state = mpcnn_step(state, inputs, betas, params, linking);
    }
  } else {
    // Every neuron pulses on the first step (U >= 1 > T = 0), so coverage is
    // counted from the second step onwards.
    state = mpcnn_step(state, inputs, betas, params, linking);
    std::vector<std::uint8_t> seen(state.fired.size(), 0);
    std::size_t remaining = seen.size();
    while (remaining > 0 && state.iteration < params.max_iter) {
      state = mpcnn_step(state, inputs, betas, params, linking);
      const auto bits = state.fired.bits();
      for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] && !seen[i]) {
          seen[i] = 1;
          --remaining;
        }
      }
    }
  }

  Plane root = state.activity;
  for (double& v : root.values()) v = std::sqrt(v);
  return normalize_unit(root);
}

}  // namespace eigensal
