#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "eigensal/plane.hpp"

namespace eigensal {

enum class StopMode {
  Fixed,     // run exactly n_iter steps
  AllFired,  // run until every neuron has fired at least once (capped)
};

std::string_view to_string(StopMode mode) noexcept;
StopMode parse_stop_mode(std::string_view name);

/// Inverse squared distance weights W(m, n) = 1 / (m^2 + n^2) on a
/// (2r+1) x (2r+1) grid. The centre has no self-link and is 0.
Plane linking_kernel(std::size_t radius);

struct PcnnParams {
  double alpha_feed = 0.001;       // decay of the external stimulus H
  double feed_gain = 15.0;         // V_H: scale of the linking input
  double alpha_threshold = 0.012;  // decay of the dynamic threshold T
  double threshold_gain = 100.0;   // V_T: jump of T after a pulse
  std::vector<double> betas;       // per-channel weights; may be left empty for mpcnn_fuse
  Plane kernel = linking_kernel(17);
  std::size_t n_iter = 20;
  StopMode stop_mode = StopMode::Fixed;
  std::size_t max_iter = 200;  // cap for StopMode::AllFired

  /// Throws InvalidArgument naming the first violated constraint.
  void validate() const;
};

struct PcnnState {
  std::vector<Plane> feed;  // H^k, one per channel
  Plane activity;           // U
  BinaryMap fired;          // Y
  Plane threshold;          // T
  std::size_t iteration = 0;

  /// H^k = I^k, U = Y = T = 0.
  static PcnnState initial(std::span<const Plane> inputs);
};

/// Linking convolution (W * Y)(p) = sum_o W(o) Y(p - o). The firing map is
/// extended past the border by half-sample mirroring. Offsets are grouped
/// by exact weight value; each pixel sums count * weight over the groups in
/// ascending-weight order, so its value depends only on how many fired
/// neighbours sit at each weight and not on where they are. Flipping or
/// rotating the firing map therefore flips or rotates the result bit for
/// bit whenever the kernel has the same symmetry.
class LinkingField {
 public:
  explicit LinkingField(const Plane& kernel);

  Plane apply(const BinaryMap& fired) const;

  std::size_t radius() const noexcept { return radius_; }

 private:
  struct Group {
    double weight;
    std::vector<std::pair<std::ptrdiff_t, std::ptrdiff_t>> offsets;  // (dy, dx)
  };
  std::size_t radius_ = 0;
  std::vector<Group> groups_;
};

/// One synchronous update of every neuron:
///   H^k <- exp(-alpha_H) H^k + V_H (W * Y) + I^k
///   U   <- prod_k (1 + beta_k H^k)
///   Y   <- [U > T]
///   T   <- exp(-alpha_T) T + V_T Y
/// All reads use the previous iteration's Y and T.
PcnnState mpcnn_step(const PcnnState& state, std::span<const Plane> inputs,
                     const PcnnParams& params);

/// Same update with a prebuilt linking operator (used by mpcnn_fuse).
PcnnState mpcnn_step(const PcnnState& state, std::span<const Plane> inputs,
                     std::span<const double> betas, const PcnnParams& params,
                     const LinkingField& linking);

/// Fuse K maps in [0, 1] into one: iterate from the initial state, then
/// return normalize_unit(sqrt(U)). Betas must sum to 1.
Plane mpcnn_fuse(std::span<const Plane> inputs, std::span<const double> betas,
                 const PcnnParams& params);

}  // namespace eigensal
