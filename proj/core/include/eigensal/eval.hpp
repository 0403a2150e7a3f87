#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "eigensal/methods.hpp"
#include "eigensal/plane.hpp"

namespace eigensal {

/// 1 where s exceeds its own mean (ties stay 0).
BinaryMap binarize_mean(const Plane& s);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

/// P = sum(g*s)/sum(s), R = sum(g*s)/sum(g),
/// F = (1 + alpha) P R / (alpha P + R). An empty detection scores (0, 0, 0).
PrecisionRecall prf(const BinaryMap& s, const BinaryMap& g, double alpha);

struct RocCurve {
  std::vector<double> thresholds;  // descending; the first entry is +inf
  std::vector<double> tpr;
  std::vector<double> fpr;
};

struct RocResult {
  RocCurve curve;
  double auc = 0.0;
};

constexpr int kRocGridSteps = 256;

/// Sweeps the fixed grid {k/256 : k = 256..0} followed by a negative
/// threshold, predicting positive where s >= t. The curve is anchored at
/// (0, 0), consecutive duplicate points are merged, and the area is
/// integrated with the trapezoid rule over FPR.
RocResult roc_auc(const Plane& s, const BinaryMap& g);

/// 8-bit mask -> {0,1} with values above 127 set.
BinaryMap load_mask(const std::filesystem::path& path);

struct ImagePair {
  std::filesystem::path image;
  std::filesystem::path mask;
};

/// Every image file in `images_dir` (sorted by name) paired with the file of
/// the same name in `masks_dir`, or failing that the first file sharing its
/// stem. Unmatched images keep a nonexistent mask path and are reported as
/// skipped by the evaluator.
std::vector<ImagePair> collect_pairs(const std::filesystem::path& images_dir,
                                     const std::filesystem::path& masks_dir);

struct EvalRecord {
  std::string id;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  double auc = 0.0;
};

struct SkippedPair {
  std::string id;
  std::string reason;
};

using ParameterSnapshot = std::vector<std::pair<std::string, std::string>>;

struct EvalReport {
  std::string method;
  double alpha = 0.3;
  ParameterSnapshot parameters;
  std::vector<EvalRecord> records;
  std::vector<SkippedPair> skipped;
  double mean_precision = 0.0;
  double mean_recall = 0.0;
  double mean_f_measure = 0.0;
  double mean_auc = 0.0;

  std::size_t warning_count() const noexcept { return skipped.size(); }
};

struct EvalOptions {
  double alpha = 0.3;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

using SaliencyFn = std::function<Plane(const RgbImage&)>;

/// Runs `method` on every pair (ordered by image path), thresholds at the
/// mean, and aggregates P/R/F/AUC. Pairs that fail to load, mismatch in
/// size or have a degenerate mask are recorded in `skipped` and the run
/// continues. Throws EmptyInput for an empty list.
EvalReport evaluate_dataset(std::vector<ImagePair> pairs, const SaliencyFn& method,
                            std::string method_name, const EvalOptions& options,
                            ParameterSnapshot parameters = {});

EvalReport evaluate_dataset(std::vector<ImagePair> pairs, MethodId method,
                            const MethodConfig& cfg, const EvalOptions& options);

ParameterSnapshot parameter_snapshot(MethodId method, const MethodConfig& cfg);

/// One row per image plus a trailing "mean" row.
void write_csv(const EvalReport& report, const std::filesystem::path& path);
void write_json(const EvalReport& report, const std::filesystem::path& path);
std::string report_to_json(const EvalReport& report);

/// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = all cores).
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace eigensal
