#include "eigensal/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "eigensal/error.hpp"
#include "eigensal/imagekit.hpp"

namespace eigensal {

namespace fs = std::filesystem;

BinaryMap binarize_mean(const Plane& s) {
  // Rounding in the sum can push the mean of a constant plane below its value.
  const double m = std::clamp(mean(s), min_value(s), max_value(s));
  BinaryMap out(s.height(), s.width());
  for (std::size_t r = 0; r < s.height(); ++r) {
    for (std::size_t c = 0; c < s.width(); ++c) out.set(r, c, s(r, c) > m);
  }
  return out;
}

PrecisionRecall prf(const BinaryMap& s, const BinaryMap& g, double alpha) {
  if (!s.same_shape(g)) throw Error(ErrorCode::ShapeMismatch, "saliency and ground truth differ in size");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::InvalidArgument, "alpha must be >= 0");
  std::size_t hits = 0;
  std::size_t detected = 0;
  std::size_t truth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool sb = s.bits()[i] != 0;
    const bool gb = g.bits()[i] != 0;
    hits += (sb && gb) ? 1 : 0;
    detected += sb ? 1 : 0;
    truth += gb ? 1 : 0;
  }
  if (truth == 0) throw Error(ErrorCode::EmptyGroundTruth, "ground truth has no positive pixel");
  PrecisionRecall out;
  if (detected == 0) return out;
  out.precision = static_cast<double>(hits) / static_cast<double>(detected);
  out.recall = static_cast<double>(hits) / static_cast<double>(truth);
  const double denom = alpha * out.precision + out.recall;
  out.f_measure = denom > 0.0 ? (1.0 + alpha) * out.precision * out.recall / denom : 0.0;
  return out;
}

RocResult roc_auc(const Plane& s, const BinaryMap& g) {
  if (!g.same_shape(s)) throw Error(ErrorCode::ShapeMismatch, "saliency and ground truth differ in size");
  // hist[k]: pixels whose largest satisfied grid threshold is k/256.
  // s * 256 is exact, so floor() reproduces the s >= k/256 comparison.
  std::vector<std::size_t> pos(kRocGridSteps + 1, 0);
  std::vector<std::size_t> neg(kRocGridSteps + 1, 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double v = s.values()[i];
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::InvalidArgument, "saliency must lie in [0, 1]");
    const auto bin = static_cast<std::size_t>(std::floor(v * kRocGridSteps));
    (g.bits()[i] ? pos : neg)[bin] += 1;
  }
  std::size_t total_pos = 0;
  std::size_t total_neg = 0;
  for (int k = 0; k <= kRocGridSteps; ++k) {
    total_pos += pos[static_cast<std::size_t>(k)];
    total_neg += neg[static_cast<std::size_t>(k)];
  }
  if (total_pos == 0 || total_neg == 0) {
    throw Error(ErrorCode::DegenerateGroundTruth, "ground truth needs positive and negative pixels");
  }

  RocResult out;
  auto push = [&](double t, std::size_t tp, std::size_t fp) {
    const double tpr = static_cast<double>(tp) / static_cast<double>(total_pos);
    const double fpr = static_cast<double>(fp) / static_cast<double>(total_neg);
    if (!out.curve.tpr.empty() && out.curve.tpr.back() == tpr && out.curve.fpr.back() == fpr) return;
    out.curve.thresholds.push_back(t);
    out.curve.tpr.push_back(tpr);
    out.curve.fpr.push_back(fpr);
  };
  push(std::numeric_limits<double>::infinity(), 0, 0);
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (int k = kRocGridSteps; k >= 0; --k) {
    tp += pos[static_cast<std::size_t>(k)];
    fp += neg[static_cast<std::size_t>(k)];
    push(static_cast<double>(k) / kRocGridSteps, tp, fp);
  }
  push(-std::numeric_limits<double>::epsilon(), total_pos, total_neg);

  double area = 0.0;
  for (std::size_t i = 1; i < out.curve.tpr.size(); ++i) {
    area += (out.curve.fpr[i] - out.curve.fpr[i - 1]) * (out.curve.tpr[i] + out.curve.tpr[i - 1]) / 2.0;
  }
  out.auc = area;
  return out;
}

BinaryMap load_mask(const fs::path& path) {
  const RgbImage img = load_image(path);
  BinaryMap out(img.height(), img.width());
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) {
      const double level = (img.r()(r, c) + img.g()(r, c) + img.b()(r, c)) / 3.0;
      out.set(r, c, level > 127.0);
    }
  }
  return out;
}

std::vector<ImagePair> collect_pairs(const fs::path& images_dir, const fs::path& masks_dir) {
  if (!fs::is_directory(images_dir)) throw Error(ErrorCode::MissingFile, images_dir.string());
  if (!fs::is_directory(masks_dir)) throw Error(ErrorCode::MissingFile, masks_dir.string());
  auto list = [](const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
  };
  const auto images = list(images_dir);
  const auto masks = list(masks_dir);
  std::vector<ImagePair> pairs;
  for (const auto& image : images) {
    fs::path mask = masks_dir / image.filename();
    if (!fs::exists(mask)) {
      const auto it = std::find_if(masks.begin(), masks.end(),
                                   [&](const fs::path& m) { return m.stem() == image.stem(); });
      if (it != masks.end()) mask = *it;
    }
    pairs.push_back({image, mask});
  }
  return pairs;
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> workers;
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

EvalReport evaluate_dataset(std::vector<ImagePair> pairs, const SaliencyFn& method,
                            std::string method_name, const EvalOptions& options,
                            ParameterSnapshot parameters) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyInput, "no image/mask pairs to evaluate");
  if (!(options.alpha >= 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be >= 0");
  std::sort(pairs.begin(), pairs.end(),
            [](const ImagePair& a, const ImagePair& b) { return a.image < b.image; });

  struct Outcome {
    std::optional<EvalRecord> record;
    std::string failure;
  };
  std::vector<Outcome> outcomes(pairs.size());
  parallel_for(pairs.size(), options.threads, [&](std::size_t i) {
    const ImagePair& pair = pairs[i];
    Outcome& out = outcomes[i];
    try {
      const RgbImage image = load_image(pair.image);
      const BinaryMap truth = load_mask(pair.mask);
      if (truth.height() != image.height() || truth.width() != image.width()) {
        throw Error(ErrorCode::DimensionMismatch, "mask " + std::to_string(truth.height()) + "x" +
                                                      std::to_string(truth.width()) + " vs image " +
                                                      std::to_string(image.height()) + "x" +
                                                      std::to_string(image.width()));
      }
      const Plane saliency = method(image);
      const PrecisionRecall m = prf(binarize_mean(saliency), truth, options.alpha);
      const RocResult roc = roc_auc(saliency, truth);
      out.record = EvalRecord{pair.image.filename().string(), m.precision, m.recall, m.f_measure, roc.auc};
    } catch (const std::exception& e) {
      out.failure = e.what();
    }
  });

  EvalReport report;
  report.method = std::move(method_name);
  report.alpha = options.alpha;
  report.parameters = std::move(parameters);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (outcomes[i].record) {
      report.records.push_back(*outcomes[i].record);
    } else {
      report.skipped.push_back({pairs[i].image.filename().string(), outcomes[i].failure});
    }
  }
  if (!report.records.empty()) {
    const auto n = static_cast<double>(report.records.size());
    for (const EvalRecord& r : report.records) {
      report.mean_precision += r.precision;
      report.mean_recall += r.recall;
      report.mean_f_measure += r.f_measure;
      report.mean_auc += r.auc;
    }
    report.mean_precision /= n;
    report.mean_recall /= n;
    report.mean_f_measure /= n;
    report.mean_auc /= n;
  }
  return report;
}

ParameterSnapshot parameter_snapshot(MethodId method, const MethodConfig& cfg) {
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  return {
      {"method", std::string(to_string(method))},
      {"blur_sigma", num(cfg.blur_sigma)},
      {"wavelet", std::string(to_string(cfg.wavelet))},
      {"baseline_space", std::string(to_string(cfg.baseline_space))},
      {"alpha_H", num(cfg.pcnn.alpha_feed)},
      {"V_H", num(cfg.pcnn.feed_gain)},
      {"alpha_T", num(cfg.pcnn.alpha_threshold)},
      {"V_T", num(cfg.pcnn.threshold_gain)},
      {"kernel_radius", std::to_string(cfg.pcnn.kernel.height() / 2)},
      {"iterations", std::to_string(cfg.pcnn.n_iter)},
      {"stop_mode", std::string(to_string(cfg.pcnn.stop_mode))},
      {"max_iterations", std::to_string(cfg.pcnn.max_iter)},
  };
}

EvalReport evaluate_dataset(std::vector<ImagePair> pairs, MethodId method,
                            const MethodConfig& cfg, const EvalOptions& options) {
  cfg.validate();
  return evaluate_dataset(
      std::move(pairs), [&](const RgbImage& img) { return run_method(method, img, cfg); },
      std::string(to_string(method)), options, parameter_snapshot(method, cfg));
}

}  // namespace eigensal
