#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "eigensal/error.hpp"
#include "eigensal/imagekit.hpp"

namespace eigensal::cli {

namespace fs = std::filesystem;

void RunConfig::finalize() {
  if (kernel_radius < 1) throw Error(ErrorCode::NonPositiveRadius, "--kernel-radius must be >= 1");
  if (!(alpha >= 0.0)) throw Error(ErrorCode::InvalidArgument, "--alpha must be >= 0");
  method_cfg.pcnn.kernel = linking_kernel(kernel_radius);
  method_cfg.validate();
}

std::string RunConfig::describe() const {
  std::ostringstream os;
  for (const auto& [key, value] : parameter_snapshot(method, method_cfg)) {
    os << key << " = " << value << '\n';
  }
  os << "alpha = " << std::setprecision(17) << alpha << '\n';
  os << "threads = " << threads << '\n';
  os << "out = " << out_dir.string() << '\n';
  return os.str();
}

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw Error(ErrorCode::IoFailure, "cannot create directory " + dir.string());
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

fs::path cmd_saliency(const fs::path& image, const RunConfig& cfg, std::ostream& out) {
  const RgbImage img = load_image(image);
  const Plane saliency = run_method(cfg.method, img, cfg.method_cfg);
  ensure_dir(cfg.out_dir);
  const std::string stem = image.stem().string();
  const fs::path target = cfg.out_dir / (stem + ".saliency.png");
  save_plane(saliency, target);
  out << "wrote " << target.string() << '\n';
  if (cfg.binary) {
    const fs::path binary = cfg.out_dir / (stem + ".binary.png");
    save_binary(binarize_mean(saliency), binary);
    out << "wrote " << binary.string() << '\n';
  }
  return target;
}

EvalReport cmd_eval(const fs::path& images_dir, const fs::path& masks_dir, const RunConfig& cfg,
                    std::ostream& out) {
  EvalReport report = evaluate_dataset(collect_pairs(images_dir, masks_dir), cfg.method,
                                       cfg.method_cfg, EvalOptions{cfg.alpha, cfg.threads});
  for (const SkippedPair& s : report.skipped) out << "warning: skipped " << s.id << ": " << s.reason << '\n';
  if (report.records.empty()) {
    throw Error(ErrorCode::EmptyInput, "no valid image/mask pairs in " + images_dir.string());
  }
  ensure_dir(cfg.out_dir);
  write_csv(report, cfg.out_dir / "report.csv");
  write_json(report, cfg.out_dir / "report.json");
  out << "method " << report.method << ", " << report.records.size() << " image(s), "
      << report.warning_count() << " warning(s)\n";
  out << "P " << fixed(report.mean_precision) << "  R " << fixed(report.mean_recall) << "  F_a "
      << fixed(report.mean_f_measure) << "  AUC " << fixed(report.mean_auc) << '\n';
  return report;
}

fs::path cmd_inspect(const fs::path& image, const RunConfig& cfg, std::ostream& out) {
  const RgbImage img = load_image(image);
  const ProposedTrace trace = proposed_trace(img, cfg.method_cfg);
  const fs::path dir = cfg.out_dir / (image.stem().string() + ".inspect");
  ensure_dir(dir);

  nlohmann::ordered_json manifest;
  manifest["image"] = image.filename().string();
  manifest["height"] = img.height();
  manifest["width"] = img.width();
  manifest["wavelet"] = std::string(to_string(cfg.method_cfg.wavelet));
  manifest["levels"] = trace.feature_maps[0].size();
  manifest["eigenvalues"] = trace.basis.eigvals;
  manifest["eigenvectors"] = trace.basis.eigvecs;
  manifest["weights"] = trace.weights;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  auto dump = [&](const Plane& p, const std::string& name, const std::string& kind) {
    save_plane(p, dir / name);
    files.push_back({{"file", name}, {"kind", kind}});
  };
  for (std::size_t c = 0; c < 3; ++c) {
    dump(trace.pct[c], "pct_" + std::to_string(c + 1) + ".png", "pct");
  }
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t s = 0; s < trace.feature_maps[c].size(); ++s) {
      dump(trace.feature_maps[c][s],
           "feature_c" + std::to_string(c + 1) + "_s" + std::to_string(s + 1) + ".png", "feature");
    }
  }
  for (std::size_t c = 0; c < 3; ++c) {
    dump(trace.conspicuity[c], "conspicuity_" + std::to_string(c + 1) + ".png", "conspicuity");
  }
  dump(trace.saliency, "fused.png", "fused");
  manifest["files"] = files;

  std::ostringstream weights;
  weights << std::fixed << std::setprecision(6) << trace.weights[0] << ' ' << trace.weights[1] << ' '
          << trace.weights[2];
  {
    std::ofstream txt(dir / "weights.txt");
    txt << weights.str() << '\n';
    std::ofstream js(dir / "manifest.json");
    js << manifest.dump(2) << '\n';
    if (!txt || !js) throw Error(ErrorCode::IoFailure, "cannot write manifest in " + dir.string());
  }
  out << "weights " << weights.str() << '\n';
  out << "wrote " << files.size() << " maps to " << dir.string() << '\n';
  return dir;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eigenvector-space saliency with m-PCNN fusion", "eigensal"};
  app.require_subcommand(0, 1);
  app.set_config("--config", "", "Read key = value settings (flags override them)");

  RunConfig cfg;
  std::string method = "proposed";
  std::string wavelet = "db4";
  std::string stop_mode = "fixed";
  std::string baseline_space = "lab";
  bool print_config = false;

  std::vector<std::string> method_names;
  for (MethodId id : all_methods()) method_names.emplace_back(to_string(id));

  app.add_option("--method", method, "Saliency method")->check(CLI::IsMember(method_names));
  app.add_option("--wavelet", wavelet, "Wavelet basis")->check(CLI::IsMember({"haar", "db1", "db2", "db4"}));
  app.add_option("--iters", cfg.method_cfg.pcnn.n_iter, "m-PCNN iterations (fixed mode)")
      ->check(CLI::PositiveNumber);
  app.add_option("--stop-mode", stop_mode, "m-PCNN stopping rule")->check(CLI::IsMember({"fixed", "all-fired"}));
  app.add_option("--max-iters", cfg.method_cfg.pcnn.max_iter, "Iteration cap for all-fired mode")
      ->check(CLI::PositiveNumber);
  app.add_option("--alpha", cfg.alpha, "F-measure precision weight")->check(CLI::NonNegativeNumber);
  app.add_option("--sigma", cfg.method_cfg.blur_sigma, "Gaussian pre-filter sigma")->check(CLI::PositiveNumber);
  app.add_option("--kernel-radius", cfg.kernel_radius, "m-PCNN linking kernel radius")->check(CLI::PositiveNumber);
  app.add_option("--baseline-space", baseline_space, "Channel space of the wavelet baseline")
      ->check(CLI::IsMember({"lab", "rgb"}));
  app.add_flag("--binary", cfg.binary, "Also write the mean-thresholded binary map");
  app.add_option("--out", cfg.out_dir, "Output directory");
  app.add_option("--threads", cfg.threads, "Worker threads for eval (0 = all cores)");
  app.add_flag("--print-config", print_config, "Echo the resolved parameters before running");

  fs::path image;
  fs::path images_dir;
  fs::path masks_dir;
  auto* saliency = app.add_subcommand("saliency", "Write <name>.saliency.png for one image")->fallthrough();
  saliency->add_option("image", image, "Input image (PNG, BMP or PPM)")->required();
  auto* eval = app.add_subcommand("eval", "Evaluate a labelled dataset; writes report.csv and report.json")
                   ->fallthrough();
  eval->add_option("--images", images_dir, "Directory of input images")->required();
  eval->add_option("--masks", masks_dir, "Directory of ground-truth masks (same names)")->required();
  auto* inspect = app.add_subcommand("inspect", "Dump PCA channels, feature, conspicuity and fused maps")
                      ->fallthrough();
  inspect->add_option("image", image, "Input image (PNG, BMP or PPM)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << " (run with --help for usage)\n";
    return 1;
  }

  try {
    cfg.method = parse_method(method);
    cfg.method_cfg.wavelet = parse_wavelet(wavelet);
    cfg.method_cfg.pcnn.stop_mode = parse_stop_mode(stop_mode);
    cfg.method_cfg.baseline_space = parse_baseline_space(baseline_space);
    cfg.finalize();
    if (print_config) out << cfg.describe();
    if (app.get_subcommands().empty()) {
      if (print_config) return 0;
      throw Error(ErrorCode::InvalidArgument, "a subcommand is required: saliency, eval or inspect");
    }
    if (saliency->parsed()) {
      cmd_saliency(image, cfg, out);
    } else if (eval->parsed()) {
      cmd_eval(images_dir, masks_dir, cfg, out);
    } else if (inspect->parsed()) {
      cmd_inspect(image, cfg, out);
    }
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (char& c : msg) {
      if (c == '\n') c = ' ';
    }
    err << "error: " << msg << '\n';
    return 1;
  }
  return 0;
}

}  // namespace eigensal::cli
