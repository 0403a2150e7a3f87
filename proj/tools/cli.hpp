#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "eigensal/eval.hpp"
#include "eigensal/methods.hpp"

namespace eigensal::cli {

/// Fully resolved settings for one CLI invocation.
struct RunConfig {
  MethodId method = MethodId::Proposed;
  MethodConfig method_cfg;
  std::size_t kernel_radius = 17;
  double alpha = 0.3;
  std::filesystem::path out_dir = ".";
  std::size_t threads = 0;
  bool binary = false;

  /// Checks every field against the module preconditions and builds the
  /// linking kernel. Throws eigensal::Error.
  void finalize();
  std::string describe() const;  // key = value lines, config-file syntax
};

std::filesystem::path cmd_saliency(const std::filesystem::path& image, const RunConfig& cfg,
                                   std::ostream& out);
EvalReport cmd_eval(const std::filesystem::path& images_dir,
                    const std::filesystem::path& masks_dir, const RunConfig& cfg,
                    std::ostream& out);
std::filesystem::path cmd_inspect(const std::filesystem::path& image, const RunConfig& cfg,
                                  std::ostream& out);

/// Entry point shared by main() and the in-process CLI tests. Returns the
/// process exit code; diagnostics go to `err` as a single line.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eigensal::cli
