#include <fstream>
#include <iomanip>
#include <json.hpp>

#include "eigensal/error.hpp"
#include "eigensal/eval.hpp"

namespace eigensal {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

// Image names go into the first CSV column; quote anything unusual.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

void write_csv(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << "image,precision,recall,f_measure,auc\n";
  for (const EvalRecord& r : report.records) {
    out << csv_field(r.id) << ',' << r.precision << ',' << r.recall << ',' << r.f_measure << ','
        << r.auc << '\n';
  }
  out << "mean," << report.mean_precision << ',' << report.mean_recall << ','
      << report.mean_f_measure << ',' << report.mean_auc << '\n';
  if (!out) throw Error(ErrorCode::IoFailure, "write failed: " + path.string());
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["method"] = report.method;
  j["alpha"] = report.alpha;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.parameters) params[key] = value;
  j["parameters"] = params;
  j["summary"] = {{"precision", report.mean_precision},
                  {"recall", report.mean_recall},
                  {"f_measure", report.mean_f_measure},
                  {"auc", report.mean_auc},
                  {"evaluated", report.records.size()},
                  {"skipped", report.skipped.size()}};
  nlohmann::ordered_json images = nlohmann::ordered_json::array();
  for (const EvalRecord& r : report.records) {
    images.push_back({{"image", r.id},
                      {"precision", r.precision},
                      {"recall", r.recall},
                      {"f_measure", r.f_measure},
                      {"auc", r.auc}});
  }
  j["images"] = images;
  nlohmann::ordered_json skipped = nlohmann::ordered_json::array();
  for (const SkippedPair& s : report.skipped) skipped.push_back({{"image", s.id}, {"reason", s.reason}});
  j["skipped"] = skipped;
  return j.dump(2);
}

void write_json(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << report_to_json(report) << '\n';
  if (!out) throw Error(ErrorCode::IoFailure, "write failed: " + path.string());
}

}  // namespace eigensal
