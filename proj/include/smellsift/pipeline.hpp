#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "smellsift/evaluation.hpp"
#include "smellsift/feature_extraction.hpp"
#include "smellsift/learners.hpp"
#include "smellsift/smell_rules.hpp"

namespace smellsift {

inline constexpr std::string_view kToolName = "smellsift";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitFatal = 1, kExitPartial = 2 };

struct RunConfig {
  std::filesystem::path test_root;
  std::filesystem::path prod_root;
  std::filesystem::path labels_path;
  std::filesystem::path features_path; ///< input of train / evaluate / crossval / rank
  std::filesystem::path models_dir;    ///< a train output directory
  std::filesystem::path output_dir = ".";
  std::string project; ///< empty: basename of test_root
  std::uint64_t seed = 42;
  double train_fraction = 0.8;
  std::vector<Algorithm> algorithms{all_algorithms().begin(), all_algorithms().end()};
  std::map<Algorithm, Hyperparameters> hyperparameters;
  std::size_t verbose_threshold = 123;
  std::string format = "json"; ///< detect records: json or csv
  bool keep_skipped = false;
  bool stratify = true;

  /// Throws Error when a field is out of range.
  void validate() const;
  nlohmann::json snapshot() const;
};

/// Parses "random_forest,knn"; throws Error on unknown names or an empty list.
std::vector<Algorithm> parse_algorithm_list(std::string_view text);

// ---------------------------------------------------------------------------
// Detection over a corpus

struct DetectDiagnostics {
  std::size_t files_scanned = 0;
  std::size_t classes = 0;
  std::size_t test_classes = 0;
  std::size_t tests = 0;
  std::vector<std::pair<std::string, std::string>> skipped_files; ///< (path, reason)
  std::vector<std::string> unresolved_production;                 ///< test classes
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

struct DetectResult {
  std::vector<SmellReport> reports;
  DetectDiagnostics diagnostics;
  int exit_code = kExitOk;
};

/// Java files under `root`, sorted by path.
std::vector<std::filesystem::path> find_java_files(const std::filesystem::path& root);

/// Simple class name -> unit for every parseable file under `prod_root`.
CorpusIndex build_production_index(const std::filesystem::path& prod_root, DetectDiagnostics* diagnostics = nullptr);

/// Runs detection without writing anything. Throws IoError when the test
/// root does not exist.
DetectResult detect_corpus(const RunConfig& config);

std::string project_name(const RunConfig& config);

nlohmann::ordered_json smell_records_json(const std::vector<SmellReport>& reports);
void write_smell_records_csv(const std::vector<SmellReport>& reports, std::ostream& out);

// ---------------------------------------------------------------------------
// Manifest

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::map<std::string, std::string> input_digests;
  std::map<std::string, double> timings_ms;
  std::map<std::string, std::size_t> diagnostics;
  std::vector<std::string> training_projects;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

// ---------------------------------------------------------------------------
// Commands. Each writes its artifacts into config.output_dir, logs to `log`,
// and returns an exit code.

int cmd_detect(const RunConfig& config, std::ostream& log);
int cmd_extract(const RunConfig& config, std::ostream& log);
int cmd_train(const RunConfig& config, std::ostream& log);
int cmd_evaluate(const RunConfig& config, std::ostream& log);
int cmd_crossval(const RunConfig& config, std::ostream& log);
int cmd_rank(const RunConfig& config, std::ostream& log);

/// Writes `contents` to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

/// Command-line entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace smellsift
