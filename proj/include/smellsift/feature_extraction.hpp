#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "smellsift/smell_rules.hpp"

namespace smellsift {

enum class Label { NonFlaky = 0, Flaky = 1 };

std::string_view label_name(Label label); ///< "flaky" / "non-flaky"
std::optional<Label> parse_label(std::string_view text);

inline constexpr std::size_t kFeatureCount = kSmellKindCount + 2;
inline constexpr std::size_t kLocFeature = kSmellKindCount;
inline constexpr std::size_t kSmellsCountFeature = kSmellKindCount + 1;

struct FeatureSchema {
  std::vector<std::string> names; ///< 19 smell kinds, "loc", "smells_count"
  std::string version;

  static const FeatureSchema& standard();
  std::size_t size() const { return names.size(); }

  friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;
};

using FeatureVector = Eigen::VectorXd;

struct LabeledExample {
  std::string test_id;
  std::string project;
  FeatureVector features;
  Label label = Label::NonFlaky;
  bool skipped = false; ///< some rules could not run for this test

  friend bool operator==(const LabeledExample& a, const LabeledExample& b) {
    return a.test_id == b.test_id && a.project == b.project && a.label == b.label && a.skipped == b.skipped &&
           a.features.size() == b.features.size() && a.features == b.features;
  }
};

struct Dataset {
  FeatureSchema schema = FeatureSchema::standard();
  std::vector<LabeledExample> examples;
  std::string provenance;
  std::optional<std::uint64_t> seed;

  std::size_t size() const { return examples.size(); }
  std::size_t count(Label label) const;
  /// Rows are examples, columns follow the schema.
  Eigen::MatrixXd design_matrix() const;
  /// 1 for flaky, 0 for non-flaky.
  Eigen::VectorXd targets() const;
};

using PresenceMap = std::map<std::string, bool, std::less<>>;

FeatureVector build_feature_vector(const SmellReport& report, std::size_t loc);
/// Throws SchemaError when a canonical smell is missing from `presence`.
FeatureVector build_feature_vector(const PresenceMap& presence, std::size_t loc);

struct LabelRow {
  std::string project;
  std::string test_id;
  Label label;
};

/// Parses `project,test_id,label` CSV. Throws FormatError on malformed
/// rows and duplicate test ids.
std::vector<LabelRow> read_labels(std::istream& in);

struct AssembleOptions {
  bool keep_skipped = false;
};

struct AssembleDiagnostics {
  std::vector<std::string> unmatched_reports;
  std::vector<std::string> unmatched_labels;
  std::vector<std::string> excluded_skipped;
  std::vector<std::string> duplicate_reports;
};

struct AssembledDataset {
  Dataset dataset;
  AssembleDiagnostics diagnostics;
};

AssembledDataset assemble_dataset(const std::vector<SmellReport>& reports, const std::vector<LabelRow>& labels,
                                  const AssembleOptions& options = {});

/// Keeps every minority example and undersamples the majority to match.
Dataset balance_dataset(const Dataset& d, std::uint64_t seed);

std::pair<Dataset, Dataset> split_train_test(const Dataset& d, double train_fraction, std::uint64_t seed,
                                             bool stratify = true);

/// Number of training examples taken from a group of `n`: round-half-up.
std::size_t train_share(double train_fraction, std::size_t n);

/// (intra, inter): validation examples whose project does / does not
/// appear in `training`.
std::pair<Dataset, Dataset> partition_cross_project(const Dataset& training, const Dataset& validation);
std::pair<Dataset, Dataset> partition_cross_project(const std::set<std::string, std::less<>>& training_projects,
                                                    const Dataset& validation);

void write_feature_csv(const Dataset& d, std::ostream& out, bool with_skipped_column = false);
Dataset read_feature_csv(std::istream& in);

} // namespace smellsift
