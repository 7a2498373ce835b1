#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "smellsift/feature_extraction.hpp"
#include "smellsift/learners.hpp"

namespace smellsift {

/// Flaky is the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Throws Error when the spans differ in length.
ConfusionMatrix confusion_matrix(std::span<const Label> predicted, std::span<const Label> truth);

// A 0/0 ratio yields 0 and, when `notes` is given, appends an explanation.
double precision(const ConfusionMatrix& m, std::vector<std::string>* notes = nullptr);
double recall(const ConfusionMatrix& m, std::vector<std::string>* notes = nullptr);
double f1(const ConfusionMatrix& m, std::vector<std::string>* notes = nullptr);
double mcc(const ConfusionMatrix& m, std::vector<std::string>* notes = nullptr);

/// Probability that a random flaky example outscores a random non-flaky
/// one, ties counting one half. Empty when either class is absent.
std::optional<double> roc_auc(std::span<const double> scores, std::span<const Label> truth);

struct EvalReport {
  std::string algorithm;
  ConfusionMatrix matrix;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double mcc = 0.0;
  std::optional<double> auc;
  std::vector<std::string> notes;
};

EvalReport evaluate_scores(std::span<const double> scores, std::span<const Label> predicted,
                           std::span<const Label> truth);
EvalReport evaluate_model(const TrainedModel& model, const Dataset& d);

/// Entropy in bits of a label distribution given as counts.
double entropy_bits(std::span<const std::size_t> counts);

/// H(Y) - H(Y|X) in bits for a contingency table of {non-flaky, flaky}
/// counts per value of X.
double information_gain(std::span<const std::array<std::size_t, 2>> table);

/// Cut points for up to `bins` equal-frequency bins over `values`: the
/// sorted values at positions floor(k*n/bins), k = 1..bins-1, deduplicated.
std::vector<double> equal_frequency_edges(std::vector<double> values, std::size_t bins = 10);

struct FeatureGain {
  std::string feature;
  double information_gain = 0.0;
  std::size_t affected_total = 0;
  std::size_t affected_flaky = 0;
  std::size_t affected_non_flaky = 0;
  double percent_flaky = 0.0;     ///< affected_flaky / affected_total
  double percent_non_flaky = 0.0; ///< affected_non_flaky / affected_total
};

/// Throws DegenerateDataset on an empty dataset.
FeatureGain information_gain(const Dataset& d, std::size_t feature);

/// Descending by gain; ties keep the schema order.
std::vector<FeatureGain> rank_features(const Dataset& d);

struct SmellCountRow {
  std::size_t smells_count = 0;
  std::size_t non_flaky = 0;
  std::size_t flaky = 0;
  double percent_non_flaky = 0.0; ///< share within the row
  double percent_flaky = 0.0;
};

std::vector<SmellCountRow> smell_count_distribution(const Dataset& d);

struct CrossProjectRow {
  std::string algorithm;
  EvalReport intra;
  EvalReport inter;
  std::size_t intra_size = 0;
  std::size_t inter_size = 0;
};

// Plain-text tables.
std::string render_performance_table(const std::vector<EvalReport>& reports);
std::string render_gain_table(const std::vector<FeatureGain>& gains);
std::string render_smell_distribution(const std::vector<SmellCountRow>& rows);
std::string render_cross_project_table(const std::vector<CrossProjectRow>& rows);

nlohmann::json to_json(const ConfusionMatrix& m);
nlohmann::json to_json(const EvalReport& r);
nlohmann::json to_json(const FeatureGain& g);
nlohmann::json to_json(const SmellCountRow& r);
nlohmann::json to_json(const CrossProjectRow& r);

void write_gain_csv(const std::vector<FeatureGain>& gains, std::ostream& out);

} // namespace smellsift
