#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "smellsift/feature_extraction.hpp"

namespace smellsift {

enum class Algorithm {
  RandomForest,
  DecisionTree,
  NaiveBayes,
  SvmLinear,
  LogisticRegression,
  Lda,
  Knn,
  Perceptron,
};

const std::array<Algorithm, 8>& all_algorithms();
std::string_view algorithm_name(Algorithm a);  ///< "random_forest", ...
std::string_view algorithm_title(Algorithm a); ///< "Random Forest", ...
std::optional<Algorithm> parse_algorithm(std::string_view name);

using Hyperparameters = std::map<std::string, double, std::less<>>;

struct ModelSpec {
  Algorithm algorithm = Algorithm::RandomForest;
  Hyperparameters hyperparameters;
  std::uint64_t seed = 42;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

const Hyperparameters& default_hyperparameters(Algorithm a);
/// Fills every missing hyperparameter; rejects names the algorithm lacks.
ModelSpec resolve_defaults(ModelSpec spec);

struct PredictionScore {
  Label label;
  double score; ///< higher means more flaky
};

struct TreeNode {
  int feature = -1; ///< -1 for leaves
  double threshold = 0.0;
  int left = -1;  ///< feature <= threshold
  int right = -1; ///< feature > threshold
  double flaky_fraction = 0.0;
  std::size_t samples = 0;

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTreeParams {
  std::vector<TreeNode> nodes; ///< nodes[0] is the root

  double leaf_fraction(const FeatureVector& x) const;
};

struct ForestParams {
  std::vector<DecisionTreeParams> trees;
};

struct NaiveBayesParams {
  double prior_flaky = 0.5;
  Eigen::VectorXd p_flaky;     ///< P(x_j = 1 | flaky), binary features
  Eigen::VectorXd p_non_flaky; ///< P(x_j = 1 | non-flaky)
  Eigen::VectorXd mean_flaky, var_flaky;         ///< numeric features
  Eigen::VectorXd mean_non_flaky, var_non_flaky; ///< numeric features
};

struct LinearParams {
  Eigen::VectorXd mean;  ///< standardization, train-set
  Eigen::VectorXd scale; ///< standardization, train-set
  Eigen::VectorXd weights;
  double bias = 0.0;
  std::size_t epochs = 0; ///< iterations actually run
};

struct KnnParams {
  Eigen::MatrixXd points;
  std::vector<Label> labels;
};

using ModelParameters = std::variant<DecisionTreeParams, ForestParams, NaiveBayesParams, LinearParams, KnnParams>;

struct TrainingSummary {
  std::size_t examples = 0;
  std::size_t flaky = 0;
  std::size_t non_flaky = 0;
  double prior_flaky = 0.0;
};

struct TrainedModel {
  ModelSpec spec;
  FeatureSchema schema;
  ModelParameters parameters;
  TrainingSummary summary;

  /// 0.5 for probabilistic scores, 0 for signed margins.
  double decision_threshold() const;
};

/// Throws DegenerateDataset unless both classes are present.
TrainedModel train(const ModelSpec& spec, const Dataset& d);

/// Throws SchemaError when `x` does not match the model's feature arity.
PredictionScore predict(const TrainedModel& model, const FeatureVector& x);

inline constexpr int kModelFormatVersion = 1;

std::string serialize_model(const TrainedModel& model);
/// Throws FormatError for unreadable documents and VersionError for
/// format or schema version mismatches.
TrainedModel deserialize_model(std::string_view text);

} // namespace smellsift
