#include "smellsift/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Cholesky>
#include <json.hpp>

#include "smellsift/error.hpp"
#include "smellsift/linear_models.hpp"
#include "smellsift/random.hpp"

namespace smellsift {

namespace {

using json = nlohmann::json;

struct AlgorithmInfo {
  Algorithm algorithm;
  std::string_view name;
  std::string_view title;
};

constexpr std::array<AlgorithmInfo, 8> kAlgorithms{{
    {Algorithm::RandomForest, "random_forest", "Random Forest"},
    {Algorithm::DecisionTree, "decision_tree", "Decision Tree"},
    {Algorithm::NaiveBayes, "naive_bayes", "Naive Bayes"},
    {Algorithm::SvmLinear, "svm_linear", "SVM"},
    {Algorithm::LogisticRegression, "logistic_regression", "Logistic Regression"},
    {Algorithm::Lda, "lda", "LDA"},
    {Algorithm::Knn, "knn", "KNN"},
    {Algorithm::Perceptron, "perceptron", "Perceptron"},
}};

const AlgorithmInfo& info(Algorithm a) { return kAlgorithms[static_cast<std::size_t>(a)]; }

double hp(const ModelSpec& spec, std::string_view key) {
  auto it = spec.hyperparameters.find(key);
  if (it == spec.hyperparameters.end()) throw Error("missing hyperparameter " + std::string(key));
  return it->second;
}

std::size_t hp_count(const ModelSpec& spec, std::string_view key) {
  const double v = hp(spec, key);
  return v <= 0 ? 0 : static_cast<std::size_t>(std::llround(v));
}

// ---------------------------------------------------------------------------
// CART

struct TreeOptions {
  std::size_t max_features = 0; ///< 0 or >= d: every feature at every split
  std::size_t max_depth = 0;    ///< 0: unlimited
};

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0; ///< n-weighted Gini of the children, times n/2
};

class TreeBuilder {
public:
  TreeBuilder(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, TreeOptions options, SeededRng* rng)
      : x_(x), y_(y), options_(options), rng_(rng) {}

  DecisionTreeParams build(std::vector<std::size_t> rows) {
    DecisionTreeParams tree;
    grow(tree, rows, 0);
    return tree;
  }

private:
  int grow(DecisionTreeParams& tree, std::vector<std::size_t>& rows, std::size_t depth) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    std::size_t flaky = 0;
    for (std::size_t r : rows) flaky += y_(static_cast<Eigen::Index>(r)) > 0.5;
    {
      TreeNode& node = tree.nodes.back();
      node.samples = rows.size();
      node.flaky_fraction = rows.empty() ? 0.0 : static_cast<double>(flaky) / static_cast<double>(rows.size());
    }
    if (flaky == 0 || flaky == rows.size()) return id;
    if (options_.max_depth > 0 && depth >= options_.max_depth) return id;

    const Split split = choose_split(rows);
    if (split.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows)
      (x_(static_cast<Eigen::Index>(r), split.feature) <= split.threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    const int l = grow(tree, left, depth + 1);
    const int r = grow(tree, right, depth + 1);
    TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  Split choose_split(const std::vector<std::size_t>& rows) {
    const std::size_t d = static_cast<std::size_t>(x_.cols());
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::size_t first = d;
    if (options_.max_features > 0 && options_.max_features < d && rng_ != nullptr) {
      for (std::size_t i = 0; i < options_.max_features; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng_->below(d - i));
        std::swap(order[i], order[j]);
      }
      first = options_.max_features;
      std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(first));
      std::sort(order.begin() + static_cast<std::ptrdiff_t>(first), order.end());
    }
    Split best = best_among(rows, order.begin(), order.begin() + static_cast<std::ptrdiff_t>(first));
    if (best.feature < 0 && first < d)
      best = best_among(rows, order.begin() + static_cast<std::ptrdiff_t>(first), order.end());
    return best;
  }

  Split best_among(const std::vector<std::size_t>& rows, std::vector<std::size_t>::const_iterator begin,
                   std::vector<std::size_t>::const_iterator end) {
    Split best;
    std::size_t total_flaky = 0;
    for (std::size_t r : rows) total_flaky += y_(static_cast<Eigen::Index>(r)) > 0.5;
    const double n = static_cast<double>(rows.size());
    std::vector<std::pair<double, bool>> column(rows.size());
    for (auto it = begin; it != end; ++it) {
      const auto f = static_cast<Eigen::Index>(*it);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(rows[i]);
        column[i] = {x_(r, f), y_(r) > 0.5};
      }
      std::sort(column.begin(), column.end());
      std::size_t left_n = 0, left_flaky = 0;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        ++left_n;
        left_flaky += column[i].second;
        if (column[i].first == column[i + 1].first) continue;
        const double ln = static_cast<double>(left_n), rn = n - ln;
        const double lf = static_cast<double>(left_flaky), rf = static_cast<double>(total_flaky - left_flaky);
        // n_c * gini_c = 2 * flaky_c * nonflaky_c / n_c
        const double impurity = lf * (ln - lf) / ln + rf * (rn - rf) / rn;
        if (best.feature < 0 || impurity < best.impurity - 1e-12) {
          best.feature = static_cast<int>(*it);
          best.threshold = column[i].first + (column[i + 1].first - column[i].first) / 2.0;
          best.impurity = impurity;
        }
      }
    }
    return best;
  }

  const Eigen::MatrixXd& x_;
  const Eigen::VectorXd& y_;
  TreeOptions options_;
  SeededRng* rng_;
};

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

DecisionTreeParams train_tree(const ModelSpec& spec, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  TreeBuilder builder(x, y, TreeOptions{0, hp_count(spec, "max_depth")}, nullptr);
  return builder.build(all_rows(static_cast<std::size_t>(x.rows())));
}

ForestParams train_forest(const ModelSpec& spec, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const std::size_t trees = std::max<std::size_t>(1, hp_count(spec, "n_trees"));
  const bool bootstrap = hp(spec, "bootstrap") != 0.0;
  const TreeOptions options{hp_count(spec, "max_features"), hp_count(spec, "max_depth")};
  const std::size_t n = static_cast<std::size_t>(x.rows());
  ForestParams forest;
  forest.trees.reserve(trees);
  for (std::size_t t = 0; t < trees; ++t) {
    SeededRng rng(spec.seed + t);
    std::vector<std::size_t> rows;
    if (bootstrap) {
      rows.resize(n);
      for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
    } else {
      rows = all_rows(n);
    }
    TreeBuilder builder(x, y, options, &rng);
    forest.trees.push_back(builder.build(std::move(rows)));
  }
  return forest;
}

// ---------------------------------------------------------------------------
// Naive Bayes

constexpr Eigen::Index kBinaryFeatures = static_cast<Eigen::Index>(kSmellKindCount);

NaiveBayesParams train_naive_bayes(const ModelSpec& spec, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const double alpha = hp(spec, "alpha");
  const double floor = hp(spec, "var_floor");
  const Eigen::Index numeric = x.cols() - kBinaryFeatures;
  NaiveBayesParams p;
  const double n1 = y.sum(), n0 = static_cast<double>(y.size()) - n1;
  p.prior_flaky = n1 / static_cast<double>(y.size());

  auto stats = [&](bool flaky, Eigen::VectorXd& prob, Eigen::VectorXd& mean, Eigen::VectorXd& var) {
    const double nc = flaky ? n1 : n0;
    prob = Eigen::VectorXd::Zero(kBinaryFeatures);
    mean = Eigen::VectorXd::Zero(numeric);
    var = Eigen::VectorXd::Zero(numeric);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if ((y(i) > 0.5) != flaky) continue;
      for (Eigen::Index j = 0; j < kBinaryFeatures; ++j) prob(j) += x(i, j) > 0.5;
      mean += x.row(i).tail(numeric).transpose();
    }
    prob = (prob.array() + alpha) / (nc + 2 * alpha);
    mean /= nc;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if ((y(i) > 0.5) != flaky) continue;
      var += (x.row(i).tail(numeric).transpose() - mean).array().square().matrix();
    }
    var = (var / nc).cwiseMax(floor);
  };
  stats(true, p.p_flaky, p.mean_flaky, p.var_flaky);
  stats(false, p.p_non_flaky, p.mean_non_flaky, p.var_non_flaky);
  return p;
}

double log_gaussian(double v, double mean, double var) {
  constexpr double kLog2Pi = 1.8378770664093453;
  return -0.5 * (kLog2Pi + std::log(var) + (v - mean) * (v - mean) / var);
}

double naive_bayes_score(const NaiveBayesParams& p, const FeatureVector& v) {
  double log_ratio = std::log(p.prior_flaky) - std::log1p(-p.prior_flaky);
  for (Eigen::Index j = 0; j < kBinaryFeatures; ++j) {
    if (v(j) > 0.5)
      log_ratio += std::log(p.p_flaky(j)) - std::log(p.p_non_flaky(j));
    else
      log_ratio += std::log1p(-p.p_flaky(j)) - std::log1p(-p.p_non_flaky(j));
  }
  for (Eigen::Index j = 0; j < p.mean_flaky.size(); ++j) {
    const double value = v(kBinaryFeatures + j);
    log_ratio += log_gaussian(value, p.mean_flaky(j), p.var_flaky(j)) -
                 log_gaussian(value, p.mean_non_flaky(j), p.var_non_flaky(j));
  }
  return linear::sigmoid(log_ratio);
}

// ---------------------------------------------------------------------------
// Linear models. All of them work on standardized features.

LinearParams standardized_start(const Eigen::MatrixXd& x, Eigen::MatrixXd& xs) {
  LinearParams p;
  std::tie(p.mean, p.scale) = linear::column_moments(x);
  xs = linear::standardize(x, p.mean, p.scale);
  p.weights = Eigen::VectorXd::Zero(x.cols());
  return p;
}

LinearParams train_logistic(const ModelSpec& spec, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  Eigen::MatrixXd xs;
  LinearParams p = standardized_start(x, xs);
  const double l2 = hp(spec, "l2"), lr = hp(spec, "learning_rate"), tol = hp(spec, "tolerance");
  const std::size_t epochs = hp_count(spec, "epochs");
  for (p.epochs = 0; p.epochs < epochs; ++p.epochs) {
    const auto [gw, gb] = linear::logistic_gradient(xs, y, p.weights, p.bias, l2);
    if (std::sqrt(gw.squaredNorm() + gb * gb) < tol) break;
    p.weights -= lr * gw;
    p.bias -= lr * gb;
  }
  return p;
}

std::vector<std::size_t> shuffled(std::size_t n, SeededRng& rng) {
  std::vector<std::size_t> order = all_rows(n);
  rng.shuffle(std::span<std::size_t>(order));
  return order;
}

LinearParams train_perceptron(const ModelSpec& spec, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  Eigen::MatrixXd xs;
  LinearParams p = standardized_start(x, xs);
  const double lr = hp(spec, "learning_rate");
  const std::size_t epochs = hp_count(spec, "epochs");
  SeededRng rng(spec.seed);
  while (p.epochs < epochs) {
    ++p.epochs;
    std::size_t updates = 0;
    for (std::size_t i : shuffled(static_cast<std::size_t>(x.rows()), rng)) {
      const auto r = static_cast<Eigen::Index>(i);
      const double target = y(r) > 0.5 ? 1.0 : -1.0;
      if (target * (xs.row(r).dot(p.weights) + p.bias) <= 0.0) {
        p.weights += lr * target * xs.row(r).transpose();
        p.bias += lr * target;
        ++updates;
      }
    }
    if (updates == 0) break;
  }
  return p;
}

// Pegasos. The bias rides along as a constant input so its steps are damped
// by the same regularized schedule as the weights.
LinearParams train_svm(const ModelSpec& spec, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  Eigen::MatrixXd xs;
  LinearParams p = standardized_start(x, xs);
  const double lambda = hp(spec, "lambda");
  const std::size_t epochs = hp_count(spec, "epochs");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(x.cols() + 1);
  SeededRng rng(spec.seed);
  std::size_t t = 0;
  for (p.epochs = 0; p.epochs < epochs; ++p.epochs) {
    for (std::size_t i : shuffled(static_cast<std::size_t>(x.rows()), rng)) {
      ++t;
      const auto r = static_cast<Eigen::Index>(i);
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double target = y(r) > 0.5 ? 1.0 : -1.0;
      const double margin = target * (xs.row(r).dot(w.head(x.cols())) + w(x.cols()));
      w *= 1.0 - eta * lambda;
      if (margin < 1.0) {
        w.head(x.cols()) += eta * target * xs.row(r).transpose();
        w(x.cols()) += eta * target;
      }
    }
  }
  p.weights = w.head(x.cols());
  p.bias = w(x.cols());
  return p;
}

LinearParams train_lda(const ModelSpec& spec, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  Eigen::MatrixXd xs;
  LinearParams p = standardized_start(x, xs);
  const Eigen::Index d = x.cols();
  const double n1 = y.sum(), n0 = static_cast<double>(y.size()) - n1;
  Eigen::VectorXd mu1 = Eigen::VectorXd::Zero(d), mu0 = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < xs.rows(); ++i) (y(i) > 0.5 ? mu1 : mu0) += xs.row(i).transpose();
  mu1 /= n1;
  mu0 /= n0;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < xs.rows(); ++i) {
    const Eigen::VectorXd c = xs.row(i).transpose() - (y(i) > 0.5 ? mu1 : mu0);
    cov.noalias() += c * c.transpose();
  }
  cov /= std::max(1.0, static_cast<double>(xs.rows()) - 2.0);
  const double trace = cov.trace();
  const double eps = trace > 0 ? hp(spec, "epsilon") * trace / static_cast<double>(d) : hp(spec, "epsilon");
  cov.diagonal().array() += eps;
  p.weights = cov.ldlt().solve(mu1 - mu0);
  p.bias = -0.5 * p.weights.dot(mu1 + mu0) + std::log(n1 / n0);
  p.epochs = 1;
  return p;
}

double linear_score(const LinearParams& p, const FeatureVector& v) {
  const Eigen::VectorXd z = (v - p.mean).cwiseQuotient(p.scale);
  return z.dot(p.weights) + p.bias;
}

// ---------------------------------------------------------------------------
// KNN

double knn_score(const KnnParams& p, std::size_t k, const FeatureVector& v) {
  const auto n = static_cast<std::size_t>(p.points.rows());
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i)
    dist[i] = {(p.points.row(static_cast<Eigen::Index>(i)).transpose() - v).squaredNorm(), i};
  k = std::clamp<std::size_t>(k, 1, n);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::size_t flaky = 0;
  for (std::size_t i = 0; i < k; ++i) flaky += p.labels[dist[i].second] == Label::Flaky;
  return static_cast<double>(flaky) / static_cast<double>(k);
}

// ---------------------------------------------------------------------------
// JSON

json vector_json(const Eigen::VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Eigen::VectorXd vector_from(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json tree_json(const DecisionTreeParams& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes)
    nodes.push_back({{"feature", n.feature},
                     {"threshold", n.threshold},
                     {"left", n.left},
                     {"right", n.right},
                     {"flaky_fraction", n.flaky_fraction},
                     {"samples", n.samples}});
  return nodes;
}

DecisionTreeParams tree_from(const json& j) {
  DecisionTreeParams t;
  for (const auto& n : j) {
    TreeNode node;
    node.feature = n.at("feature").get<int>();
    node.threshold = n.at("threshold").get<double>();
    node.left = n.at("left").get<int>();
    node.right = n.at("right").get<int>();
    node.flaky_fraction = n.at("flaky_fraction").get<double>();
    node.samples = n.at("samples").get<std::size_t>();
    t.nodes.push_back(node);
  }
  const auto size = static_cast<int>(t.nodes.size());
  if (size == 0) throw FormatError("empty decision tree");
  for (int i = 0; i < size; ++i) {
    const TreeNode& n = t.nodes[static_cast<std::size_t>(i)];
    if (!n.is_leaf() && (n.feature >= static_cast<int>(kFeatureCount) || n.left <= i || n.left >= size ||
                         n.right <= i || n.right >= size))
      throw FormatError("decision tree node out of range");
  }
  return t;
}

struct ParamsToJson {
  json operator()(const DecisionTreeParams& t) const { return {{"nodes", tree_json(t)}}; }
  json operator()(const ForestParams& f) const {
    json trees = json::array();
    for (const auto& t : f.trees) trees.push_back(tree_json(t));
    return {{"trees", trees}};
  }
  json operator()(const NaiveBayesParams& p) const {
    return {{"prior_flaky", p.prior_flaky},
            {"p_flaky", vector_json(p.p_flaky)},
            {"p_non_flaky", vector_json(p.p_non_flaky)},
            {"mean_flaky", vector_json(p.mean_flaky)},
            {"var_flaky", vector_json(p.var_flaky)},
            {"mean_non_flaky", vector_json(p.mean_non_flaky)},
            {"var_non_flaky", vector_json(p.var_non_flaky)}};
  }
  json operator()(const LinearParams& p) const {
    return {{"mean", vector_json(p.mean)},
            {"scale", vector_json(p.scale)},
            {"weights", vector_json(p.weights)},
            {"bias", p.bias},
            {"epochs", p.epochs}};
  }
  json operator()(const KnnParams& p) const {
    json points = json::array();
    for (Eigen::Index i = 0; i < p.points.rows(); ++i) points.push_back(vector_json(p.points.row(i).transpose()));
    json labels = json::array();
    for (Label l : p.labels) labels.push_back(static_cast<int>(l));
    return {{"points", points}, {"labels", labels}};
  }
};

ModelParameters params_from(Algorithm a, const json& j, std::size_t arity) {
  auto check = [&](const Eigen::VectorXd& v, std::size_t expected) {
    if (static_cast<std::size_t>(v.size()) != expected) throw FormatError("parameter vector has wrong length");
    return v;
  };
  switch (a) {
  case Algorithm::DecisionTree:
    return tree_from(j.at("nodes"));
  case Algorithm::RandomForest: {
    ForestParams f;
    for (const auto& t : j.at("trees")) f.trees.push_back(tree_from(t));
    if (f.trees.empty()) throw FormatError("empty forest");
    return f;
  }
  case Algorithm::NaiveBayes: {
    NaiveBayesParams p;
    const std::size_t numeric = arity - kSmellKindCount;
    p.prior_flaky = j.at("prior_flaky").get<double>();
    p.p_flaky = check(vector_from(j.at("p_flaky")), kSmellKindCount);
    p.p_non_flaky = check(vector_from(j.at("p_non_flaky")), kSmellKindCount);
    p.mean_flaky = check(vector_from(j.at("mean_flaky")), numeric);
    p.var_flaky = check(vector_from(j.at("var_flaky")), numeric);
    p.mean_non_flaky = check(vector_from(j.at("mean_non_flaky")), numeric);
    p.var_non_flaky = check(vector_from(j.at("var_non_flaky")), numeric);
    return p;
  }
  case Algorithm::Knn: {
    KnnParams p;
    const auto& points = j.at("points");
    p.points.resize(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(arity));
    for (std::size_t i = 0; i < points.size(); ++i)
      p.points.row(static_cast<Eigen::Index>(i)) = check(vector_from(points[i]), arity).transpose();
    for (const auto& l : j.at("labels")) p.labels.push_back(l.get<int>() == 1 ? Label::Flaky : Label::NonFlaky);
    if (p.labels.size() != points.size() || points.empty()) throw FormatError("knn training set is inconsistent");
    return p;
  }
  default: {
    LinearParams p;
    p.mean = check(vector_from(j.at("mean")), arity);
    p.scale = check(vector_from(j.at("scale")), arity);
    p.weights = check(vector_from(j.at("weights")), arity);
    p.bias = j.at("bias").get<double>();
    p.epochs = j.at("epochs").get<std::size_t>();
    return p;
  }
  }
}

} // namespace

const std::array<Algorithm, 8>& all_algorithms() {
  static const std::array<Algorithm, 8> all = [] {
    std::array<Algorithm, 8> a{};
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = kAlgorithms[i].algorithm;
    return a;
  }();
  return all;
}

std::string_view algorithm_name(Algorithm a) { return info(a).name; }
std::string_view algorithm_title(Algorithm a) { return info(a).title; }

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (const auto& a : kAlgorithms)
    if (a.name == name) return a.algorithm;
  return std::nullopt;
}

const Hyperparameters& default_hyperparameters(Algorithm a) {
  static const std::array<Hyperparameters, 8> defaults{{
      {{"n_trees", 100}, {"max_features", 5}, {"bootstrap", 1}, {"max_depth", 0}},
      {{"max_depth", 0}},
      {{"alpha", 1.0}, {"var_floor", 1e-9}},
      {{"lambda", 1e-4}, {"epochs", 20}},
      {{"l2", 1e-4}, {"learning_rate", 0.1}, {"epochs", 1000}, {"tolerance", 1e-6}},
      {{"epsilon", 1e-6}},
      {{"k", 5}},
      {{"epochs", 1000}, {"learning_rate", 1.0}},
  }};
  return defaults[static_cast<std::size_t>(a)];
}

ModelSpec resolve_defaults(ModelSpec spec) {
  const Hyperparameters& defaults = default_hyperparameters(spec.algorithm);
  for (const auto& [key, value] : spec.hyperparameters)
    if (!defaults.contains(key))
      throw Error("unknown hyperparameter '" + key + "' for " + std::string(algorithm_name(spec.algorithm)));
  for (const auto& [key, value] : defaults) spec.hyperparameters.try_emplace(key, value);
  return spec;
}

double DecisionTreeParams::leaf_fraction(const FeatureVector& x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf())
    i = static_cast<std::size_t>(x(nodes[i].feature) <= nodes[i].threshold ? nodes[i].left : nodes[i].right);
  return nodes[i].flaky_fraction;
}

double TrainedModel::decision_threshold() const {
  switch (spec.algorithm) {
  case Algorithm::SvmLinear:
  case Algorithm::Lda:
  case Algorithm::Perceptron:
    return 0.0;
  default:
    return 0.5;
  }
}

TrainedModel train(const ModelSpec& spec_in, const Dataset& d) {
  TrainedModel model;
  model.spec = resolve_defaults(spec_in);
  model.schema = d.schema;
  if (d.schema.size() != kFeatureCount) throw SchemaError("dataset schema must have " + std::to_string(kFeatureCount) + " features");
  const std::size_t flaky = d.count(Label::Flaky), non_flaky = d.count(Label::NonFlaky);
  if (flaky == 0 || non_flaky == 0) throw DegenerateDataset("training data must contain both classes");
  model.summary = {d.size(), flaky, non_flaky, static_cast<double>(flaky) / static_cast<double>(d.size())};

  const Eigen::MatrixXd x = d.design_matrix();
  const Eigen::VectorXd y = d.targets();
  const ModelSpec& spec = model.spec;
  switch (spec.algorithm) {
  case Algorithm::RandomForest:
    model.parameters = train_forest(spec, x, y);
    break;
  case Algorithm::DecisionTree:
    model.parameters = train_tree(spec, x, y);
    break;
  case Algorithm::NaiveBayes:
    model.parameters = train_naive_bayes(spec, x, y);
    break;
  case Algorithm::SvmLinear:
    model.parameters = train_svm(spec, x, y);
    break;
  case Algorithm::LogisticRegression:
    model.parameters = train_logistic(spec, x, y);
    break;
  case Algorithm::Lda:
    model.parameters = train_lda(spec, x, y);
    break;
  case Algorithm::Knn: {
    KnnParams p;
    p.points = x;
    for (const auto& e : d.examples) p.labels.push_back(e.label);
    model.parameters = std::move(p);
    break;
  }
  case Algorithm::Perceptron:
    model.parameters = train_perceptron(spec, x, y);
    break;
  }
  return model;
}

PredictionScore predict(const TrainedModel& model, const FeatureVector& v) {
  if (static_cast<std::size_t>(v.size()) != model.schema.size())
    throw SchemaError("feature vector has " + std::to_string(v.size()) + " values, model expects " +
                      std::to_string(model.schema.size()));
  double score = 0.0;
  switch (model.spec.algorithm) {
  case Algorithm::DecisionTree:
    score = std::get<DecisionTreeParams>(model.parameters).leaf_fraction(v);
    break;
  case Algorithm::RandomForest: {
    const auto& forest = std::get<ForestParams>(model.parameters);
    std::size_t votes = 0;
    for (const auto& t : forest.trees) votes += t.leaf_fraction(v) > 0.5;
    score = static_cast<double>(votes) / static_cast<double>(forest.trees.size());
    break;
  }
  case Algorithm::NaiveBayes:
    score = naive_bayes_score(std::get<NaiveBayesParams>(model.parameters), v);
    break;
  case Algorithm::Knn:
    score = knn_score(std::get<KnnParams>(model.parameters), hp_count(model.spec, "k"), v);
    break;
  case Algorithm::LogisticRegression:
    score = linear::sigmoid(linear_score(std::get<LinearParams>(model.parameters), v));
    break;
  default:
    score = linear_score(std::get<LinearParams>(model.parameters), v);
    break;
  }
  return {score > model.decision_threshold() ? Label::Flaky : Label::NonFlaky, score};
}

std::string serialize_model(const TrainedModel& model) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["spec"] = {{"algorithm", algorithm_name(model.spec.algorithm)},
                 {"hyperparameters", model.spec.hyperparameters},
                 {"seed", model.spec.seed}};
  doc["schema"] = {{"version", model.schema.version}, {"names", model.schema.names}};
  doc["parameters"] = std::visit(ParamsToJson{}, model.parameters);
  doc["training_summary"] = {{"examples", model.summary.examples},
                             {"flaky", model.summary.flaky},
                             {"non_flaky", model.summary.non_flaky},
                             {"prior_flaky", model.summary.prior_flaky}};
  return doc.dump(2) + "\n";
}

TrainedModel deserialize_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("model is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("format_version")) throw FormatError("model has no format_version");
    if (doc.at("format_version").get<int>() != kModelFormatVersion)
      throw VersionError("unsupported model format_version " + doc.at("format_version").dump());
    TrainedModel model;
    model.schema.version = doc.at("schema").at("version").get<std::string>();
    model.schema.names = doc.at("schema").at("names").get<std::vector<std::string>>();
    if (model.schema.version != FeatureSchema::standard().version)
      throw VersionError("model schema " + model.schema.version + " is not " + FeatureSchema::standard().version);
    if (model.schema != FeatureSchema::standard()) throw SchemaError("model feature names do not match the schema");

    const auto& spec = doc.at("spec");
    const auto algorithm = parse_algorithm(spec.at("algorithm").get<std::string>());
    if (!algorithm) throw FormatError("unknown algorithm " + spec.at("algorithm").dump());
    model.spec.algorithm = *algorithm;
    for (const auto& [key, value] : spec.at("hyperparameters").items())
      model.spec.hyperparameters[key] = value.get<double>();
    model.spec.seed = spec.at("seed").get<std::uint64_t>();
    model.spec = resolve_defaults(model.spec);

    model.parameters = params_from(*algorithm, doc.at("parameters"), model.schema.size());
    const auto& s = doc.at("training_summary");
    model.summary.examples = s.at("examples").get<std::size_t>();
    model.summary.flaky = s.at("flaky").get<std::size_t>();
    model.summary.non_flaky = s.at("non_flaky").get<std::size_t>();
    model.summary.prior_flaky = s.at("prior_flaky").get<double>();
    return model;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model document: ") + e.what());
  }
}

} // namespace smellsift
