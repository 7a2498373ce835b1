#include <map>
#include <set>

#include <gtest/gtest.h>
#include <json.hpp>

#include "smellsift/error.hpp"
#include "smellsift/learners.hpp"
#include "smellsift/linear_models.hpp"
#include "smellsift/random.hpp"

namespace smellsift {
namespace {

LabeledExample make(const FeatureVector& x, Label label, std::size_t i) {
  LabeledExample e;
  e.test_id = "p.C#t" + std::to_string(i);
  e.project = "p";
  e.features = x;
  e.label = label;
  return e;
}

FeatureVector random_features(SeededRng& rng, double density = 0.3) {
  FeatureVector x = FeatureVector::Zero(kFeatureCount);
  for (std::size_t j = 0; j < kSmellKindCount; ++j) x(static_cast<Eigen::Index>(j)) = rng.uniform() < density;
  x(kLocFeature) = static_cast<double>(1 + rng.below(60));
  x(kSmellsCountFeature) = x.head(kSmellKindCount).sum();
  return x;
}

/// Random corpus where duplicated feature vectors always share a label.
Dataset consistent_dataset(std::uint64_t seed, std::size_t n) {
  SeededRng rng(seed);
  Dataset d;
  std::map<std::vector<double>, Label> seen;
  while (d.size() < n) {
    const FeatureVector x = random_features(rng);
    const Label label = rng.uniform() < 0.5 ? Label::Flaky : Label::NonFlaky;
    const std::vector<double> key(x.data(), x.data() + x.size());
    const auto [it, fresh] = seen.emplace(key, label);
    d.examples.push_back(make(x, it->second, d.size()));
  }
  return d;
}

/// Flaky exactly when SleepyTest is present.
Dataset separable_dataset(std::uint64_t seed, std::size_t n) {
  SeededRng rng(seed);
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) {
    FeatureVector x = random_features(rng);
    const bool flaky = i % 2 == 0;
    x(static_cast<Eigen::Index>(SmellKind::SleepyTest)) = flaky ? 1 : 0;
    x(kSmellsCountFeature) = x.head(kSmellKindCount).sum();
    d.examples.push_back(make(x, flaky ? Label::Flaky : Label::NonFlaky, i));
  }
  return d;
}

ModelSpec spec_for(Algorithm a, Hyperparameters h = {}) { return ModelSpec{a, std::move(h), 42}; }

double training_accuracy(const TrainedModel& m, const Dataset& d) {
  std::size_t right = 0;
  for (const auto& e : d.examples) right += predict(m, e.features).label == e.label;
  return static_cast<double>(right) / static_cast<double>(d.size());
}

TEST(Algorithms, NamesRoundTrip) {
  std::set<std::string_view> names;
  for (Algorithm a : all_algorithms()) {
    names.insert(algorithm_name(a));
    EXPECT_EQ(parse_algorithm(algorithm_name(a)), a);
  }
  EXPECT_EQ(names.size(), 8u);
  EXPECT_FALSE(parse_algorithm("boosting"));
}

TEST(Hyperparameters, DefaultsAndValidation) {
  EXPECT_EQ(default_hyperparameters(Algorithm::RandomForest).at("n_trees"), 100);
  EXPECT_EQ(default_hyperparameters(Algorithm::Knn).at("k"), 5);
  const auto spec = resolve_defaults(spec_for(Algorithm::Knn, {{"k", 3}}));
  EXPECT_EQ(spec.hyperparameters.at("k"), 3);
  EXPECT_THROW(resolve_defaults(spec_for(Algorithm::Knn, {{"depth", 3}})), Error);
}

TEST(Learners, DeterministicForFixedSeed) {
  const auto d = consistent_dataset(3, 120);
  SeededRng rng(99);
  std::vector<FeatureVector> queries;
  for (int i = 0; i < 40; ++i) queries.push_back(random_features(rng));
  for (Algorithm a : all_algorithms()) {
    const auto m1 = train(spec_for(a), d);
    const auto m2 = train(spec_for(a), d);
    EXPECT_EQ(serialize_model(m1), serialize_model(m2)) << algorithm_name(a);
    for (const auto& q : queries) {
      const auto p1 = predict(m1, q), p2 = predict(m2, q);
      EXPECT_EQ(p1.label, p2.label);
      EXPECT_EQ(p1.score, p2.score);
    }
  }
}

TEST(Learners, LabelAgreesWithScoreAndThreshold) {
  const auto d = consistent_dataset(5, 80);
  SeededRng rng(1);
  for (Algorithm a : all_algorithms()) {
    const auto m = train(spec_for(a), d);
    for (int i = 0; i < 50; ++i) {
      const auto p = predict(m, random_features(rng));
      EXPECT_EQ(p.label == Label::Flaky, p.score > m.decision_threshold()) << algorithm_name(a);
    }
  }
}

TEST(Learners, RejectWrongArity) {
  const auto d = consistent_dataset(5, 20);
  for (Algorithm a : all_algorithms()) {
    const auto m = train(spec_for(a), d);
    EXPECT_THROW(predict(m, FeatureVector::Zero(20)), SchemaError);
    EXPECT_THROW(predict(m, FeatureVector::Zero(22)), SchemaError);
  }
}

TEST(Learners, SingleClassIsDegenerate) {
  Dataset d = consistent_dataset(5, 20);
  for (auto& e : d.examples) e.label = Label::Flaky;
  EXPECT_THROW(train(spec_for(Algorithm::Knn), d), DegenerateDataset);
}

TEST(DecisionTree, FitsConsistentDataExactly) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto d = consistent_dataset(seed, 60);
    EXPECT_EQ(training_accuracy(train(spec_for(Algorithm::DecisionTree), d), d), 1.0) << seed;
  }
}

TEST(DecisionTree, FitsXor) {
  Dataset d;
  std::size_t i = 0;
  for (int a : {0, 1})
    for (int b : {0, 1})
      for (int copy = 0; copy < 3; ++copy) {
        FeatureVector x = FeatureVector::Zero(kFeatureCount);
        x(0) = a;
        x(1) = b;
        x(kLocFeature) = 10;
        x(kSmellsCountFeature) = a + b;
        d.examples.push_back(make(x, (a ^ b) ? Label::Flaky : Label::NonFlaky, i++));
      }
  const auto m = train(spec_for(Algorithm::DecisionTree), d);
  EXPECT_EQ(training_accuracy(m, d), 1.0);
}

TEST(DecisionTree, SingleFeatureSplitsAtMidpoint) {
  Dataset d;
  for (std::size_t i = 0; i < 10; ++i) {
    FeatureVector x = FeatureVector::Zero(kFeatureCount);
    x(static_cast<Eigen::Index>(SmellKind::SleepyTest)) = i % 2;
    x(kLocFeature) = 7;
    x(kSmellsCountFeature) = i % 2;
    d.examples.push_back(make(x, i % 2 ? Label::Flaky : Label::NonFlaky, i));
  }
  const auto m = train(spec_for(Algorithm::DecisionTree), d);
  const auto& root = std::get<DecisionTreeParams>(m.parameters).nodes.at(0);
  EXPECT_FALSE(root.is_leaf());
  EXPECT_EQ(root.threshold, 0.5);
  EXPECT_TRUE(root.feature == static_cast<int>(SmellKind::SleepyTest) ||
              root.feature == static_cast<int>(kSmellsCountFeature));
}

TEST(RandomForest, OneTreeWithoutSamplingIsTheTree) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto d = consistent_dataset(seed, 70);
    const auto tree = train(spec_for(Algorithm::DecisionTree), d);
    const auto forest = train(
        spec_for(Algorithm::RandomForest, {{"n_trees", 1}, {"bootstrap", 0}, {"max_features", kFeatureCount}}), d);
    const auto& trees = std::get<ForestParams>(forest.parameters).trees;
    ASSERT_EQ(trees.size(), 1u);
    EXPECT_EQ(trees[0].nodes, std::get<DecisionTreeParams>(tree.parameters).nodes);
  }
}

TEST(Knn, OneNeighbourRecallsTrainingPoints) {
  const auto d = consistent_dataset(11, 90);
  const auto m = train(spec_for(Algorithm::Knn, {{"k", 1}}), d);
  EXPECT_EQ(training_accuracy(m, d), 1.0);
}

TEST(NaiveBayes, SymmetricEvidenceIsATieResolvedToNonFlaky) {
  auto row = [](std::size_t smell, bool present, double loc, Label label, std::size_t i) {
    FeatureVector x = FeatureVector::Zero(kFeatureCount);
    x(static_cast<Eigen::Index>(smell)) = present;
    x(kLocFeature) = loc;
    x(kSmellsCountFeature) = present;
    return make(x, label, i);
  };
  const auto ar = static_cast<std::size_t>(SmellKind::AssertionRoulette);
  const auto ctl = static_cast<std::size_t>(SmellKind::ConditionalTestLogic);
  Dataset d;
  d.examples = {row(ar, true, 10, Label::Flaky, 0), row(ar, false, 20, Label::Flaky, 1),
                row(ctl, true, 10, Label::NonFlaky, 2), row(ctl, false, 20, Label::NonFlaky, 3)};
  const auto m = train(spec_for(Algorithm::NaiveBayes), d);
  FeatureVector q = FeatureVector::Zero(kFeatureCount);
  const auto p = predict(m, q);
  EXPECT_EQ(p.score, 0.5);
  EXPECT_EQ(p.label, Label::NonFlaky);
}

TEST(LinearModels, SeparableDataIsFitted) {
  const auto d = separable_dataset(21, 100);
  for (Algorithm a : {Algorithm::LogisticRegression, Algorithm::Perceptron, Algorithm::SvmLinear,
                      Algorithm::DecisionTree, Algorithm::Lda})
    EXPECT_EQ(training_accuracy(train(spec_for(a), d), d), 1.0) << algorithm_name(a);
}

TEST(LogisticRegression, GradientMatchesFiniteDifferences) {
  SeededRng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 5 + static_cast<Eigen::Index>(rng.below(20)), d = 1 + static_cast<Eigen::Index>(rng.below(6));
    Eigen::MatrixXd x(n, d);
    Eigen::VectorXd y(n), w(d);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) x(i, j) = 4 * rng.uniform() - 2;
      y(i) = static_cast<double>(rng.below(2));
    }
    for (Eigen::Index j = 0; j < d; ++j) w(j) = 2 * rng.uniform() - 1;
    const double bias = rng.uniform() - 0.5, l2 = 0.1 * rng.uniform();
    const auto [gw, gb] = linear::logistic_gradient(x, y, w, bias, l2);
    const double h = 1e-6;
    auto check = [](double analytic, double numeric) {
      EXPECT_LE(std::abs(analytic - numeric), 1e-5 * std::max(1.0, std::abs(numeric)));
    };
    for (Eigen::Index j = 0; j < d; ++j) {
      Eigen::VectorXd up = w, down = w;
      up(j) += h;
      down(j) -= h;
      check(gw(j), (linear::logistic_loss(x, y, up, bias, l2) - linear::logistic_loss(x, y, down, bias, l2)) / (2 * h));
    }
    check(gb, (linear::logistic_loss(x, y, w, bias + h, l2) - linear::logistic_loss(x, y, w, bias - h, l2)) / (2 * h));
  }
}

TEST(Serialization, RoundTripIsExact) {
  const auto d = consistent_dataset(13, 60);
  SeededRng rng(2);
  for (Algorithm a : all_algorithms()) {
    const auto m = train(spec_for(a, a == Algorithm::RandomForest ? Hyperparameters{{"n_trees", 7}} : Hyperparameters{}), d);
    const auto text = serialize_model(m);
    const auto back = deserialize_model(text);
    EXPECT_EQ(serialize_model(back), text) << algorithm_name(a);
    EXPECT_EQ(back.spec, m.spec);
    for (int i = 0; i < 30; ++i) {
      const auto q = random_features(rng);
      EXPECT_EQ(predict(back, q).score, predict(m, q).score) << algorithm_name(a);
    }
  }
}

TEST(Serialization, RejectsDamagedDocuments) {
  const auto m = train(spec_for(Algorithm::DecisionTree), consistent_dataset(4, 30));
  const auto text = serialize_model(m);
  EXPECT_THROW(deserialize_model(text.substr(0, text.size() / 2)), FormatError);
  EXPECT_THROW(deserialize_model("[]"), FormatError);

  auto doc = nlohmann::json::parse(text);
  doc["format_version"] = kModelFormatVersion + 1;
  EXPECT_THROW(deserialize_model(doc.dump()), VersionError);

  doc = nlohmann::json::parse(text);
  doc["schema"]["version"] = "smellsift-features/2";
  EXPECT_THROW(deserialize_model(doc.dump()), VersionError);

  doc = nlohmann::json::parse(text);
  doc["schema"]["names"][0] = "Renamed";
  EXPECT_THROW(deserialize_model(doc.dump()), SchemaError);
}

} // namespace
} // namespace smellsift
