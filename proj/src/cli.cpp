#include <functional>
#include <ostream>

#include <CLI11.hpp>

#include "smellsift/error.hpp"
#include "smellsift/pipeline.hpp"

namespace smellsift {

namespace {

/// "random_forest.n_trees=50"
void apply_param(RunConfig& config, const std::string& text) {
  const auto dot = text.find('.');
  const auto eq = text.find('=');
  if (dot == std::string::npos || eq == std::string::npos || eq < dot)
    throw Error("expected ALGORITHM.NAME=VALUE, got '" + text + "'");
  const auto algo = parse_algorithm(text.substr(0, dot));
  if (!algo) throw Error("unknown algorithm in '" + text + "'");
  double value = 0;
  try {
    std::size_t used = 0;
    value = std::stod(text.substr(eq + 1), &used);
    if (used != text.size() - eq - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw Error("bad numeric value in '" + text + "'");
  }
  config.hyperparameters[*algo][text.substr(dot + 1, eq - dot - 1)] = value;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Detect test smells in Java test code and use them to predict flaky tests.", "smellsift"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  std::string test_root, prod_root, labels, features, models, output = ".", algos = "all";
  std::vector<std::string> params;
  bool no_stratify = false;

  auto env = [](CLI::Option* o, const char* name) { return o->envname(std::string("SMELLSIFT_") + name); };
  env(app.add_option("--test-root", test_root, "Root of the Java test sources"), "TEST_ROOT");
  env(app.add_option("--prod-root", prod_root, "Root of the production sources (default: test root)"), "PROD_ROOT");
  env(app.add_option("--labels", labels, "CSV with project,test_id,label"), "LABELS");
  env(app.add_option("--features", features, "Feature CSV written by extract"), "FEATURES");
  env(app.add_option("--models", models, "Directory written by train"), "MODELS");
  env(app.add_option("-o,--out,--output-dir", output, "Output directory")->capture_default_str(), "OUT");
  env(app.add_option("--project", config.project, "Project name for detected tests (default: test root name)"),
      "PROJECT");
  env(app.add_option("--seed", config.seed, "Random seed")->capture_default_str(), "SEED");
  env(app.add_option("--train-fraction", config.train_fraction, "Share of data used for training")
          ->capture_default_str(),
      "TRAIN_FRACTION");
  env(app.add_option("--algos", algos, "Comma-separated algorithms or 'all'")->capture_default_str(), "ALGOS");
  env(app.add_option("--param", params, "Hyperparameter override ALGORITHM.NAME=VALUE (repeatable)"), "PARAM");
  env(app.add_option("--verbose-threshold", config.verbose_threshold, "Statements above which a test is verbose")
          ->capture_default_str(),
      "VERBOSE_THRESHOLD");
  env(app.add_option("--format", config.format, "Smell record format for detect")
          ->check(CLI::IsMember({"json", "csv"}))
          ->capture_default_str(),
      "FORMAT");
  env(app.add_flag("--keep-skipped", config.keep_skipped, "Keep tests with skipped rules, adding a skipped column"),
      "KEEP_SKIPPED");
  env(app.add_flag("--no-stratify", no_stratify, "Split without preserving class ratios"), "NO_STRATIFY");

  using Command = std::function<int(const RunConfig&, std::ostream&)>;
  std::vector<std::pair<CLI::App*, Command>> commands = {
      {app.add_subcommand("detect", "Detect smells and write per-test records"), cmd_detect},
      {app.add_subcommand("extract", "Detect smells, join labels, and write the feature CSV"), cmd_extract},
      {app.add_subcommand("train", "Balance, split, train the classifiers, and report held-out performance"),
       cmd_train},
      {app.add_subcommand("evaluate", "Score trained models on a feature CSV"), cmd_evaluate},
      {app.add_subcommand("crossval", "Intra- and inter-project validation of trained models"), cmd_crossval},
      {app.add_subcommand("rank", "Rank features by information gain"), cmd_rank},
  };
  for (std::size_t i : {0, 1}) commands[i].first->add_option("test-root", test_root, "Same as --test-root");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitFatal;
  }

  try {
    config.test_root = test_root;
    config.prod_root = prod_root;
    config.labels_path = labels;
    config.features_path = features;
    config.models_dir = models;
    config.output_dir = output;
    config.algorithms = parse_algorithm_list(algos);
    config.stratify = !no_stratify;
    for (const auto& p : params) apply_param(config, p);
    config.validate();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFatal;
  }

  for (const auto& [sub, command] : commands)
    if (sub->parsed()) return command(config, err);
  return kExitFatal;
}

} // namespace smellsift
