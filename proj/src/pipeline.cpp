#include "smellsift/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "smellsift/error.hpp"

namespace smellsift {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

class Stopwatch {
public:
  double lap_ms() {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - start_).count();
    start_ = now;
    return ms;
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string path_text(const fs::path& p) { return p.generic_string(); }

void require_file(const fs::path& p, std::string_view what) {
  if (p.empty()) throw IoError(fmt::format("no {} given", what));
  if (!fs::is_regular_file(p)) throw IoError(fmt::format("{} not found: {}", what, path_text(p)));
}

Dataset load_features(const fs::path& path) {
  require_file(path, "features file");
  std::istringstream in(read_file(path));
  Dataset d = read_feature_csv(in);
  d.provenance = "features " + path.filename().generic_string();
  return d;
}

void write_manifest(const RunConfig& config, const RunManifest& m) {
  write_file_atomic(config.output_dir / (m.command + ".manifest.json"), m.to_json().dump(2) + "\n");
}

RunManifest start_manifest(const RunConfig& config, std::string command) {
  RunManifest m;
  m.command = std::move(command);
  m.config = config.snapshot();
  return m;
}

fs::path model_path(const fs::path& models_dir, Algorithm a) {
  return models_dir / "models" / (std::string(algorithm_name(a)) + ".json");
}

/// Runs `body`, turning library errors into a fatal exit code.
template <typename Body>
int guarded(std::ostream& log, std::string_view command, Body body) {
  try {
    return body();
  } catch (const std::exception& e) {
    log << command << ": error: " << e.what() << "\n";
    return kExitFatal;
  }
}

json dataset_summary(const Dataset& d) {
  return {{"examples", d.size()}, {"flaky", d.count(Label::Flaky)}, {"non_flaky", d.count(Label::NonFlaky)}};
}

std::vector<std::string> projects_of(const Dataset& d) {
  std::set<std::string> p;
  for (const auto& e : d.examples) p.insert(e.project);
  return {p.begin(), p.end()};
}

} // namespace

// ---------------------------------------------------------------------------

void RunConfig::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error(fmt::format("train fraction must be in (0,1), got {}", train_fraction));
  if (algorithms.empty()) throw Error("no algorithms selected");
  if (format != "json" && format != "csv") throw Error("format must be json or csv, got " + format);
  for (const auto& [algo, params] : hyperparameters) resolve_defaults(ModelSpec{algo, params, seed});
}

json RunConfig::snapshot() const {
  json algos = json::array();
  for (Algorithm a : algorithms) algos.push_back(algorithm_name(a));
  json params = json::object();
  for (const auto& [algo, hp] : hyperparameters) params[std::string(algorithm_name(algo))] = hp;
  return {{"test_root", path_text(test_root)},
          {"prod_root", path_text(prod_root)},
          {"labels_path", path_text(labels_path)},
          {"features_path", path_text(features_path)},
          {"models_dir", path_text(models_dir)},
          {"output_dir", path_text(output_dir)},
          {"project", project},
          {"seed", seed},
          {"train_fraction", train_fraction},
          {"algorithms", algos},
          {"hyperparameters", params},
          {"verbose_threshold", verbose_threshold},
          {"format", format},
          {"keep_skipped", keep_skipped},
          {"stratify", stratify}};
}

std::vector<Algorithm> parse_algorithm_list(std::string_view text) {
  std::vector<Algorithm> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item == "all") {
      out.assign(all_algorithms().begin(), all_algorithms().end());
    } else if (!item.empty()) {
      const auto a = parse_algorithm(item);
      if (!a) throw Error("unknown algorithm: " + std::string(item));
      if (std::find(out.begin(), out.end(), *a) == out.end()) out.push_back(*a);
    }
    start = end + 1;
  }
  if (out.empty()) throw Error("no algorithms selected");
  return out;
}

// ---------------------------------------------------------------------------

json DetectDiagnostics::to_json() const {
  json skipped = json::array();
  for (const auto& [path, reason] : skipped_files) skipped.push_back({{"path", path}, {"reason", reason}});
  return {{"files_scanned", files_scanned},
          {"classes", classes},
          {"test_classes", test_classes},
          {"tests", tests},
          {"skipped_files", skipped},
          {"unresolved_production", unresolved_production},
          {"warnings", warnings}};
}

std::vector<fs::path> find_java_files(const fs::path& root) {
  std::vector<fs::path> files;
  for (auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied);
       it != fs::recursive_directory_iterator(); ++it) {
    if (it->is_regular_file() && it->path().extension() == ".java") files.push_back(it->path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

CorpusIndex build_production_index(const fs::path& prod_root, DetectDiagnostics* diagnostics) {
  CorpusIndex index;
  if (prod_root.empty() || !fs::is_directory(prod_root)) return index;
  for (const auto& file : find_java_files(prod_root)) {
    try {
      SourceUnit unit = parse_source_unit(file);
      std::string name = unit.class_name;
      if (!index.try_emplace(name, std::move(unit)).second && diagnostics)
        diagnostics->warnings.push_back(
            fmt::format("duplicate production class {} at {}; keeping the first", name, path_text(file)));
    } catch (const Error& e) {
      if (diagnostics)
        diagnostics->warnings.push_back(fmt::format("production file {} ignored: {}", path_text(file), e.what()));
    }
  }
  return index;
}

std::string project_name(const RunConfig& config) {
  if (!config.project.empty()) return config.project;
  fs::path root = config.test_root.lexically_normal();
  if (root.filename().empty()) root = root.parent_path();
  std::string name = root.filename().string();
  if (name.empty() || name == ".") name = fs::absolute(config.test_root).lexically_normal().filename().string();
  return name;
}

DetectResult detect_corpus(const RunConfig& config) {
  if (config.test_root.empty()) throw IoError("no test root given");
  if (!fs::is_directory(config.test_root))
    throw IoError("test root is not a directory: " + path_text(config.test_root));

  DetectResult result;
  DetectDiagnostics& diag = result.diagnostics;
  const fs::path prod_root = config.prod_root.empty() ? config.test_root : config.prod_root;
  if (!config.prod_root.empty() && !fs::is_directory(config.prod_root))
    diag.warnings.push_back("production root not found: " + path_text(config.prod_root));
  const CorpusIndex index = build_production_index(prod_root, &diag);

  DetectorConfig detector;
  detector.verbose_threshold = config.verbose_threshold;
  const std::string project = project_name(config);

  for (const auto& file : find_java_files(config.test_root)) {
    ++diag.files_scanned;
    TestClassFacts facts;
    try {
      facts = extract_class_facts(parse_source_unit(file));
    } catch (const Error& e) {
      diag.skipped_files.emplace_back(path_text(file), e.what());
      continue;
    }
    ++diag.classes;
    if (!facts.is_test_class) continue;
    ++diag.test_classes;
    const ProductionFacts production = resolve_production_class(facts, index);
    if (!production.resolved) diag.unresolved_production.push_back(facts.unit.qualified_name());
    auto reports = build_smell_report(bind_production_calls(std::move(facts), production), production, detector,
                                      project);
    diag.tests += reports.size();
    for (auto& r : reports) result.reports.push_back(std::move(r));
  }
  if (diag.files_scanned == 0) diag.warnings.push_back("no Java files under " + path_text(config.test_root));
  result.exit_code = diag.skipped_files.empty() ? kExitOk : kExitPartial;
  return result;
}

nlohmann::ordered_json smell_records_json(const std::vector<SmellReport>& reports) {
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json rec;
    rec["project"] = r.test_id.project;
    rec["test_id"] = r.test_id.str();
    rec["class"] = r.test_id.class_name;
    rec["method"] = r.test_id.method;
    nlohmann::ordered_json smells = nlohmann::ordered_json::object();
    for (SmellKind k : all_smell_kinds()) smells[std::string(smell_name(k))] = r.has(k);
    rec["smells"] = smells;
    rec["smells_count"] = r.smells_count;
    rec["loc"] = r.loc;
    nlohmann::ordered_json skipped = nlohmann::ordered_json::array();
    for (SmellKind k : r.skipped_rules) skipped.push_back(smell_name(k));
    rec["skipped_rules"] = skipped;
    nlohmann::ordered_json findings = nlohmann::ordered_json::array();
    for (const auto& f : r.findings)
      findings.push_back({{"smell", smell_name(f.kind)},
                          {"scope", f.scope == FindingScope::Class ? "class" : "method"},
                          {"lines", f.evidence_lines}});
    rec["findings"] = findings;
    records.push_back(std::move(rec));
  }
  return records;
}

void write_smell_records_csv(const std::vector<SmellReport>& reports, std::ostream& out) {
  out << "project,test_id";
  for (SmellKind k : all_smell_kinds()) out << ',' << smell_name(k);
  out << ",smells_count,loc,skipped_rules\n";
  for (const auto& r : reports) {
    out << r.test_id.project << ',' << r.test_id.str();
    for (SmellKind k : all_smell_kinds()) out << ',' << (r.has(k) ? 1 : 0);
    out << ',' << r.smells_count << ',' << r.loc << ',';
    for (std::size_t i = 0; i < r.skipped_rules.size(); ++i) out << (i ? ";" : "") << smell_name(r.skipped_rules[i]);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_file(path)); }

json RunManifest::to_json() const {
  json d = json::object();
  for (const auto& [k, v] : diagnostics) d[k] = v;
  return {{"tool", kToolName},
          {"tool_version", kToolVersion},
          {"command", command},
          {"config", config},
          {"input_digests", input_digests},
          {"timings_ms", timings_ms},
          {"diagnostics", d},
          {"training_projects", training_projects}};
}

RunManifest RunManifest::from_json(const json& j) {
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.config = j.at("config");
    m.input_digests = j.at("input_digests").get<std::map<std::string, std::string>>();
    m.timings_ms = j.at("timings_ms").get<std::map<std::string, double>>();
    m.diagnostics = j.at("diagnostics").get<std::map<std::string, std::size_t>>();
    m.training_projects = j.at("training_projects").get<std::vector<std::string>>();
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed manifest: ") + e.what());
  }
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path_text(path));
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("cannot write " + path_text(path));
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path_text(path));
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// ---------------------------------------------------------------------------

int cmd_detect(const RunConfig& config, std::ostream& log) {
  return guarded(log, "detect", [&] {
    config.validate();
    Stopwatch watch;
    RunManifest manifest = start_manifest(config, "detect");
    DetectResult result = detect_corpus(config);
    manifest.timings_ms["detect"] = watch.lap_ms();

    const DetectDiagnostics& diag = result.diagnostics;
    const fs::path records = config.output_dir / (config.format == "csv" ? "smells.csv" : "smells.json");
    if (config.format == "csv") {
      std::ostringstream out;
      write_smell_records_csv(result.reports, out);
      write_file_atomic(records, out.str());
    } else {
      write_file_atomic(records, smell_records_json(result.reports).dump(2) + "\n");
    }
    write_file_atomic(config.output_dir / "smells.diagnostics.json", diag.to_json().dump(2) + "\n");
    manifest.timings_ms["write"] = watch.lap_ms();
    manifest.diagnostics = {{"files_scanned", diag.files_scanned},
                            {"classes", diag.classes},
                            {"test_classes", diag.test_classes},
                            {"tests", diag.tests},
                            {"skipped_files", diag.skipped_files.size()},
                            {"unresolved_production", diag.unresolved_production.size()}};
    write_manifest(config, manifest);

    for (const auto& w : diag.warnings) log << "detect: warning: " << w << "\n";
    for (const auto& [path, reason] : diag.skipped_files) log << "detect: skipped " << path << ": " << reason << "\n";
    log << fmt::format("detect: {} tests in {} test classes ({} files) -> {}\n", diag.tests, diag.test_classes,
                       diag.files_scanned, path_text(records));
    return result.exit_code;
  });
}

int cmd_extract(const RunConfig& config, std::ostream& log) {
  return guarded(log, "extract", [&] {
    config.validate();
    require_file(config.labels_path, "labels file");
    Stopwatch watch;
    RunManifest manifest = start_manifest(config, "extract");
    const std::string label_text = read_file(config.labels_path);
    std::istringstream label_stream(label_text);
    const auto labels = read_labels(label_stream);
    manifest.input_digests["labels"] = sha256_hex(label_text);

    DetectResult detected = detect_corpus(config);
    manifest.timings_ms["detect"] = watch.lap_ms();
    AssembledDataset assembled = assemble_dataset(detected.reports, labels, AssembleOptions{config.keep_skipped});
    manifest.timings_ms["assemble"] = watch.lap_ms();

    std::ostringstream csv;
    write_feature_csv(assembled.dataset, csv, config.keep_skipped);
    const fs::path features = config.output_dir / "features.csv";
    write_file_atomic(features, csv.str());

    const AssembleDiagnostics& ad = assembled.diagnostics;
    json diag = {{"detect", detected.diagnostics.to_json()},
                 {"unmatched_reports", ad.unmatched_reports},
                 {"unmatched_labels", ad.unmatched_labels},
                 {"excluded_skipped", ad.excluded_skipped},
                 {"duplicate_reports", ad.duplicate_reports},
                 {"dataset", dataset_summary(assembled.dataset)}};
    write_file_atomic(config.output_dir / "features.diagnostics.json", diag.dump(2) + "\n");
    manifest.timings_ms["write"] = watch.lap_ms();
    manifest.input_digests["features_out"] = sha256_hex(csv.str());
    manifest.diagnostics = {{"examples", assembled.dataset.size()},
                            {"tests_detected", detected.reports.size()},
                            {"unmatched_reports", ad.unmatched_reports.size()},
                            {"unmatched_labels", ad.unmatched_labels.size()},
                            {"excluded_skipped", ad.excluded_skipped.size()},
                            {"skipped_files", detected.diagnostics.skipped_files.size()}};
    write_manifest(config, manifest);

    for (const auto& w : detected.diagnostics.warnings) log << "extract: warning: " << w << "\n";
    if (!ad.unmatched_labels.empty())
      log << fmt::format("extract: warning: {} labeled tests were not found in the corpus\n", ad.unmatched_labels.size());
    log << fmt::format("extract: {} labeled examples ({} flaky) -> {}\n", assembled.dataset.size(),
                       assembled.dataset.count(Label::Flaky), path_text(features));
    return detected.exit_code;
  });
}

int cmd_train(const RunConfig& config, std::ostream& log) {
  return guarded(log, "train", [&] {
    config.validate();
    Stopwatch watch;
    RunManifest manifest = start_manifest(config, "train");
    const Dataset data = load_features(config.features_path);
    manifest.input_digests["features"] = sha256_file(config.features_path);
    if (data.count(Label::Flaky) == 0 || data.count(Label::NonFlaky) == 0)
      throw DegenerateDataset("features file must contain both flaky and non-flaky tests");
    manifest.timings_ms["load"] = watch.lap_ms();

    const Dataset balanced = balance_dataset(data, config.seed);
    auto [train_set, test_set] = split_train_test(balanced, config.train_fraction, config.seed, config.stratify);
    manifest.timings_ms["balance_split"] = watch.lap_ms();

    std::vector<EvalReport> reports;
    for (Algorithm a : config.algorithms) {
      ModelSpec spec{a, {}, config.seed + static_cast<std::uint64_t>(a)};
      if (auto it = config.hyperparameters.find(a); it != config.hyperparameters.end()) spec.hyperparameters = it->second;
      const TrainedModel model = train(spec, train_set);
      write_file_atomic(model_path(config.output_dir, a), serialize_model(model));
      reports.push_back(evaluate_model(model, test_set));
      manifest.timings_ms["train_" + std::string(algorithm_name(a))] = watch.lap_ms();
    }

    json results = json::array();
    for (const auto& r : reports) results.push_back(to_json(r));
    json report = {{"seed", config.seed},
                   {"train_fraction", config.train_fraction},
                   {"stratify", config.stratify},
                   {"input", dataset_summary(data)},
                   {"balanced", dataset_summary(balanced)},
                   {"train", dataset_summary(train_set)},
                   {"test", dataset_summary(test_set)},
                   {"results", results}};
    const std::string table = render_performance_table(reports);
    const std::string text = fmt::format(
        "Test smells-based classifiers' performance\n"
        "seed {}, {} training / {} held-out examples (balanced from {})\n\n{}",
        config.seed, train_set.size(), test_set.size(), data.size(), table);
    write_file_atomic(config.output_dir / "report.json", report.dump(2) + "\n");
    write_file_atomic(config.output_dir / "report.txt", text);
    manifest.timings_ms["write"] = watch.lap_ms();
    manifest.training_projects = projects_of(train_set);
    manifest.diagnostics = {{"input_examples", data.size()},
                            {"balanced_examples", balanced.size()},
                            {"train_examples", train_set.size()},
                            {"test_examples", test_set.size()}};
    write_manifest(config, manifest);
    log << text;
    return kExitOk;
  });
}

int cmd_evaluate(const RunConfig& config, std::ostream& log) {
  return guarded(log, "evaluate", [&] {
    config.validate();
    Stopwatch watch;
    RunManifest manifest = start_manifest(config, "evaluate");
    const Dataset data = load_features(config.features_path);
    manifest.input_digests["features"] = sha256_file(config.features_path);
    std::vector<EvalReport> reports;
    for (Algorithm a : config.algorithms) {
      const fs::path p = model_path(config.models_dir, a);
      if (!fs::is_regular_file(p)) continue;
      manifest.input_digests["model_" + std::string(algorithm_name(a))] = sha256_file(p);
      reports.push_back(evaluate_model(deserialize_model(read_file(p)), data));
    }
    if (reports.empty()) throw IoError("no trained models found under " + path_text(config.models_dir / "models"));
    manifest.timings_ms["evaluate"] = watch.lap_ms();

    json results = json::array();
    for (const auto& r : reports) results.push_back(to_json(r));
    const json report = {{"dataset", dataset_summary(data)}, {"results", results}};
    const std::string text =
        fmt::format("Classifier performance on {} examples\n\n{}", data.size(), render_performance_table(reports));
    write_file_atomic(config.output_dir / "evaluation.json", report.dump(2) + "\n");
    write_file_atomic(config.output_dir / "evaluation.txt", text);
    manifest.diagnostics = {{"examples", data.size()}, {"models", reports.size()}};
    write_manifest(config, manifest);
    log << text;
    return kExitOk;
  });
}

int cmd_crossval(const RunConfig& config, std::ostream& log) {
  return guarded(log, "crossval", [&] {
    config.validate();
    Stopwatch watch;
    RunManifest manifest = start_manifest(config, "crossval");
    const fs::path training_manifest = config.models_dir / "train.manifest.json";
    require_file(training_manifest, "training manifest");
    json tm;
    try {
      tm = json::parse(read_file(training_manifest));
    } catch (const json::exception& e) {
      throw FormatError("training manifest is not valid JSON: " + std::string(e.what()));
    }
    const RunManifest trained = RunManifest::from_json(tm);
    manifest.input_digests["training_manifest"] = sha256_file(training_manifest);
    manifest.training_projects = trained.training_projects;

    const Dataset validation = load_features(config.features_path);
    manifest.input_digests["features"] = sha256_file(config.features_path);
    const std::set<std::string, std::less<>> projects(trained.training_projects.begin(),
                                                      trained.training_projects.end());
    const auto [intra, inter] = partition_cross_project(projects, validation);

    auto evaluate_on = [](const TrainedModel& model, const Dataset& d) {
      if (d.examples.empty()) {
        EvalReport r;
        r.algorithm = std::string(algorithm_name(model.spec.algorithm));
        r.notes.push_back("no examples in this context");
        return r;
      }
      return evaluate_model(model, d);
    };
    std::vector<CrossProjectRow> rows;
    for (Algorithm a : config.algorithms) {
      const fs::path p = model_path(config.models_dir, a);
      if (!fs::is_regular_file(p)) continue;
      manifest.input_digests["model_" + std::string(algorithm_name(a))] = sha256_file(p);
      const TrainedModel model = deserialize_model(read_file(p));
      rows.push_back({std::string(algorithm_name(a)), evaluate_on(model, intra), evaluate_on(model, inter),
                      intra.size(), inter.size()});
    }
    if (rows.empty()) throw IoError("no trained models found under " + path_text(config.models_dir / "models"));
    manifest.timings_ms["crossval"] = watch.lap_ms();

    json results = json::array();
    for (const auto& r : rows) results.push_back(to_json(r));
    const json report = {{"training_projects", trained.training_projects},
                         {"intra", dataset_summary(intra)},
                         {"inter", dataset_summary(inter)},
                         {"results", results}};
    std::string text = fmt::format("Cross-project test smells-based classification\n"
                                   "intra-project: {} examples ({} flaky), inter-project: {} examples ({} flaky)\n",
                                   intra.size(), intra.count(Label::Flaky), inter.size(), inter.count(Label::Flaky));
    if (intra.examples.empty()) text += "intra-project section is empty\n";
    if (inter.examples.empty()) text += "inter-project section is empty\n";
    if (intra.count(Label::NonFlaky) + inter.count(Label::NonFlaky) == 0)
      text += "validation data has no non-flaky tests; precision and AUC are omitted\n";
    text += "\n" + render_cross_project_table(rows);
    write_file_atomic(config.output_dir / "crossval.json", report.dump(2) + "\n");
    write_file_atomic(config.output_dir / "crossval.txt", text);
    manifest.diagnostics = {{"intra_examples", intra.size()}, {"inter_examples", inter.size()}, {"models", rows.size()}};
    write_manifest(config, manifest);
    log << text;
    return kExitOk;
  });
}

int cmd_rank(const RunConfig& config, std::ostream& log) {
  return guarded(log, "rank", [&] {
    config.validate();
    Stopwatch watch;
    RunManifest manifest = start_manifest(config, "rank");
    const Dataset data = load_features(config.features_path);
    manifest.input_digests["features"] = sha256_file(config.features_path);
    const auto gains = rank_features(data);
    const auto distribution = smell_count_distribution(data);
    manifest.timings_ms["rank"] = watch.lap_ms();

    json g = json::array(), dist = json::array();
    for (const auto& x : gains) g.push_back(to_json(x));
    for (const auto& x : distribution) dist.push_back(to_json(x));
    const json report = {{"dataset", dataset_summary(data)}, {"ranking", g}, {"smell_count_distribution", dist}};
    const std::string text = fmt::format("Information gain of each feature ({} examples)\n\n{}\n"
                                         "Smell count distribution\n\n{}",
                                         data.size(), render_gain_table(gains), render_smell_distribution(distribution));
    std::ostringstream csv;
    write_gain_csv(gains, csv);
    write_file_atomic(config.output_dir / "ranking.json", report.dump(2) + "\n");
    write_file_atomic(config.output_dir / "ranking.txt", text);
    write_file_atomic(config.output_dir / "ranking.csv", csv.str());
    manifest.diagnostics = {{"examples", data.size()}};
    write_manifest(config, manifest);
    log << text;
    return kExitOk;
  });
}

} // namespace smellsift
