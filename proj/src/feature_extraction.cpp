#include "smellsift/feature_extraction.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "smellsift/error.hpp"
#include "smellsift/random.hpp"

namespace smellsift {

namespace {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::string format_value(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) return fmt::format("{}", static_cast<long long>(v));
  return fmt::format("{}", v);
}

double parse_value(const std::string& text, std::size_t row) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw FormatError("bad numeric value '" + text + "'", row);
  return v;
}

std::vector<std::string> feature_header(bool with_skipped) {
  std::vector<std::string> h = {"project", "test_id"};
  for (const auto& n : FeatureSchema::standard().names) h.push_back(n);
  if (with_skipped) h.push_back("skipped");
  h.push_back("label");
  return h;
}

Dataset subset(const Dataset& d, const std::vector<std::size_t>& indices, std::string provenance) {
  Dataset out;
  out.schema = d.schema;
  out.seed = d.seed;
  out.provenance = std::move(provenance);
  out.examples.reserve(indices.size());
  for (std::size_t i : indices) out.examples.push_back(d.examples[i]);
  return out;
}

} // namespace

std::string_view label_name(Label label) { return label == Label::Flaky ? "flaky" : "non-flaky"; }

std::optional<Label> parse_label(std::string_view text) {
  if (text == "flaky") return Label::Flaky;
  if (text == "non-flaky") return Label::NonFlaky;
  return std::nullopt;
}

const FeatureSchema& FeatureSchema::standard() {
  static const FeatureSchema schema = [] {
    FeatureSchema s;
    for (SmellKind k : all_smell_kinds()) s.names.emplace_back(smell_name(k));
    s.names.emplace_back("loc");
    s.names.emplace_back("smells_count");
    s.version = "smellsift-features/1";
    return s;
  }();
  return schema;
}

std::size_t Dataset::count(Label label) const {
  return static_cast<std::size_t>(
      std::count_if(examples.begin(), examples.end(), [&](const LabeledExample& e) { return e.label == label; }));
}

Eigen::MatrixXd Dataset::design_matrix() const {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(examples.size()), static_cast<Eigen::Index>(schema.size()));
  for (std::size_t i = 0; i < examples.size(); ++i) x.row(static_cast<Eigen::Index>(i)) = examples[i].features.transpose();
  return x;
}

Eigen::VectorXd Dataset::targets() const {
  Eigen::VectorXd y(static_cast<Eigen::Index>(examples.size()));
  for (std::size_t i = 0; i < examples.size(); ++i) y(static_cast<Eigen::Index>(i)) = examples[i].label == Label::Flaky ? 1.0 : 0.0;
  return y;
}

FeatureVector build_feature_vector(const SmellReport& report, std::size_t loc) {
  FeatureVector v = FeatureVector::Zero(kFeatureCount);
  double count = 0;
  for (std::size_t k = 0; k < kSmellKindCount; ++k) {
    v(static_cast<Eigen::Index>(k)) = report.presence[k] ? 1.0 : 0.0;
    count += v(static_cast<Eigen::Index>(k));
  }
  v(kLocFeature) = static_cast<double>(loc);
  v(kSmellsCountFeature) = count;
  return v;
}

FeatureVector build_feature_vector(const PresenceMap& presence, std::size_t loc) {
  SmellReport report;
  for (SmellKind k : all_smell_kinds()) {
    auto it = presence.find(smell_name(k));
    if (it == presence.end()) throw SchemaError("smell report lacks " + std::string(smell_name(k)));
    report.presence[static_cast<std::size_t>(k)] = it->second;
  }
  return build_feature_vector(report, loc);
}

std::vector<LabelRow> read_labels(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw FormatError("labels file is empty");
  if (line != "project,test_id,label") throw FormatError("labels header must be 'project,test_id,label'", 1);
  std::vector<LabelRow> rows;
  std::unordered_set<std::string> seen;
  std::size_t row = 1;
  while (next_line(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3) throw FormatError("expected 3 fields", row);
    auto label = parse_label(fields[2]);
    if (!label) throw FormatError("label must be 'flaky' or 'non-flaky', got '" + fields[2] + "'", row);
    if (fields[1].empty()) throw FormatError("empty test_id", row);
    if (!seen.insert(fields[1]).second) throw FormatError("duplicate test_id '" + fields[1] + "'", row);
    rows.push_back(LabelRow{fields[0], fields[1], *label});
  }
  return rows;
}

AssembledDataset assemble_dataset(const std::vector<SmellReport>& reports, const std::vector<LabelRow>& labels,
                                  const AssembleOptions& options) {
  AssembledDataset out;
  out.dataset.provenance = "assembled from " + std::to_string(reports.size()) + " smell reports";
  std::unordered_map<std::string, const LabelRow*> by_id;
  for (const auto& row : labels) by_id.emplace(row.test_id, &row);

  std::unordered_set<std::string> matched;
  for (const auto& report : reports) {
    const std::string id = report.test_id.str();
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      out.diagnostics.unmatched_reports.push_back(id);
      continue;
    }
    if (!matched.insert(id).second) {
      out.diagnostics.duplicate_reports.push_back(id);
      continue;
    }
    const bool skipped = !report.skipped_rules.empty();
    if (skipped && !options.keep_skipped) {
      out.diagnostics.excluded_skipped.push_back(id);
      continue;
    }
    LabeledExample e;
    e.test_id = id;
    e.project = it->second->project;
    e.features = build_feature_vector(report, report.loc);
    e.label = it->second->label;
    e.skipped = skipped;
    out.dataset.examples.push_back(std::move(e));
  }
  for (const auto& row : labels)
    if (!matched.contains(row.test_id)) out.diagnostics.unmatched_labels.push_back(row.test_id);
  return out;
}

Dataset balance_dataset(const Dataset& d, std::uint64_t seed) {
  std::vector<std::size_t> flaky, non_flaky;
  for (std::size_t i = 0; i < d.examples.size(); ++i)
    (d.examples[i].label == Label::Flaky ? flaky : non_flaky).push_back(i);
  if (flaky.empty() || non_flaky.empty()) throw DegenerateDataset("balancing needs both flaky and non-flaky examples");

  auto& minority = flaky.size() <= non_flaky.size() ? flaky : non_flaky;
  auto& majority = flaky.size() <= non_flaky.size() ? non_flaky : flaky;

  SeededRng rng(seed);
  // partial Fisher-Yates: the first |minority| slots become a uniform sample
  for (std::size_t i = 0; i < minority.size(); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(majority.size() - i));
    std::swap(majority[i], majority[j]);
  }
  std::vector<std::size_t> keep = minority;
  keep.insert(keep.end(), majority.begin(), majority.begin() + static_cast<std::ptrdiff_t>(minority.size()));
  std::sort(keep.begin(), keep.end());

  Dataset out = subset(d, keep, d.provenance + fmt::format("; balanced(seed={})", seed));
  out.seed = seed;
  return out;
}

std::size_t train_share(double train_fraction, std::size_t n) {
  return static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n) + 0.5 + 1e-9));
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& d, double train_fraction, std::uint64_t seed,
                                             bool stratify) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw Error("train fraction must lie in (0, 1)");
  SeededRng rng(seed);
  std::vector<std::size_t> train, test;

  auto take = [&](std::vector<std::size_t> group) {
    rng.shuffle(std::span(group));
    const std::size_t n_train = std::min(train_share(train_fraction, group.size()), group.size());
    train.insert(train.end(), group.begin(), group.begin() + static_cast<std::ptrdiff_t>(n_train));
    test.insert(test.end(), group.begin() + static_cast<std::ptrdiff_t>(n_train), group.end());
  };

  if (stratify) {
    std::vector<std::size_t> flaky, non_flaky;
    for (std::size_t i = 0; i < d.examples.size(); ++i)
      (d.examples[i].label == Label::Flaky ? flaky : non_flaky).push_back(i);
    if (flaky.size() < 2 || non_flaky.size() < 2)
      throw DegenerateDataset("stratified split needs at least 2 examples of each class");
    take(std::move(flaky));
    take(std::move(non_flaky));
  } else {
    if (d.examples.size() < 2) throw DegenerateDataset("split needs at least 2 examples");
    std::vector<std::size_t> all(d.examples.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    take(std::move(all));
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  const std::string tag = fmt::format("; split(fraction={}, seed={}{})", train_fraction, seed, stratify ? "" : ", unstratified");
  return {subset(d, train, d.provenance + tag + " train"), subset(d, test, d.provenance + tag + " test")};
}

std::pair<Dataset, Dataset> partition_cross_project(const Dataset& training, const Dataset& validation) {
  std::set<std::string, std::less<>> projects;
  for (const auto& e : training.examples) projects.insert(e.project);
  return partition_cross_project(projects, validation);
}

std::pair<Dataset, Dataset> partition_cross_project(const std::set<std::string, std::less<>>& projects,
                                                    const Dataset& validation) {
  std::vector<std::size_t> intra, inter;
  for (std::size_t i = 0; i < validation.examples.size(); ++i)
    (projects.contains(validation.examples[i].project) ? intra : inter).push_back(i);
  return {subset(validation, intra, validation.provenance + "; intra-project"),
          subset(validation, inter, validation.provenance + "; inter-project")};
}

void write_feature_csv(const Dataset& d, std::ostream& out, bool with_skipped_column) {
  const auto header = feature_header(with_skipped_column);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& e : d.examples) {
    if (static_cast<std::size_t>(e.features.size()) != d.schema.size())
      throw SchemaError("example " + e.test_id + " has " + std::to_string(e.features.size()) + " features");
    out << e.project << ',' << e.test_id;
    for (Eigen::Index k = 0; k < e.features.size(); ++k) out << ',' << format_value(e.features(k));
    if (with_skipped_column) out << ',' << (e.skipped ? 1 : 0);
    out << ',' << label_name(e.label) << '\n';
  }
}

Dataset read_feature_csv(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw FormatError("feature file is empty");
  const auto header = split_csv_line(line);
  const bool with_skipped = header == feature_header(true);
  if (!with_skipped && header != feature_header(false))
    throw SchemaError("feature header does not match schema " + FeatureSchema::standard().version);

  Dataset d;
  d.provenance = "feature csv";
  std::unordered_set<std::string> seen;
  std::size_t row = 1;
  while (next_line(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) throw FormatError("expected " + std::to_string(header.size()) + " fields", row);
    LabeledExample e;
    e.project = fields[0];
    e.test_id = fields[1];
    if (!seen.insert(e.test_id).second) throw FormatError("duplicate test_id '" + e.test_id + "'", row);
    e.features.resize(kFeatureCount);
    for (std::size_t k = 0; k < kFeatureCount; ++k) e.features(static_cast<Eigen::Index>(k)) = parse_value(fields[2 + k], row);
    for (std::size_t k = 0; k < kSmellKindCount; ++k) {
      const double v = e.features(static_cast<Eigen::Index>(k));
      if (v != 0.0 && v != 1.0) throw FormatError("smell column " + header[2 + k] + " must be 0 or 1", row);
    }
    std::size_t next = 2 + kFeatureCount;
    if (with_skipped) e.skipped = fields[next++] == "1";
    auto label = parse_label(fields[next]);
    if (!label) throw FormatError("bad label '" + fields[next] + "'", row);
    e.label = *label;
    d.examples.push_back(std::move(e));
  }
  return d;
}

} // namespace smellsift
