#include "smellsift/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "smellsift/error.hpp"

namespace smellsift {

namespace {

double ratio(std::size_t num, std::size_t den, std::vector<std::string>* notes, const char* what) {
  if (den == 0) {
    if (notes) notes->push_back(fmt::format("{} undefined (0/0), reported as 0", what));
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

/// Whole percent, rounded half up, from exact counts.
std::size_t whole_percent(std::size_t part, std::size_t total) {
  return total == 0 ? 0 : (200 * part + total) / (2 * total);
}

struct Column {
  std::string header;
  bool right = true;
};

std::string render(const std::vector<Column>& cols, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    width[c] = cols[c].header.size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](auto cell) {
    std::string out;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) out += "  ";
      const std::string& text = cell(c);
      const std::string pad(width[c] - text.size(), ' ');
      out += cols[c].right ? pad + text : text + pad;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = line([&](std::size_t c) -> const std::string& { return cols[c].header; });
  std::size_t total = 0;
  for (auto w : width) total += w;
  out += std::string(total + 2 * (cols.size() - 1), '-') + "\n";
  for (const auto& r : rows) out += line([&](std::size_t c) -> const std::string& { return r[c]; });
  return out;
}

std::string fixed2(double v) { return fmt::format("{:.2f}", v); }

/// Appends '*' to every cell of `column` holding the largest displayed value.
void mark_best(std::vector<std::vector<std::string>>& rows, std::size_t column) {
  std::optional<double> best;
  for (const auto& r : rows)
    if (r[column] != "-") best = std::max(best.value_or(-2.0), std::stod(r[column]));
  if (!best) return;
  for (auto& r : rows)
    if (r[column] != "-" && std::stod(r[column]) == *best) r[column] += "*";
}

} // namespace

ConfusionMatrix confusion_matrix(std::span<const Label> predicted, std::span<const Label> truth) {
  if (predicted.size() != truth.size())
    throw Error(fmt::format("{} predictions for {} labels", predicted.size(), truth.size()));
  ConfusionMatrix m;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool p = predicted[i] == Label::Flaky, t = truth[i] == Label::Flaky;
    if (p && t) ++m.tp;
    else if (p) ++m.fp;
    else if (t) ++m.fn;
    else ++m.tn;
  }
  return m;
}

double precision(const ConfusionMatrix& m, std::vector<std::string>* notes) {
  return ratio(m.tp, m.tp + m.fp, notes, "precision");
}

double recall(const ConfusionMatrix& m, std::vector<std::string>* notes) {
  return ratio(m.tp, m.tp + m.fn, notes, "recall");
}

double f1(const ConfusionMatrix& m, std::vector<std::string>* notes) {
  const double p = precision(m), r = recall(m);
  if (p + r == 0.0) {
    if (notes) notes->push_back("F1 undefined (precision + recall = 0), reported as 0");
    return 0.0;
  }
  return 2.0 * p * r / (p + r);
}

double mcc(const ConfusionMatrix& m, std::vector<std::string>* notes) {
  const double tp = static_cast<double>(m.tp), fp = static_cast<double>(m.fp);
  const double fn = static_cast<double>(m.fn), tn = static_cast<double>(m.tn);
  const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (den == 0.0) {
    if (notes) notes->push_back("MCC undefined (zero marginal), reported as 0");
    return 0.0;
  }
  return (tp * tn - fp * fn) / std::sqrt(den);
}

std::optional<double> roc_auc(std::span<const double> scores, std::span<const Label> truth) {
  if (scores.size() != truth.size())
    throw Error(fmt::format("{} scores for {} labels", scores.size(), truth.size()));
  const std::size_t n = scores.size();
  std::size_t positives = 0;
  for (Label l : truth) positives += l == Label::Flaky;
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) return std::nullopt;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Twice the rank sum keeps midranks integral.
  std::size_t twice_rank_sum = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const std::size_t twice_midrank = i + 1 + j; // (i+1 + j) / 2 is the mean 1-based rank
    for (std::size_t k = i; k < j; ++k)
      if (truth[order[k]] == Label::Flaky) twice_rank_sum += twice_midrank;
    i = j;
  }
  const std::size_t twice_u = twice_rank_sum - positives * (positives + 1);
  return static_cast<double>(twice_u) / 2.0 / static_cast<double>(positives * negatives);
}

EvalReport evaluate_scores(std::span<const double> scores, std::span<const Label> predicted,
                           std::span<const Label> truth) {
  EvalReport r;
  r.matrix = confusion_matrix(predicted, truth);
  r.precision = precision(r.matrix, &r.notes);
  r.recall = recall(r.matrix, &r.notes);
  r.f1 = f1(r.matrix, &r.notes);
  r.mcc = mcc(r.matrix, &r.notes);
  r.auc = roc_auc(scores, truth);
  if (!r.auc) r.notes.push_back("AUC undefined: single-class validation set");
  return r;
}

EvalReport evaluate_model(const TrainedModel& model, const Dataset& d) {
  std::vector<double> scores;
  std::vector<Label> predicted, truth;
  for (const auto& e : d.examples) {
    const PredictionScore s = predict(model, e.features);
    scores.push_back(s.score);
    predicted.push_back(s.label);
    truth.push_back(e.label);
  }
  EvalReport r = evaluate_scores(scores, predicted, truth);
  r.algorithm = std::string(algorithm_name(model.spec.algorithm));
  return r;
}

double entropy_bits(std::span<const std::size_t> counts) {
  const std::size_t n = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (n == 0) return 0.0;
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(n);
    h -= p * std::log2(p);
  }
  return h;
}

double information_gain(std::span<const std::array<std::size_t, 2>> table) {
  std::array<std::size_t, 2> marginal{0, 0};
  for (const auto& row : table) {
    marginal[0] += row[0];
    marginal[1] += row[1];
  }
  const std::size_t n = marginal[0] + marginal[1];
  if (n == 0) return 0.0;
  const double h = entropy_bits(marginal);
  double conditional = 0.0;
  for (const auto& row : table) {
    const std::size_t nx = row[0] + row[1];
    if (nx) conditional += static_cast<double>(nx) / static_cast<double>(n) * entropy_bits(row);
  }
  return std::clamp(h - conditional, 0.0, h);
}

std::vector<double> equal_frequency_edges(std::vector<double> values, std::size_t bins) {
  std::sort(values.begin(), values.end());
  std::vector<double> edges;
  const std::size_t n = values.size();
  if (n == 0 || bins < 2) return edges;
  for (std::size_t k = 1; k < bins; ++k) {
    const double e = values[k * n / bins];
    if (edges.empty() || edges.back() != e) edges.push_back(e);
  }
  return edges;
}

FeatureGain information_gain(const Dataset& d, std::size_t feature) {
  if (d.examples.empty()) throw DegenerateDataset("information gain needs a non-empty dataset");
  if (feature >= d.schema.size()) throw SchemaError(fmt::format("feature index {} out of range", feature));
  const auto f = static_cast<Eigen::Index>(feature);
  FeatureGain g;
  g.feature = d.schema.names[feature];

  std::vector<double> edges;
  const bool numeric = feature >= kSmellKindCount;
  if (numeric) {
    std::vector<double> values;
    for (const auto& e : d.examples) values.push_back(e.features(f));
    edges = equal_frequency_edges(std::move(values));
  }
  std::map<std::size_t, std::array<std::size_t, 2>> cells;
  for (const auto& e : d.examples) {
    const double v = e.features(f);
    const std::size_t cell = numeric ? static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), v) -
                                                                edges.begin())
                                     : static_cast<std::size_t>(v > 0.5);
    ++cells[cell][e.label == Label::Flaky];

    bool affected = false;
    if (feature == kLocFeature) affected = true;
    else if (feature == kSmellsCountFeature) affected = v >= 1.0;
    else affected = v > 0.5;
    if (affected) {
      ++g.affected_total;
      (e.label == Label::Flaky ? g.affected_flaky : g.affected_non_flaky) += 1;
    }
  }
  std::vector<std::array<std::size_t, 2>> table;
  for (const auto& [cell, counts] : cells) table.push_back(counts);
  g.information_gain = information_gain(table);
  if (g.affected_total) {
    g.percent_flaky = static_cast<double>(g.affected_flaky) / static_cast<double>(g.affected_total);
    g.percent_non_flaky = static_cast<double>(g.affected_non_flaky) / static_cast<double>(g.affected_total);
  }
  return g;
}

std::vector<FeatureGain> rank_features(const Dataset& d) {
  std::vector<FeatureGain> gains;
  for (std::size_t j = 0; j < d.schema.size(); ++j) gains.push_back(information_gain(d, j));
  std::stable_sort(gains.begin(), gains.end(),
                   [](const FeatureGain& a, const FeatureGain& b) { return a.information_gain > b.information_gain; });
  return gains;
}

std::vector<SmellCountRow> smell_count_distribution(const Dataset& d) {
  std::map<std::size_t, SmellCountRow> rows;
  for (const auto& e : d.examples) {
    const auto count = static_cast<std::size_t>(std::llround(e.features(static_cast<Eigen::Index>(kSmellsCountFeature))));
    SmellCountRow& row = rows[count];
    row.smells_count = count;
    (e.label == Label::Flaky ? row.flaky : row.non_flaky) += 1;
  }
  std::vector<SmellCountRow> out;
  for (auto& [count, row] : rows) {
    const double total = static_cast<double>(row.flaky + row.non_flaky);
    row.percent_flaky = static_cast<double>(row.flaky) / total;
    row.percent_non_flaky = static_cast<double>(row.non_flaky) / total;
    out.push_back(row);
  }
  return out;
}

std::string render_performance_table(const std::vector<EvalReport>& reports) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports) {
    const auto algo = parse_algorithm(r.algorithm);
    rows.push_back({algo ? std::string(algorithm_title(*algo)) : r.algorithm, fixed2(r.precision), fixed2(r.recall),
                    fixed2(r.f1), fixed2(r.mcc), r.auc ? fixed2(*r.auc) : "-"});
  }
  for (std::size_t c = 1; c <= 5; ++c) mark_best(rows, c);
  return render({{"Classifier", false}, {"Precision"}, {"Recall"}, {"F1"}, {"MCC"}, {"AUC"}}, rows);
}

std::string render_gain_table(const std::vector<FeatureGain>& gains) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    const auto& g = gains[i];
    const auto kind = parse_smell_kind(g.feature);
    const std::string name = kind ? std::string(smell_display_name(*kind))
                             : g.feature == "loc" ? "LOC"
                             : g.feature == "smells_count" ? "Smells count"
                                                           : g.feature;
    rows.push_back({std::to_string(i + 1), name, fmt::format("{:.4f}", g.information_gain),
                    std::to_string(g.affected_total), std::to_string(g.affected_flaky),
                    fmt::format("{}%", whole_percent(g.affected_flaky, g.affected_total)),
                    std::to_string(g.affected_non_flaky),
                    fmt::format("{}%", whole_percent(g.affected_non_flaky, g.affected_total))});
  }
  return render({{"Pos."}, {"Feature", false}, {"Gain"}, {"Total"}, {"Flaky"}, {"%"}, {"Non-flaky"}, {"%"}}, rows);
}

std::string render_smell_distribution(const std::vector<SmellCountRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    const std::size_t total = r.flaky + r.non_flaky;
    cells.push_back({std::to_string(r.smells_count), std::to_string(r.non_flaky),
                     fmt::format("{}%", whole_percent(r.non_flaky, total)), std::to_string(r.flaky),
                     fmt::format("{}%", whole_percent(r.flaky, total))});
  }
  return render({{"Smells"}, {"Non-flaky"}, {"%"}, {"Flaky"}, {"%"}}, cells);
}

std::string render_cross_project_table(const std::vector<CrossProjectRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    const auto algo = parse_algorithm(r.algorithm);
    auto rec = [](const EvalReport& e, std::size_t n) { return n == 0 ? std::string("-") : fixed2(e.recall); };
    cells.push_back({algo ? std::string(algorithm_title(*algo)) : r.algorithm, rec(r.intra, r.intra_size),
                     std::to_string(r.intra.matrix.tp), std::to_string(r.intra.matrix.fn),
                     rec(r.inter, r.inter_size), std::to_string(r.inter.matrix.tp),
                     std::to_string(r.inter.matrix.fn)});
  }
  mark_best(cells, 1);
  mark_best(cells, 4);
  return render({{"Classifier", false}, {"Intra Rec"}, {"TP"}, {"FN"}, {"Inter Rec"}, {"TP"}, {"FN"}}, cells);
}

nlohmann::json to_json(const ConfusionMatrix& m) {
  return {{"tp", m.tp}, {"fp", m.fp}, {"fn", m.fn}, {"tn", m.tn}};
}

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json j = {{"algorithm", r.algorithm}, {"matrix", to_json(r.matrix)}, {"precision", r.precision},
                      {"recall", r.recall},       {"f1", r.f1},                  {"mcc", r.mcc}};
  j["auc"] = r.auc ? nlohmann::json(*r.auc) : nlohmann::json(nullptr);
  j["notes"] = r.notes;
  return j;
}

nlohmann::json to_json(const FeatureGain& g) {
  return {{"feature", g.feature},
          {"information_gain", g.information_gain},
          {"affected_total", g.affected_total},
          {"affected_flaky", g.affected_flaky},
          {"affected_non_flaky", g.affected_non_flaky},
          {"percent_flaky", g.percent_flaky},
          {"percent_non_flaky", g.percent_non_flaky}};
}

nlohmann::json to_json(const SmellCountRow& r) {
  return {{"smells_count", r.smells_count},
          {"non_flaky", r.non_flaky},
          {"percent_non_flaky", r.percent_non_flaky},
          {"flaky", r.flaky},
          {"percent_flaky", r.percent_flaky}};
}

nlohmann::json to_json(const CrossProjectRow& r) {
  return {{"algorithm", r.algorithm},
          {"intra", to_json(r.intra)},
          {"intra_size", r.intra_size},
          {"inter", to_json(r.inter)},
          {"inter_size", r.inter_size}};
}

void write_gain_csv(const std::vector<FeatureGain>& gains, std::ostream& out) {
  out << "position,feature,information_gain,affected_total,affected_flaky,percent_flaky,affected_non_flaky,"
         "percent_non_flaky\n";
  for (std::size_t i = 0; i < gains.size(); ++i) {
    const auto& g = gains[i];
    out << fmt::format("{},{},{:.6f},{},{},{:.6f},{},{:.6f}\n", i + 1, g.feature, g.information_gain, g.affected_total,
                       g.affected_flaky, g.percent_flaky, g.affected_non_flaky, g.percent_non_flaky);
  }
}

} // namespace smellsift
