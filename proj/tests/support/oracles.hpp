#pragma once

// Direct-definition reference computations used to check the library.

#include <cmath>
#include <cstddef>
#include <vector>

namespace smellsift::testing {

struct OracleCounts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

/// Counts cells by walking (predicted, actual) pairs; true means flaky.
inline OracleCounts count_cells(const std::vector<bool>& predicted, const std::vector<bool>& actual) {
  OracleCounts c;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (predicted[i] && actual[i]) ++c.tp;
    if (predicted[i] && !actual[i]) ++c.fp;
    if (!predicted[i] && actual[i]) ++c.fn;
    if (!predicted[i] && !actual[i]) ++c.tn;
  }
  return c;
}

inline double oracle_precision(const OracleCounts& c) {
  return c.tp + c.fp == 0 ? 0.0 : double(c.tp) / double(c.tp + c.fp);
}

inline double oracle_recall(const OracleCounts& c) {
  return c.tp + c.fn == 0 ? 0.0 : double(c.tp) / double(c.tp + c.fn);
}

inline double oracle_f1(const OracleCounts& c) {
  const double p = oracle_precision(c), r = oracle_recall(c);
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

inline double oracle_mcc(const OracleCounts& c) {
  const double tp = double(c.tp), fp = double(c.fp), fn = double(c.fn), tn = double(c.tn);
  const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  return den == 0.0 ? 0.0 : (tp * tn - fp * fn) / std::sqrt(den);
}

/// Fraction of (flaky, non-flaky) pairs where the flaky score is higher,
/// ties counting one half.
inline double oracle_auc(const std::vector<double>& scores, const std::vector<bool>& actual) {
  std::size_t twice_wins = 0, pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!actual[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (actual[j]) continue;
      ++pairs;
      if (scores[i] > scores[j]) twice_wins += 2;
      else if (scores[i] == scores[j]) twice_wins += 1;
    }
  }
  return double(twice_wins) / 2.0 / double(pairs);
}

/// Plug-in information gain in bits from a {non-flaky, flaky} table.
inline double oracle_information_gain(const std::vector<std::vector<double>>& table) {
  auto h = [](double a, double b) {
    double out = 0.0;
    for (double x : {a, b})
      if (x > 0) out -= x / (a + b) * std::log2(x / (a + b));
    return out;
  };
  double n0 = 0, n1 = 0;
  for (const auto& row : table) {
    n0 += row[0];
    n1 += row[1];
  }
  double conditional = 0.0;
  for (const auto& row : table)
    if (row[0] + row[1] > 0) conditional += (row[0] + row[1]) / (n0 + n1) * h(row[0], row[1]);
  return h(n0, n1) - conditional;
}

} // namespace smellsift::testing
