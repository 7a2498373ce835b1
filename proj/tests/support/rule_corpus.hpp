#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include "smellsift/error.hpp"
#include "smellsift/smell_rules.hpp"

namespace smellsift::testing {

/// test_id -> exact set of smells expected by tests/fixtures/rules/expected.csv.
inline std::map<std::string, std::set<SmellKind>> load_rule_expectations(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw IoError("cannot read " + csv.string());
  std::map<std::string, std::set<SmellKind>> out;
  std::string line;
  std::getline(in, line); // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    std::set<SmellKind>& kinds = out[line.substr(0, comma)];
    std::string rest = line.substr(comma + 1);
    std::size_t start = 0;
    while (start < rest.size()) {
      std::size_t end = rest.find(';', start);
      if (end == std::string::npos) end = rest.size();
      const auto kind = parse_smell_kind(rest.substr(start, end - start));
      if (!kind) throw FormatError("unknown smell in expectations: " + line);
      kinds.insert(*kind);
      start = end + 1;
    }
  }
  return out;
}

} // namespace smellsift::testing
