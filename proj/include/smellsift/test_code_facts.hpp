#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "smellsift/java_lexer.hpp"

namespace smellsift {

struct SourceUnit {
  std::filesystem::path path;
  std::string package_name;
  std::string class_name; ///< first top-level type declaration
  std::string raw_text;
  std::size_t line_count = 0;
  std::vector<Token> tokens;

  std::string qualified_name() const { return package_name.empty() ? class_name : package_name + "." + class_name; }
};

struct AnnotationFact {
  std::string name; ///< simple name, without '@'
  std::map<std::string, std::string> parameters;
  std::size_t line = 0;

  friend bool operator==(const AnnotationFact&, const AnnotationFact&) = default;
};

struct CallSite {
  std::optional<std::string> receiver;
  std::string method_name;
  std::vector<std::string> arguments; ///< whitespace-normalized, source order
  std::size_t line = 0;

  /// Leading identifier of the receiver chain ("System" for System.out).
  std::string receiver_root() const;

  friend bool operator==(const CallSite&, const CallSite&) = default;
};

struct Instantiation {
  std::string type_name; ///< simple name of the constructed type
  std::size_t line = 0;

  friend bool operator==(const Instantiation&, const Instantiation&) = default;
};

struct ControlFlowCounts {
  std::size_t if_statements = 0;
  std::size_t switch_statements = 0;
  std::size_t conditional_expressions = 0;
  std::size_t for_loops = 0;
  std::size_t foreach_loops = 0;
  std::size_t while_loops = 0;

  std::size_t total() const {
    return if_statements + switch_statements + conditional_expressions + for_loops + foreach_loops + while_loops;
  }

  friend bool operator==(const ControlFlowCounts&, const ControlFlowCounts&) = default;
};

struct TestMethodFacts {
  std::string name;
  std::size_t start_line = 0;
  std::size_t end_line = 0;
  std::size_t loc = 0;
  std::size_t executable_statement_count = 0;
  std::size_t parameter_count = 0;
  std::vector<std::string> parameter_types;
  std::vector<AnnotationFact> annotations;
  ControlFlowCounts control_flow;

  std::vector<CallSite> assertion_calls;
  /// Non-assertion calls whose name belongs to the resolved production
  /// class. Empty until bound with bind_production_calls().
  std::vector<CallSite> production_calls;
  std::vector<CallSite> print_calls;
  std::vector<CallSite> sleep_calls;
  std::vector<CallSite> to_string_calls;
  std::vector<CallSite> file_api_calls;
  /// Every call site that is not an assertion.
  std::vector<CallSite> other_calls;

  std::vector<Instantiation> instantiations;
  std::set<std::string> file_locals; ///< File-family locals and parameters
  std::set<std::string> referenced_identifiers;
  std::size_t numeric_literal_assert_args = 0;

  bool has_annotation(std::string_view simple_name) const;
  const AnnotationFact* annotation(std::string_view simple_name) const;
  std::string signature() const;

  friend bool operator==(const TestMethodFacts&, const TestMethodFacts&) = default;
};

struct TestClassFacts {
  SourceUnit unit;
  bool is_test_class = false;
  std::optional<std::string> superclass_name;
  bool declares_constructor = false;
  std::vector<std::size_t> constructor_lines;
  std::size_t class_line = 0;
  std::set<std::string> declared_fields;
  std::set<std::string> setup_fields;
  std::vector<std::size_t> setup_lines;
  std::vector<AnnotationFact> class_annotations;
  std::vector<TestMethodFacts> methods;        ///< test methods, source order
  std::vector<TestMethodFacts> helper_methods; ///< everything else, source order

  bool has_class_annotation(std::string_view simple_name) const;
};

struct ProductionFacts {
  std::string class_name;
  std::set<std::string> method_names;
  bool resolved = false;
};

/// Simple names matched as assertions regardless of receiver.
const std::set<std::string, std::less<>>& assertion_method_names();
/// Types tracked as file handles for Resource Optimism.
const std::set<std::string, std::less<>>& file_family_types();

SourceUnit parse_source_text(std::filesystem::path path, std::string text);
SourceUnit parse_source_unit(const std::filesystem::path& path);

TestClassFacts extract_class_facts(const SourceUnit& unit);

bool extends_test_case(const std::optional<std::string>& superclass);
bool is_test_method(const TestMethodFacts& method, bool junit3_class);
std::vector<TestMethodFacts> identify_test_methods(const TestClassFacts& class_facts);

using CorpusIndex = std::map<std::string, SourceUnit, std::less<>>;

/// Candidate production names for a test class, in lookup order.
std::vector<std::string> production_name_candidates(std::string_view test_class_name);
ProductionFacts resolve_production_class(const TestClassFacts& class_facts, const CorpusIndex& corpus_index);

/// Copy of `class_facts` with production_calls filled from other_calls.
TestClassFacts bind_production_calls(TestClassFacts class_facts, const ProductionFacts& production);

/// Whitespace-normalized rendering of a token range: single spaces only
/// between adjacent word-like tokens.
std::string normalize_tokens(const std::vector<Token>& tokens, std::size_t first, std::size_t last);

} // namespace smellsift
