#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "smellsift/test_code_facts.hpp"

namespace smellsift {

/// The 19 smell kinds, in canonical serialization order.
enum class SmellKind : std::size_t {
  AssertionRoulette,
  ConditionalTestLogic,
  ConstructorInitialization,
  DefaultTest,
  DuplicateAssert,
  EagerTest,
  EmptyTest,
  GeneralFixture,
  IgnoredTest,
  LazyTest,
  MagicNumberTest,
  MysteryGuest,
  RedundantPrint,
  RedundantAssertion,
  ResourceOptimism,
  SensitiveEquality,
  SleepyTest,
  UnknownTest,
  VerboseTest,
};

inline constexpr std::size_t kSmellKindCount = 19;

const std::array<SmellKind, kSmellKindCount>& all_smell_kinds();
std::string_view smell_name(SmellKind kind);         ///< canonical, e.g. "SleepyTest"
std::string_view smell_display_name(SmellKind kind); ///< e.g. "Sleepy Test"
std::optional<SmellKind> parse_smell_kind(std::string_view name);

struct TestId {
  std::string project;
  std::string class_name; ///< package-qualified
  std::string method;

  /// Join key used by label files: "pkg.Class#method".
  std::string str() const { return class_name + "#" + method; }

  friend bool operator==(const TestId&, const TestId&) = default;
  friend auto operator<=>(const TestId&, const TestId&) = default;
};

enum class FindingScope { Method, Class };

struct SmellFinding {
  SmellKind kind;
  TestId test_id;
  std::vector<std::size_t> evidence_lines;
  FindingScope scope = FindingScope::Method;

  friend bool operator==(const SmellFinding&, const SmellFinding&) = default;
};

struct SmellReport {
  TestId test_id;
  std::array<bool, kSmellKindCount> presence{};
  std::vector<SmellFinding> findings;
  std::size_t smells_count = 0;
  std::vector<SmellKind> skipped_rules; ///< rules that could not run (unresolved production class)
  std::size_t loc = 0;

  bool has(SmellKind kind) const { return presence[static_cast<std::size_t>(kind)]; }
  std::set<SmellKind> present() const;

  friend bool operator==(const SmellReport&, const SmellReport&) = default;
};

struct DetectorConfig {
  std::size_t verbose_threshold = 123;
  std::set<std::string, std::less<>> mystery_guest_types = {
      "File", "FileReader", "FileWriter", "FileInputStream", "FileOutputStream",
      "RandomAccessFile", "Connection", "Statement", "PreparedStatement", "ResultSet"};
  std::set<SmellKind> disabled_rules;
};

bool detect_assertion_roulette(const TestMethodFacts& m);
bool detect_conditional_test_logic(const TestMethodFacts& m);
bool detect_constructor_initialization(const TestClassFacts& c);
bool detect_default_test(const TestClassFacts& c);
bool detect_duplicate_assert(const TestMethodFacts& m);
/// nullopt when the production class is unresolved (rule skipped).
std::optional<bool> detect_eager_test(const TestMethodFacts& m, const ProductionFacts& p);
bool detect_empty_test(const TestMethodFacts& m);
bool detect_general_fixture(const TestClassFacts& c);
bool detect_ignored_test(const TestClassFacts& c, const TestMethodFacts& m);
/// Names of the test methods sharing a production call with a sibling;
/// nullopt when the production class is unresolved.
std::optional<std::set<std::string>> detect_lazy_test(const TestClassFacts& c, const ProductionFacts& p);
bool detect_magic_number_test(const TestMethodFacts& m);
bool detect_mystery_guest(const TestMethodFacts& m, const DetectorConfig& config = {});
bool detect_redundant_print(const TestMethodFacts& m);
bool detect_redundant_assertion(const TestMethodFacts& m);
bool detect_resource_optimism(const TestMethodFacts& m);
bool detect_sensitive_equality(const TestMethodFacts& m);
bool detect_sleepy_test(const TestMethodFacts& m);
bool detect_unknown_test(const TestMethodFacts& m);
bool detect_verbose_test(const TestMethodFacts& m, const DetectorConfig& config = {});

/// One report per test method of `c`, in source order.
std::vector<SmellReport> build_smell_report(const TestClassFacts& c, const ProductionFacts& p,
                                            const DetectorConfig& config = {}, std::string_view project = {});

} // namespace smellsift
