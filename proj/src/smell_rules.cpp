#include "smellsift/smell_rules.hpp"

#include <algorithm>
#include <map>

namespace smellsift {

namespace {

struct KindNames {
  std::string_view canonical;
  std::string_view display;
};

constexpr std::array<KindNames, kSmellKindCount> kNames = {{
    {"AssertionRoulette", "Assertion Roulette"},
    {"ConditionalTestLogic", "Conditional Test Logic"},
    {"ConstructorInitialization", "Constructor Initialization"},
    {"DefaultTest", "Default Test"},
    {"DuplicateAssert", "Duplicate Assert"},
    {"EagerTest", "Eager Test"},
    {"EmptyTest", "Empty Test"},
    {"GeneralFixture", "General Fixture"},
    {"IgnoredTest", "Ignored Test"},
    {"LazyTest", "Lazy Test"},
    {"MagicNumberTest", "Magic Number Test"},
    {"MysteryGuest", "Mystery Guest"},
    {"RedundantPrint", "Redundant Print"},
    {"RedundantAssertion", "Redundant Assertion"},
    {"ResourceOptimism", "Resource Optimism"},
    {"SensitiveEquality", "Sensitive Equality"},
    {"SleepyTest", "Sleepy Test"},
    {"UnknownTest", "Unknown Test"},
    {"VerboseTest", "Verbose Test"},
}};

bool is_numeric_literal_text(const std::string& text) {
  const auto tokens = tokenize_java(text);
  if (tokens.size() == 1) return tokens[0].kind == TokenKind::Number;
  return tokens.size() == 2 && (tokens[0].is("-") || tokens[0].is("+")) && tokens[1].kind == TokenKind::Number;
}

std::set<std::string> called_production_methods(const TestMethodFacts& m, const ProductionFacts& p) {
  std::set<std::string> out;
  for (const auto& call : m.other_calls)
    if (p.method_names.contains(call.method_name)) out.insert(call.method_name);
  return out;
}

std::vector<CallSite> production_call_sites(const TestMethodFacts& m, const ProductionFacts& p) {
  std::vector<CallSite> out;
  if (!p.resolved) return out;
  for (const auto& call : m.other_calls)
    if (p.method_names.contains(call.method_name)) out.push_back(call);
  return out;
}

std::vector<std::size_t> lines_of(const std::vector<CallSite>& calls) {
  std::vector<std::size_t> lines;
  for (const auto& c : calls) lines.push_back(c.line);
  return lines;
}

bool is_file_checked(const TestMethodFacts& m, const std::string& local) {
  return std::any_of(m.file_api_calls.begin(), m.file_api_calls.end(), [&](const CallSite& c) {
    if (c.method_name != "exists" && c.method_name != "isFile" && c.method_name != "notExists") return false;
    if (c.receiver == local) return true;
    return c.receiver == "Files" && !c.arguments.empty() && c.arguments.front() == local;
  });
}

bool is_tautology(const CallSite& call) {
  if (call.arguments.empty()) return false;
  const std::string& last = call.arguments.back();
  return (call.method_name == "assertTrue" && last == "true") || (call.method_name == "assertFalse" && last == "false") ||
         (call.method_name == "assertNull" && last == "null");
}

} // namespace

const std::array<SmellKind, kSmellKindCount>& all_smell_kinds() {
  static const auto kinds = [] {
    std::array<SmellKind, kSmellKindCount> out{};
    for (std::size_t k = 0; k < kSmellKindCount; ++k) out[k] = static_cast<SmellKind>(k);
    return out;
  }();
  return kinds;
}

std::string_view smell_name(SmellKind kind) { return kNames[static_cast<std::size_t>(kind)].canonical; }
std::string_view smell_display_name(SmellKind kind) { return kNames[static_cast<std::size_t>(kind)].display; }

std::optional<SmellKind> parse_smell_kind(std::string_view name) {
  for (std::size_t k = 0; k < kSmellKindCount; ++k)
    if (kNames[k].canonical == name) return static_cast<SmellKind>(k);
  return std::nullopt;
}

std::set<SmellKind> SmellReport::present() const {
  std::set<SmellKind> out;
  for (SmellKind k : all_smell_kinds())
    if (has(k)) out.insert(k);
  return out;
}

bool detect_assertion_roulette(const TestMethodFacts& m) { return m.assertion_calls.size() >= 2; }

bool detect_conditional_test_logic(const TestMethodFacts& m) { return m.control_flow.total() > 0; }

bool detect_constructor_initialization(const TestClassFacts& c) { return c.declares_constructor; }

bool detect_default_test(const TestClassFacts& c) {
  return c.unit.class_name == "ExampleUnitTest" || c.unit.class_name == "ExampleInstrumentedTest";
}

bool detect_duplicate_assert(const TestMethodFacts& m) {
  const auto& calls = m.assertion_calls;
  for (std::size_t a = 0; a < calls.size(); ++a)
    for (std::size_t b = a + 1; b < calls.size(); ++b)
      if (calls[a].method_name == calls[b].method_name && calls[a].arguments == calls[b].arguments) return true;
  return false;
}

std::optional<bool> detect_eager_test(const TestMethodFacts& m, const ProductionFacts& p) {
  if (!p.resolved) return std::nullopt;
  return called_production_methods(m, p).size() >= 2;
}

bool detect_empty_test(const TestMethodFacts& m) { return m.executable_statement_count == 0; }

bool detect_general_fixture(const TestClassFacts& c) {
  if (c.setup_fields.empty()) return false;
  for (const auto& field : c.setup_fields)
    for (const auto& m : c.methods)
      if (!m.referenced_identifiers.contains(field)) return true;
  return false;
}

bool detect_ignored_test(const TestClassFacts& c, const TestMethodFacts& m) {
  return m.has_annotation("Ignore") || c.has_class_annotation("Ignore");
}

std::optional<std::set<std::string>> detect_lazy_test(const TestClassFacts& c, const ProductionFacts& p) {
  if (!p.resolved) return std::nullopt;
  std::map<std::string, std::set<std::string>> callers; // production method -> test methods
  for (const auto& m : c.methods)
    for (const auto& name : called_production_methods(m, p)) callers[name].insert(m.name);
  std::set<std::string> flagged;
  for (const auto& [name, tests] : callers)
    if (tests.size() >= 2) flagged.insert(tests.begin(), tests.end());
  return flagged;
}

bool detect_magic_number_test(const TestMethodFacts& m) { return m.numeric_literal_assert_args >= 1; }

bool detect_mystery_guest(const TestMethodFacts& m, const DetectorConfig& config) {
  return std::any_of(m.instantiations.begin(), m.instantiations.end(),
                     [&](const Instantiation& i) { return config.mystery_guest_types.contains(i.type_name); });
}

bool detect_redundant_print(const TestMethodFacts& m) { return !m.print_calls.empty(); }

bool detect_redundant_assertion(const TestMethodFacts& m) {
  return std::any_of(m.assertion_calls.begin(), m.assertion_calls.end(), [](const CallSite& c) {
    return (c.arguments.size() == 2 && c.arguments[0] == c.arguments[1]) || is_tautology(c);
  });
}

bool detect_resource_optimism(const TestMethodFacts& m) {
  return std::any_of(m.file_locals.begin(), m.file_locals.end(),
                     [&](const std::string& local) { return !is_file_checked(m, local); });
}

bool detect_sensitive_equality(const TestMethodFacts& m) { return !m.to_string_calls.empty(); }

bool detect_sleepy_test(const TestMethodFacts& m) { return !m.sleep_calls.empty(); }

bool detect_unknown_test(const TestMethodFacts& m) {
  if (!m.assertion_calls.empty()) return false;
  const AnnotationFact* test = m.annotation("Test");
  return test == nullptr || !test->parameters.contains("expected");
}

bool detect_verbose_test(const TestMethodFacts& m, const DetectorConfig& config) {
  return m.executable_statement_count > config.verbose_threshold;
}

std::vector<SmellReport> build_smell_report(const TestClassFacts& c, const ProductionFacts& p,
                                            const DetectorConfig& config, std::string_view project) {
  std::vector<SmellReport> reports;
  const bool ctor = detect_constructor_initialization(c);
  const bool default_test = detect_default_test(c);
  const bool fixture = detect_general_fixture(c);
  const auto lazy = detect_lazy_test(c, p);

  for (const auto& m : c.methods) {
    SmellReport r;
    r.test_id = TestId{std::string(project), c.unit.qualified_name(), m.name};
    r.loc = m.loc;

    auto mark = [&](SmellKind kind, bool present, std::vector<std::size_t> evidence,
                    FindingScope scope = FindingScope::Method) {
      if (!present || config.disabled_rules.contains(kind)) return;
      if (evidence.empty()) evidence.push_back(m.start_line);
      r.presence[static_cast<std::size_t>(kind)] = true;
      r.findings.push_back(SmellFinding{kind, r.test_id, std::move(evidence), scope});
    };
    auto skip = [&](SmellKind kind) {
      if (!config.disabled_rules.contains(kind)) r.skipped_rules.push_back(kind);
    };

    mark(SmellKind::AssertionRoulette, detect_assertion_roulette(m), lines_of(m.assertion_calls));
    mark(SmellKind::ConditionalTestLogic, detect_conditional_test_logic(m), {});
    mark(SmellKind::ConstructorInitialization, ctor, c.constructor_lines, FindingScope::Class);
    mark(SmellKind::DefaultTest, default_test, {c.class_line}, FindingScope::Class);

    if (detect_duplicate_assert(m)) {
      std::vector<std::size_t> lines;
      const auto& calls = m.assertion_calls;
      for (std::size_t a = 0; a < calls.size(); ++a)
        for (std::size_t b = 0; b < calls.size(); ++b)
          if (a != b && calls[a].method_name == calls[b].method_name && calls[a].arguments == calls[b].arguments) {
            lines.push_back(calls[a].line);
            break;
          }
      mark(SmellKind::DuplicateAssert, true, lines);
    }

    const auto production_sites = production_call_sites(m, p);
    if (auto eager = detect_eager_test(m, p)) {
      mark(SmellKind::EagerTest, *eager, lines_of(production_sites));
    } else {
      skip(SmellKind::EagerTest);
    }

    mark(SmellKind::EmptyTest, detect_empty_test(m), {});
    mark(SmellKind::GeneralFixture, fixture, c.setup_lines, FindingScope::Class);

    if (detect_ignored_test(c, m)) {
      const AnnotationFact* a = m.annotation("Ignore");
      mark(SmellKind::IgnoredTest, true, {a ? a->line : c.class_line},
           a ? FindingScope::Method : FindingScope::Class);
    }

    if (lazy) {
      mark(SmellKind::LazyTest, lazy->contains(m.name), lines_of(production_sites));
    } else {
      skip(SmellKind::LazyTest);
    }

    if (detect_magic_number_test(m)) {
      std::vector<std::size_t> lines;
      for (const auto& call : m.assertion_calls)
        if (std::any_of(call.arguments.begin(), call.arguments.end(), is_numeric_literal_text)) lines.push_back(call.line);
      mark(SmellKind::MagicNumberTest, true, lines);
    }

    if (detect_mystery_guest(m, config)) {
      std::vector<std::size_t> lines;
      for (const auto& i : m.instantiations)
        if (config.mystery_guest_types.contains(i.type_name)) lines.push_back(i.line);
      mark(SmellKind::MysteryGuest, true, lines);
    }

    mark(SmellKind::RedundantPrint, detect_redundant_print(m), lines_of(m.print_calls));

    if (detect_redundant_assertion(m)) {
      std::vector<std::size_t> lines;
      for (const auto& call : m.assertion_calls)
        if ((call.arguments.size() == 2 && call.arguments[0] == call.arguments[1]) || is_tautology(call))
          lines.push_back(call.line);
      mark(SmellKind::RedundantAssertion, true, lines);
    }

    mark(SmellKind::ResourceOptimism, detect_resource_optimism(m), lines_of(m.file_api_calls));
    mark(SmellKind::SensitiveEquality, detect_sensitive_equality(m), lines_of(m.to_string_calls));
    mark(SmellKind::SleepyTest, detect_sleepy_test(m), lines_of(m.sleep_calls));
    mark(SmellKind::UnknownTest, detect_unknown_test(m), {});
    mark(SmellKind::VerboseTest, detect_verbose_test(m, config), {});

    r.smells_count = static_cast<std::size_t>(std::count(r.presence.begin(), r.presence.end(), true));
    reports.push_back(std::move(r));
  }
  return reports;
}

} // namespace smellsift
