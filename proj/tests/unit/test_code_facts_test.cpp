#include <algorithm>
#include <filesystem>

#include <gtest/gtest.h>

#include "smellsift/error.hpp"
#include "smellsift/test_code_facts.hpp"

namespace smellsift {
namespace {

const std::filesystem::path kOozie = std::filesystem::path(SMELLSIFT_FIXTURES) / "oozie";

TestClassFacts facts_of(const std::string& source) { return extract_class_facts(parse_source_text("T.java", source)); }

const TestMethodFacts* find_method(const std::vector<TestMethodFacts>& methods, std::string_view name) {
  auto it = std::find_if(methods.begin(), methods.end(), [&](const auto& m) { return m.name == name; });
  return it == methods.end() ? nullptr : &*it;
}

TEST(SourceUnit, ClassWithTimeoutAnnotation) {
  const auto unit = parse_source_text("IssueTest.java", R"(package org.example;

import org.junit.Test;

public class IssueTest {
    @Test(timeout=2000)
    public void testIssue() throws Exception {
        Thread t = new Thread(() -> {});
        t.start();
        assertTrue(t.isAlive());
    }
}
)");
  EXPECT_EQ(unit.class_name, "IssueTest");
  EXPECT_EQ(unit.package_name, "org.example");
  const auto c = extract_class_facts(unit);
  ASSERT_EQ(c.methods.size(), 1u);
  EXPECT_EQ(c.methods[0].name, "testIssue");
  const auto* test = c.methods[0].annotation("Test");
  ASSERT_NE(test, nullptr);
  EXPECT_EQ(test->parameters.at("timeout"), "2000");
}

TEST(SourceUnit, MinimalClass) {
  const auto unit = parse_source_text("A.java", "class A {}");
  EXPECT_EQ(unit.class_name, "A");
  EXPECT_EQ(unit.line_count, 1u);
}

TEST(SourceUnit, OnlyCommentsIsParseError) {
  EXPECT_THROW(extract_class_facts(parse_source_text("C.java", "// nothing\n/* class B {} */\n")), ParseError);
}

TEST(SourceUnit, MissingFileIsIoError) {
  EXPECT_THROW(parse_source_unit("/nonexistent/dir/X.java"), IoError);
}

TEST(ClassFacts, OozieFixture) {
  const auto c = extract_class_facts(parse_source_unit(kOozie / "test/org/apache/oozie/lock/TestMemoryLocks.java"));
  EXPECT_TRUE(c.is_test_class);
  EXPECT_EQ(c.superclass_name, "XTestCase");
  EXPECT_FALSE(c.declares_constructor);
  ASSERT_EQ(c.methods.size(), 5u);
  const auto* m = find_method(c.methods, "testReadWriteLock");
  ASSERT_NE(m, nullptr);
  EXPECT_EQ(m->sleep_calls.size(), 2u);
  ASSERT_EQ(m->to_string_calls.size(), 1u);
  ASSERT_EQ(m->assertion_calls.size(), 1u);
  const auto& args = m->assertion_calls[0].arguments;
  EXPECT_TRUE(std::any_of(args.begin(), args.end(), [](const std::string& a) { return a.find("toString") != a.npos; }));
}

TEST(ClassFacts, ClassWithoutMethodsIsNotATestClass) {
  const auto c = facts_of("public class Plain { private int x; }");
  EXPECT_FALSE(c.is_test_class);
  EXPECT_TRUE(c.methods.empty());
}

TEST(ClassFacts, ConstructorDetection) {
  const auto with = facts_of("public class CTest { public CTest() { x = 1; } @Test public void t() { assertTrue(x); } }");
  EXPECT_TRUE(with.declares_constructor);
  const auto with_args = facts_of("public class CTest { CTest(int a) { } @Test public void t() { } }");
  EXPECT_TRUE(with_args.declares_constructor);
  const auto without = facts_of("public class CTest { public static CTest make() { return null; } @Test public void t() { } }");
  EXPECT_FALSE(without.declares_constructor);
}

TEST(ClassFacts, SetupFieldsComeFromFixtureMethods) {
  const auto c = facts_of(R"(public class FTest {
    private String a;
    private String b;
    private String c;
    @BeforeEach
    void prepare() { a = "1"; this.b = "2"; }
    void other() { c = "3"; }
    @Test public void t() { assertNotNull(a); }
})");
  EXPECT_EQ(c.setup_fields, (std::set<std::string>{"a", "b"}));
  for (const auto& f : c.setup_fields) EXPECT_TRUE(c.declared_fields.contains(f));
}

TEST(TestMethods, IdentificationRules) {
  const auto junit4 = facts_of("public class JTest { @Test public void a() { } public void helper() { } public void testLooksLikeOne() { } }");
  ASSERT_EQ(junit4.methods.size(), 1u);
  EXPECT_EQ(junit4.methods[0].name, "a");
  EXPECT_EQ(junit4.helper_methods.size(), 2u);

  const auto junit3 = facts_of("public class KTest extends TestCase { public void testOne() throws Exception { } "
                               "public void testWithArg(int x) { } public void setUp() { } }");
  ASSERT_EQ(junit3.methods.size(), 1u);
  EXPECT_EQ(junit3.methods[0].name, "testOne");
}

TEST(TestMethods, StatementAndControlFlowCounts) {
  const auto c = facts_of(R"(public class STest {
    @Test public void t() {
        int x = 0;
        for (int i = 0; i < 3; i++) { x += i; }
        while (x > 0) x--;
        String s = x > 1 ? "a" : "b";
        do { x++; } while (x < 2);
        assertTrue(x > 0);
    }
    @Test public void empty() {
        // only a comment
    }
})");
  const auto* t = find_method(c.methods, "t");
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->control_flow.for_loops, 1u);
  EXPECT_EQ(t->control_flow.while_loops, 2u);
  EXPECT_EQ(t->control_flow.conditional_expressions, 1u);
  EXPECT_GT(t->executable_statement_count, 0u);
  const auto* e = find_method(c.methods, "empty");
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->executable_statement_count, 0u);
}

TEST(TestMethods, ForEachIsSeparateFromFor) {
  const auto c = facts_of("public class ETest { @Test public void t() { for (String s : names) { use(s); } } }");
  EXPECT_EQ(c.methods[0].control_flow.foreach_loops, 1u);
  EXPECT_EQ(c.methods[0].control_flow.for_loops, 0u);
}

TEST(TestMethods, CallClassification) {
  const auto c = facts_of(R"(public class CallsTest {
    @Test public void t() throws Exception {
        System.out.println("x");
        System.err.write(3);
        Thread.sleep(10);
        TimeUnit.SECONDS.sleep(1);
        logger.info("x");
        String v = value.toString();
        String w = value.toString(16);
        File f = new File("a.txt");
        f.exists();
        Assert.assertEquals(5, v.length());
    }
})");
  const auto& m = c.methods[0];
  EXPECT_EQ(m.print_calls.size(), 2u);
  EXPECT_EQ(m.sleep_calls.size(), 1u);
  EXPECT_EQ(m.to_string_calls.size(), 1u);
  EXPECT_EQ(m.assertion_calls.size(), 1u);
  EXPECT_EQ(m.numeric_literal_assert_args, 1u);
  ASSERT_EQ(m.instantiations.size(), 1u);
  EXPECT_EQ(m.instantiations[0].type_name, "File");
  EXPECT_TRUE(m.file_locals.contains("f"));
  ASSERT_EQ(m.file_api_calls.size(), 1u);
  EXPECT_EQ(m.file_api_calls[0].method_name, "exists");
}

TEST(TestMethods, LineInvariantsHoldOnFixtures) {
  for (const auto& e : std::filesystem::recursive_directory_iterator(SMELLSIFT_FIXTURES)) {
    if (e.path().extension() != ".java") continue;
    const auto c = extract_class_facts(parse_source_unit(e.path()));
    std::set<std::string> signatures;
    for (const auto* group : {&c.methods, &c.helper_methods}) {
      for (const auto& m : *group) {
        SCOPED_TRACE(e.path().string() + " " + m.name);
        EXPECT_LE(m.start_line, m.end_line);
        EXPECT_LE(m.loc, m.end_line - m.start_line + 1);
        EXPECT_GE(m.loc, 1u);
        for (const auto* calls : {&m.assertion_calls, &m.other_calls})
          for (const auto& call : *calls) {
            EXPECT_GE(call.line, m.start_line);
            EXPECT_LE(call.line, m.end_line);
            EXPECT_FALSE(call.method_name.empty());
          }
        EXPECT_TRUE(signatures.insert(m.signature()).second) << "duplicate signature " << m.signature();
      }
    }
  }
}

TEST(TestMethods, ParsingIsDeterministic) {
  const auto path = kOozie / "test/org/apache/oozie/lock/TestMemoryLocks.java";
  const auto a = extract_class_facts(parse_source_unit(path));
  const auto b = extract_class_facts(parse_source_unit(path));
  EXPECT_EQ(a.methods, b.methods);
  EXPECT_EQ(a.helper_methods, b.helper_methods);
}

TEST(ProductionResolution, CandidateOrder) {
  EXPECT_EQ(production_name_candidates("TestMemoryLocks"), (std::vector<std::string>{"MemoryLocks"}));
  EXPECT_EQ(production_name_candidates("FooTest"), (std::vector<std::string>{"Foo"}));
  EXPECT_EQ(production_name_candidates("BarTests"), (std::vector<std::string>{"Bar"}));
  EXPECT_EQ(production_name_candidates("BazTestCase"), (std::vector<std::string>{"Baz"}));
}

TEST(ProductionResolution, Examples) {
  CorpusIndex index;
  index.emplace("MemoryLocks", parse_source_unit(kOozie / "prod/org/apache/oozie/lock/MemoryLocks.java"));
  index.emplace("Foo", parse_source_text("Foo.java", "public class Foo { public void run() { } }"));

  const auto oozie = extract_class_facts(parse_source_unit(kOozie / "test/org/apache/oozie/lock/TestMemoryLocks.java"));
  const auto p = resolve_production_class(oozie, index);
  EXPECT_TRUE(p.resolved);
  EXPECT_EQ(p.class_name, "MemoryLocks");
  EXPECT_TRUE(p.method_names.contains("getReadLock"));

  const auto foo = resolve_production_class(facts_of("public class FooTest { @Test public void t() { } }"), index);
  EXPECT_TRUE(foo.resolved);
  EXPECT_EQ(foo.class_name, "Foo");

  const auto orphan = resolve_production_class(facts_of("public class OrphanTest { @Test public void t() { } }"), {});
  EXPECT_FALSE(orphan.resolved);
  EXPECT_TRUE(orphan.method_names.empty());
}

TEST(ProductionResolution, BindingKeepsAssertionsSeparate) {
  CorpusIndex index;
  index.emplace("Foo", parse_source_text("Foo.java", "public class Foo { public int run() { return 1; } }"));
  auto c = facts_of("public class FooTest { @Test public void t() { Foo f = new Foo(); f.run(); assertEquals(f.run(), 1); } }");
  const auto p = resolve_production_class(c, index);
  c = bind_production_calls(c, p);
  const auto& m = c.methods[0];
  EXPECT_FALSE(m.production_calls.empty());
  for (const auto& call : m.production_calls)
    EXPECT_EQ(std::count(m.assertion_calls.begin(), m.assertion_calls.end(), call), 0);
}

} // namespace
} // namespace smellsift
