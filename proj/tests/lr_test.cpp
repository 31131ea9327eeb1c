#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "langcc/lr.hpp"
#include "langcc/meta_frontend.hpp"
#include "langcc/runtime.hpp"
#include "oracle.hpp"

using namespace langcc;
using langcc::testing::compile_fixture;
using langcc::testing::grammar_source;

namespace {

CompiledLang build(const std::string& fixture, int k, bool rd = false) {
  return build_compiled(parse_lang_spec(grammar_source(fixture)), k, rd);
}

std::set<std::string> render_first(const Grammar& g, const std::vector<std::vector<int>>& strs) {
  std::set<std::string> out;
  for (const auto& s : strs) {
    std::string r;
    for (int t : s) r += (r.empty() ? "" : " ") + g.tokens.display(t);
    out.insert(r);
  }
  return out;
}

std::string strip_comments(const std::string& text) {
  std::istringstream in(text);
  std::string out;
  for (std::string line; std::getline(in, line);)
    if (line.empty() || line[0] != '#') out += line + "\n";
  return out;
}

}  // namespace

TEST(Lr, FirstOneOfCalcExpr) {
  CompiledLang calc = build("calc.lang", 1);
  const Grammar& g = calc.grammar;
  const int m = calc.main_index("Expr");
  ASSERT_GE(m, 0);
  const Slot& expr = g.prods[g.start_prods[m]].rhs[0];
  EXPECT_EQ(render_first(g, first_k(g, {expr}, 1)), (std::set<std::string>{"id", "int_lit", "`-`", "`(`"}));
}

TEST(Lr, FirstTwoOfOptionalPrefix) {
  CompiledLang lrk = build("lrk.lang", 2);
  const Grammar& g = lrk.grammar;
  const Production* pair = nullptr;
  for (const auto& p : g.prods)
    if (p.path == "S::Pair") pair = &p;
  ASSERT_NE(pair, nullptr);
  EXPECT_EQ(render_first(g, first_k(g, pair->rhs, 2)), (std::set<std::string>{"`a`", "`a` `a`"}));
}

TEST(Lr, LookaheadTwoResolvesEmptyReduction) {
  EXPECT_FALSE(build("lrk.lang", 1).tables.conflicts.empty());
  EXPECT_TRUE(build("lrk.lang", 2).tables.conflicts.empty());
}

TEST(Lr, ItemSetsMatchGolden) {
  CompiledLang k1 = build("lrk.lang", 1), k2 = build("lrk.lang", 2);
  const std::string dump = dump_lr(k1.grammar, k1.tables) + dump_lr(k2.grammar, k2.tables);
  EXPECT_EQ(dump, strip_comments(langcc::testing::read_file(langcc::testing::testdata_path("lrk_items.golden"))));
}

TEST(Lr, ClosureContainsKernel) {
  CompiledLang calc = build("calc.lang", 1);
  for (int s = 0; s < static_cast<int>(calc.tables.states.size()); ++s) {
    auto closure = lr_closure(calc.grammar, calc.tables, s);
    for (const auto& it : calc.tables.states[s].kernel)
      EXPECT_TRUE(std::find(closure.begin(), closure.end(), it) != closure.end());
  }
}

TEST(Lr, AmbiguityConflictsAtEveryK) {
  for (int k = 1; k <= 3; ++k) EXPECT_FALSE(build("calc_noprec.lang", k).tables.conflicts.empty()) << k;
}

TEST(Lr, ConstructionIsDeterministic) {
  EXPECT_EQ(build("calc.lang", 1).tables, build("calc.lang", 1).tables);
  EXPECT_EQ(dump_lr(build("lists.lang", 1).grammar, build("lists.lang", 1).tables),
            dump_lr(build("lists.lang", 1).grammar, build("lists.lang", 1).tables));
}

TEST(Lr, LookaheadAboveCapRejected) { EXPECT_THROW(build("lrk.lang", 5), SpecError); }

TEST(Lr, RecursiveDescentVariantParsesTheSame) {
  CompiledLang plain = build("calc.lang", 1), rd = build("calc.lang", 1, true);
  ASSERT_TRUE(rd.tables.conflicts.empty());
  bool has_recur = false;
  for (const auto& st : rd.tables.states)
    for (const auto& [la, a] : st.actions) has_recur = has_recur || a.kind == Action::Kind::Recur;
  EXPECT_TRUE(has_recur);
  for (const char* s : {"1", "x = 1 + 2 * -y", "(1 + 2) * (3 - -4)", "7 + (5 + / 3)", "x = "}) {
    auto a = parse(plain, s), b = parse(rd, s);
    ASSERT_EQ(a.is_success(), b.is_success()) << s;
    if (a.is_success()) {
      EXPECT_TRUE(structurally_equal(*a.result, *b.result)) << s;
    } else {
      EXPECT_EQ(a.err->format(), b.err->format()) << s;
    }
  }
}

TEST(Lr, TablesAgreeWithBruteForceRecognizer) {
  struct Case {
    const char* fixture;
    const char* cfg;
    std::vector<std::string> alphabet;
  };
  const Case cases[] = {
      {"arith.lang", "E -> E + E | E * E | x", {"x", "+", "*"}},
      {"brackets.lang", "S -> ( ) | ( L ) ; L -> S | L , S", {"(", ")", ","}},
      {"lrk.lang", "S -> A a ; A -> eps | a", {"a"}},
  };
  for (const auto& c : cases) {
    auto eq = oracle::check_equivalence(compile_fixture(c.fixture), oracle::parse_cfg(c.cfg), c.alphabet, 6);
    EXPECT_GT(eq.accepted, 0u) << c.fixture;
    EXPECT_TRUE(eq.mismatches.empty()) << c.fixture << ": " << eq.mismatches.front();
  }
}
