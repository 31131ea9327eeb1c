#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "langcc/conflict.hpp"
#include "langcc/meta_frontend.hpp"
#include "oracle.hpp"

using namespace langcc;
using langcc::testing::grammar_source;

namespace {

CompiledLang build(const std::string& fixture, int k, bool rd = false) {
  return build_compiled(parse_lang_spec(grammar_source(fixture)), k, rd);
}

std::vector<std::string> names(const Grammar& g, const std::vector<int>& toks) {
  std::vector<std::string> out;
  for (int t : toks) out.push_back(g.tokens.tokens[t].name);
  return out;
}

// Unconstrained calc over token names, for checking exemplar sentences.
const char* kCalcCfg =
    "S -> E | id = E ; E -> id | int_lit | - E | E B1 E | E B2 E | E ^ E | ( E ) ;"
    "B1 -> + | - ; B2 -> * | /";

}  // namespace

TEST(Conflict, EmptyPrefixExemplar) {
  CompiledLang c = build("lrk.lang", 1);
  auto ex = trace_conflicts(c.grammar, c.tables);
  ASSERT_EQ(ex.size(), 1u);
  EXPECT_TRUE(ex[0].prefix.empty());
  EXPECT_EQ(c.grammar.tokens.display(la::at(ex[0].la, 0)), "`a`");
  ASSERT_EQ(ex[0].actions.size(), 2u);
  EXPECT_EQ(render_action(c.grammar, c.tables, ex[0].actions[0]), "Reduce(A -> eps)");
  EXPECT_EQ(render_action(c.grammar, c.tables, ex[0].actions[1]), "Shift");
  EXPECT_EQ(names(c.grammar, ex[0].completions[0]), (std::vector<std::string>{"a"}));
  EXPECT_EQ(names(c.grammar, ex[0].completions[1]), (std::vector<std::string>{"a", "a"}));
}

TEST(Conflict, AssociativityExemplar) {
  CompiledLang c = build("calc_noprec.lang", 1);
  auto ex = trace_conflicts(c.grammar, c.tables);
  ASSERT_FALSE(ex.empty());
  const std::string report = render_conflict_report(c.grammar, c.tables, ex);
  EXPECT_NE(report.find("===== LR conflict 1 of " + std::to_string(ex.size())), std::string::npos);
  bool found = false;
  for (const auto& e : ex) {
    if (render_action(c.grammar, c.tables, e.actions[0]) != "Reduce(Expr -> Expr X0 Expr)") continue;
    if (names(c.grammar, e.prefix_terminals()) != std::vector<std::string>{"id", "+", "id"}) continue;
    if (c.grammar.tokens.display(la::at(e.la, 0)) != "`+`") continue;
    EXPECT_EQ(render_action(c.grammar, c.tables, e.actions[1]), "Shift");
    found = true;
  }
  EXPECT_TRUE(found) << report;
  EXPECT_NE(report.find("Reduce(Expr -> Expr X0 Expr)    Shift"), std::string::npos) << report;
}

TEST(Conflict, ExemplarSentencesAreInTheLanguage) {
  // Each action's completion, appended to the shared prefix, must be a
  // sentence of the (ambiguous) grammar: both readings are real.
  CompiledLang c = build("calc_noprec.lang", 1);
  const auto cfg = oracle::parse_cfg(kCalcCfg);
  for (const auto& e : trace_conflicts(c.grammar, c.tables)) {
    const auto prefix = names(c.grammar, e.prefix_terminals());
    for (std::size_t i = 0; i < e.actions.size(); ++i) {
      ASSERT_FALSE(e.budget_exceeded[i]);
      auto sentence = prefix;
      for (const auto& t : names(c.grammar, e.completions[i])) sentence.push_back(t);
      EXPECT_TRUE(oracle::earley_recognize(cfg, sentence)) << langcc::testing::join_tokens(sentence);
    }
    // Completions share the lookahead and then diverge.
    EXPECT_EQ(e.completions[0].front(), la::at(e.la, 0));
    EXPECT_EQ(e.completions[1].front(), la::at(e.la, 0));
  }
}

TEST(Conflict, RecursiveDescentPrefixShowsRecurSteps) {
  CompiledLang c = build("calc_noprec.lang", 1, true);
  const std::string report = render_conflict_report(c.grammar, c.tables, trace_conflicts(c.grammar, c.tables));
  EXPECT_NE(report.find("RecurStep("), std::string::npos) << report;
}

TEST(Conflict, ReportIsDeterministic) {
  CompiledLang a = build("calc_noprec.lang", 1), b = build("calc_noprec.lang", 1);
  EXPECT_EQ(render_conflict_report(a.grammar, a.tables, trace_conflicts(a.grammar, a.tables)),
            render_conflict_report(b.grammar, b.tables, trace_conflicts(b.grammar, b.tables)));
}

TEST(Conflict, ReportTrailerNamesEveryKTried) {
  CompileOptions opts;
  opts.max_k = 3;
  auto r = compile_lang_source(grammar_source("calc_noprec.lang"), "calc_noprec", opts);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.last_k_tried, 3);
  EXPECT_NE(r.conflict_report.find("at k=1; conflicts remain at every k up to 3"), std::string::npos)
      << r.conflict_report;
}

TEST(Conflict, SearchBudgetIsReported) {
  CompiledLang c = build("calc_noprec.lang", 1);
  TraceOptions tight;
  tight.budget = 1;
  auto ex = trace_conflicts(c.grammar, c.tables, tight);
  ASSERT_FALSE(ex.empty());
  bool exceeded = false;
  for (const auto& e : ex)
    for (bool b : e.budget_exceeded) exceeded = exceeded || b;
  EXPECT_TRUE(exceeded);
}
