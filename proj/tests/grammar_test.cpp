#include <gtest/gtest.h>

#include <functional>

#include "fixtures.hpp"
#include "langcc/conflict.hpp"
#include "langcc/grammar.hpp"
#include "langcc/meta_frontend.hpp"
#include "langcc/runtime.hpp"
#include "oracle.hpp"

using namespace langcc;
using langcc::testing::compile_fixture;
using langcc::testing::grammar_source;

namespace {

Grammar lower(const std::string& src) {
  LangSpec spec = parse_lang_spec(src);
  return lower_grammar(spec, compile_lexer(spec).tokens);
}

const char* kListSpec = R"(
tokens { a <- `a`; }
lexer { main { m } mode m { a | `,` => { emit; } ` ` => { pass; } eof => { pop; } } }
parser { main { S } S.L <- xs:#L[a :: `,` _]; }
)";

}  // namespace

TEST(Grammar, AlternationBecomesSynthesizedNonterminal) {
  Grammar g = lower(grammar_source("calc.lang"));
  const int x0 = g.find_nt("X0");
  ASSERT_GE(x0, 0);
  EXPECT_EQ(display_nonterminal(g, x0), "X0=(`+` | `-`)");
  bool found = false;
  for (std::size_t p = 0; p < g.prods.size(); ++p)
    found = found || g.render_production(static_cast<int>(p)) == "Expr -> Expr X0 Expr";
  EXPECT_TRUE(found);
}

TEST(Grammar, ListLoweringMatchesListSemantics) {
  Grammar g = lower(kListSpec);
  bool has_empty = false, has_cons = false;
  for (const auto& p : g.prods) {
    has_empty = has_empty || p.kind == ProdKind::ListEmpty;
    has_cons = has_cons || p.kind == ProdKind::ListCons;
  }
  EXPECT_TRUE(has_empty);
  EXPECT_TRUE(has_cons);
  // Zero or more `a`, comma separated, no trailing comma.
  auto cfg = oracle::lowered_to_cfg(g);
  for (const auto& s : oracle::all_strings({"a", ","}, 5)) {
    bool want = s.size() % 2 == 1 || s.empty();
    for (std::size_t i = 0; i < s.size(); ++i) want = want && s[i] == (i % 2 == 0 ? "a" : ",");
    EXPECT_EQ(oracle::earley_recognize(cfg, s), want) << langcc::testing::join_tokens(s);
  }
}

TEST(Grammar, ListPrintsSpaceAfterDelimiter) {
  Grammar g = lower(kListSpec);
  bool found = false;
  for (const auto& nt : g.nts) {
    if (nt.kind != NtKind::List) continue;
    found = true;
    ASSERT_FALSE(nt.delim.empty());
    EXPECT_EQ(nt.delim.back().kind, TmplItem::Kind::Text);
    EXPECT_EQ(nt.delim.back().text, " ");
  }
  EXPECT_TRUE(found);
}

namespace {

// Precedence as a filter on trees of the unconstrained grammar: Add (level 0)
// takes >= 0 on the left and >= 1 on the right, Mul (level 1) >= 1 and >= 2,
// atoms sit at level 2.
const char* kAmbiguous = "E -> E + E | E * E | n";

int level(const oracle::Tree& t) { return t.rule == 0 ? 0 : t.rule == 1 ? 1 : 2; }

bool admissible(const oracle::Tree& t) {
  if (t.rule == 2) return true;
  const int l = level(t);
  return level(t.kids[0]) >= l && level(t.kids[2]) >= l + 1 && admissible(t.kids[0]) && admissible(t.kids[2]);
}

std::string shape(const oracle::Tree& t) {
  if (t.rule == 2) return "n";
  return std::string(t.rule == 0 ? "Add" : "Mul") + "(" + shape(t.kids[0]) + ", " + shape(t.kids[2]) + ")";
}

std::vector<std::string> admissible_shapes(const std::vector<std::string>& input) {
  std::vector<std::string> out;
  for (const auto& t : oracle::all_trees(oracle::parse_cfg(kAmbiguous), input))
    if (admissible(t)) out.push_back(shape(t));
  return out;
}

std::string calc_shape(const Node& n) {
  if (n.path == "Expr::BinOp1" || n.path == "Expr::BinOp2")
    return std::string(n.path == "Expr::BinOp1" ? "Add" : "Mul") + "(" + calc_shape(*n.field("x")) + ", " +
           calc_shape(*n.field("y")) + ")";
  return "n";
}

}  // namespace

TEST(Grammar, PrecedenceSelectsUniqueTree) {
  EXPECT_EQ(oracle::all_trees(oracle::parse_cfg(kAmbiguous), {"n", "+", "n", "*", "n"}).size(), 2u);
  EXPECT_EQ(admissible_shapes({"n", "+", "n", "*", "n"}), (std::vector<std::string>{"Add(n, Mul(n, n))"}));
  EXPECT_EQ(admissible_shapes({"n", "+", "n", "+", "n"}), (std::vector<std::string>{"Add(Add(n, n), n)"}));

  CompiledLang calc = compile_fixture("calc.lang");
  auto r = parse(calc, "1+2*3", "Expr");
  ASSERT_TRUE(r.is_success());
  EXPECT_EQ(calc_shape(*r.result), "Add(n, Mul(n, n))");
  r = parse(calc, "1+2+3", "Expr");
  ASSERT_TRUE(r.is_success());
  EXPECT_EQ(calc_shape(*r.result), "Add(Add(n, n), n)");
}

TEST(Grammar, PrecedenceFilterAgreesOnAllShortInputs) {
  CompiledLang calc = compile_fixture("calc.lang");
  for (const auto& s : oracle::all_strings({"n", "+", "*"}, 7)) {
    auto shapes = admissible_shapes(s);
    std::string src;
    for (const auto& t : s) src += (t == "n" ? "1" : t) + " ";
    auto r = parse(calc, src, "Expr");
    ASSERT_LE(shapes.size(), 1u);
    ASSERT_EQ(r.is_success(), shapes.size() == 1) << src;
    if (r.is_success()) EXPECT_EQ(calc_shape(*r.result), shapes[0]) << src;
  }
}

TEST(Grammar, UnfoldDefaultNotice) {
  Grammar g = lower(grammar_source("calc.lang"));
  EXPECT_FALSE(g.notices.empty());
}

TEST(Grammar, AstSchemaHasSourcePaths) {
  Grammar g = lower(grammar_source("calc.lang"));
  const std::string schema = data::render_schema(g.schema);
  EXPECT_NE(schema.find("data Expr"), std::string::npos);
  EXPECT_NE(schema.find("BinOp1"), std::string::npos);
  EXPECT_NE(schema.find("data Stmt"), std::string::npos);
}

TEST(Grammar, DumpIsStable) {
  EXPECT_EQ(lower(grammar_source("lists.lang")).dump(), lower(grammar_source("lists.lang")).dump());
}

TEST(Grammar, LiteralMustBeLexed) {
  const char* src = R"(
tokens { a <- `a`; }
lexer { main { m } mode m { a => { emit; } eof => { pop; } } }
parser { main { S } S <- a `;`; }
)";
  EXPECT_THROW(lower(src), SpecError);
}
