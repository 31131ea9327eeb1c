#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "langcc/meta_frontend.hpp"

using namespace langcc;
using langcc::testing::grammar_source;

namespace {

const char* kMinimalTail = R"(
lexer { main { m } mode m { top => { emit; } eof => { pop; } } }
parser { main { S } S <- x:int_lit; }
)";

std::string with_tokens(const std::string& tokens) {
  return "tokens {\n" + tokens + "\ntop <= int_lit;\n}\n" + kMinimalTail;
}

std::string first_error(const std::string& src) {
  try {
    parse_lang_spec(src);
  } catch (const SpecError& e) {
    return e.diagnostics().front().message;
  }
  return "";
}

}  // namespace

TEST(MetaFrontend, OpaqueAndAliasTokens) {
  auto spec = parse_lang_spec(with_tokens("digit <= `0`..`9`; int_lit <- `0` | (`1`..`9`) digit*;"));
  ASSERT_EQ(spec.token_decls.size(), 3u);
  const auto& digit = spec.token_decls[0];
  EXPECT_EQ(digit.kind, TokenDecl::Kind::Alias);
  EXPECT_EQ(digit.pattern.kind, RegexExpr::Kind::CharRange);
  EXPECT_EQ(digit.pattern.lo, U'0');
  EXPECT_EQ(digit.pattern.hi, U'9');
  const auto& lit = spec.token_decls[1];
  EXPECT_EQ(lit.kind, TokenDecl::Kind::Opaque);
  ASSERT_EQ(lit.pattern.kind, RegexExpr::Kind::Alt);
  const auto& tail = lit.pattern.items[1];
  ASSERT_EQ(tail.kind, RegexExpr::Kind::Concat);
  EXPECT_EQ(tail.items[1].kind, RegexExpr::Kind::Star);
  EXPECT_EQ(tail.items[1].items[0].name, "digit");
}

TEST(MetaFrontend, CyclicAliasRejected) {
  auto msg = first_error(with_tokens("a <= b; b <= a; int_lit <- `1`;"));
  EXPECT_NE(msg.find("cyclic alias"), std::string::npos) << msg;
}

TEST(MetaFrontend, OpaqueInsideDefinitionRejected) {
  auto msg = first_error(with_tokens("int_lit <- `1`; two <- int_lit int_lit;"));
  EXPECT_NE(msg.find("opaque token `int_lit` cannot be used"), std::string::npos) << msg;
  msg = first_error(with_tokens("int_lit <- `1`; grp <= int_lit; x <= grp `a`;"));
  EXPECT_NE(msg.find("groups opaque tokens"), std::string::npos) << msg;
}

TEST(MetaFrontend, LiteralEscapes) {
  auto spec = parse_lang_spec(with_tokens("int_lit <- `\\n` | `\\\\` | `\\`` | `'\"` | `\\u{3bb}`;"));
  const auto& alt = spec.token_decls[0].pattern;
  ASSERT_EQ(alt.items.size(), 5u);
  EXPECT_EQ(alt.items[0].text, U"\n");
  EXPECT_EQ(alt.items[1].text, U"\\");
  EXPECT_EQ(alt.items[2].text, U"`");
  EXPECT_EQ(alt.items[3].text, U"'\"");
  EXPECT_EQ(alt.items[4].text, U"λ");
}

TEST(MetaFrontend, MarkerStripping) {
  auto spec = parse_lang_spec(grammar_source("calc.lang"));
  const ParseTestDecl* marked = nullptr;
  for (const auto& t : spec.parse_tests)
    if (t.input == "7 + (5 + / 3)") marked = &t;
  ASSERT_NE(marked, nullptr);
  // "7 + (5 + " is 9 bytes; the marker sat right before the slash.
  ASSERT_TRUE(marked->expected_fail_offset.has_value());
  EXPECT_EQ(*marked->expected_fail_offset, 9u);
  const std::string original = "7 + (5 + ##/ 3)";
  EXPECT_EQ(original.size(), marked->input.size() + 2);
  std::string rebuilt = marked->input;
  rebuilt.insert(*marked->expected_fail_offset, "##");
  EXPECT_EQ(rebuilt, original);
}

TEST(MetaFrontend, CalcStructure) {
  auto spec = parse_lang_spec(grammar_source("calc.lang"));
  EXPECT_TRUE(validate_spec(spec).empty());
  EXPECT_EQ(spec.parser.main_nonterms(), (std::vector<std::string>{"Stmt", "Expr"}));
  ASSERT_EQ(spec.parser.prec.size(), 5u);
  EXPECT_EQ(spec.parser.prec[2].tag, PrecTag::Prefix);
  EXPECT_EQ(spec.parser.prec[4].rules.size(), 3u);
  EXPECT_TRUE(spec.parser.has_prop("name_strict"));
  const auto& assign = spec.parser.rules[0];
  EXPECT_EQ(assign.dotted(), "Stmt.Assign");
  ASSERT_EQ(assign.rhs.kind, ParseExpr::Kind::Seq);
  const auto& x = assign.rhs.items[0];
  ASSERT_EQ(x.kind, ParseExpr::Kind::Named);
  EXPECT_EQ(x.items[0].kind, ParseExpr::Kind::NontermRef);
  ASSERT_EQ(x.items[0].attrs.size(), 1u);
  EXPECT_EQ(x.items[0].attrs[0].name, "I");
  const auto& binop = spec.parser.rules[5].rhs;
  const auto& op = binop.items[2].items[0];
  ASSERT_EQ(op.kind, ParseExpr::Kind::Alt);
  EXPECT_EQ(op.labels, (std::vector<std::string>{"Add", "Sub"}));
  const auto& lit = spec.parser.rules[3];
  EXPECT_EQ(lit.path, (std::vector<std::string>{"Expr", "Lit", "Int_"}));
  EXPECT_EQ(spec.parser.rules[2].lhs_attrs, std::vector<std::string>{"I"});
  EXPECT_EQ(spec.lexer.modes.size(), 2u);
  EXPECT_EQ(spec.lexer.modes[0].rules[3].actions[0].kind, LexAction::Kind::Push);
}

TEST(MetaFrontend, ListSugarForms) {
  std::string src = R"(
tokens { a <- `a`; top <= a | `,` | `;`; }
lexer { main { m } mode m { top => { emit; } eof => { pop; } } }
parser {
  main { S }
  S.P <- x:#L[a::`,`_] y:#B[a::+`;`:?] z:#T2[a::++`,`::] w:a* v:a+ u:a?;
}
)";
  auto spec = parse_lang_spec(src);
  const auto& items = spec.parser.rules[0].rhs.items;
  EXPECT_EQ(items[0].items[0].kind, ParseExpr::Kind::List);
  EXPECT_EQ(items[0].items[0].min, 0);
  EXPECT_EQ(items[0].items[0].items[1].kind, ParseExpr::Kind::Seq);
  EXPECT_EQ(items[1].items[0].flavor, ListFlavor::B);
  EXPECT_EQ(items[1].items[0].min, 1);
  EXPECT_EQ(items[1].items[0].trailing, Trailing::Optional);
  EXPECT_EQ(items[2].items[0].flavor, ListFlavor::T2);
  EXPECT_EQ(items[2].items[0].min, 2);
  EXPECT_EQ(items[2].items[0].trailing, Trailing::Required);
  EXPECT_EQ(items[3].items[0].kind, ParseExpr::Kind::Star);
  EXPECT_EQ(items[4].items[0].kind, ParseExpr::Kind::Plus);
  EXPECT_EQ(items[5].items[0].kind, ParseExpr::Kind::Optional);
}

TEST(MetaFrontend, ValidationDiagnostics) {
  auto base = std::string(R"(
tokens { a <- `a`; top <= a; }
lexer { main { m } mode m { top => { emit; } eof => { pop; } } }
)");
  EXPECT_NE(first_error(base + "parser { main { S } S.X <- a; S.X <- a; }").find("duplicate rule `S.X`"),
            std::string::npos);
  EXPECT_NE(first_error(base + "parser { main { S } S <- b; }").find("undeclared name `b`"), std::string::npos);
  EXPECT_NE(first_error(base + "parser { main { T } S <- a; }").find("main nonterminal `T`"), std::string::npos);
  EXPECT_NE(first_error(base + "parser { main { S } S.X <- a; S.X.Y <- a; }").find("prefix"),
            std::string::npos);
  EXPECT_NE(first_error(base + "parser { main { S } S <- top; }").find("alias `top`"), std::string::npos);
  auto bad_lexer = std::string(R"(
tokens { a <- `a`; }
lexer { main { nope } mode m { a => { emit; push q; } } }
parser { main { S } S <- a; }
)");
  auto spec_error = [&] {
    try {
      parse_lang_spec(bad_lexer);
    } catch (const SpecError& e) {
      return e.diagnostics();
    }
    return std::vector<Diagnostic>{};
  }();
  ASSERT_EQ(spec_error.size(), 2u);
  EXPECT_NE(spec_error[0].message.find("main mode `nope`"), std::string::npos);
  EXPECT_NE(spec_error[1].message.find("push of undeclared mode `q`"), std::string::npos);
  EXPECT_EQ(spec_error[1].loc.line, 3);
}

TEST(MetaFrontend, SyntaxErrorLocation) {
  try {
    parse_lang_spec("tokens {\n  a <- ;\n}");
    FAIL();
  } catch (const SpecError& e) {
    EXPECT_EQ(e.diagnostics()[0].loc.line, 2);
    EXPECT_EQ(e.diagnostics()[0].loc.col, 8);
    EXPECT_EQ(e.format("x.lang"), "x.lang:2:8: expected a regular expression, found `;`\n");
  }
  EXPECT_THROW(parse_lang_spec("tokens { emit <- `a`; }"), SpecError);
}

TEST(MetaFrontend, RenderRoundTripOnFixtures) {
  for (const auto& name : langcc::testing::compiling_fixtures()) {
    SCOPED_TRACE(name);
    auto spec = parse_lang_spec(grammar_source(name));
    auto text = render_lang_spec(spec);
    auto again = parse_lang_spec(text);
    EXPECT_EQ(again, spec);
    EXPECT_EQ(render_lang_spec(again), text);
  }
}

TEST(MetaFrontend, MetaFixtureParsesCleanly) {
  auto spec = parse_lang_spec(grammar_source("meta.lang"));
  EXPECT_TRUE(validate_spec(spec).empty());
}
