#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "langcc/runtime.hpp"

using namespace langcc;
using langcc::testing::compile_fixture;

namespace {

const CompiledLang& calc() {
  static const CompiledLang c = compile_fixture("calc.lang");
  return c;
}

}  // namespace

TEST(Runtime, SingleLiteral) {
  auto r = parse(calc(), "1");
  ASSERT_TRUE(r.is_success());
  EXPECT_EQ(debug_render(*r.result), "Stmt::Expr{x: Expr::Lit::Int_{val: \"1\"}}");
}

TEST(Runtime, UnexpectedTokenBlock) {
  auto r = parse(calc(), "7 + (5 + / 3)");
  ASSERT_FALSE(r.is_success());
  EXPECT_EQ(r.err->kind, ParseError::Kind::UnexpectedToken);
  EXPECT_EQ(r.err->begin, 9u);
  EXPECT_EQ(r.err->format(),
            "Unexpected token: `/`\n"
            "Line 1, column 10:\n"
            "\n"
            "  7 + (5 + / 3)\n"
            "           ^    \n");
}

TEST(Runtime, UnexpectedEndOfInput) {
  auto r = parse(calc(), "x = ");
  ASSERT_FALSE(r.is_success());
  EXPECT_EQ(r.err->kind, ParseError::Kind::UnexpectedEof);
  EXPECT_EQ(r.err->message, "Unexpected end of input");
  EXPECT_EQ(r.err->begin, 4u);
}

TEST(Runtime, LexErrorBlock) {
  auto r = parse(calc(), "1 $");
  ASSERT_FALSE(r.is_success());
  EXPECT_EQ(r.err->kind, ParseError::Kind::Lex);
  EXPECT_EQ(r.err->message, "Unexpected character: `$`");
  EXPECT_EQ(r.err->location, "Line 1, column 3:\n\n  1 $\n    ^ \n");
}

TEST(Runtime, LocationOnLaterLine) {
  const std::string src = "ab\ncd é\nx";
  // `é` is two bytes but one column; byte 8 is the newline after it.
  EXPECT_EQ(location_fmt_str(src, 8, 9), "Line 2, column 5:\n\n  cd é\n      ^\n");
  EXPECT_EQ(location_fmt_str(src, 6, 8), "Line 2, column 4:\n\n  cd é\n     ^ \n");
  EXPECT_EQ(location_fmt_str(src, 3, 3), "Line 2, column 1:\n\n  cd é\n  ^    \n");
}

TEST(Runtime, StartOverride) {
  auto r = parse(calc(), "1 + 2", "Expr");
  ASSERT_TRUE(r.is_success());
  EXPECT_EQ(r.result->path, "Expr::BinOp1");
  EXPECT_FALSE(parse(calc(), "x = 1", "Expr").is_success());
  EXPECT_THROW(parse(calc(), "1", "Nope"), std::invalid_argument);
}

TEST(Runtime, NodeBounds) {
  const std::string src = "x = 1 + 2";
  auto r = parse(calc(), src);
  ASSERT_TRUE(r.is_success());
  const Node* y = r.result->field("y");
  ASSERT_NE(y, nullptr);
  EXPECT_EQ(src.substr(y->begin, y->end - y->begin), "1 + 2");
  EXPECT_EQ(r.result->begin, 0u);
  EXPECT_EQ(r.result->end, src.size());
}

TEST(Runtime, InlineLabelsAndBooleans) {
  auto r = parse(calc(), "-x^2");
  ASSERT_TRUE(r.is_success());
  EXPECT_EQ(debug_render(*r.result),
            "Stmt::Expr{x: Expr::UnaryPre{op: Expr_UnaryPre_op::Neg, x: Expr::BinOp3{x: Expr::Id{name: \"x\"}, "
            "op: Expr_BinOp3_op::Pow, y: Expr::Lit::Int_{val: \"2\"}}}}");
}

TEST(Runtime, Downcast) {
  auto r = parse(calc(), "1 + 2", "Expr");
  ASSERT_TRUE(r.is_success());
  EXPECT_NE(node_downcast(calc(), r.result, "Expr"), nullptr);
  EXPECT_NE(node_downcast(calc(), r.result, "Expr::BinOp1"), nullptr);
  EXPECT_EQ(node_downcast(calc(), r.result, "Expr::Lit"), nullptr);
  EXPECT_THROW(node_downcast(calc(), r.result, "Expr::Bogus"), std::invalid_argument);
}

TEST(Runtime, DataValueConformsToSchema) {
  auto r = parse(calc(), "x = (1 + 2) * -y");
  ASSERT_TRUE(r.is_success());
  auto v = to_data_value(*r.result);
  data::TypeExpr stmt;
  stmt.kind = data::TypeExpr::Kind::Named;
  stmt.name = "Stmt";
  EXPECT_EQ(data::validate_value(calc().grammar.schema, v, stmt), std::nullopt);
}

TEST(Runtime, ExtractsAreReturned) {
  auto r = parse(calc(), "x = 1 // note");
  ASSERT_TRUE(r.is_success());
  ASSERT_EQ(r.extracts.size(), 1u);
  EXPECT_EQ(r.extracts[0].text, "// note");
}

TEST(Runtime, ListsAndOptions) {
  CompiledLang lists = compile_fixture("lists.lang");
  auto r = parse(lists, "(a, b, )");
  ASSERT_TRUE(r.is_success());
  const Node* xs = r.result->field("xs");
  ASSERT_EQ(xs->kind, Node::Kind::Seq);
  EXPECT_EQ(xs->items.size(), 2u);
  EXPECT_TRUE(xs->flag);  // trailing delimiter present
  EXPECT_FALSE(parse(lists, "(a, b)").result->field("xs")->flag);

  EXPECT_EQ(debug_render(*parse(lists, "?").result), "Item::Maybe{x: None}");
  EXPECT_EQ(debug_render(*parse(lists, "?x").result), "Item::Maybe{x: Some(\"x\")}");
  EXPECT_EQ(parse(lists, "!..").result->field("marks")->items.size(), 2u);
  EXPECT_FALSE(parse(lists, "<a>").is_success());
}
