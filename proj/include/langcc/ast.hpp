#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "langcc/datacc.hpp"

namespace langcc {

struct CompiledLang;
struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Generic AST node. Records carry a variant path such as `Expr::Lit::Int_`;
/// enum labels are records without fields.
struct Node {
  enum class Kind { Record, Token, Seq, Option, Bool };
  Kind kind = Kind::Record;
  std::string path;                                     // Record
  std::vector<std::pair<std::string, NodePtr>> fields;  // Record
  std::vector<NodePtr> items;                           // Seq; Option holds 0 or 1
  std::string text;                                     // Token
  int token = -1;                                       // Token: token id
  bool flag = false;  // Bool: value; Seq: trailing delimiter was present
  std::size_t begin = 0, end = 0;

  const Node* field(std::string_view name) const;
};

/// `Stmt::Expr{x: Expr::Lit::Int_{val: "1"}}`
std::string debug_render(const Node& n);

/// Equality ignoring bounds.
bool structurally_equal(const Node& a, const Node& b);

/// Present iff the node's path has `path` as a component prefix (`.` or `::`
/// separators). Throws std::invalid_argument if `path` names no type in the
/// language's AST schema.
NodePtr node_downcast(const CompiledLang& lang, const NodePtr& n, std::string_view path);

/// Converts to a datacc value conforming to the language's AST schema.
data::DataValue to_data_value(const Node& n);

}  // namespace langcc
