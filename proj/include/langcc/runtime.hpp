#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "langcc/ast.hpp"
#include "langcc/compiled.hpp"

namespace langcc {

struct ParseError {
  enum class Kind { Lex, UnexpectedToken, UnexpectedEof };
  Kind kind = Kind::UnexpectedToken;
  std::string message;  // "Unexpected token: `/`"
  std::size_t begin = 0, end = 0;  // offending token
  std::string location;            // location_fmt_str of the offending token

  /// message, newline, location block.
  std::string format() const { return message + "\n" + location; }
};

struct ParseResult {
  NodePtr result;
  std::optional<ParseError> err;
  std::vector<Extract> extracts;
  bool is_success() const { return result != nullptr; }
};

/// Lexes and parses `input` starting from `start` (default: first main
/// nonterminal). Throws std::invalid_argument for an unknown start.
ParseResult parse(const CompiledLang& lang, std::string_view input,
                  std::optional<std::string_view> start = std::nullopt);

/// `Line L, column C:`, a blank line, the source line indented by two spaces,
/// and a caret line; ends with a newline.
std::string location_fmt_str(std::string_view input, std::size_t begin, std::size_t end);

}  // namespace langcc
