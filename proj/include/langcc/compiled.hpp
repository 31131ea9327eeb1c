#pragma once

#include <string>
#include <string_view>

#include "langcc/grammar.hpp"
#include "langcc/lexer.hpp"
#include "langcc/lr.hpp"

namespace langcc {

/// Everything the runtime and printer need, in one serializable bundle.
struct CompiledLang {
  static constexpr int kFormatVersion = 1;
  int version = kFormatVersion;
  std::string name;
  std::string digest;  // hex SHA-256 of the `.lang` source bytes
  int indent_unit = 4;
  CompiledLexer lexer;
  Grammar grammar;
  LrTables tables;
  friend bool operator==(const CompiledLang&, const CompiledLang&) = default;

  /// Index into grammar.mains of a main nonterminal, or -1.
  int main_index(std::string_view nt) const;
};

/// Canonical text form: JSON with sorted keys and a version field.
std::string serialize(const CompiledLang& c);
/// Throws std::runtime_error on malformed input or a version mismatch.
CompiledLang deserialize(std::string_view text);

}  // namespace langcc
