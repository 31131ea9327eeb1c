#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "langcc/ast.hpp"
#include "langcc/compiled.hpp"

namespace langcc {

/// Renders a node with the language's print templates. Throws
/// std::invalid_argument if the node does not match the templates.
std::string pretty_print(const CompiledLang& lang, const Node& n);

struct RoundtripResult {
  bool ok = false;
  std::string printed;
  std::optional<std::size_t> diverge;  // first differing byte offset
  std::optional<std::string> parse_error;
};

/// Parses `s`, prints the result, and compares byte for byte.
RoundtripResult roundtrip_check(const CompiledLang& lang, std::string_view s,
                                std::optional<std::string_view> start = std::nullopt);

}  // namespace langcc
