#pragma once

#include <string_view>

#include "langcc/ast.hpp"
#include "langcc/lang_spec.hpp"

namespace langcc {

/// Converts the AST produced by the generated metalanguage parser (from
/// grammars/meta.lang) into a LangSpec, then resolves and validates it like
/// the hand-written frontend. Throws SpecError on invalid specs.
LangSpec meta_ast_to_spec(const Node& root, std::string_view source);

}  // namespace langcc
