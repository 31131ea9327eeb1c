#pragma once

#include <string_view>

#include "langcc/lang_spec.hpp"

namespace langcc {

/// Parses `.lang` source with the hand-written bootstrap frontend. The result
/// has references resolved and is validated; throws SpecError otherwise.
LangSpec parse_lang_spec(std::string_view source);

/// Syntax only: no reference resolution or validation.
LangSpec parse_lang_spec_syntax(std::string_view source);

/// resolve_refs + validate_spec, throwing SpecError on diagnostics.
void finalize_spec(LangSpec& spec);

}  // namespace langcc
