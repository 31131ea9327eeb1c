#pragma once

#include <string>
#include <vector>

#include "langcc/toolchain.hpp"

namespace langcc::testing {

std::string read_file(const std::string& path);
std::string grammar_path(const std::string& name);
std::string grammar_source(const std::string& name);
std::string testdata_path(const std::string& name);

/// Every `.lang` fixture under grammars/ that is expected to compile.
std::vector<std::string> compiling_fixtures();

/// Compiles a fixture with the CLI's default k search; fails loudly on conflicts.
CompiledLang compile_fixture(const std::string& name, bool rd = false);

/// Source file names as plain token names, separated by spaces.
std::string join_tokens(const std::vector<std::string>& toks);

}  // namespace langcc::testing
