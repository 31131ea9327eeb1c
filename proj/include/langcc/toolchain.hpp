#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "langcc/compiled.hpp"
#include "langcc/conflict.hpp"
#include "langcc/lang_spec.hpp"

namespace langcc {

struct CompileOptions {
  int k = 1;      // first lookahead length tried
  int max_k = 2;  // retry with k+1 up to this while conflicts remain
  bool rd = false;
  TraceOptions trace;
};

struct CompileResult {
  LangSpec spec;
  /// Tables at the accepted k; on failure, at the first k tried.
  CompiledLang lang;
  int last_k_tried = 1;
  std::vector<ConflictExemplar> exemplars;
  std::string conflict_report;
  bool ok() const { return lang.tables.conflicts.empty(); }
};

/// Lexer, grammar and tables for an already-parsed spec at a fixed k.
CompiledLang build_compiled(const LangSpec& spec, int k, bool rd, std::string name = "",
                            std::string digest = "");

/// Full pipeline from `.lang` source. Throws SpecError on frontend, lexer or
/// grammar errors; LR conflicts are reported in the result.
CompileResult compile_lang_source(std::string_view source, std::string name, const CompileOptions& opts = {});

struct LrTestOutcome {
  LrTestDecl decl;
  bool pass = false;
  std::size_t conflicts = 0;
  bool unsupported = false;  // k beyond the table builder's cap: always fails
};

struct ParseTestOutcome {
  ParseTestDecl decl;
  bool pass = false;
  std::optional<std::size_t> fail_offset;  // where parsing actually failed
  std::optional<std::size_t> diverge;      // round-trip mismatch offset
  std::string detail;
};

struct TestReport {
  std::vector<LrTestOutcome> compile_tests;
  std::vector<ParseTestOutcome> tests;
  bool ok() const;
  std::string render() const;
};

/// `LR(k)` passes iff the tables at k are conflict-free; `!LR(k)` iff not.
std::vector<LrTestOutcome> run_compile_tests(const LangSpec& spec, bool rd);

/// Success tests must parse and round-trip (unless `<<>>`); `##` tests must
/// fail at the marked offset.
std::vector<ParseTestOutcome> run_test_stanza(const CompiledLang& lang, const std::vector<ParseTestDecl>& tests);

struct BootstrapResult {
  bool pass = false;
  std::string detail;
};

/// Parses `meta_source` with the hand-written frontend and with the parser
/// generated from it, and compares the two specs.
BootstrapResult bootstrap_check(std::string_view meta_source);

struct LangccArgs {
  std::string input;  // `.lang` source, or a `.clang` artifact
  std::optional<std::string> gen_path;
  int k = 1;
  int max_k = 2;
  bool rd = false;
  bool dump_lexer = false;
  bool dump_grammar = false;
  bool dump_lr = false;
  std::optional<std::string> conflicts_out;
  std::optional<std::string> parse_file;
  std::optional<std::string> start;
  std::optional<std::string> format_file;
  bool no_test = false;
};

/// Exit status: 0 success, 1 conflicts/diagnostics/test or parse failures,
/// 2 IO or usage errors.
int cmd_langcc(const LangccArgs& args, std::ostream& out, std::ostream& err);
int cmd_datacc(const std::string& data_path, const std::string& gen_path, std::ostream& out, std::ostream& err);

}  // namespace langcc
