#include "langcc/toolchain.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "langcc/meta_convert.hpp"
#include "langcc/meta_frontend.hpp"
#include "langcc/printer.hpp"
#include "langcc/runtime.hpp"
#include "langcc/sha256.hpp"
#include "langcc/text.hpp"

namespace langcc {

namespace fs = std::filesystem;

CompiledLang build_compiled(const LangSpec& spec, int k, bool rd, std::string name, std::string digest) {
  CompiledLang c;
  c.name = std::move(name);
  c.digest = std::move(digest);
  c.lexer = compile_lexer(spec);
  c.grammar = lower_grammar(spec, c.lexer.tokens);
  c.tables = build_lr(c.grammar, k, rd);
  return c;
}

CompileResult compile_lang_source(std::string_view source, std::string name, const CompileOptions& opts) {
  CompileResult r;
  r.spec = parse_lang_spec(source);
  CompiledLang base;
  base.name = std::move(name);
  base.digest = to_hex(sha256(source));
  base.lexer = compile_lexer(r.spec);
  base.grammar = lower_grammar(r.spec, base.lexer.tokens);
  const int last = std::max(opts.k, opts.max_k);
  std::optional<CompiledLang> first;
  for (int k = opts.k; k <= last; k++) {
    r.last_k_tried = k;
    CompiledLang c = base;
    c.tables = build_lr(c.grammar, k, opts.rd);
    if (c.tables.conflicts.empty()) {
      r.lang = std::move(c);
      return r;
    }
    if (!first) first = std::move(c);
  }
  r.lang = std::move(*first);
  r.exemplars = trace_conflicts(r.lang.grammar, r.lang.tables, opts.trace);
  r.conflict_report = render_conflict_report(r.lang.grammar, r.lang.tables, r.exemplars);
  std::ostringstream tail;
  tail << "\n" << r.lang.tables.conflicts.size() << " conflicting state/lookahead pairs at k=" << r.lang.tables.k;
  if (last > opts.k) tail << "; conflicts remain at every k up to " << last;
  tail << "\n";
  r.conflict_report += tail.str();
  return r;
}

bool TestReport::ok() const {
  for (const auto& t : compile_tests)
    if (!t.pass) return false;
  for (const auto& t : tests)
    if (!t.pass) return false;
  return true;
}

std::string TestReport::render() const {
  std::ostringstream os;
  std::size_t passed = 0, total = compile_tests.size() + tests.size();
  for (const auto& t : compile_tests) {
    os << "compile_test " << (t.decl.expect_success ? "" : "!") << "LR(" << t.decl.k << "): "
       << (t.pass ? "pass" : "FAIL");
    if (t.unsupported)
      os << " (k above " << la::kMaxK << " is not supported)\n";
    else
      os << " (" << t.conflicts << " conflicts)\n";
    passed += t.pass;
  }
  for (const auto& t : tests) {
    os << "test `" << escape_backtick(t.decl.input) << "`";
    if (t.decl.expected_fail_offset) os << " (fails at " << *t.decl.expected_fail_offset << ")";
    os << ": " << (t.pass ? "pass" : "FAIL");
    if (!t.pass && !t.detail.empty()) os << ": " << t.detail;
    os << "\n";
    passed += t.pass;
  }
  os << passed << " of " << total << " embedded tests passed\n";
  return os.str();
}

std::vector<LrTestOutcome> run_compile_tests(const LangSpec& spec, bool rd) {
  std::vector<LrTestOutcome> out;
  if (spec.compile_tests.empty()) return out;
  CompiledLexer lexer = compile_lexer(spec);
  Grammar g = lower_grammar(spec, lexer.tokens);
  std::map<int, std::size_t> conflicts;
  for (const auto& d : spec.compile_tests) {
    if (d.k > la::kMaxK) {
      LrTestOutcome o{d, false, 0};
      o.unsupported = true;
      out.push_back(std::move(o));
      continue;
    }
    if (!conflicts.count(d.k)) conflicts[d.k] = build_lr(g, d.k, rd).conflicts.size();
    LrTestOutcome o{d, false, conflicts[d.k]};
    o.pass = d.expect_success ? o.conflicts == 0 : o.conflicts > 0;
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<ParseTestOutcome> run_test_stanza(const CompiledLang& lang, const std::vector<ParseTestDecl>& tests) {
  std::vector<ParseTestOutcome> out;
  for (const auto& d : tests) {
    ParseTestOutcome o;
    o.decl = d;
    ParseResult pr = parse(lang, d.input);
    if (!pr.is_success()) o.fail_offset = pr.err->begin;
    if (d.expected_fail_offset) {
      if (pr.is_success()) {
        o.detail = "expected a parse failure at offset " + std::to_string(*d.expected_fail_offset) +
                   ", but parsing succeeded";
      } else if (*o.fail_offset != *d.expected_fail_offset) {
        o.detail = "expected a parse failure at offset " + std::to_string(*d.expected_fail_offset) +
                   ", got offset " + std::to_string(*o.fail_offset) + ": " + pr.err->message;
      } else {
        o.pass = true;
      }
    } else if (!pr.is_success()) {
      o.detail = "parse failed at offset " + std::to_string(*o.fail_offset) + ": " + pr.err->message;
    } else if (d.skip_roundtrip) {
      o.pass = true;
    } else {
      std::string printed = pretty_print(lang, *pr.result);
      if (printed == d.input) {
        o.pass = true;
      } else {
        std::size_t i = 0;
        while (i < printed.size() && i < d.input.size() && printed[i] == d.input[i]) i++;
        o.diverge = i;
        o.detail = "pretty-printed form differs at byte " + std::to_string(i) + ": `" + escape_backtick(printed) + "`";
      }
    }
    out.push_back(std::move(o));
  }
  return out;
}

BootstrapResult bootstrap_check(std::string_view meta_source) {
  BootstrapResult r;
  LangSpec hand;
  try {
    hand = parse_lang_spec(meta_source);
  } catch (const SpecError& e) {
    r.detail = "hand-written frontend rejected the metalanguage: " + e.format("meta.lang");
    return r;
  }
  CompiledLang meta = build_compiled(hand, 1, false, "meta");
  if (!meta.tables.conflicts.empty()) {
    r.detail = "metalanguage grammar has " + std::to_string(meta.tables.conflicts.size()) + " LR(1) conflicts";
    return r;
  }
  ParseResult pr = parse(meta, meta_source);
  if (!pr.is_success()) {
    r.detail = "generated metalanguage parser rejected the source: " + pr.err->format();
    return r;
  }
  LangSpec generated;
  try {
    generated = meta_ast_to_spec(*pr.result, meta_source);
  } catch (const SpecError& e) {
    r.detail = "converted spec is invalid: " + e.format("meta.lang");
    return r;
  }
  if (generated == hand) {
    r.pass = true;
    r.detail = "specs agree";
  } else {
    r.detail = "specs differ:\n--- hand-written frontend\n" + render_lang_spec(hand) + "--- generated parser\n" +
               render_lang_spec(generated);
  }
  return r;
}

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  return static_cast<bool>(out);
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

int parse_and_print(const CompiledLang& lang, const LangccArgs& args, std::ostream& out, std::ostream& err) {
  int status = 0;
  auto run = [&](const std::string& path, bool format) {
    auto src = read_file(path);
    if (!src) {
      err << "error: cannot read " << path << "\n";
      status = 2;
      return;
    }
    ParseResult pr;
    try {
      pr = parse(lang, *src, args.start ? std::optional<std::string_view>(*args.start) : std::nullopt);
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n";
      status = 2;
      return;
    }
    if (!pr.is_success()) {
      err << "Parse error: " << pr.err->format();
      status = std::max(status, 1);
      return;
    }
    out << (format ? pretty_print(lang, *pr.result) : debug_render(*pr.result)) << "\n";
  };
  if (args.parse_file) run(*args.parse_file, false);
  if (args.format_file) run(*args.format_file, true);
  return status;
}

void dumps(const CompiledLang& lang, const LangccArgs& args, std::ostream& out) {
  if (args.dump_lexer) out << dump_lexer(lang.lexer);
  if (args.dump_grammar) out << lang.grammar.dump();
  if (args.dump_lr) out << dump_lr(lang.grammar, lang.tables);
}

}  // namespace

int cmd_langcc(const LangccArgs& args, std::ostream& out, std::ostream& err) {
  if (args.k < 0 || args.k > la::kMaxK || args.max_k > la::kMaxK) {
    err << "error: lookahead must be between 0 and " << la::kMaxK << "\n";
    return 2;
  }
  auto src = read_file(args.input);
  if (!src) {
    err << "error: cannot read " << args.input << "\n";
    return 2;
  }
  const std::string file = fs::path(args.input).filename().string();
  if (ends_with(args.input, ".clang")) {
    CompiledLang lang;
    try {
      lang = deserialize(*src);
    } catch (const std::exception& e) {
      err << file << ": " << e.what() << "\n";
      return 1;
    }
    dumps(lang, args, out);
    return parse_and_print(lang, args, out, err);
  }
  std::string stem = fs::path(args.input).stem().string();
  if (args.gen_path && !fs::is_directory(*args.gen_path)) {
    err << "error: output directory " << *args.gen_path << " does not exist\n";
    return 2;
  }
  CompileOptions opts;
  opts.k = args.k;
  opts.max_k = args.max_k;
  opts.rd = args.rd;
  CompileResult res;
  try {
    res = compile_lang_source(*src, stem, opts);
  } catch (const SpecError& e) {
    err << e.format(file);
    return 1;
  }
  const CompiledLang& lang = res.lang;
  for (const auto& n : lang.grammar.notices)
    if (!args.rd || n.find("--rd=on") == std::string::npos) err << file << ": note: " << n << "\n";
  for (const auto& n : lang.tables.notices) err << file << ": note: " << n << "\n";
  dumps(lang, args, out);
  if (!res.ok()) {
    err << res.conflict_report;
    if (args.conflicts_out && !write_file(*args.conflicts_out, res.conflict_report)) {
      err << "error: cannot write " << *args.conflicts_out << "\n";
      return 2;
    }
    return 1;
  }
  err << file << ": LR(" << lang.tables.k << "), " << lang.tables.states.size() << " states\n";
  if (args.conflicts_out && !write_file(*args.conflicts_out, "")) {
    err << "error: cannot write " << *args.conflicts_out << "\n";
    return 2;
  }
  if (args.gen_path) {
    fs::path dir(*args.gen_path);
    if (!write_file((dir / (stem + ".clang")).string(), serialize(lang)) ||
        !write_file((dir / (stem + ".ast.schema")).string(), data::render_schema(lang.grammar.schema))) {
      err << "error: cannot write artifacts to " << *args.gen_path << "\n";
      return 2;
    }
  }
  int status = 0;
  if (!args.no_test) {
    TestReport report;
    report.compile_tests = run_compile_tests(res.spec, args.rd);
    report.tests = run_test_stanza(lang, res.spec.parse_tests);
    if (!report.compile_tests.empty() || !report.tests.empty()) err << report.render();
    if (!report.ok()) status = 1;
  }
  return std::max(status, parse_and_print(lang, args, out, err));
}

int cmd_datacc(const std::string& data_path, const std::string& gen_path, std::ostream& out, std::ostream& err) {
  (void)out;
  auto src = read_file(data_path);
  if (!src) {
    err << "error: cannot read " << data_path << "\n";
    return 2;
  }
  if (!fs::is_directory(gen_path)) {
    err << "error: output directory " << gen_path << " does not exist\n";
    return 2;
  }
  const std::string file = fs::path(data_path).filename().string();
  data::DatatypeSchema schema;
  try {
    schema = data::parse_data_spec(*src);
  } catch (const SpecError& e) {
    err << e.format(file);
    return 1;
  }
  auto diags = schema.validate();
  if (!diags.empty()) {
    for (const auto& d : diags) err << d.format(file) << "\n";
    return 1;
  }
  fs::path target = fs::path(gen_path) / (fs::path(data_path).stem().string() + ".schema");
  if (!write_file(target.string(), data::render_schema(schema))) {
    err << "error: cannot write " << target.string() << "\n";
    return 2;
  }
  err << file << ": " << schema.decls.size() << " types\n";
  return 0;
}

}  // namespace langcc
