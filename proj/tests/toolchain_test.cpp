#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include <sys/wait.h>

#include "fixtures.hpp"
#include "langcc/meta_convert.hpp"
#include "langcc/meta_frontend.hpp"
#include "langcc/runtime.hpp"

using namespace langcc;
using langcc::testing::grammar_path;
using langcc::testing::grammar_source;
using langcc::testing::read_file;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("langcc_test_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string str(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

struct Run {
  int status;
  std::string out, err;
};

Run run(const std::string& bin, const std::string& args, const TempDir& tmp) {
  const std::string out = tmp.str("stdout.txt"), err = tmp.str("stderr.txt");
  const int raw = std::system((bin + " " + args + " >" + out + " 2>" + err).c_str());
  return Run{WEXITSTATUS(raw), read_file(out), read_file(err)};
}

void write(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

}  // namespace

TEST(Cli, CompilesCalcAndWritesArtifacts) {
  TempDir tmp;
  auto r = run(LANGCC_BIN, grammar_path("calc.lang") + " " + tmp.path().string(), tmp);
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.err.find("calc.lang: LR(1)"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("15 of 15 embedded tests passed"), std::string::npos) << r.err;
  ASSERT_TRUE(fs::exists(tmp.path() / "calc.clang"));
  ASSERT_TRUE(fs::exists(tmp.path() / "calc.ast.schema"));
  CompiledLang lang = deserialize(read_file(tmp.str("calc.clang")));
  EXPECT_EQ(lang.name, "calc");
  EXPECT_EQ(lang.digest.size(), 64u);
  EXPECT_NE(read_file(tmp.str("calc.ast.schema")).find("data Expr"), std::string::npos);
}

TEST(Cli, ConflictsExitOneWithoutArtifacts) {
  TempDir tmp;
  const std::string report = tmp.str("report.txt");
  auto r = run(LANGCC_BIN, grammar_path("calc_noprec.lang") + " " + tmp.path().string() + " --conflicts-out " + report,
               tmp);
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("===== LR conflict"), std::string::npos);
  EXPECT_FALSE(fs::exists(tmp.path() / "calc_noprec.clang"));
  EXPECT_NE(read_file(report).find("===== LR conflict"), std::string::npos);
}

TEST(Cli, CompilesMetalanguage) {
  TempDir tmp;
  auto r = run(LANGCC_BIN, grammar_path("meta.lang") + " " + tmp.path().string(), tmp);
  EXPECT_EQ(r.status, 0) << r.err;
}

TEST(Cli, LrkNeedsSecondToken) {
  TempDir tmp;
  auto r = run(LANGCC_BIN, grammar_path("lrk.lang") + " --max-k 1", tmp);
  EXPECT_EQ(r.status, 1);
  r = run(LANGCC_BIN, grammar_path("lrk.lang"), tmp);
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.err.find("LR(2)"), std::string::npos);
}

TEST(Cli, MissingOutputDirectory) {
  TempDir tmp;
  auto r = run(LANGCC_BIN, grammar_path("calc.lang") + " " + tmp.str("nope"), tmp);
  EXPECT_EQ(r.status, 2);
  r = run(DATACC_BIN, tmp.str("x.data") + " " + tmp.str("nope"), tmp);
  EXPECT_EQ(r.status, 2);
}

TEST(Cli, ParseAndFormat) {
  TempDir tmp;
  write(tmp.str("ok.txt"), "x=1+2");
  write(tmp.str("bad.txt"), "7 + (5 + / 3)");
  const std::string calc = grammar_path("calc.lang");
  auto r = run(LANGCC_BIN, calc + " --no-test --parse " + tmp.str("ok.txt"), tmp);
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("Stmt::Assign{"), std::string::npos) << r.out;
  r = run(LANGCC_BIN, calc + " --no-test --format " + tmp.str("ok.txt"), tmp);
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "x = 1 + 2\n");
  r = run(LANGCC_BIN, calc + " --no-test --parse " + tmp.str("bad.txt"), tmp);
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("Unexpected token: `/`\nLine 1, column 10:"), std::string::npos) << r.err;
  r = run(LANGCC_BIN, calc + " --no-test --start Expr --parse " + tmp.str("ok.txt"), tmp);
  EXPECT_EQ(r.status, 1);
}

TEST(Cli, ParsesWithCompiledArtifact) {
  TempDir tmp;
  ASSERT_EQ(run(LANGCC_BIN, grammar_path("calc.lang") + " " + tmp.path().string(), tmp).status, 0);
  write(tmp.str("in.txt"), "1 + 2");
  auto r = run(LANGCC_BIN, tmp.str("calc.clang") + " --start Expr --parse " + tmp.str("in.txt"), tmp);
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("Expr::BinOp1{"), std::string::npos);
}

TEST(Cli, Dumps) {
  TempDir tmp;
  auto r = run(LANGCC_BIN, grammar_path("lrk.lang") + " --no-test --dump-lexer --dump-grammar --dump-lr", tmp);
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("mode body"), std::string::npos);
  EXPECT_NE(r.out.find("A -> eps"), std::string::npos);
  EXPECT_NE(r.out.find("LR(2): 6 states"), std::string::npos) << r.out;
}

TEST(Cli, Datacc) {
  TempDir tmp;
  write(tmp.str("shapes.data"), "data Shape { Circle { r: integer; } Square { side: integer; } }\n");
  auto r = run(DATACC_BIN, tmp.str("shapes.data") + " " + tmp.path().string(), tmp);
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(read_file(tmp.str("shapes.schema")).find("Circle"), std::string::npos);
  write(tmp.str("bad.data"), "data A { x: Missing; }\n");
  r = run(DATACC_BIN, tmp.str("bad.data") + " " + tmp.path().string(), tmp);
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("bad.data:1:"), std::string::npos) << r.err;
}

TEST(Toolchain, SerializationRoundTrip) {
  for (const auto& name : langcc::testing::compiling_fixtures()) {
    CompiledLang lang = langcc::testing::compile_fixture(name);
    const std::string text = serialize(lang);
    CompiledLang back = deserialize(text);
    EXPECT_TRUE(back == lang) << name;
    EXPECT_EQ(serialize(back), text) << name;
  }
  EXPECT_THROW(deserialize("{}"), std::runtime_error);
  EXPECT_THROW(deserialize("not json"), std::runtime_error);
}

TEST(Toolchain, Bootstrap) {
  auto b = bootstrap_check(grammar_source("meta.lang"));
  EXPECT_TRUE(b.pass) << b.detail;
}

TEST(Toolchain, GeneratedMetaParserAgreesOnEveryFixture) {
  CompiledLang meta = build_compiled(parse_lang_spec(grammar_source("meta.lang")), 1, false);
  for (const char* name : {"calc.lang", "calc_noprec.lang", "calc_prog.lang", "lrk.lang", "lists.lang",
                           "blocks.lang", "modes.lang", "arith.lang", "brackets.lang"}) {
    const std::string src = grammar_source(name);
    auto r = parse(meta, src);
    ASSERT_TRUE(r.is_success()) << name << "\n" << r.err->format();
    EXPECT_TRUE(meta_ast_to_spec(*r.result, src) == parse_lang_spec(src)) << name;
  }
}

TEST(Toolchain, ConverterRejectsWhatTheFrontendRejects) {
  CompiledLang meta = build_compiled(parse_lang_spec(grammar_source("meta.lang")), 1, false);
  const char* bad[] = {
      "tokens { a <- `\\q`; } lexer { main { m } mode m { a => { emit; } } } parser { main { S } S <- a; }",
      "tokens { a <- `a`; } tokens { } lexer { main { m } mode m { a => { emit; } } } parser { main { S } S <- a; }",
      "tokens { a <- `a`; } parser { main { S } S <- a; }",
      "tokens { a <- `ab`..`c`; } lexer { main { m } mode m { a => { emit; } } } parser { main { S } S <- a; }",
      "tokens { a <- `a`; } lexer { main { m } mode m { a => { emit; } } } parser { main { S } S <- ~`a`; }",
      "tokens { a <- `a`; } lexer { main { m } mode m { a => { emit; } } } parser { main { S } S <- b; }",
  };
  for (const char* src : bad) {
    EXPECT_THROW(parse_lang_spec(src), SpecError) << src;
    auto r = parse(meta, src);
    ASSERT_TRUE(r.is_success()) << src;
    EXPECT_THROW(meta_ast_to_spec(*r.result, src), SpecError) << src;
  }
}

TEST(Toolchain, EmbeddedTestFailuresAreReported) {
  std::string src = grammar_source("arith.lang");
  src.replace(src.find("`x+x*x`;"), 8, "`x + x`;");
  src.replace(src.find("LR(1);"), 6, "LR(1); LR(7);");
  CompileResult r = compile_lang_source(src, "arith");
  ASSERT_TRUE(r.ok());
  TestReport report;
  report.compile_tests = run_compile_tests(r.spec, false);
  report.tests = run_test_stanza(r.lang, r.spec.parse_tests);
  EXPECT_FALSE(report.ok());
  const std::string text = report.render();
  EXPECT_NE(text.find("compile_test LR(7): FAIL (k above 4 is not supported)"), std::string::npos) << text;
  EXPECT_NE(text.find("test `x + x`: FAIL"), std::string::npos) << text;
  EXPECT_NE(text.find("5 of 7 embedded tests passed"), std::string::npos) << text;
}

TEST(Toolchain, CompilesDeterministically) {
  const std::string src = grammar_source("calc.lang");
  EXPECT_EQ(serialize(compile_lang_source(src, "calc").lang), serialize(compile_lang_source(src, "calc").lang));
}
