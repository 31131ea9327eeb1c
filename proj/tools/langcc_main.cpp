#include <iostream>

#include "CLI11.hpp"
#include "langcc/toolchain.hpp"

int main(int argc, char** argv) {
  CLI::App app{"langcc: compile a .lang grammar into a lexer, LR tables and AST schema"};
  langcc::LangccArgs a;
  std::string gen, rd = "off";
  app.add_option("input", a.input, "X.lang source, or a compiled X.clang artifact")->required();
  app.add_option("gen_path", gen, "existing output directory for X.clang and X.ast.schema");
  app.add_option("--k", a.k, "first lookahead length tried")->check(CLI::Range(1, 4));
  app.add_option("--max-k", a.max_k, "largest lookahead length tried before reporting conflicts")
      ->check(CLI::Range(1, 4));
  app.add_option("--rd", rd, "conservative recursive-descent slots")->check(CLI::IsMember({"on", "off"}));
  app.add_flag("--dump-lexer", a.dump_lexer, "print the mode DFAs");
  app.add_flag("--dump-grammar", a.dump_grammar, "print the lowered grammar");
  app.add_flag("--dump-lr", a.dump_lr, "print LR states and actions");
  app.add_option("--conflicts-out", a.conflicts_out, "also write the conflict report to FILE");
  app.add_option("--parse", a.parse_file, "parse FILE and print its AST");
  app.add_option("--start", a.start, "start nonterminal for --parse/--format");
  app.add_option("--format", a.format_file, "parse FILE and print it in normal form");
  app.add_flag("--no-test", a.no_test, "skip the embedded compile_test and test stanzas");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (!gen.empty()) a.gen_path = gen;
  a.rd = rd == "on";
  if (a.max_k < a.k) a.max_k = a.k;
  return langcc::cmd_langcc(a, std::cout, std::cerr);
}
