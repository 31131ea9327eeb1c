#include "fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace langcc::testing {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string grammar_path(const std::string& name) { return std::string(LANGCC_GRAMMARS_DIR) + "/" + name; }

std::string grammar_source(const std::string& name) { return read_file(grammar_path(name)); }

std::string testdata_path(const std::string& name) { return std::string(LANGCC_TESTDATA_DIR) + "/" + name; }

std::vector<std::string> compiling_fixtures() {
  return {"calc.lang", "calc_prog.lang", "lrk.lang", "lists.lang", "blocks.lang", "modes.lang", "arith.lang", "brackets.lang", "meta.lang"};
}

CompiledLang compile_fixture(const std::string& name, bool rd) {
  CompileOptions opts;
  opts.rd = rd;
  CompileResult r = compile_lang_source(grammar_source(name), name.substr(0, name.find('.')), opts);
  if (!r.ok()) throw std::runtime_error(name + " has LR conflicts:\n" + r.conflict_report);
  return r.lang;
}

std::string join_tokens(const std::vector<std::string>& toks) {
  std::string out;
  for (const auto& t : toks) out += (out.empty() ? "" : " ") + t;
  return out;
}

}  // namespace langcc::testing
