#include <iostream>

#include "CLI11.hpp"
#include "langcc/toolchain.hpp"

int main(int argc, char** argv) {
  CLI::App app{"datacc: check a .data datatype specification and write its schema"};
  std::string input, gen;
  app.add_option("input", input, "X.data source")->required();
  app.add_option("gen_path", gen, "existing output directory for X.schema")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  return langcc::cmd_datacc(input, gen, std::cout, std::cerr);
}
