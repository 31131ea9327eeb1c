#include "langcc/diagnostic.hpp"

namespace langcc {

std::string Diagnostic::format(std::string_view file) const {
  std::string out(file);
  out += ':' + std::to_string(loc.line) + ':' + std::to_string(loc.col) + ": ";
  out += message;
  return out;
}

namespace {

std::string join_messages(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    if (!out.empty()) out += '\n';
    out += std::to_string(d.loc.line) + ':' + std::to_string(d.loc.col) + ": " + d.message;
  }
  return out;
}

}  // namespace

SpecError::SpecError(std::vector<Diagnostic> diags)
    : std::runtime_error(join_messages(diags)), diags_(std::move(diags)) {}

SpecError::SpecError(SourceLoc loc, std::string message)
    : SpecError(std::vector<Diagnostic>{Diagnostic{loc, std::move(message)}}) {}

std::string SpecError::format(std::string_view file) const {
  std::string out;
  for (const auto& d : diags_) {
    out += d.format(file);
    out += '\n';
  }
  return out;
}

}  // namespace langcc
