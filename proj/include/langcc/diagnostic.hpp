#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace langcc {

/// A position in a source file. Positions are metadata only: two locations
/// always compare equal, so structural equality of spec trees ignores them.
struct SourceLoc {
  int line = 0;
  int col = 0;
  friend bool operator==(const SourceLoc&, const SourceLoc&) { return true; }
};

struct Diagnostic {
  SourceLoc loc;
  std::string message;

  /// `file:line:col: message`
  std::string format(std::string_view file) const;
};

/// Raised by any compilation stage that rejects its input.
class SpecError : public std::runtime_error {
 public:
  explicit SpecError(std::vector<Diagnostic> diags);
  SpecError(SourceLoc loc, std::string message);

  const std::vector<Diagnostic>& diagnostics() const { return diags_; }
  std::string format(std::string_view file) const;

 private:
  std::vector<Diagnostic> diags_;
};

}  // namespace langcc
