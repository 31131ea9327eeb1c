#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace langcc {

/// One past the largest Unicode scalar value; used as the virtual `eof` symbol.
inline constexpr char32_t kEofCodepoint = 0x110000;
inline constexpr char32_t kMaxCodepoint = 0x10FFFF;

struct LineCol {
  int line = 1;
  int col = 1;
  friend bool operator==(const LineCol&, const LineCol&) = default;
};

/// Decodes one UTF-8 sequence starting at `pos`, advancing `pos`.
/// Malformed bytes decode as U+FFFD and advance by one byte.
char32_t decode_utf8(std::string_view s, std::size_t& pos);

void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(char32_t cp);
std::string encode_utf8(std::u32string_view s);
std::u32string decode_utf8_all(std::string_view s);

/// 1-based line and codepoint column of a byte offset.
LineCol token_bounds_to_linecol(std::string_view input, std::size_t offset);

/// Precomputed line starts for repeated offset -> line/col queries.
class LineIndex {
 public:
  explicit LineIndex(std::string_view input);

  LineCol at(std::size_t offset) const;
  std::string_view line_text(int line) const;
  int line_count() const { return static_cast<int>(starts_.size()); }

 private:
  std::string_view input_;
  std::vector<std::size_t> starts_;
  std::vector<bool> ascii_;
};

/// Renders a codepoint for diagnostics: printable ASCII verbatim, others as \u{..}.
std::string describe_codepoint(char32_t cp);

/// Escapes a string for inclusion in a backtick literal.
std::string escape_backtick(std::string_view s);

/// Escapes a string for inclusion in a double-quoted debug rendering.
std::string escape_quoted(std::string_view s);

}  // namespace langcc
