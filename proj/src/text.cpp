#include "langcc/text.hpp"

#include <algorithm>
#include <cstdio>

namespace langcc {

char32_t decode_utf8(std::string_view s, std::size_t& pos) {
  auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
  const unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + len > s.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (int i = 1; i < len; ++i) {
    const unsigned char b = byte(pos + i);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  pos += len;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(char32_t cp) {
  std::string out;
  append_utf8(out, cp);
  return out;
}

std::string encode_utf8(std::u32string_view s) {
  std::string out;
  for (char32_t c : s) append_utf8(out, c);
  return out;
}

std::u32string decode_utf8_all(std::string_view s) {
  std::u32string out;
  std::size_t pos = 0;
  while (pos < s.size()) out.push_back(decode_utf8(s, pos));
  return out;
}

LineCol token_bounds_to_linecol(std::string_view input, std::size_t offset) {
  offset = std::min(offset, input.size());
  LineCol lc;
  std::size_t pos = 0;
  while (pos < offset) {
    if (input[pos] == '\n') {
      ++lc.line;
      lc.col = 1;
      ++pos;
      continue;
    }
    decode_utf8(input, pos);
    ++lc.col;
  }
  return lc;
}

LineIndex::LineIndex(std::string_view input) : input_(input) {
  starts_.push_back(0);
  bool ascii = true;
  for (std::size_t i = 0; i < input.size(); ++i) {
    const auto c = static_cast<unsigned char>(input[i]);
    if (c >= 0x80) ascii = false;
    if (c == '\n') {
      ascii_.push_back(ascii);
      starts_.push_back(i + 1);
      ascii = true;
    }
  }
  ascii_.push_back(ascii);
}

LineCol LineIndex::at(std::size_t offset) const {
  offset = std::min(offset, input_.size());
  auto it = std::upper_bound(starts_.begin(), starts_.end(), offset);
  const auto line = static_cast<std::size_t>(it - starts_.begin()) - 1;
  const std::size_t start = starts_[line];
  LineCol lc{static_cast<int>(line) + 1, 1};
  if (ascii_[line]) {
    lc.col = static_cast<int>(offset - start) + 1;
    return lc;
  }
  std::size_t pos = start;
  while (pos < offset) {
    decode_utf8(input_, pos);
    ++lc.col;
  }
  return lc;
}

std::string_view LineIndex::line_text(int line) const {
  const auto idx = static_cast<std::size_t>(line - 1);
  if (idx >= starts_.size()) return {};
  const std::size_t start = starts_[idx];
  std::size_t end = idx + 1 < starts_.size() ? starts_[idx + 1] - 1 : input_.size();
  if (end > start && input_[end - 1] == '\r') --end;
  return input_.substr(start, end - start);
}

std::string describe_codepoint(char32_t cp) {
  if (cp == kEofCodepoint) return "<eof>";
  if (cp >= 0x20 && cp < 0x7F) return std::string(1, static_cast<char>(cp));
  if (cp == '\n') return "\\n";
  if (cp == '\t') return "\\t";
  if (cp == '\r') return "\\r";
  char buf[16];
  std::snprintf(buf, sizeof buf, "\\u{%X}", static_cast<unsigned>(cp));
  return buf;
}

std::string escape_backtick(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      case '`': out += "\\`"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string escape_quoted(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace langcc
