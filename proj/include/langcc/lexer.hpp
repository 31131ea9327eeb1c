#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "langcc/lang_spec.hpp"
#include "langcc/regex.hpp"

namespace langcc {

/// Terminal symbols shared by the lexer and the parser. Id 0 is the end of
/// input; opaque tokens follow in declaration order, then literal tokens in
/// the order the lexer rules introduce them.
struct TokenInfo {
  std::string name;  // opaque name, or the literal text
  bool literal = false;
  friend bool operator==(const TokenInfo&, const TokenInfo&) = default;
};

struct TokenTable {
  std::vector<TokenInfo> tokens{{"$", false}};

  int size() const { return static_cast<int>(tokens.size()); }
  int find_opaque(std::string_view name) const;
  int find_literal(std::string_view text) const;
  int add_literal(std::string_view text);
  /// `id`, `` `+` ``, or `eof`.
  std::string display(int id) const;
  friend bool operator==(const TokenTable&, const TokenTable&) = default;
};

inline constexpr int kEofToken = 0;

struct LexTag {
  int rule = -1;
  int token = -1;  // constituent token for emit rules
  bool fallback = false;
  friend bool operator==(const LexTag&, const LexTag&) = default;
};

struct CompiledAction {
  LexAction::Kind kind = LexAction::Kind::Pass;
  int arg = -1;  // push: mode index, pop_emit: token id
  friend bool operator==(const CompiledAction&, const CompiledAction&) = default;
};

struct CompiledRule {
  std::vector<CompiledAction> actions;
  bool consumes = false;
  std::string pattern;  // rendered, for diagnostics and dumps
  friend bool operator==(const CompiledRule&, const CompiledRule&) = default;
};

struct CompiledMode {
  std::string name;
  std::vector<char32_t> class_starts;
  int num_states = 0;
  std::vector<int> trans;   // state * classes + class, -1 = dead
  std::vector<int> accept;  // tag index or -1
  std::vector<LexTag> tags;
  std::vector<CompiledRule> rules;
  std::array<int16_t, 128> ascii{};

  int num_classes() const { return static_cast<int>(class_starts.size()); }
  int eof_class() const { return num_classes() - 1; }
  int classify(char32_t cp) const;
  /// Fills `ascii` from `class_starts`.
  void index();
  friend bool operator==(const CompiledMode&, const CompiledMode&) = default;
};

struct CompiledLexer {
  TokenTable tokens;
  std::vector<CompiledMode> modes;
  int main_mode = 0;
  friend bool operator==(const CompiledLexer&, const CompiledLexer&) = default;
};

/// Two rules of one mode accept a common string.
class LexAmbiguityError : public SpecError {
 public:
  LexAmbiguityError(SourceLoc loc, std::string message, std::string mode, std::string witness)
      : SpecError(loc, std::move(message)), mode_(std::move(mode)), witness_(std::move(witness)) {}
  const std::string& mode() const { return mode_; }
  /// Shortest input (UTF-8) matched by both rules.
  const std::string& witness() const { return witness_; }

 private:
  std::string mode_, witness_;
};

CompiledLexer compile_lexer(const LangSpec& spec);

struct Token {
  int id = 0;
  std::size_t begin = 0, end = 0;
  std::string text;
  friend bool operator==(const Token&, const Token&) = default;
};

/// Text accumulated by a frame popped with `pop_extract` (e.g. comments).
struct Extract {
  int mode = 0;
  std::size_t begin = 0, end = 0;
  std::string text;
  friend bool operator==(const Extract&, const Extract&) = default;
};

struct LexError {
  enum class Kind { NoMatch, PrematureEmpty, StackNonemptyAtEof };
  Kind kind = Kind::NoMatch;
  std::size_t offset = 0;
  std::string mode;
  std::string message() const;
};

struct LexOutput {
  std::vector<Token> tokens;
  std::vector<Extract> extracts;
  std::optional<LexError> error;
  bool ok() const { return !error.has_value(); }
};

LexOutput lex(const CompiledLexer& lexer, std::string_view input);

/// Human-readable listing of every mode's DFA.
std::string dump_lexer(const CompiledLexer& lexer);

}  // namespace langcc
