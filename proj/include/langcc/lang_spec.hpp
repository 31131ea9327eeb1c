#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "langcc/diagnostic.hpp"

namespace langcc {

struct RegexExpr {
  enum class Kind { Literal, CharRange, Concat, Alt, Diff, Star, Plus, Optional, Ref, Wildcard, Eof };
  Kind kind = Kind::Literal;
  std::u32string text;  // Literal
  char32_t lo = 0, hi = 0;  // CharRange
  std::string name;  // Ref
  std::vector<RegexExpr> items;  // Concat/Alt (n), Diff (2), Star/Plus/Optional (1)
  SourceLoc loc;

  friend bool operator==(const RegexExpr&, const RegexExpr&) = default;
};

struct TokenDecl {
  enum class Kind { Opaque, Alias };
  std::string name;
  Kind kind = Kind::Opaque;
  RegexExpr pattern;
  SourceLoc loc;
  friend bool operator==(const TokenDecl&, const TokenDecl&) = default;
};

struct LexAction {
  enum class Kind { Emit, Pass, Push, Pop, PopExtract, PopEmit };
  Kind kind = Kind::Emit;
  std::string arg;  // Push: mode, PopEmit: token
  SourceLoc loc;
  friend bool operator==(const LexAction&, const LexAction&) = default;
};

struct LexRule {
  RegexExpr pattern;
  std::vector<LexAction> actions;
  SourceLoc loc;
  friend bool operator==(const LexRule&, const LexRule&) = default;
};

struct LexMode {
  std::string name;
  std::vector<LexRule> rules;
  SourceLoc loc;
  friend bool operator==(const LexMode&, const LexMode&) = default;
};

struct LexerSpec {
  std::vector<std::string> main_modes;  // exactly one when valid
  std::vector<LexMode> modes;
  SourceLoc loc;
  const LexMode* find_mode(std::string_view name) const;
  friend bool operator==(const LexerSpec&, const LexerSpec&) = default;
};

struct AttrReq {
  enum class Kind { Require, Negate, PrecStar };
  Kind kind = Kind::Require;
  std::string name;
  SourceLoc loc;
  friend bool operator==(const AttrReq&, const AttrReq&) = default;
};

enum class ListFlavor { L, B, B2, T, T2 };
enum class Trailing { None, Optional, Required };

std::string_view flavor_name(ListFlavor f);

struct ParseExpr {
  enum class Kind {
    Literal,     // `text`
    Ref,         // unresolved name (before finalize)
    TokenRef,    // opaque token
    NontermRef,  // nonterminal with attribute requirements
    Named,       // name:inner
    Seq,
    Alt,           // branches in items, labels parallel ("" = unlabeled)
    SingletonAlt,  // #Alt[label:inner]
    Star,
    Plus,
    Optional,
    List,   // #L/#B/... [elem :: delim end]
    Pass,   // @(`text`)
    Space,  // _
    Eps,
    Unfold,  // ~ref
  };
  Kind kind = Kind::Eps;
  std::string text;  // literal / pass text (UTF-8), ref name, field name, singleton label
  std::vector<ParseExpr> items;
  std::vector<std::string> labels;
  std::vector<AttrReq> attrs;
  ListFlavor flavor = ListFlavor::L;
  int min = 0;
  Trailing trailing = Trailing::None;
  SourceLoc loc;

  bool is_ref() const { return kind == Kind::Ref || kind == Kind::TokenRef || kind == Kind::NontermRef; }
  friend bool operator==(const ParseExpr&, const ParseExpr&) = default;
};

enum class PrecTag { None, AssocLeft, AssocRight, Prefix, Postfix };
std::string_view prec_tag_name(PrecTag t);

struct PrecLine {
  std::vector<std::string> rules;  // dotted paths
  PrecTag tag = PrecTag::None;
  SourceLoc loc;
  friend bool operator==(const PrecLine&, const PrecLine&) = default;
};

/// `attr { Path[I, J]; }`: productions under Path declare the attributes.
struct AttrDecl {
  std::string path;
  std::vector<std::string> attrs;
  SourceLoc loc;
  friend bool operator==(const AttrDecl&, const AttrDecl&) = default;
};

struct RuleDecl {
  std::vector<std::string> path;
  std::vector<std::string> lhs_attrs;
  ParseExpr rhs;
  SourceLoc loc;

  const std::string& lhs() const { return path.front(); }
  std::string dotted() const;
  friend bool operator==(const RuleDecl&, const RuleDecl&) = default;
};

struct ParserSpec {
  std::vector<std::vector<std::string>> main_decls;  // one entry per `main { .. }`
  std::vector<PrecLine> prec;
  std::vector<std::string> props;
  std::vector<AttrDecl> attr_decls;
  std::vector<RuleDecl> rules;
  SourceLoc loc;

  const std::vector<std::string>& main_nonterms() const;
  bool has_prop(std::string_view p) const;
  friend bool operator==(const ParserSpec&, const ParserSpec&) = default;
};

struct LrTestDecl {
  int k = 1;
  bool expect_success = true;
  SourceLoc loc;
  friend bool operator==(const LrTestDecl&, const LrTestDecl&) = default;
};

struct ParseTestDecl {
  std::string input;  // marker-stripped
  std::optional<std::size_t> expected_fail_offset;
  bool skip_roundtrip = false;
  SourceLoc loc;
  friend bool operator==(const ParseTestDecl&, const ParseTestDecl&) = default;
};

struct LangSpec {
  std::vector<TokenDecl> token_decls;
  LexerSpec lexer;
  ParserSpec parser;
  std::vector<LrTestDecl> compile_tests;
  std::vector<ParseTestDecl> parse_tests;

  const TokenDecl* find_token(std::string_view name) const;
  friend bool operator==(const LangSpec&, const LangSpec&) = default;
};

/// Words that cannot be used as identifiers in `.lang` files.
const std::vector<std::string>& reserved_words();
bool is_reserved_word(std::string_view s);

// --- construction helpers shared by both frontends ------------------------

/// Builds an alternation, turning top-level `name:e` branches into labels.
ParseExpr make_alt(std::vector<ParseExpr> branches, SourceLoc loc);
/// Builds a concatenation; a single item is returned as is.
ParseExpr make_seq(std::vector<ParseExpr> items, SourceLoc loc);
/// Attaches `[...]` requirements to a (possibly unfolded) reference.
ParseExpr apply_attr_reqs(ParseExpr e, std::vector<AttrReq> reqs, SourceLoc loc);
/// Strips the first `##` marker, recording its byte offset.
ParseTestDecl make_parse_test(std::string raw, bool skip_roundtrip, SourceLoc loc);

/// Resolves names (Ref -> TokenRef/NontermRef) in place.
void resolve_refs(LangSpec& spec);

/// Cross-reference and acyclicity checks; empty iff valid.
std::vector<Diagnostic> validate_spec(const LangSpec& spec);

/// Canonical source rendering; parse_lang_spec(render_lang_spec(s)) == s.
std::string render_lang_spec(const LangSpec& spec);
std::string render_regex(const RegexExpr& e);
std::string render_parse_expr(const ParseExpr& e);
std::string render_literal(std::string_view utf8);

}  // namespace langcc
