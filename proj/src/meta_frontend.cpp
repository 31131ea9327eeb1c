#include "langcc/meta_frontend.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "langcc/text.hpp"

namespace langcc {

namespace {

struct Tok {
  enum Kind { Ident, Keyword, Int, Str, Punct, End };
  Kind kind = End;
  std::string text;  // identifier / punct text, decoded literal contents
  SourceLoc loc;
};

// Longest first.
constexpr std::array<std::string_view, 35> kPuncts = {
    "::++", "<<>>", "#Alt", "::+", "#B2", "#T2", "::", ":?", "<-", "<=", "=>", "..",
    "#B",   "#T",   "#L",   ":",   ".",   "@",   "~",  "!",  "*",  "+",  "?",  "|",
    "-",    "(",    ")",    "[",   "]",   "{",   "}",  ";",  ",",  "=",  "_"};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Tok> run() {
    std::vector<Tok> out;
    while (true) {
      skip_trivia();
      SourceLoc loc{line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", loc});
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          id.push_back(advance());
        if (id == "_") {
          out.push_back({Tok::Punct, id, loc});
        } else {
          out.push_back({is_reserved_word(id) ? Tok::Keyword : Tok::Ident, id, loc});
        }
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string n;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          n.push_back(advance());
        out.push_back({Tok::Int, n, loc});
        continue;
      }
      if (c == '`') {
        out.push_back({Tok::Str, string_literal(loc), loc});
        continue;
      }
      bool matched = false;
      for (auto p : kPuncts) {
        if (src_.substr(pos_, p.size()) == p) {
          for (std::size_t i = 0; i < p.size(); ++i) advance();
          out.push_back({Tok::Punct, std::string(p), loc});
          matched = true;
          break;
        }
      }
      if (!matched) {
        std::size_t p = pos_;
        throw SpecError(loc, "unexpected character `" + describe_codepoint(decode_utf8(src_, p)) + "`");
      }
    }
  }

 private:
  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++col_;
    }
    return c;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string string_literal(SourceLoc loc) {
    advance();  // opening backtick
    std::string out;
    while (true) {
      if (pos_ >= src_.size()) throw SpecError(loc, "unterminated literal");
      const char c = advance();
      if (c == '`') return out;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (pos_ >= src_.size()) throw SpecError(loc, "unterminated literal");
      const char e = advance();
      switch (e) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        case '\\': out.push_back('\\'); break;
        case '`': out.push_back('`'); break;
        case '\'': out.push_back('\''); break;
        case '"': out.push_back('"'); break;
        case 'u': {
          if (pos_ >= src_.size() || src_[pos_] != '{') throw SpecError(loc, "malformed \\u escape");
          advance();
          std::string hex;
          while (pos_ < src_.size() && src_[pos_] != '}') hex.push_back(advance());
          if (pos_ >= src_.size() || hex.empty() || hex.size() > 6 ||
              !std::all_of(hex.begin(), hex.end(), [](char h) { return std::isxdigit(static_cast<unsigned char>(h)); }))
            throw SpecError(loc, "malformed \\u escape");
          advance();
          const auto cp = static_cast<char32_t>(std::stoul(hex, nullptr, 16));
          if (cp > kMaxCodepoint) throw SpecError(loc, "\\u escape out of range");
          append_utf8(out, cp);
          break;
        }
        default:
          throw SpecError(loc, std::string("unknown escape `\\") + e + "`");
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  LangSpec parse_file() {
    LangSpec spec;
    bool seen_tokens = false, seen_lexer = false, seen_parser = false, seen_ct = false, seen_test = false;
    auto once = [&](bool& flag, const Tok& t) {
      if (flag) throw SpecError(t.loc, "duplicate `" + t.text + "` stanza");
      flag = true;
    };
    while (peek().kind != Tok::End) {
      const Tok t = peek();
      if (is_kw("tokens")) {
        once(seen_tokens, t);
        next();
        parse_tokens(spec);
      } else if (is_kw("lexer")) {
        once(seen_lexer, t);
        next();
        parse_lexer(spec.lexer);
        spec.lexer.loc = t.loc;
      } else if (is_kw("parser")) {
        once(seen_parser, t);
        next();
        parse_parser(spec.parser);
        spec.parser.loc = t.loc;
      } else if (is_kw("compile_test")) {
        once(seen_ct, t);
        next();
        parse_compile_tests(spec);
      } else if (is_kw("test")) {
        once(seen_test, t);
        next();
        parse_tests(spec);
      } else {
        fail("a stanza (`tokens`, `lexer`, `parser`, `compile_test`, `test`)");
      }
    }
    const SourceLoc end = peek().loc;
    if (!seen_tokens) throw SpecError(end, "missing `tokens` stanza");
    if (!seen_lexer) throw SpecError(end, "missing `lexer` stanza");
    if (!seen_parser) throw SpecError(end, "missing `parser` stanza");
    return spec;
  }

 private:
  const Tok& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  Tok next() {
    Tok t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Punct && peek(ahead).text == p;
  }
  bool is_kw(std::string_view k, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Keyword && peek(ahead).text == k;
  }
  [[noreturn]] void fail(const std::string& what) const {
    const Tok& t = peek();
    std::string found;
    switch (t.kind) {
      case Tok::End: found = "end of input"; break;
      case Tok::Str: found = "literal " + render_literal(t.text); break;
      default: found = "`" + t.text + "`";
    }
    throw SpecError(t.loc, "expected " + what + ", found " + found);
  }
  Tok expect(std::string_view p) {
    if (!is_punct(p)) fail("`" + std::string(p) + "`");
    return next();
  }
  Tok expect_kw(std::string_view k) {
    if (!is_kw(k)) fail("`" + std::string(k) + "`");
    return next();
  }
  Tok ident() {
    if (peek().kind == Tok::Keyword)
      throw SpecError(peek().loc, "`" + peek().text + "` is a reserved word");
    if (peek().kind != Tok::Ident) fail("identifier");
    return next();
  }
  std::string path() {
    std::string out = ident().text;
    while (is_punct(".")) {
      next();
      out += "." + ident().text;
    }
    return out;
  }

  // --- tokens ---------------------------------------------------------------

  void parse_tokens(LangSpec& spec) {
    expect("{");
    while (!is_punct("}")) {
      TokenDecl d;
      Tok name = ident();
      d.name = name.text;
      d.loc = name.loc;
      if (is_punct("<-")) {
        d.kind = TokenDecl::Kind::Opaque;
      } else if (is_punct("<=")) {
        d.kind = TokenDecl::Kind::Alias;
      } else {
        fail("`<-` or `<=`");
      }
      next();
      d.pattern = regex_alt();
      expect(";");
      spec.token_decls.push_back(std::move(d));
    }
    expect("}");
  }

  bool regex_atom_start() const {
    const Tok& t = peek();
    return t.kind == Tok::Str || t.kind == Tok::Ident || is_punct("_") || is_punct("(") || is_kw("eof");
  }

  RegexExpr regex_alt() {
    const SourceLoc loc = peek().loc;
    std::vector<RegexExpr> items{regex_diff()};
    while (is_punct("|")) {
      next();
      items.push_back(regex_diff());
    }
    if (items.size() == 1) return std::move(items[0]);
    RegexExpr e;
    e.kind = RegexExpr::Kind::Alt;
    e.items = std::move(items);
    e.loc = loc;
    return e;
  }

  RegexExpr regex_diff() {
    const SourceLoc loc = peek().loc;
    RegexExpr lhs = regex_concat();
    while (is_punct("-")) {
      next();
      RegexExpr e;
      e.kind = RegexExpr::Kind::Diff;
      e.loc = loc;
      e.items.push_back(std::move(lhs));
      e.items.push_back(regex_concat());
      lhs = std::move(e);
    }
    return lhs;
  }

  RegexExpr regex_concat() {
    const SourceLoc loc = peek().loc;
    if (!regex_atom_start()) fail("a regular expression");
    std::vector<RegexExpr> items;
    while (regex_atom_start()) items.push_back(regex_postfix());
    if (items.size() == 1) return std::move(items[0]);
    RegexExpr e;
    e.kind = RegexExpr::Kind::Concat;
    e.items = std::move(items);
    e.loc = loc;
    return e;
  }

  RegexExpr regex_postfix() {
    RegexExpr e = regex_atom();
    while (is_punct("*") || is_punct("+") || is_punct("?")) {
      const Tok op = next();
      RegexExpr w;
      w.kind = op.text == "*" ? RegexExpr::Kind::Star
             : op.text == "+" ? RegexExpr::Kind::Plus
                              : RegexExpr::Kind::Optional;
      w.loc = op.loc;
      w.items.push_back(std::move(e));
      e = std::move(w);
    }
    return e;
  }

  static char32_t single_codepoint(const Tok& t) {
    auto cps = decode_utf8_all(t.text);
    if (cps.size() != 1) throw SpecError(t.loc, "range endpoints must be single characters");
    return cps[0];
  }

  RegexExpr regex_atom() {
    const Tok t = peek();
    RegexExpr e;
    e.loc = t.loc;
    if (t.kind == Tok::Str) {
      next();
      if (is_punct("..")) {
        next();
        if (peek().kind != Tok::Str) fail("a literal after `..`");
        const Tok hi = next();
        e.kind = RegexExpr::Kind::CharRange;
        e.lo = single_codepoint(t);
        e.hi = single_codepoint(hi);
        return e;
      }
      if (t.text.empty()) throw SpecError(t.loc, "empty literal");
      e.kind = RegexExpr::Kind::Literal;
      e.text = decode_utf8_all(t.text);
      return e;
    }
    if (t.kind == Tok::Ident) {
      next();
      e.kind = RegexExpr::Kind::Ref;
      e.name = t.text;
      return e;
    }
    if (is_punct("_")) {
      next();
      e.kind = RegexExpr::Kind::Wildcard;
      return e;
    }
    if (is_kw("eof")) {
      next();
      e.kind = RegexExpr::Kind::Eof;
      return e;
    }
    expect("(");
    e = regex_alt();
    expect(")");
    return e;
  }

  // --- lexer ----------------------------------------------------------------

  void parse_lexer(LexerSpec& lx) {
    expect("{");
    while (!is_punct("}")) {
      if (is_kw("main")) {
        next();
        expect("{");
        lx.main_modes.push_back(ident().text);
        expect("}");
      } else if (is_kw("mode")) {
        next();
        LexMode m;
        Tok name = ident();
        m.name = name.text;
        m.loc = name.loc;
        expect("{");
        while (!is_punct("}")) m.rules.push_back(lex_rule());
        expect("}");
        lx.modes.push_back(std::move(m));
      } else {
        fail("`main` or `mode`");
      }
    }
    expect("}");
  }

  LexRule lex_rule() {
    LexRule r;
    r.loc = peek().loc;
    r.pattern = regex_alt();
    expect("=>");
    expect("{");
    while (!is_punct("}")) {
      LexAction a;
      a.loc = peek().loc;
      if (is_kw("emit")) {
        a.kind = LexAction::Kind::Emit;
      } else if (is_kw("pass")) {
        a.kind = LexAction::Kind::Pass;
      } else if (is_kw("push")) {
        a.kind = LexAction::Kind::Push;
      } else if (is_kw("pop")) {
        a.kind = LexAction::Kind::Pop;
      } else if (is_kw("pop_extract")) {
        a.kind = LexAction::Kind::PopExtract;
      } else if (is_kw("pop_emit")) {
        a.kind = LexAction::Kind::PopEmit;
      } else {
        fail("a lexer action");
      }
      next();
      if (a.kind == LexAction::Kind::Push || a.kind == LexAction::Kind::PopEmit) a.arg = ident().text;
      expect(";");
      r.actions.push_back(std::move(a));
    }
    expect("}");
    return r;
  }

  // --- parser ---------------------------------------------------------------

  void parse_parser(ParserSpec& p) {
    expect("{");
    while (!is_punct("}")) {
      if (is_kw("main")) {
        next();
        expect("{");
        std::vector<std::string> names{ident().text};
        while (is_punct(",")) {
          next();
          names.push_back(ident().text);
        }
        expect("}");
        p.main_decls.push_back(std::move(names));
      } else if (is_kw("prec")) {
        next();
        expect("{");
        while (!is_punct("}")) p.prec.push_back(prec_line());
        expect("}");
      } else if (is_kw("prop")) {
        next();
        expect("{");
        while (!is_punct("}")) {
          p.props.push_back(ident().text);
          expect(";");
        }
        expect("}");
      } else if (is_kw("attr")) {
        next();
        expect("{");
        while (!is_punct("}")) {
          AttrDecl a;
          a.loc = peek().loc;
          a.path = path();
          expect("[");
          a.attrs.push_back(ident().text);
          while (is_punct(",")) {
            next();
            a.attrs.push_back(ident().text);
          }
          expect("]");
          expect(";");
          p.attr_decls.push_back(std::move(a));
        }
        expect("}");
      } else {
        p.rules.push_back(rule());
      }
    }
    expect("}");
  }

  PrecLine prec_line() {
    PrecLine l;
    l.loc = peek().loc;
    l.rules.push_back(path());
    while (peek().kind == Tok::Ident) l.rules.push_back(path());
    if (is_kw("assoc_left")) {
      l.tag = PrecTag::AssocLeft;
    } else if (is_kw("assoc_right")) {
      l.tag = PrecTag::AssocRight;
    } else if (is_kw("prefix")) {
      l.tag = PrecTag::Prefix;
    } else if (is_kw("postfix")) {
      l.tag = PrecTag::Postfix;
    } else if (is_kw("none")) {
      l.tag = PrecTag::None;
    } else {
      expect(";");
      return l;
    }
    next();
    expect(";");
    return l;
  }

  RuleDecl rule() {
    RuleDecl r;
    r.loc = peek().loc;
    r.path.push_back(ident().text);
    while (is_punct(".")) {
      next();
      r.path.push_back(ident().text);
    }
    if (is_punct("[")) {
      next();
      r.lhs_attrs.push_back(ident().text);
      while (is_punct(",")) {
        next();
        r.lhs_attrs.push_back(ident().text);
      }
      expect("]");
    }
    expect("<-");
    r.rhs = expr_alt();
    expect(";");
    return r;
  }

  bool expr_atom_start() const {
    const Tok& t = peek();
    return t.kind == Tok::Str || t.kind == Tok::Ident || is_kw("eps") || is_punct("_") ||
           is_punct("@") || is_punct("(") || is_punct("~") || is_punct("#L") || is_punct("#B") ||
           is_punct("#B2") || is_punct("#T") || is_punct("#T2") || is_punct("#Alt");
  }

  ParseExpr expr_alt() {
    const SourceLoc loc = peek().loc;
    std::vector<ParseExpr> branches{expr_seq()};
    while (is_punct("|")) {
      next();
      branches.push_back(expr_seq());
    }
    if (branches.size() == 1) return std::move(branches[0]);
    return make_alt(std::move(branches), loc);
  }

  ParseExpr expr_seq() {
    const SourceLoc loc = peek().loc;
    if (!expr_atom_start()) fail("a parse expression");
    std::vector<ParseExpr> items;
    while (expr_atom_start()) items.push_back(expr_prefix());
    return make_seq(std::move(items), loc);
  }

  ParseExpr expr_prefix() {
    const Tok t = peek();
    ParseExpr e;
    e.loc = t.loc;
    if (t.kind == Tok::Ident && is_punct(":", 1)) {
      next();
      next();
      e.kind = ParseExpr::Kind::Named;
      e.text = t.text;
      e.items.push_back(expr_prefix());
      return e;
    }
    if (is_punct("~")) {
      next();
      e.kind = ParseExpr::Kind::Unfold;
      e.items.push_back(expr_prefix());
      const auto& in = e.items[0];
      if (!in.is_ref()) throw SpecError(t.loc, "`~` applies only to nonterminal references");
      return e;
    }
    return expr_postfix();
  }

  ParseExpr expr_postfix() {
    ParseExpr e = expr_atom();
    while (true) {
      const Tok op = peek();
      if (is_punct("*") || is_punct("+") || is_punct("?")) {
        next();
        ParseExpr w;
        w.kind = op.text == "*" ? ParseExpr::Kind::Star
               : op.text == "+" ? ParseExpr::Kind::Plus
                                : ParseExpr::Kind::Optional;
        w.loc = op.loc;
        w.items.push_back(std::move(e));
        e = std::move(w);
      } else if (is_punct("[")) {
        next();
        std::vector<AttrReq> reqs{attr_req()};
        while (is_punct(",")) {
          next();
          reqs.push_back(attr_req());
        }
        expect("]");
        e = apply_attr_reqs(std::move(e), std::move(reqs), op.loc);
      } else {
        return e;
      }
    }
  }

  AttrReq attr_req() {
    AttrReq a;
    a.loc = peek().loc;
    if (is_kw("pr")) {
      next();
      expect("=");
      expect("*");
      a.kind = AttrReq::Kind::PrecStar;
      return a;
    }
    if (is_punct("!")) {
      next();
      a.kind = AttrReq::Kind::Negate;
    }
    a.name = ident().text;
    return a;
  }

  ParseExpr expr_atom() {
    const Tok t = peek();
    ParseExpr e;
    e.loc = t.loc;
    if (t.kind == Tok::Str) {
      next();
      e.kind = ParseExpr::Kind::Literal;
      e.text = t.text;
      return e;
    }
    if (t.kind == Tok::Ident) {
      next();
      e.kind = ParseExpr::Kind::Ref;
      e.text = t.text;
      return e;
    }
    if (is_kw("eps")) {
      next();
      e.kind = ParseExpr::Kind::Eps;
      return e;
    }
    if (is_punct("_")) {
      next();
      e.kind = ParseExpr::Kind::Space;
      return e;
    }
    if (is_punct("@")) {
      next();
      expect("(");
      if (peek().kind != Tok::Str) fail("a literal");
      e.kind = ParseExpr::Kind::Pass;
      e.text = next().text;
      expect(")");
      return e;
    }
    if (is_punct("(")) {
      next();
      e = expr_alt();
      expect(")");
      return e;
    }
    if (is_punct("#Alt")) {
      next();
      expect("[");
      e.kind = ParseExpr::Kind::SingletonAlt;
      e.text = ident().text;
      expect(":");
      e.items.push_back(expr_alt());
      expect("]");
      return e;
    }
    if (is_punct("#L") || is_punct("#B") || is_punct("#B2") || is_punct("#T") || is_punct("#T2")) {
      const std::string fl = next().text;
      e.kind = ParseExpr::Kind::List;
      e.flavor = fl == "#L"    ? ListFlavor::L
               : fl == "#B"    ? ListFlavor::B
               : fl == "#B2"   ? ListFlavor::B2
               : fl == "#T"    ? ListFlavor::T
                               : ListFlavor::T2;
      expect("[");
      e.items.push_back(expr_alt());
      if (is_punct("::")) {
        e.min = 0;
      } else if (is_punct("::+")) {
        e.min = 1;
      } else if (is_punct("::++")) {
        e.min = 2;
      } else {
        fail("`::`, `::+` or `::++`");
      }
      next();
      e.items.push_back(expr_alt());
      if (is_punct(":?")) {
        next();
        e.trailing = Trailing::Optional;
      } else if (is_punct("::")) {
        next();
        e.trailing = Trailing::Required;
      }
      expect("]");
      return e;
    }
    fail("a parse expression");
  }

  // --- tests ----------------------------------------------------------------

  void parse_compile_tests(LangSpec& spec) {
    expect("{");
    while (!is_punct("}")) {
      LrTestDecl t;
      t.loc = peek().loc;
      if (is_punct("!")) {
        next();
        t.expect_success = false;
      }
      expect_kw("LR");
      expect("(");
      if (peek().kind != Tok::Int) fail("an integer");
      const Tok k = next();
      if (k.text.size() > 6) throw SpecError(k.loc, "LR(k) lookahead too large");
      t.k = std::stoi(k.text);
      expect(")");
      expect(";");
      spec.compile_tests.push_back(t);
    }
    expect("}");
  }

  void parse_tests(LangSpec& spec) {
    expect("{");
    while (!is_punct("}")) {
      if (peek().kind != Tok::Str) fail("a test string");
      const Tok s = next();
      bool skip = false;
      if (is_punct("<<>>")) {
        next();
        skip = true;
      }
      expect(";");
      spec.parse_tests.push_back(make_parse_test(s.text, skip, s.loc));
    }
    expect("}");
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

LangSpec parse_lang_spec_syntax(std::string_view source) {
  return Parser(Lexer(source).run()).parse_file();
}

void finalize_spec(LangSpec& spec) {
  resolve_refs(spec);
  auto diags = validate_spec(spec);
  if (!diags.empty()) throw SpecError(std::move(diags));
}

LangSpec parse_lang_spec(std::string_view source) {
  LangSpec spec = parse_lang_spec_syntax(source);
  finalize_spec(spec);
  return spec;
}

}  // namespace langcc
