#include "langcc/meta_convert.hpp"

#include <algorithm>
#include <cctype>

#include "langcc/meta_frontend.hpp"
#include "langcc/text.hpp"

namespace langcc {

namespace {

class Converter {
 public:
  explicit Converter(std::string_view source) : lines_(source) {}

  LangSpec file(const Node& root) {
    LangSpec spec;
    bool seen_tokens = false, seen_lexer = false, seen_parser = false, seen_ct = false, seen_test = false;
    auto once = [&](bool& flag, const Node& n, const char* kw) {
      if (flag) throw SpecError(loc(n), std::string("duplicate `") + kw + "` stanza");
      flag = true;
    };
    for (const auto& s : seq(root, "stanzas")) {
      const std::string c = variant(*s);
      if (c == "Tokens") {
        once(seen_tokens, *s, "tokens");
        for (const auto& d : seq(*s, "decls")) spec.token_decls.push_back(token_decl(*d));
      } else if (c == "Lexer") {
        once(seen_lexer, *s, "lexer");
        spec.lexer.loc = loc(*s);
        for (const auto& it : seq(*s, "items")) lex_item(*it, spec.lexer);
      } else if (c == "Parser") {
        once(seen_parser, *s, "parser");
        spec.parser.loc = loc(*s);
        for (const auto& it : seq(*s, "items")) parser_item(*it, spec.parser);
      } else if (c == "CompileTest") {
        once(seen_ct, *s, "compile_test");
        for (const auto& t : seq(*s, "tests")) spec.compile_tests.push_back(lr_test(*t));
      } else {
        once(seen_test, *s, "test");
        for (const auto& t : seq(*s, "tests")) {
          const Node& lit = *t->field("s");
          spec.parse_tests.push_back(
              make_parse_test(literal(lit), t->field("skip")->flag, loc(lit)));
        }
      }
    }
    const SourceLoc end = at(root.end);
    if (!seen_tokens) throw SpecError(end, "missing `tokens` stanza");
    if (!seen_lexer) throw SpecError(end, "missing `lexer` stanza");
    if (!seen_parser) throw SpecError(end, "missing `parser` stanza");
    return spec;
  }

 private:
  SourceLoc at(std::size_t offset) const {
    const LineCol lc = lines_.at(offset);
    return SourceLoc{lc.line, lc.col};
  }
  SourceLoc loc(const Node& n) const { return at(n.begin); }

  static std::string variant(const Node& n) {
    const auto p = n.path.rfind("::");
    return p == std::string::npos ? n.path : n.path.substr(p + 2);
  }
  static const std::vector<NodePtr>& seq(const Node& n, std::string_view field) {
    return n.field(field)->items;
  }
  static const std::string& text(const Node& n, std::string_view field) { return n.field(field)->text; }

  // Token text of a literal, including backticks.
  std::string literal(const Node& tok) const {
    const std::string& raw = tok.text;
    const SourceLoc l = loc(tok);
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
      const char c = raw[i];
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      const char e = raw[++i];
      switch (e) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        case '\\': out.push_back('\\'); break;
        case '`': out.push_back('`'); break;
        case '\'': out.push_back('\''); break;
        case '"': out.push_back('"'); break;
        case 'u': {
          const auto close = raw.find('}', i);
          if (i + 1 >= raw.size() || raw[i + 1] != '{' || close == std::string::npos || close + 1 >= raw.size())
            throw SpecError(l, "malformed \\u escape");
          const std::string hex = raw.substr(i + 2, close - i - 2);
          if (hex.empty() || hex.size() > 6 ||
              !std::all_of(hex.begin(), hex.end(), [](char h) { return std::isxdigit(static_cast<unsigned char>(h)); }))
            throw SpecError(l, "malformed \\u escape");
          const auto cp = static_cast<char32_t>(std::stoul(hex, nullptr, 16));
          if (cp > kMaxCodepoint) throw SpecError(l, "\\u escape out of range");
          append_utf8(out, cp);
          i = close;
          break;
        }
        default:
          throw SpecError(l, std::string("unknown escape `\\") + e + "`");
      }
    }
    return out;
  }

  static std::string path(const Node& p) {
    std::string out;
    for (const auto& part : seq(p, "parts")) out += (out.empty() ? "" : ".") + part->text;
    return out;
  }
  static std::vector<std::string> idents(const std::vector<NodePtr>& items) {
    std::vector<std::string> out;
    for (const auto& i : items) out.push_back(i->text);
    return out;
  }

  // --- tokens and lexer -------------------------------------------------------

  TokenDecl token_decl(const Node& n) {
    TokenDecl d;
    d.name = text(n, "name");
    d.loc = loc(*n.field("name"));
    d.kind = variant(n) == "Opaque" ? TokenDecl::Kind::Opaque : TokenDecl::Kind::Alias;
    d.pattern = regex(*n.field("re"));
    return d;
  }

  char32_t single_codepoint(const Node& tok) const {
    auto cps = decode_utf8_all(literal(tok));
    if (cps.size() != 1) throw SpecError(loc(tok), "range endpoints must be single characters");
    return cps[0];
  }

  // Binary Alt/Concat chains flatten along the left spine; parentheses stop it.
  void flatten(const Node& n, const std::string& kind, std::vector<RegexExpr>& out) {
    const Node& x = *n.field("x");
    if (variant(x) == kind) {
      flatten(x, kind, out);
    } else {
      out.push_back(regex(x));
    }
    out.push_back(regex(*n.field("y")));
  }

  RegexExpr regex(const Node& n) {
    const std::string c = variant(n);
    RegexExpr e;
    e.loc = loc(n);
    if (c == "Alt" || c == "Concat") {
      e.kind = c == "Alt" ? RegexExpr::Kind::Alt : RegexExpr::Kind::Concat;
      flatten(n, c, e.items);
    } else if (c == "Diff") {
      e.kind = RegexExpr::Kind::Diff;
      e.items.push_back(regex(*n.field("x")));
      e.items.push_back(regex(*n.field("y")));
    } else if (c == "Star" || c == "Plus" || c == "Opt") {
      e.kind = c == "Star" ? RegexExpr::Kind::Star : c == "Plus" ? RegexExpr::Kind::Plus : RegexExpr::Kind::Optional;
      e.items.push_back(regex(*n.field("x")));
    } else if (c == "Lit") {
      const Node& s = *n.field("s");
      const std::string t = literal(s);
      if (t.empty()) throw SpecError(loc(s), "empty literal");
      e.kind = RegexExpr::Kind::Literal;
      e.text = decode_utf8_all(t);
    } else if (c == "Range") {
      e.kind = RegexExpr::Kind::CharRange;
      e.lo = single_codepoint(*n.field("lo"));
      e.hi = single_codepoint(*n.field("hi"));
    } else if (c == "Ref") {
      e.kind = RegexExpr::Kind::Ref;
      e.name = text(n, "name");
    } else if (c == "Any") {
      e.kind = RegexExpr::Kind::Wildcard;
    } else if (c == "Eof") {
      e.kind = RegexExpr::Kind::Eof;
    } else {
      return regex(*n.field("x"));
    }
    return e;
  }

  void lex_item(const Node& n, LexerSpec& lx) {
    if (variant(n) == "Main") {
      lx.main_modes.push_back(text(n, "name"));
      return;
    }
    LexMode m;
    m.name = text(n, "name");
    m.loc = loc(*n.field("name"));
    for (const auto& r : seq(n, "rules")) {
      LexRule rule;
      rule.loc = loc(*r);
      rule.pattern = regex(*r->field("re"));
      for (const auto& a : seq(*r, "actions")) {
        LexAction act;
        act.loc = loc(*a);
        const std::string c = variant(*a);
        if (c == "Emit") {
          act.kind = LexAction::Kind::Emit;
        } else if (c == "Pass") {
          act.kind = LexAction::Kind::Pass;
        } else if (c == "Push") {
          act.kind = LexAction::Kind::Push;
          act.arg = text(*a, "target");
        } else if (c == "Pop") {
          act.kind = LexAction::Kind::Pop;
        } else if (c == "PopExtract") {
          act.kind = LexAction::Kind::PopExtract;
        } else {
          act.kind = LexAction::Kind::PopEmit;
          act.arg = text(*a, "token");
        }
        rule.actions.push_back(std::move(act));
      }
      m.rules.push_back(std::move(rule));
    }
    lx.modes.push_back(std::move(m));
  }

  // --- parser -----------------------------------------------------------------

  void parser_item(const Node& n, ParserSpec& p) {
    const std::string c = variant(n);
    if (c == "Main") {
      p.main_decls.push_back(idents(seq(n, "names")));
    } else if (c == "Prec") {
      for (const auto& l : seq(n, "lines")) {
        PrecLine line;
        line.loc = loc(*l);
        for (const auto& r : seq(*l, "rules")) line.rules.push_back(path(*r));
        const Node& tag = *l->field("tag");
        if (!tag.items.empty()) {
          const std::string t = variant(*tag.items[0]);
          line.tag = t == "Left"    ? PrecTag::AssocLeft
                   : t == "Right"   ? PrecTag::AssocRight
                   : t == "Prefix"  ? PrecTag::Prefix
                   : t == "Postfix" ? PrecTag::Postfix
                                    : PrecTag::None;
        }
        p.prec.push_back(std::move(line));
      }
    } else if (c == "Prop") {
      for (auto& s : idents(seq(n, "props"))) p.props.push_back(std::move(s));
    } else if (c == "Attr") {
      for (const auto& d : seq(n, "decls")) {
        AttrDecl a;
        a.loc = loc(*d);
        a.path = path(*d->field("path"));
        a.attrs = idents(seq(*d, "attrs"));
        p.attr_decls.push_back(std::move(a));
      }
    } else {
      RuleDecl r;
      r.loc = loc(n);
      for (const auto& part : seq(*n.field("path"), "parts")) r.path.push_back(part->text);
      const Node& attrs = *n.field("attrs");
      if (!attrs.items.empty()) r.lhs_attrs = idents(attrs.items[0]->items);
      r.rhs = expr(*n.field("rhs"));
      p.rules.push_back(std::move(r));
    }
  }

  void collect(const Node& n, const std::string& kind, std::vector<ParseExpr>& out) {
    const Node& x = *n.field("x");
    if (variant(x) == kind) {
      collect(x, kind, out);
    } else {
      out.push_back(expr(x));
    }
    out.push_back(expr(*n.field("y")));
  }

  AttrReq attr_req(const Node& n) {
    AttrReq a;
    a.loc = loc(n);
    const std::string c = variant(n);
    if (c == "Pr") {
      a.kind = AttrReq::Kind::PrecStar;
    } else {
      a.kind = c == "Neg" ? AttrReq::Kind::Negate : AttrReq::Kind::Require;
      a.name = text(n, "name");
    }
    return a;
  }

  ParseExpr expr(const Node& n) {
    const std::string c = variant(n);
    ParseExpr e;
    e.loc = loc(n);
    if (c == "Alt" || c == "Seq") {
      std::vector<ParseExpr> items;
      collect(n, c, items);
      return c == "Alt" ? make_alt(std::move(items), e.loc) : make_seq(std::move(items), e.loc);
    }
    if (c == "Named") {
      e.kind = ParseExpr::Kind::Named;
      e.text = text(n, "name");
      e.items.push_back(expr(*n.field("x")));
    } else if (c == "Unfold") {
      e.kind = ParseExpr::Kind::Unfold;
      e.items.push_back(expr(*n.field("x")));
      if (!e.items[0].is_ref()) throw SpecError(e.loc, "`~` applies only to nonterminal references");
    } else if (c == "Star" || c == "Plus" || c == "Opt") {
      e.kind = c == "Star" ? ParseExpr::Kind::Star : c == "Plus" ? ParseExpr::Kind::Plus : ParseExpr::Kind::Optional;
      e.items.push_back(expr(*n.field("x")));
    } else if (c == "Attrs") {
      std::vector<AttrReq> reqs;
      for (const auto& r : seq(n, "reqs")) reqs.push_back(attr_req(*r));
      return apply_attr_reqs(expr(*n.field("x")), std::move(reqs), e.loc);
    } else if (c == "Lit") {
      e.kind = ParseExpr::Kind::Literal;
      e.text = literal(*n.field("s"));
    } else if (c == "Ref") {
      e.kind = ParseExpr::Kind::Ref;
      e.text = text(n, "name");
    } else if (c == "Eps") {
      e.kind = ParseExpr::Kind::Eps;
    } else if (c == "Space") {
      e.kind = ParseExpr::Kind::Space;
    } else if (c == "Pass") {
      e.kind = ParseExpr::Kind::Pass;
      e.text = literal(*n.field("s"));
    } else if (c == "Paren") {
      return expr(*n.field("x"));
    } else if (c == "SAlt") {
      e.kind = ParseExpr::Kind::SingletonAlt;
      e.text = text(n, "label");
      e.items.push_back(expr(*n.field("x")));
    } else {
      e.kind = ParseExpr::Kind::List;
      const std::string fl = variant(*n.field("flavor"));
      e.flavor = fl == "L" ? ListFlavor::L : fl == "B" ? ListFlavor::B : fl == "B2" ? ListFlavor::B2
               : fl == "T" ? ListFlavor::T : ListFlavor::T2;
      const std::string sep = variant(*n.field("sep"));
      e.min = sep == "Any" ? 0 : sep == "One" ? 1 : 2;
      e.items.push_back(expr(*n.field("elem")));
      e.items.push_back(expr(*n.field("delim")));
      const Node& end = *n.field("end");
      if (!end.items.empty())
        e.trailing = variant(*end.items[0]) == "Optional" ? Trailing::Optional : Trailing::Required;
    }
    return e;
  }

  // --- tests ------------------------------------------------------------------

  LrTestDecl lr_test(const Node& n) {
    LrTestDecl t;
    t.loc = loc(n);
    t.expect_success = !n.field("neg")->flag;
    const Node& k = *n.field("k");
    if (k.text.size() > 6) throw SpecError(loc(k), "LR(k) lookahead too large");
    t.k = std::stoi(k.text);
    return t;
  }

  LineIndex lines_;
};

}  // namespace

LangSpec meta_ast_to_spec(const Node& root, std::string_view source) {
  LangSpec spec = Converter(source).file(root);
  finalize_spec(spec);
  return spec;
}

}  // namespace langcc
