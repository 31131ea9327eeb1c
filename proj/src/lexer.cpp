#include "langcc/lexer.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace langcc {

int TokenTable::find_opaque(std::string_view name) const {
  for (int i = 1; i < size(); i++)
    if (!tokens[i].literal && tokens[i].name == name) return i;
  return -1;
}

int TokenTable::find_literal(std::string_view text) const {
  for (int i = 1; i < size(); i++)
    if (tokens[i].literal && tokens[i].name == text) return i;
  return -1;
}

int TokenTable::add_literal(std::string_view text) {
  int id = find_literal(text);
  if (id >= 0) return id;
  tokens.push_back({std::string(text), true});
  return size() - 1;
}

std::string TokenTable::display(int id) const {
  if (id == kEofToken) return "eof";
  const auto& t = tokens[id];
  return t.literal ? "`" + escape_backtick(t.name) + "`" : t.name;
}

int CompiledMode::classify(char32_t cp) const {
  if (cp < 128) return ascii[cp];
  auto it = std::upper_bound(class_starts.begin(), class_starts.end(), cp);
  return static_cast<int>(it - class_starts.begin()) - 1;
}

void CompiledMode::index() {
  for (char32_t c = 0; c < 128; c++) {
    auto it = std::upper_bound(class_starts.begin(), class_starts.end(), c);
    ascii[c] = static_cast<int16_t>(it - class_starts.begin() - 1);
  }
}

namespace {

bool is_eof_branch(const RegexExpr& e) { return e.kind == RegexExpr::Kind::Eof; }

class LexerCompiler {
 public:
  explicit LexerCompiler(const LangSpec& spec) : spec_(spec) {}

  CompiledLexer run() {
    for (const auto& d : spec_.token_decls)
      if (d.kind == TokenDecl::Kind::Opaque) out_.tokens.tokens.push_back({d.name, false});
    for (const auto& m : spec_.lexer.modes) mode_index_[m.name] = static_cast<int>(mode_index_.size());
    for (const auto& m : spec_.lexer.modes) out_.modes.push_back(compile_mode(m));
    out_.main_mode = mode_index_.at(spec_.lexer.main_modes.at(0));
    return std::move(out_);
  }

 private:
  const RegexExpr* resolve(const std::string& name) const {
    const TokenDecl* d = spec_.find_token(name);
    return d ? &d->pattern : nullptr;
  }

  bool nullable(const RegexExpr& e, int depth = 0) const {
    using K = RegexExpr::Kind;
    if (depth > 256) return false;
    switch (e.kind) {
      case K::Literal:
        return e.text.empty();
      case K::CharRange:
      case K::Wildcard:
      case K::Eof:
        return false;
      case K::Concat:
        return std::all_of(e.items.begin(), e.items.end(), [&](auto& x) { return nullable(x, depth + 1); });
      case K::Alt:
        return std::any_of(e.items.begin(), e.items.end(), [&](auto& x) { return nullable(x, depth + 1); });
      case K::Star:
      case K::Optional:
        return true;
      case K::Plus:
        return nullable(e.items[0], depth + 1);
      case K::Diff:
        return nullable(e.items[0], depth + 1) && !nullable(e.items[1], depth + 1);
      case K::Ref: {
        const RegexExpr* t = resolve(e.name);
        return t && nullable(*t, depth + 1);
      }
    }
    return false;
  }

  static void check_no_eof(const RegexExpr& e) {
    if (e.kind == RegexExpr::Kind::Eof)
      throw SpecError(e.loc, "`eof` may only appear as a whole rule pattern or a top-level alternative");
    for (const auto& x : e.items) check_no_eof(x);
  }

  static bool matches_eof(const RegexExpr& p) {
    if (is_eof_branch(p)) return true;
    if (p.kind == RegexExpr::Kind::Alt) {
      bool any = false;
      for (const auto& b : p.items) {
        if (is_eof_branch(b))
          any = true;
        else
          check_no_eof(b);
      }
      return any;
    }
    check_no_eof(p);
    return false;
  }

  // Splits an emit pattern into (token, sub-pattern) constituents.
  void constituents(const RegexExpr& e, std::vector<std::pair<int, const RegexExpr*>>& out, int depth = 0) {
    using K = RegexExpr::Kind;
    if (depth > 256) throw SpecError(e.loc, "alias nesting too deep");
    if (e.kind == K::Literal) {
      out.emplace_back(out_.tokens.add_literal(encode_utf8(e.text)), &e);
      return;
    }
    if (e.kind == K::Alt) {
      for (const auto& b : e.items) constituents(b, out, depth + 1);
      return;
    }
    if (e.kind == K::Ref) {
      const TokenDecl* d = spec_.find_token(e.name);
      if (!d) throw SpecError(e.loc, "undeclared token `" + e.name + "`");
      if (d->kind == TokenDecl::Kind::Opaque) {
        out.emplace_back(out_.tokens.find_opaque(d->name), &d->pattern);
        return;
      }
      constituents(d->pattern, out, depth + 1);
      return;
    }
    throw SpecError(e.loc,
                    "an `emit` rule must match a token, a literal, or an alternation of them; found `" +
                        render_regex(e) + "`");
  }

  CompiledMode compile_mode(const LexMode& mode) {
    CompiledMode cm;
    cm.name = mode.name;
    re::Nfa nfa;
    int root = nfa.add_state();
    std::vector<LexTag> tags;
    std::map<std::pair<int, int>, int> tag_ids;
    std::vector<SourceLoc> rule_locs;
    auto resolver = [this](const std::string& n) { return resolve(n); };
    auto attach = [&](re::Fragment f, LexTag tag) {
      auto [it, fresh] = tag_ids.emplace(std::make_pair(tag.rule, tag.token), static_cast<int>(tags.size()));
      if (fresh) tags.push_back(tag);
      int acc = nfa.add_state();
      nfa.states[acc].tag = it->second;
      nfa.states[f.end].eps.push_back(acc);
      nfa.states[root].eps.push_back(f.start);
    };

    for (std::size_t ri = 0; ri < mode.rules.size(); ri++) {
      const LexRule& rule = mode.rules[ri];
      int r = static_cast<int>(ri);
      rule_locs.push_back(rule.loc);
      CompiledRule cr;
      cr.pattern = render_regex(rule.pattern);
      int pushes = 0, pops = 0, emits = 0;
      for (const auto& a : rule.actions) {
        CompiledAction ca{a.kind, -1};
        switch (a.kind) {
          case LexAction::Kind::Emit:
            emits++;
            cr.consumes = true;
            break;
          case LexAction::Kind::Pass:
            cr.consumes = true;
            break;
          case LexAction::Kind::Push: {
            auto it = mode_index_.find(a.arg);
            if (it == mode_index_.end()) throw SpecError(a.loc, "push of undeclared mode `" + a.arg + "`");
            ca.arg = it->second;
            pushes++;
            break;
          }
          case LexAction::Kind::PopEmit:
            ca.arg = out_.tokens.find_opaque(a.arg);
            if (ca.arg < 0) throw SpecError(a.loc, "`pop_emit` requires an opaque token, found `" + a.arg + "`");
            pops++;
            break;
          case LexAction::Kind::Pop:
          case LexAction::Kind::PopExtract:
            pops++;
            break;
        }
        cr.actions.push_back(ca);
      }
      if (emits > 1) throw SpecError(rule.loc, "a lexer rule can emit at most once");
      bool eof = matches_eof(rule.pattern);
      if (eof && emits) throw SpecError(rule.loc, "a rule matching `eof` cannot emit");
      if ((eof || !cr.consumes) && pops <= pushes)
        throw SpecError(rule.loc, "rule `" + cr.pattern +
                                      "` consumes no input, so it must pop more modes than it pushes");
      if (nullable(rule.pattern)) throw SpecError(rule.loc, "pattern `" + cr.pattern + "` matches the empty string");

      if (emits) {
        std::vector<std::pair<int, const RegexExpr*>> parts;
        constituents(rule.pattern, parts);
        for (const auto& [tok, sub] : parts) attach(re::build_fragment(nfa, *sub, resolver), {r, tok, false});
      } else {
        bool fallback = rule.pattern.kind == RegexExpr::Kind::Wildcard;
        attach(re::build_fragment(nfa, rule.pattern, resolver), {r, -1, fallback});
      }
      cm.rules.push_back(std::move(cr));
    }

    re::Dfa dfa = re::determinize(nfa, root);
    const int n = dfa.num_states(), nc = dfa.classes.size();
    cm.class_starts = dfa.classes.starts;
    cm.tags = tags;

    // Resolve accepting tags; fallback rules yield to any other rule.
    std::vector<int> accept(n, -1);
    int ambiguous = -1;
    for (int s = 0; s < n; s++) {
      std::vector<int> strong, weak;
      for (int t : dfa.tags[s]) (tags[t].fallback ? weak : strong).push_back(t);
      const auto& pick = strong.empty() ? weak : strong;
      if (pick.empty()) continue;
      accept[s] = pick[0];
      if (pick.size() > 1 && ambiguous < 0) ambiguous = s;
    }
    if (ambiguous >= 0) report_ambiguity(mode, dfa, accept, tags, rule_locs);

    // Prune states that cannot reach acceptance.
    std::vector<char> live(n, 0);
    for (int s = 0; s < n; s++) live[s] = accept[s] >= 0;
    for (bool changed = true; changed;) {
      changed = false;
      for (int s = 0; s < n; s++) {
        if (live[s]) continue;
        for (int c = 0; c < nc; c++) {
          int t = dfa.next(s, c);
          if (t >= 0 && live[t]) {
            live[s] = changed = true;
            break;
          }
        }
      }
    }
    std::vector<int> renum(n, -1);
    int count = 0;
    for (int s = 0; s < n; s++)
      if (live[s] || s == 0) renum[s] = count++;
    cm.num_states = count;
    cm.trans.assign(static_cast<std::size_t>(count) * nc, -1);
    cm.accept.assign(count, -1);
    for (int s = 0; s < n; s++) {
      if (renum[s] < 0) continue;
      cm.accept[renum[s]] = accept[s];
      for (int c = 0; c < nc; c++) {
        int t = dfa.next(s, c);
        if (t >= 0 && live[t]) cm.trans[static_cast<std::size_t>(renum[s]) * nc + c] = renum[t];
      }
    }
    cm.index();
    return cm;
  }

  std::string describe_tag(const LexMode& mode, const LexTag& t) const {
    std::string s = "rule `" + render_regex(mode.rules[t.rule].pattern) + "`";
    if (t.token >= 0) s += " (as " + out_.tokens.display(t.token) + ")";
    return s;
  }

  [[noreturn]] void report_ambiguity(const LexMode& mode, const re::Dfa& dfa, const std::vector<int>&,
                                     const std::vector<LexTag>& tags, const std::vector<SourceLoc>& locs) {
    // BFS for the shortest path to a state carrying two competing tags.
    const int n = dfa.num_states(), nc = dfa.classes.size();
    auto competing = [&](int s) {
      std::vector<int> strong, weak;
      for (int t : dfa.tags[s]) (tags[t].fallback ? weak : strong).push_back(t);
      return strong.empty() ? weak : strong;
    };
    std::vector<int> parent(n, -2), via(n, -1);
    std::deque<int> q{0};
    parent[0] = -1;
    int target = -1;
    while (!q.empty()) {
      int s = q.front();
      q.pop_front();
      if (competing(s).size() > 1) {
        target = s;
        break;
      }
      for (int c = 0; c < nc; c++) {
        int t = dfa.next(s, c);
        if (t >= 0 && parent[t] == -2) {
          parent[t] = s;
          via[t] = c;
          q.push_back(t);
        }
      }
    }
    std::vector<int> path;
    for (int s = target; parent[s] >= 0; s = parent[s]) path.push_back(via[s]);
    std::reverse(path.begin(), path.end());
    std::string witness, shown;
    for (int c : path) {
      char32_t lo = dfa.classes.starts[c], hi = dfa.classes.hi(c);
      if (lo >= kEofCodepoint) {
        shown += "<eof>";
        continue;
      }
      char32_t pick = lo;
      if (lo < 0x21 && hi >= 0x21) pick = 0x21;
      if (lo <= U'a' && U'a' <= hi) pick = U'a';
      append_utf8(witness, pick);
      shown += escape_backtick(encode_utf8(pick));
    }
    auto pair = competing(target);
    const LexTag& a = tags[pair[0]];
    const LexTag& b = tags[pair[1]];
    std::string msg = "ambiguous lexer rules in mode `" + mode.name + "`: input `" + shown + "` is matched by " +
                      describe_tag(mode, a) + " and " + describe_tag(mode, b);
    throw LexAmbiguityError(locs[std::max(a.rule, b.rule)], msg, mode.name, witness);
  }

  const LangSpec& spec_;
  CompiledLexer out_;
  std::map<std::string, int> mode_index_;
};

struct Frame {
  int mode;
  std::size_t begin, end;
  bool touched = false;
  std::string buffer;
};

}  // namespace

CompiledLexer compile_lexer(const LangSpec& spec) { return LexerCompiler(spec).run(); }

std::string LexError::message() const {
  switch (kind) {
    case Kind::NoMatch:
      return "no lexer rule matches in mode `" + mode + "`";
    case Kind::PrematureEmpty:
      return "lexer mode stack emptied before the end of input";
    case Kind::StackNonemptyAtEof:
      return "unexpected end of input in lexer mode `" + mode + "`";
  }
  return "";
}

LexOutput lex(const CompiledLexer& lexer, std::string_view input) {
  LexOutput out;
  const std::size_t n = input.size();
  std::vector<Frame> stack{{lexer.main_mode, 0, 0, false, {}}};
  std::size_t pos = 0;
  auto fail = [&](LexError::Kind k, std::size_t at, int mode) {
    out.error = LexError{k, at, mode >= 0 ? lexer.modes[mode].name : ""};
    return out;
  };
  while (true) {
    const CompiledMode& m = lexer.modes[stack.back().mode];
    const int nc = m.num_classes();
    // Longest match from `pos`.
    int s = 0, best_tag = -1;
    std::size_t p = pos, best_end = pos;
    while (true) {
      int t;
      std::size_t np = p;
      if (p >= n) {
        t = m.trans[static_cast<std::size_t>(s) * nc + m.eof_class()];
        if (t >= 0 && m.accept[t] >= 0) {
          best_tag = m.accept[t];
          best_end = p;
        }
        break;
      }
      unsigned char b = static_cast<unsigned char>(input[p]);
      char32_t cp;
      if (b < 0x80) {
        cp = b;
        np = p + 1;
      } else {
        cp = decode_utf8(input, np);
      }
      t = m.trans[static_cast<std::size_t>(s) * nc + m.classify(cp)];
      if (t < 0) break;
      s = t;
      p = np;
      if (m.accept[s] >= 0) {
        best_tag = m.accept[s];
        best_end = p;
      }
    }
    if (best_tag < 0)
      return fail(pos >= n ? LexError::Kind::StackNonemptyAtEof : LexError::Kind::NoMatch, pos, stack.back().mode);

    const LexTag& tag = m.tags[best_tag];
    const CompiledRule& rule = m.rules[tag.rule];
    std::string_view text = input.substr(pos, best_end - pos);
    for (const auto& a : rule.actions) {
      if (stack.empty()) return fail(LexError::Kind::PrematureEmpty, pos, -1);
      Frame& top = stack.back();
      switch (a.kind) {
        case LexAction::Kind::Emit:
          out.tokens.push_back({tag.token, pos, best_end, std::string(text)});
          [[fallthrough]];
        case LexAction::Kind::Pass:
          if (!top.touched) top.begin = pos;
          top.touched = true;
          top.buffer.append(text);
          top.end = best_end;
          break;
        case LexAction::Kind::Push:
          stack.push_back({a.arg, pos, pos, false, {}});
          break;
        case LexAction::Kind::Pop:
          stack.pop_back();
          break;
        case LexAction::Kind::PopExtract: {
          Frame f = std::move(stack.back());
          stack.pop_back();
          out.extracts.push_back({f.mode, f.begin, f.touched ? f.end : f.begin, std::move(f.buffer)});
          break;
        }
        case LexAction::Kind::PopEmit: {
          Frame f = std::move(stack.back());
          stack.pop_back();
          out.tokens.push_back({a.arg, f.begin, f.touched ? f.end : f.begin, std::move(f.buffer)});
          break;
        }
      }
    }
    if (rule.consumes) pos = best_end;
    if (stack.empty()) {
      if (pos == n) return out;
      return fail(LexError::Kind::PrematureEmpty, pos, -1);
    }
  }
}

std::string dump_lexer(const CompiledLexer& lexer) {
  std::ostringstream os;
  os << "tokens:\n";
  for (int i = 0; i < lexer.tokens.size(); i++) os << "  " << i << " " << lexer.tokens.display(i) << "\n";
  for (std::size_t mi = 0; mi < lexer.modes.size(); mi++) {
    const auto& m = lexer.modes[mi];
    os << "\nmode " << m.name << (static_cast<int>(mi) == lexer.main_mode ? " (main)" : "") << ": "
       << m.num_states << " states, " << m.num_classes() << " classes\n";
    for (std::size_t r = 0; r < m.rules.size(); r++) os << "  rule " << r << ": " << m.rules[r].pattern << "\n";
    auto range = [&](int c) {
      char32_t lo = m.class_starts[c];
      char32_t hi = c + 1 < m.num_classes() ? m.class_starts[c + 1] - 1 : kEofCodepoint;
      if (lo >= kEofCodepoint) return std::string("<eof>");
      if (lo == hi) return describe_codepoint(lo);
      return describe_codepoint(lo) + ".." + describe_codepoint(hi);
    };
    for (int s = 0; s < m.num_states; s++) {
      os << "  state " << s;
      if (m.accept[s] >= 0) {
        const auto& t = m.tags[m.accept[s]];
        os << " accept rule " << t.rule;
        if (t.token >= 0) os << " " << lexer.tokens.display(t.token);
      }
      os << "\n";
      for (int c = 0; c < m.num_classes(); c++) {
        int t = m.trans[static_cast<std::size_t>(s) * m.num_classes() + c];
        if (t >= 0) os << "    " << range(c) << " -> " << t << "\n";
      }
    }
  }
  return os.str();
}

}  // namespace langcc
