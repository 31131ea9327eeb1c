#include "langcc/runtime.hpp"

#include <stdexcept>

#include "langcc/text.hpp"

namespace langcc {

int CompiledLang::main_index(std::string_view nt) const {
  for (std::size_t i = 0; i < grammar.mains.size(); i++)
    if (grammar.nts[grammar.mains[i]].name == nt) return static_cast<int>(i);
  return -1;
}

std::string location_fmt_str(std::string_view input, std::size_t begin, std::size_t end) {
  (void)end;
  LineIndex idx(input);
  LineCol lc = idx.at(begin);
  std::string_view line = idx.line_text(lc.line);
  std::size_t width = decode_utf8_all(line).size();
  std::string caret = "  ";
  for (std::size_t c = 1; c <= width + 1; c++) caret += static_cast<int>(c) == lc.col ? '^' : ' ';
  std::string out = "Line " + std::to_string(lc.line) + ", column " + std::to_string(lc.col) + ":\n\n";
  out += "  ";
  out += line;
  out += "\n" + caret + "\n";
  return out;
}

namespace {

using MutNode = std::shared_ptr<Node>;

struct Entry {
  int state = 0;
  int sym = -1;  // token id, num_terminals + class, or -1 for a recursion marker
  MutNode val;
  std::size_t begin = 0, end = 0;
  bool empty = true;  // consumed no tokens
};

MutNode make_node(Node::Kind k, std::size_t b, std::size_t e) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->begin = b;
  n->end = e;
  return n;
}

class Engine {
 public:
  Engine(const CompiledLang& lang, std::string_view input, int main)
      : lang_(lang), g_(lang.grammar), t_(lang.tables), input_(input), main_(main) {}

  ParseResult run() {
    ParseResult res;
    LexOutput lx = lex(lang_.lexer, input_);
    res.extracts = std::move(lx.extracts);
    if (!lx.ok()) {
      const LexError& e = *lx.error;
      ParseError err;
      err.kind = ParseError::Kind::Lex;
      err.begin = err.end = e.offset;
      if (e.kind == LexError::Kind::NoMatch && e.offset < input_.size()) {
        std::size_t p = e.offset;
        char32_t cp = decode_utf8(input_, p);
        err.message = "Unexpected character: `" + escape_backtick(encode_utf8(cp)) + "`";
        err.end = p;
      } else if (e.kind == LexError::Kind::StackNonemptyAtEof || e.offset >= input_.size()) {
        err.message = "Unexpected end of input";
      } else {
        err.message = "Unexpected input: " + e.message();
      }
      err.location = location_fmt_str(input_, err.begin, err.end);
      res.err = std::move(err);
      return res;
    }
    toks_ = std::move(lx.tokens);
    for (int i = 0; i <= t_.k; i++) toks_.push_back({kEofToken, input_.size(), input_.size(), ""});
    return engine(std::move(res));
  }

 private:
  LaString window(std::size_t pos) const {
    LaString w = la::kEmpty;
    for (int i = 0; i < t_.k; i++) w = la::append(w, toks_[pos + i].id);
    return w;
  }

  // Index within the lookahead window of the first token that no action of
  // `state` can follow.
  int blame_index(int state, LaString w) const {
    int best = 0;
    for (const auto& [key, a] : t_.states[state].actions) {
      int i = 0;
      while (i < t_.k && la::at(key, i) == la::at(w, i)) i++;
      best = std::max(best, i);
    }
    return std::min(best, std::max(t_.k - 1, 0));
  }

  ParseResult fail(ParseResult res, std::size_t tok) {
    const Token& t = toks_[tok];
    ParseError err;
    err.begin = t.begin;
    err.end = t.end;
    if (t.id == kEofToken) {
      err.kind = ParseError::Kind::UnexpectedEof;
      err.message = "Unexpected end of input";
    } else {
      err.kind = ParseError::Kind::UnexpectedToken;
      err.message = "Unexpected token: `" + escape_backtick(t.text) + "`";
    }
    err.location = location_fmt_str(input_, err.begin, err.end);
    res.err = std::move(err);
    return res;
  }

  MutNode field_value(const FieldSpec& f, std::size_t base) {
    const Entry& c = stack_[base + f.slot];
    if (f.conv == FieldConv::InlineLabel) {
      auto n = make_node(Node::Kind::Record, c.begin, c.end);
      n->path = f.label_path;
      return n;
    }
    return c.val;
  }

  MutNode content_value(const FieldSpec& f, std::size_t base, std::size_t b, std::size_t e) {
    if (f.slot < 0) {
      auto n = make_node(Node::Kind::Bool, b, e);
      n->flag = true;
      return n;
    }
    return field_value(f, base);
  }

  MutNode reduce_value(const Production& p, std::size_t base, std::size_t b, std::size_t e) {
    switch (p.kind) {
      case ProdKind::Rule:
      case ProdKind::AltBranch: {
        auto n = make_node(Node::Kind::Record, b, e);
        n->path = p.path;
        for (const auto& f : p.fields) n->fields.emplace_back(f.name, field_value(f, base));
        return n;
      }
      case ProdKind::OptNone:
      case ProdKind::OptSome: {
        bool some = p.kind == ProdKind::OptSome;
        if (g_.nts[p.lhs].boolean) {
          auto n = make_node(Node::Kind::Bool, b, e);
          n->flag = some;
          return n;
        }
        auto n = make_node(Node::Kind::Option, b, e);
        if (some) n->items.push_back(content_value(p.content[0], base, b, e));
        return n;
      }
      case ProdKind::ListEmpty:
        return make_node(Node::Kind::Seq, b, e);
      case ProdKind::ListOne:
      case ProdKind::ListTwo: {
        auto n = make_node(Node::Kind::Seq, b, e);
        for (const auto& f : p.content) n->items.push_back(content_value(f, base, b, e));
        return n;
      }
      case ProdKind::ListCons: {
        MutNode n = stack_[base].val;
        std::size_t eb = b;
        for (std::size_t i = base + 1; i < stack_.size(); i++)
          if (!stack_[i].empty) {
            eb = stack_[i].begin;
            break;
          }
        for (const auto& f : p.content) n->items.push_back(content_value(f, base, eb, e));
        n->begin = b;
        n->end = e;
        return n;
      }
      case ProdKind::ListWrap:
      case ProdKind::ListWrapTrail: {
        MutNode n = stack_[base].val;
        n->flag = p.kind == ProdKind::ListWrapTrail;
        n->begin = b;
        n->end = e;
        return n;
      }
      case ProdKind::Start:
        break;
    }
    throw std::logic_error("start production reduced");
  }

  void push_goto(int klass, Entry e) {
    int target = t_.goto_class(stack_.back().state, klass);
    if (target < 0) throw std::logic_error("missing goto entry");
    e.state = target;
    e.sym = t_.num_terminals + klass;
    stack_.push_back(std::move(e));
  }

  ParseResult engine(ParseResult res) {
    stack_.push_back({t_.start_states[main_], -1, nullptr, 0, 0, true});
    std::vector<std::size_t> recur;  // stack heights of recursion markers
    std::size_t pos = 0, last_end = 0;
    while (true) {
      const int s = stack_.back().state;
      const LaString w = window(pos);
      const Action* a = t_.action(s, w);
      if (!a) return fail(std::move(res), pos + static_cast<std::size_t>(blame_index(s, w)));
      switch (a->kind) {
        case Action::Kind::Shift: {
          const Token& tok = toks_[pos];
          int target = t_.transition(s, tok.id);
          if (target < 0) return fail(std::move(res), pos);
          auto n = make_node(Node::Kind::Token, tok.begin, tok.end);
          n->text = tok.text;
          n->token = tok.id;
          stack_.push_back({target, tok.id, std::move(n), tok.begin, tok.end, false});
          last_end = tok.end;
          pos++;
          break;
        }
        case Action::Kind::Reduce: {
          const Production& p = g_.prods[a->arg];
          const std::size_t base = stack_.size() - p.rhs.size();
          std::size_t b = last_end, e = last_end;
          bool empty = true;
          for (std::size_t i = base; i < stack_.size(); i++) {
            if (stack_[i].empty) continue;
            if (empty) b = stack_[i].begin;
            e = stack_[i].end;
            empty = false;
          }
          MutNode v = reduce_value(p, base, b, e);
          stack_.resize(base);
          push_goto(p.klass, {0, 0, std::move(v), b, e, empty});
          break;
        }
        case Action::Kind::Accept: {
          res.result = stack_[stack_.size() - 2].val;
          return res;
        }
        case Action::Kind::Recur:
          recur.push_back(stack_.size());
          stack_.push_back({a->arg, -1, nullptr, last_end, last_end, true});
          break;
        case Action::Kind::Ret: {
          Entry top = std::move(stack_.back());
          if (recur.empty()) throw std::logic_error("return without recursion");
          stack_.resize(recur.back());
          recur.pop_back();
          push_goto(top.sym - t_.num_terminals, std::move(top));
          break;
        }
      }
    }
  }

  const CompiledLang& lang_;
  const Grammar& g_;
  const LrTables& t_;
  std::string_view input_;
  int main_;
  std::vector<Token> toks_;
  std::vector<Entry> stack_;
};

}  // namespace

ParseResult parse(const CompiledLang& lang, std::string_view input, std::optional<std::string_view> start) {
  int main = 0;
  if (start) {
    main = lang.main_index(*start);
    if (main < 0) throw std::invalid_argument("`" + std::string(*start) + "` is not a main nonterminal");
  }
  if (lang.grammar.mains.empty()) throw std::invalid_argument("language has no main nonterminal");
  return Engine(lang, input, main).run();
}

}  // namespace langcc
