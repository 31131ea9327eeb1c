#include "langcc/printer.hpp"

#include <stdexcept>
#include <unordered_map>

#include "langcc/runtime.hpp"

namespace langcc {

namespace {

class Printer {
 public:
  explicit Printer(const CompiledLang& lang) : lang_(lang), g_(lang.grammar) {
    for (std::size_t p = 0; p < g_.prods.size(); p++) {
      const auto& pr = g_.prods[p];
      if ((pr.kind == ProdKind::Rule || pr.kind == ProdKind::AltBranch) && !pr.path.empty())
        by_path_.emplace(pr.path, static_cast<int>(p));
    }
  }

  std::string run(const Node& n) {
    if (n.kind != Node::Kind::Record) throw std::invalid_argument("cannot print a non-record node");
    record(n);
    return std::move(out_);
  }

 private:
  void newline() {
    out_ += '\n';
    out_.append(static_cast<std::size_t>(indent_ * lang_.indent_unit), ' ');
  }

  void text(const std::string& s) {
    for (char c : s) {
      if (c == '\n')
        newline();
      else
        out_ += c;
    }
  }

  void record(const Node& n) {
    auto it = by_path_.find(n.path);
    if (it == by_path_.end()) throw std::invalid_argument("no production prints `" + n.path + "`");
    const Production& p = g_.prods[it->second];
    for (const auto& item : p.tmpl) {
      if (item.kind == TmplItem::Kind::Text) {
        text(item.text);
        continue;
      }
      const Node* v = n.field(item.name);
      if (!v) throw std::invalid_argument("`" + n.path + "` lacks field `" + item.name + "`");
      value(item, v);
    }
  }

  // A field or element value: inline label, token, source node, or a
  // synthesized alternation/option/list.
  void value(const TmplItem& item, const Node* v) {
    if (!item.text.empty()) {
      out_ += item.text;
      return;
    }
    if (item.value_nt >= 0) {
      synthesized(item.value_nt, v);
      return;
    }
    if (!v) throw std::invalid_argument("missing value");
    if (v->kind == Node::Kind::Token)
      out_ += v->text;
    else
      record(*v);
  }

  void element(const Tmpl& tmpl, const Node* content) {
    for (const auto& item : tmpl) {
      if (item.kind == TmplItem::Kind::Text)
        text(item.text);
      else
        value(item, content);
    }
  }

  void synthesized(int nt, const Node* v) {
    const Nonterminal& n = g_.nts[nt];
    switch (n.kind) {
      case NtKind::Alt:
        record(*v);
        return;
      case NtKind::Opt:
        if (n.boolean) {
          if (v->kind != Node::Kind::Bool) throw std::invalid_argument("expected a boolean for `" + n.origin + "`");
          if (v->flag) element(n.elem, nullptr);
        } else {
          if (v->kind != Node::Kind::Option) throw std::invalid_argument("expected an option for `" + n.origin + "`");
          if (!v->items.empty()) element(n.elem, v->items[0].get());
        }
        return;
      case NtKind::List:
        list(n, *v);
        return;
      default:
        throw std::invalid_argument("unexpected value for `" + n.name + "`");
    }
  }

  void list(const Nonterminal& n, const Node& v) {
    if (v.kind != Node::Kind::Seq) throw std::invalid_argument("expected a sequence for `" + n.origin + "`");
    const std::size_t count = v.items.size();
    auto elem = [&](std::size_t i) { element(n.elem, v.items[i].get()); };
    auto delim_after = [&](std::size_t i) {
      if (i + 1 < count || v.flag) element(n.delim, nullptr);
    };
    switch (n.flavor) {
      case ListFlavor::L:
        for (std::size_t i = 0; i < count; i++) {
          elem(i);
          delim_after(i);
        }
        return;
      case ListFlavor::B:
      case ListFlavor::B2:
        if (count == 0) return;
        indent_++;
        for (std::size_t i = 0; i < count; i++) {
          if (i && n.flavor == ListFlavor::B2) out_ += '\n';
          newline();
          elem(i);
          delim_after(i);
        }
        indent_--;
        newline();
        return;
      case ListFlavor::T:
      case ListFlavor::T2:
        for (std::size_t i = 0; i < count; i++) {
          if (i) {
            if (n.flavor == ListFlavor::T2) out_ += '\n';
            newline();
          }
          elem(i);
          delim_after(i);
        }
        return;
    }
  }

  const CompiledLang& lang_;
  const Grammar& g_;
  std::unordered_map<std::string, int> by_path_;
  std::string out_;
  int indent_ = 0;
};

}  // namespace

std::string pretty_print(const CompiledLang& lang, const Node& n) { return Printer(lang).run(n); }

RoundtripResult roundtrip_check(const CompiledLang& lang, std::string_view s, std::optional<std::string_view> start) {
  RoundtripResult r;
  ParseResult pr = parse(lang, s, start);
  if (!pr.is_success()) {
    r.parse_error = pr.err->format();
    return r;
  }
  r.printed = pretty_print(lang, *pr.result);
  r.ok = r.printed == s;
  if (!r.ok) {
    std::size_t i = 0;
    while (i < s.size() && i < r.printed.size() && s[i] == r.printed[i]) i++;
    r.diverge = i;
  }
  return r;
}

}  // namespace langcc
