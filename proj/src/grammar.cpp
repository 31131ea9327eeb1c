#include "langcc/grammar.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace langcc {

int Grammar::find_nt(std::string_view name) const {
  for (std::size_t i = 0; i < nts.size(); i++)
    if (nts[i].name == name) return static_cast<int>(i);
  return -1;
}

bool Grammar::admits(const Slot& s, int klass) const {
  const NtClass& c = classes[klass];
  if (s.terminal || c.nt != s.id) return false;
  if (!s.any_level && c.level >= 0 && c.level < s.min_level) return false;
  for (const auto& [attr, want] : s.attrs) {
    bool has = std::find(c.attrs.begin(), c.attrs.end(), attr) != c.attrs.end();
    if (has != want) return false;
  }
  return true;
}

std::vector<int> Grammar::admissible(const Slot& s) const {
  std::vector<int> out;
  if (s.terminal) return out;
  for (int c : nts[s.id].classes)
    if (admits(s, c)) out.push_back(c);
  return out;
}

std::string Grammar::symbol_name(const Slot& s) const {
  return s.terminal ? tokens.display(s.id) : nts[s.id].name;
}

std::string Grammar::render_production(int p) const {
  const Production& pr = prods[p];
  std::string out = nts[pr.lhs].name + " ->";
  if (pr.rhs.empty()) out += " eps";
  for (const auto& s : pr.rhs) out += " " + symbol_name(s);
  return out;
}

namespace {

std::string slot_annotation(const Grammar& g, const Slot& s) {
  std::string out;
  if (s.terminal) return out;
  std::vector<std::string> parts;
  for (const auto& [a, want] : s.attrs) parts.push_back(want ? a : "!" + a);
  if (s.any_level)
    parts.push_back("pr=*");
  else if (g.nts[s.id].has_prec && s.min_level > 0)
    parts.push_back("pr>=" + std::to_string(s.min_level));
  if (s.unfold) parts.push_back("~");
  if (parts.empty()) return out;
  out = "[";
  for (std::size_t i = 0; i < parts.size(); i++) out += (i ? ", " : "") + parts[i];
  return out + "]";
}

const char* kind_name(NtKind k) {
  switch (k) {
    case NtKind::Source:
      return "source";
    case NtKind::Alt:
      return "alternation";
    case NtKind::Opt:
      return "optional";
    case NtKind::List:
      return "list";
    case NtKind::Start:
      return "start";
  }
  return "";
}

}  // namespace

std::string Grammar::dump() const {
  std::ostringstream os;
  os << "terminals:\n";
  for (int i = 0; i < tokens.size(); i++) os << "  " << i << " " << tokens.display(i) << "\n";
  os << "\nnonterminals:\n";
  for (std::size_t i = 0; i < nts.size(); i++) {
    const auto& n = nts[i];
    os << "  " << n.name << " (" << kind_name(n.kind) << ")";
    if (!n.origin.empty()) os << " = " << n.origin;
    os << "\n";
    for (int c : n.classes) {
      os << "    class " << c;
      if (classes[c].level >= 0) os << " level " << classes[c].level;
      if (!classes[c].attrs.empty()) {
        os << " attrs";
        for (const auto& a : classes[c].attrs) os << " " << a;
      }
      os << ":";
      for (int p : classes[c].prods) os << " p" << p;
      os << "\n";
    }
  }
  os << "\nproductions:\n";
  for (std::size_t p = 0; p < prods.size(); p++) {
    const auto& pr = prods[p];
    os << "  p" << p << ": " << nts[pr.lhs].name << " ->";
    if (pr.rhs.empty()) os << " eps";
    for (const auto& s : pr.rhs) os << " " << symbol_name(s) << slot_annotation(*this, s);
    if (!pr.path.empty()) os << "    {" << pr.path << "}";
    os << "\n";
  }
  if (!notices.empty()) {
    os << "\nnotices:\n";
    for (const auto& n : notices) os << "  " << n << "\n";
  }
  return os.str();
}

namespace {

bool path_prefix(const std::string& dotted, const std::vector<std::string>& path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto dot = dotted.find('.', start);
    parts.push_back(dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (parts.size() > path.size()) return false;
  return std::equal(parts.begin(), parts.end(), path.begin());
}

std::string join(const std::vector<std::string>& xs, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); i++) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

// Strips branch labels so synthesized names display like `(`+` | `-`)`.
ParseExpr strip_labels(ParseExpr e) {
  for (auto& l : e.labels) l.clear();
  if (e.kind == ParseExpr::Kind::Named) return strip_labels(std::move(e.items[0]));
  if (e.kind == ParseExpr::Kind::SingletonAlt) {
    ParseExpr inner = strip_labels(std::move(e.items[0]));
    e.items.clear();
    e.items.push_back(std::move(inner));
    return e;
  }
  for (auto& x : e.items) x = strip_labels(std::move(x));
  return e;
}

std::string origin_of(const ParseExpr& e) {
  ParseExpr s = strip_labels(e);
  std::string r = render_parse_expr(s);
  if (s.kind == ParseExpr::Kind::Alt) r = "(" + r + ")";
  return r;
}

class Lowerer {
 public:
  Lowerer(const LangSpec& spec, const TokenTable& tokens) : spec_(spec) {
    g_.tokens = tokens;
    strict_ = spec.parser.has_prop("name_strict");
  }

  Grammar run() {
    // Source nonterminals in order of first rule.
    for (const auto& r : spec_.parser.rules)
      if (g_.find_nt(r.lhs()) < 0) {
        Nonterminal n;
        n.name = r.lhs();
        n.kind = NtKind::Source;
        n.value_type = data::TypeExpr::named(n.name);
        g_.nts.push_back(std::move(n));
        type_names_.insert(r.lhs());
      }
    num_source_ = static_cast<int>(g_.nts.size());
    assign_levels();
    for (const auto& r : spec_.parser.rules) lower_rule(r);
    for (const auto& m : spec_.parser.main_nonterms()) add_start(m);
    build_classes();
    check_attrs();
    build_schema();
    g_.notices.push_back(
        "nonterminal slots without `~` are parsed LR-style (unfolded); pass --rd=on for recursive-descent steps");
    return std::move(g_);
  }

 private:
  struct Out {
    std::vector<Slot> slots;
    Tmpl tmpl;
    std::vector<FieldSpec> fields;
    std::vector<data::Field> field_types;
    std::vector<FieldSpec> content;
    std::vector<data::TypeExpr> content_types;
  };

  struct Ctx {
    std::string rule;       // dotted rule name, for diagnostics
    std::string type_base;  // prefix for synthesized type names
    bool record = true;     // fields (record) or a single element value
  };

  // --- precedence ---------------------------------------------------------

  struct PrecInfo {
    int level = -1;
    PrecTag tag = PrecTag::None;
  };

  void assign_levels() {
    std::map<std::string, int> lines_per_nt;
    std::vector<int> line_level(spec_.parser.prec.size(), -1);
    std::vector<std::string> line_nt(spec_.parser.prec.size());
    for (std::size_t i = 0; i < spec_.parser.prec.size(); i++) {
      const auto& line = spec_.parser.prec[i];
      if (line.rules.empty()) continue;
      std::string nt = line.rules[0].substr(0, line.rules[0].find('.'));
      line_nt[i] = nt;
      line_level[i] = lines_per_nt[nt]++;
    }
    for (const auto& [nt, count] : lines_per_nt) {
      int id = g_.find_nt(nt);
      if (id < 0) continue;
      g_.nts[id].has_prec = true;
      g_.nts[id].max_level = count - 1;
    }
    for (const auto& r : spec_.parser.rules) {
      PrecInfo info;
      int id = g_.find_nt(r.lhs());
      if (g_.nts[id].has_prec) {
        info.level = g_.nts[id].max_level;
        for (std::size_t i = 0; i < spec_.parser.prec.size(); i++) {
          const auto& line = spec_.parser.prec[i];
          bool hit = std::any_of(line.rules.begin(), line.rules.end(),
                                 [&](const std::string& p) { return path_prefix(p, r.path); });
          if (hit) {
            info.level = line_level[i];
            info.tag = line.tag;
            break;
          }
        }
      }
      prec_[r.dotted()] = info;
    }
  }

  void apply_prec(Production& p, const PrecInfo& info) {
    if (info.level < 0) return;
    const int i = info.level;
    const int top = g_.nts[p.lhs].max_level;
    std::vector<int> selfs;
    for (std::size_t s = 0; s < p.rhs.size(); s++)
      if (!p.rhs[s].terminal && p.rhs[s].id == p.lhs) selfs.push_back(static_cast<int>(s));
    for (std::size_t j = 0; j < selfs.size(); j++) {
      bool loose = false;
      switch (info.tag) {
        case PrecTag::AssocLeft:
        case PrecTag::Postfix:
          loose = j == 0;
          break;
        case PrecTag::AssocRight:
        case PrecTag::Prefix:
          loose = j + 1 == selfs.size();
          break;
        case PrecTag::None:
          break;
      }
      p.rhs[selfs[j]].min_level = loose ? i : std::min(i + 1, top);
    }
  }

  // --- lowering -----------------------------------------------------------

  int literal_token(const ParseExpr& e) {
    int id = g_.tokens.find_literal(e.text);
    if (id < 0) throw SpecError(e.loc, "literal " + render_literal(e.text) + " is never emitted by the lexer");
    return id;
  }

  Slot nonterm_slot(const ParseExpr& ref, bool unfold) {
    Slot s;
    s.terminal = false;
    s.id = g_.find_nt(ref.text);
    if (s.id < 0) throw SpecError(ref.loc, "undeclared nonterminal `" + ref.text + "`");
    s.unfold = unfold;
    for (const auto& a : ref.attrs) {
      if (a.kind == AttrReq::Kind::PrecStar)
        s.any_level = true;
      else
        s.attrs.emplace_back(a.name, a.kind == AttrReq::Kind::Require);
    }
    return s;
  }

  std::string fresh_type(const std::string& base) {
    std::string name = base;
    for (int n = 2; type_names_.count(name); n++) name = base + "_" + std::to_string(n);
    type_names_.insert(name);
    return name;
  }

  data::TypeExpr slot_type(const Slot& s, FieldConv conv, const std::string& label_type) {
    if (conv == FieldConv::Token) return data::TypeExpr::string();
    if (conv == FieldConv::InlineLabel) return data::TypeExpr::named(label_type);
    return g_.nts[s.id].value_type;
  }

  static bool is_content(const ParseExpr& e) {
    using K = ParseExpr::Kind;
    switch (e.kind) {
      case K::Literal:
      case K::Pass:
      case K::Space:
      case K::Eps:
        return false;
      case K::Seq:
        return std::any_of(e.items.begin(), e.items.end(), is_content);
      default:
        return true;
    }
  }

  void items(const ParseExpr& e, Out& out, const Ctx& ctx) {
    using K = ParseExpr::Kind;
    switch (e.kind) {
      case K::Literal: {
        Slot s;
        s.id = literal_token(e);
        out.slots.push_back(s);
        out.tmpl.push_back({TmplItem::Kind::Text, e.text, "", -1, -1});
        return;
      }
      case K::Space:
        out.tmpl.push_back({TmplItem::Kind::Text, " ", "", -1, -1});
        return;
      case K::Pass:
        out.tmpl.push_back({TmplItem::Kind::Text, e.text, "", -1, -1});
        return;
      case K::Eps:
        return;
      case K::Seq:
        for (const auto& x : e.items) items(x, out, ctx);
        return;
      case K::Named:
        content(e.items[0], e.text, out, ctx, e.loc);
        return;
      default:
        content(e, "", out, ctx, e.loc);
        return;
    }
  }

  void content(const ParseExpr& e, std::string name, Out& out, const Ctx& ctx, SourceLoc loc) {
    using K = ParseExpr::Kind;
    const int slot_index = static_cast<int>(out.slots.size());
    if (ctx.record && name.empty()) {
      if (strict_)
        throw SpecError(loc, "rule `" + ctx.rule + "`: `" + render_parse_expr(e) +
                                 "` must be named (prop name_strict)");
      name = "_f" + std::to_string(slot_index);
    }
    if (!ctx.record && !out.content.empty())
      throw SpecError(loc, "rule `" + ctx.rule + "`: a repeated or optional element may hold at most one value; `" +
                               render_parse_expr(e) + "` is a second one");
    const std::string base = ctx.record ? ctx.type_base + "_" + name : ctx.type_base;

    Slot slot;
    FieldConv conv = FieldConv::Node;
    std::string label_path, label_type, label_text;
    int value_nt = -1;
    switch (e.kind) {
      case K::Literal:
        slot.id = literal_token(e);
        conv = FieldConv::Token;
        break;
      case K::TokenRef:
        slot.id = g_.tokens.find_opaque(e.text);
        if (slot.id < 0) throw SpecError(e.loc, "token `" + e.text + "` is never emitted by the lexer");
        conv = FieldConv::Token;
        break;
      case K::NontermRef:
        slot = nonterm_slot(e, false);
        break;
      case K::Unfold:
        slot = nonterm_slot(e.items[0], true);
        break;
      case K::SingletonAlt:
        if (e.items[0].kind == K::Literal) {
          slot.id = literal_token(e.items[0]);
          conv = FieldConv::InlineLabel;
          label_type = fresh_type(base);
          label_path = label_type + "::" + e.text;
          label_text = e.items[0].text;
          inline_enums_.push_back({label_type, e.text});
          break;
        }
        [[fallthrough]];
      case K::Alt:
      case K::Optional:
      case K::Star:
      case K::Plus:
      case K::List:
        slot.terminal = false;
        slot.id = value_nt = synthesize(e, ctx.rule, base);
        break;
      default:
        throw SpecError(loc, "rule `" + ctx.rule + "`: `" + render_parse_expr(e) + "` cannot carry a value");
    }
    out.slots.push_back(slot);
    FieldSpec f{name, slot_index, conv, label_path};
    data::TypeExpr type = slot_type(slot, conv, label_type);
    if (ctx.record) {
      for (const auto& existing : out.fields)
        if (existing.name == name)
          throw SpecError(loc, "rule `" + ctx.rule + "`: field `" + name + "` is defined twice");
      out.fields.push_back(f);
      out.field_types.push_back({name, type});
      out.tmpl.push_back({TmplItem::Kind::Field, label_text, name, slot_index, value_nt});
    } else {
      out.content.push_back(f);
      out.content_types.push_back(type);
      out.tmpl.push_back({TmplItem::Kind::Content, label_text, "", slot_index, value_nt});
    }
  }

  int new_nt(NtKind kind, const ParseExpr& e) {
    Nonterminal n;
    n.name = "X" + std::to_string(next_x_++);
    n.origin = origin_of(e);
    n.kind = kind;
    g_.nts.push_back(std::move(n));
    return static_cast<int>(g_.nts.size()) - 1;
  }

  int add_prod(Production p) {
    int id = static_cast<int>(g_.prods.size());
    g_.nts[p.lhs].prods.push_back(id);
    g_.prods.push_back(std::move(p));
    return id;
  }

  static void shift_content(std::vector<FieldSpec>& c, int by) {
    for (auto& f : c) f.slot += by;
  }

  int synthesize(const ParseExpr& e, const std::string& rule, const std::string& base) {
    using K = ParseExpr::Kind;
    if (e.kind == K::Alt || e.kind == K::SingletonAlt) {
      int nt = new_nt(NtKind::Alt, e);
      std::string type = fresh_type(base);
      g_.nts[nt].type_name = type;
      g_.nts[nt].value_type = data::TypeExpr::named(type);
      data::DataDecl decl;
      decl.def.name = type;
      decl.def.kind = data::TypeDef::Kind::Sum;
      std::vector<std::string> labels = e.kind == K::Alt ? e.labels : std::vector<std::string>{e.text};
      for (std::size_t i = 0; i < e.items.size(); i++) {
        std::string label = labels[i];
        if (label.empty()) {
          if (strict_)
            throw SpecError(e.items[i].loc, "rule `" + rule + "`: alternative `" + render_parse_expr(e.items[i]) +
                                                "` must be labeled (prop name_strict)");
          label = "_" + std::to_string(i);
        }
        Out out;
        items(e.items[i], out, {rule, type + "_" + label, true});
        Production p;
        p.lhs = nt;
        p.kind = ProdKind::AltBranch;
        p.rhs = std::move(out.slots);
        p.path = type + "::" + label;
        p.fields = std::move(out.fields);
        p.tmpl = std::move(out.tmpl);
        p.loc = e.items[i].loc;
        data::TypeDef c;
        c.name = label;
        c.fields = std::move(out.field_types);
        decl.def.cases.push_back(std::move(c));
        add_prod(std::move(p));
      }
      alt_decls_.push_back(std::move(decl));
      return nt;
    }
    if (e.kind == K::Optional) {
      int nt = new_nt(NtKind::Opt, e);
      Out out;
      items(e.items[0], out, {rule, base, false});
      auto& n = g_.nts[nt];
      n.boolean = out.content.empty();
      n.value_type = n.boolean ? data::TypeExpr::boolean() : data::TypeExpr::option(out.content_types[0]);
      n.elem = out.tmpl;
      Production none;
      none.lhs = nt;
      none.kind = ProdKind::OptNone;
      none.loc = e.loc;
      add_prod(std::move(none));
      Production some;
      some.lhs = nt;
      some.kind = ProdKind::OptSome;
      some.rhs = std::move(out.slots);
      some.content = std::move(out.content);
      some.loc = e.loc;
      add_prod(std::move(some));
      return nt;
    }
    // Repetition: `e*`, `e+`, `#F[e :: d ..]`.
    const ParseExpr& elem_expr = e.items[0];
    const ParseExpr* delim_expr = e.kind == K::List ? &e.items[1] : nullptr;
    int min = e.kind == K::Plus ? 1 : e.kind == K::List ? e.min : 0;
    Trailing trailing = e.kind == K::List ? e.trailing : Trailing::None;
    int nt = new_nt(NtKind::List, e);
    Out elem;
    items(elem_expr, elem, {rule, base, false});
    Out delim;
    if (delim_expr) {
      items(*delim_expr, delim, {rule, base, false});
      if (!delim.content.empty())
        throw SpecError(delim_expr->loc, "rule `" + rule + "`: a list delimiter cannot carry a value");
    }
    {
      auto& n = g_.nts[nt];
      n.elem = elem.tmpl;
      n.delim = delim.tmpl;
      n.flavor = e.kind == K::List ? e.flavor : ListFlavor::L;
      n.min = min;
      n.trailing = trailing;
      n.value_type = data::TypeExpr::seq(elem.content.empty() ? data::TypeExpr::boolean() : elem.content_types[0]);
    }
    std::vector<FieldSpec> unit{{"", -1, FieldConv::Node, ""}};
    auto elem_content = [&](int offset) {
      std::vector<FieldSpec> c = elem.content.empty() ? unit : elem.content;
      if (!elem.content.empty()) shift_content(c, offset);
      return c;
    };
    auto self_slot = [](int id) {
      Slot s;
      s.terminal = false;
      s.id = id;
      return s;
    };
    const int ne = static_cast<int>(elem.slots.size());
    const int nd = static_cast<int>(delim.slots.size());
    auto concat = [](std::vector<Slot> a, const std::vector<Slot>& b) {
      a.insert(a.end(), b.begin(), b.end());
      return a;
    };
    // The nonempty core: C -> e | e d e (min 2), C -> C d e.
    auto build_core = [&](int core, int core_min) {
      Production first;
      first.lhs = core;
      first.loc = e.loc;
      if (core_min >= 2) {
        first.kind = ProdKind::ListTwo;
        first.rhs = concat(concat(elem.slots, delim.slots), elem.slots);
        first.content = elem_content(0);
        auto second = elem_content(ne + nd);
        first.content.insert(first.content.end(), second.begin(), second.end());
      } else {
        first.kind = ProdKind::ListOne;
        first.rhs = elem.slots;
        first.content = elem_content(0);
      }
      add_prod(std::move(first));
      Production cons;
      cons.lhs = core;
      cons.kind = ProdKind::ListCons;
      cons.rhs = concat(concat({self_slot(core)}, delim.slots), elem.slots);
      cons.content = elem_content(1 + nd);
      cons.loc = e.loc;
      add_prod(std::move(cons));
    };
    if (!delim_expr) {
      // W -> eps | e (min 1), W -> W e.
      if (min == 0) {
        Production empty;
        empty.lhs = nt;
        empty.kind = ProdKind::ListEmpty;
        empty.loc = e.loc;
        add_prod(std::move(empty));
        Production cons;
        cons.lhs = nt;
        cons.kind = ProdKind::ListCons;
        cons.rhs = concat({self_slot(nt)}, elem.slots);
        cons.content = elem_content(1);
        cons.loc = e.loc;
        add_prod(std::move(cons));
      } else {
        build_core(nt, min);
      }
      return nt;
    }
    if (min >= 1 && trailing == Trailing::None) {
      build_core(nt, min);
      return nt;
    }
    int core = new_nt(NtKind::List, e);
    g_.nts[core].origin += " (nonempty)";
    g_.nts[core].elem = elem.tmpl;
    g_.nts[core].delim = delim.tmpl;
    g_.nts[core].value_type = g_.nts[nt].value_type;
    build_core(core, std::max(min, 1));
    if (min == 0) {
      Production empty;
      empty.lhs = nt;
      empty.kind = ProdKind::ListEmpty;
      empty.loc = e.loc;
      add_prod(std::move(empty));
    }
    if (trailing != Trailing::Required) {
      Production wrap;
      wrap.lhs = nt;
      wrap.kind = ProdKind::ListWrap;
      wrap.rhs = {self_slot(core)};
      wrap.loc = e.loc;
      add_prod(std::move(wrap));
    }
    if (trailing != Trailing::None) {
      Production wrap;
      wrap.lhs = nt;
      wrap.kind = ProdKind::ListWrapTrail;
      wrap.rhs = concat({self_slot(core)}, delim.slots);
      wrap.loc = e.loc;
      add_prod(std::move(wrap));
    }
    return nt;
  }

  void lower_rule(const RuleDecl& r) {
    std::string dotted = r.dotted();
    std::string path = join(r.path, "::");
    Out out;
    items(r.rhs, out, {dotted, join(r.path, "_"), true});
    Production p;
    p.lhs = g_.find_nt(r.lhs());
    p.kind = ProdKind::Rule;
    p.rhs = std::move(out.slots);
    p.path = path;
    p.fields = std::move(out.fields);
    p.tmpl = std::move(out.tmpl);
    p.loc = r.loc;
    std::set<std::string> attrs(r.lhs_attrs.begin(), r.lhs_attrs.end());
    for (const auto& d : spec_.parser.attr_decls)
      if (path_prefix(d.path, r.path)) attrs.insert(d.attrs.begin(), d.attrs.end());
    p.decl_attrs.assign(attrs.begin(), attrs.end());
    const PrecInfo& info = prec_.at(dotted);
    p.level = info.level;
    apply_prec(p, info);
    rule_fields_.push_back({r.path, std::move(out.field_types)});
    add_prod(std::move(p));
  }

  void add_start(const std::string& main) {
    int m = g_.find_nt(main);
    Nonterminal n;
    n.name = main + "'";
    n.kind = NtKind::Start;
    g_.nts.push_back(std::move(n));
    Production p;
    p.lhs = static_cast<int>(g_.nts.size()) - 1;
    p.kind = ProdKind::Start;
    Slot s;
    s.terminal = false;
    s.id = m;
    s.any_level = true;
    Slot eof;
    eof.id = kEofToken;
    p.rhs = {s, eof};
    g_.mains.push_back(m);
    g_.start_prods.push_back(add_prod(std::move(p)));
  }

  void build_classes() {
    for (std::size_t nt = 0; nt < g_.nts.size(); nt++) {
      auto& n = g_.nts[nt];
      std::set<std::string> declared;
      for (int p : n.prods) {
        auto& pr = g_.prods[p];
        declared.insert(pr.decl_attrs.begin(), pr.decl_attrs.end());
        int found = -1;
        for (int c : n.classes)
          if (g_.classes[c].level == pr.level && g_.classes[c].attrs == pr.decl_attrs) found = c;
        if (found < 0) {
          found = static_cast<int>(g_.classes.size());
          g_.classes.push_back({static_cast<int>(nt), pr.level, pr.decl_attrs, {}});
          n.classes.push_back(found);
        }
        g_.classes[found].prods.push_back(p);
        pr.klass = found;
      }
      n.declared_attrs.assign(declared.begin(), declared.end());
    }
  }

  void check_attrs() {
    for (const auto& p : g_.prods)
      for (const auto& s : p.rhs) {
        if (s.terminal) continue;
        const auto& declared = g_.nts[s.id].declared_attrs;
        for (const auto& [a, want] : s.attrs)
          if (std::find(declared.begin(), declared.end(), a) == declared.end())
            throw SpecError(p.loc, "attribute `" + a + "` is never declared by a production of `" +
                                       g_.nts[s.id].name + "`");
        if (g_.admissible(s).empty())
          throw SpecError(p.loc, "no production of `" + g_.nts[s.id].name + "` satisfies the constraints at `" +
                                     g_.render_production(static_cast<int>(&p - g_.prods.data())) + "`");
      }
  }

  static data::TypeDef& case_at(data::TypeDef& root, const std::vector<std::string>& path, std::size_t depth) {
    data::TypeDef* cur = &root;
    for (std::size_t i = 1; i < depth; i++) {
      data::TypeDef* next = nullptr;
      for (auto& c : cur->cases)
        if (c.name == path[i]) next = &c;
      if (!next) {
        cur->kind = data::TypeDef::Kind::Sum;
        data::TypeDef c;
        c.name = path[i];
        c.kind = data::TypeDef::Kind::Sum;
        cur->cases.push_back(std::move(c));
        next = &cur->cases.back();
      }
      cur = next;
    }
    return *cur;
  }

  void build_schema() {
    for (int nt = 0; nt < num_source_; nt++) {
      data::DataDecl decl;
      decl.def.name = g_.nts[nt].name;
      decl.def.kind = data::TypeDef::Kind::Sum;
      for (const auto& [path, fields] : rule_fields_) {
        if (path[0] != decl.def.name) continue;
        if (path.size() == 1) {
          decl.def.kind = data::TypeDef::Kind::Product;
          decl.def.fields = fields;
          continue;
        }
        data::TypeDef& parent = case_at(decl.def, path, path.size() - 1);
        data::TypeDef leaf;
        leaf.name = path.back();
        leaf.fields = fields;
        parent.cases.push_back(std::move(leaf));
      }
      g_.schema.decls.push_back(std::move(decl));
    }
    for (auto& d : alt_decls_) g_.schema.decls.push_back(std::move(d));
    for (const auto& [type, label] : inline_enums_) {
      data::DataDecl d;
      d.def.name = type;
      d.def.kind = data::TypeDef::Kind::Sum;
      data::TypeDef c;
      c.name = label;
      d.def.cases.push_back(std::move(c));
      g_.schema.decls.push_back(std::move(d));
    }
    auto diags = g_.schema.validate();
    if (!diags.empty()) throw SpecError(diags[0].loc, "generated AST schema: " + diags[0].message);
  }

  const LangSpec& spec_;
  Grammar g_;
  bool strict_ = false;
  int num_source_ = 0;
  int next_x_ = 0;
  std::map<std::string, PrecInfo> prec_;
  std::set<std::string> type_names_;
  std::vector<data::DataDecl> alt_decls_;
  std::vector<std::pair<std::string, std::string>> inline_enums_;
  std::vector<std::pair<std::vector<std::string>, std::vector<data::Field>>> rule_fields_;
};

}  // namespace

Grammar lower_grammar(const LangSpec& spec, const TokenTable& tokens) { return Lowerer(spec, tokens).run(); }

}  // namespace langcc
