#include "langcc/datacc.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace langcc::data {

namespace {

std::atomic<std::uint64_t> g_hash_computations{0};

bool is_builtin_name(std::string_view n) {
  return n == "integer" || n == "string" || n == "boolean" || n == "seq" || n == "option";
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] == '.') {
      out.push_back(cur);
      cur.clear();
    } else if (path[i] == ':' && i + 1 < path.size() && path[i + 1] == ':') {
      out.push_back(cur);
      cur.clear();
      ++i;
    } else {
      cur.push_back(path[i]);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string normalize_path(std::string_view path) {
  std::string out;
  for (const auto& c : split_path(path)) {
    if (!out.empty()) out += "::";
    out += c;
  }
  return out;
}

std::string TypeExpr::render() const {
  switch (kind) {
    case Kind::Integer: return "integer";
    case Kind::String: return "string";
    case Kind::Boolean: return "boolean";
    case Kind::Seq: return "seq[" + args[0].render() + "]";
    case Kind::Option: return "option[" + args[0].render() + "]";
    case Kind::Param: return name;
    case Kind::Named: {
      std::string out = name;
      if (!args.empty()) {
        out += '[';
        for (std::size_t i = 0; i < args.size(); ++i) {
          if (i) out += ", ";
          out += args[i].render();
        }
        out += ']';
      }
      return out;
    }
  }
  return {};
}

bool TypeDef::is_enum() const {
  if (kind != Kind::Sum || cases.empty()) return false;
  for (const auto& c : cases)
    if (c.kind != Kind::Product || !c.fields.empty()) return false;
  return true;
}

const Field* TypeDef::field(std::string_view n) const {
  for (const auto& f : fields)
    if (f.name == n) return &f;
  return nullptr;
}

const TypeDef* TypeDef::case_named(std::string_view n) const {
  for (const auto& c : cases)
    if (c.name == n) return &c;
  return nullptr;
}

const DataDecl* DatatypeSchema::find(std::string_view name) const {
  for (const auto& d : decls)
    if (d.def.name == name) return &d;
  return nullptr;
}

const TypeDef* DatatypeSchema::resolve_path(std::string_view path) const {
  auto parts = split_path(path);
  const DataDecl* d = find(parts[0]);
  if (!d) return nullptr;
  const TypeDef* cur = &d->def;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    cur = cur->case_named(parts[i]);
    if (!cur) return nullptr;
  }
  return cur;
}

namespace {

void check_type(const DatatypeSchema& s, const TypeExpr& t, const std::vector<std::string>& params,
                SourceLoc loc, std::vector<Diagnostic>& out) {
  switch (t.kind) {
    case TypeExpr::Kind::Seq:
    case TypeExpr::Kind::Option:
      check_type(s, t.args[0], params, loc, out);
      return;
    case TypeExpr::Kind::Param:
      for (const auto& p : params)
        if (p == t.name) return;
      out.push_back({loc, "unresolved type parameter `" + t.name + "`"});
      return;
    case TypeExpr::Kind::Named: {
      const DataDecl* d = s.find(t.name);
      if (!d) {
        out.push_back({loc, "unresolved type reference `" + t.name + "`"});
        return;
      }
      if (d->params.size() != t.args.size())
        out.push_back({loc, "type `" + t.name + "` expects " + std::to_string(d->params.size()) +
                                " argument(s), got " + std::to_string(t.args.size())});
      for (const auto& a : t.args) check_type(s, a, params, loc, out);
      return;
    }
    default:
      return;
  }
}

void check_def(const DatatypeSchema& s, const TypeDef& def, const std::vector<std::string>& params,
               const std::string& where, std::vector<Diagnostic>& out) {
  std::set<std::string> seen;
  if (def.kind == TypeDef::Kind::Product) {
    for (const auto& f : def.fields) {
      if (!seen.insert(f.name).second)
        out.push_back({def.loc, "duplicate field `" + f.name + "` in `" + where + "`"});
      check_type(s, f.type, params, def.loc, out);
    }
  } else {
    for (const auto& c : def.cases) {
      if (!seen.insert(c.name).second)
        out.push_back({c.loc, "duplicate case `" + c.name + "` in `" + where + "`"});
      check_def(s, c, params, where + "::" + c.name, out);
    }
  }
}

}  // namespace

std::vector<Diagnostic> DatatypeSchema::validate() const {
  std::vector<Diagnostic> out;
  std::set<std::string> names;
  for (const auto& d : decls) {
    if (is_builtin_name(d.def.name))
      out.push_back({d.def.loc, "type name `" + d.def.name + "` is reserved"});
    if (!names.insert(d.def.name).second)
      out.push_back({d.def.loc, "duplicate type `" + d.def.name + "`"});
    std::set<std::string> ps;
    for (const auto& p : d.params)
      if (!ps.insert(p).second)
        out.push_back({d.def.loc, "duplicate type parameter `" + p + "`"});
    check_def(*this, d.def, d.params, d.def.name, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// .data parser

namespace {

struct DTok {
  enum Kind { Ident, Punct, End };
  Kind kind;
  std::string text;
  SourceLoc loc;
};

std::vector<DTok> tokenize_data(std::string_view src) {
  std::vector<DTok> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto adv = [&] {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv();
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') adv();
      continue;
    }
    SourceLoc loc{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        id.push_back(src[i]);
        adv();
      }
      out.push_back({DTok::Ident, id, loc});
      continue;
    }
    if (std::string_view("{}[]:;,").find(c) != std::string_view::npos) {
      out.push_back({DTok::Punct, std::string(1, c), loc});
      adv();
      continue;
    }
    throw SpecError(loc, std::string("unexpected character `") + c + "`");
  }
  out.push_back({DTok::End, "", {line, col}});
  return out;
}

class DataParser {
 public:
  explicit DataParser(std::vector<DTok> toks) : toks_(std::move(toks)) {}

  DatatypeSchema parse() {
    DatatypeSchema s;
    while (peek().kind != DTok::End) s.decls.push_back(parse_decl());
    return s;
  }

 private:
  const DTok& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  DTok next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at_punct(char c, std::size_t ahead = 0) const {
    return peek(ahead).kind == DTok::Punct && peek(ahead).text[0] == c;
  }
  [[noreturn]] void fail(const std::string& what) const {
    const auto& t = peek();
    throw SpecError(t.loc, "expected " + what + ", found " +
                               (t.kind == DTok::End ? std::string("end of input") : "`" + t.text + "`"));
  }
  void expect(char c) {
    if (!at_punct(c)) fail(std::string("`") + c + "`");
    next();
  }
  DTok ident() {
    if (peek().kind != DTok::Ident) fail("identifier");
    return next();
  }

  DataDecl parse_decl() {
    DTok kw = ident();
    if (kw.text != "data") throw SpecError(kw.loc, "expected `data`, found `" + kw.text + "`");
    DataDecl d;
    DTok name = ident();
    d.def.name = name.text;
    d.def.loc = name.loc;
    if (at_punct('[')) {
      next();
      d.params.push_back(ident().text);
      while (at_punct(',')) {
        next();
        d.params.push_back(ident().text);
      }
      expect(']');
    }
    params_ = d.params;
    parse_body(d.def);
    return d;
  }

  // Parses `{ ... }` into def, deciding product vs sum by content.
  void parse_body(TypeDef& def) {
    expect('{');
    bool has_fields = false, has_cases = false;
    def.kind = TypeDef::Kind::Product;
    while (!at_punct('}')) {
      DTok name = ident();
      if (at_punct(':')) {
        next();
        if (has_cases) throw SpecError(name.loc, "cannot mix fields and cases in `" + def.name + "`");
        has_fields = true;
        def.fields.push_back({name.text, parse_type()});
        expect(';');
      } else {
        if (has_fields) throw SpecError(name.loc, "cannot mix fields and cases in `" + def.name + "`");
        has_cases = true;
        def.kind = TypeDef::Kind::Sum;
        TypeDef c;
        c.name = name.text;
        c.loc = name.loc;
        if (at_punct('{')) {
          parse_body(c);
        } else {
          expect(';');
        }
        def.cases.push_back(std::move(c));
      }
    }
    expect('}');
  }

  TypeExpr parse_type() {
    DTok name = ident();
    auto one_arg = [&] {
      expect('[');
      TypeExpr t = parse_type();
      expect(']');
      return t;
    };
    if (name.text == "integer") return TypeExpr::integer();
    if (name.text == "string") return TypeExpr::string();
    if (name.text == "boolean") return TypeExpr::boolean();
    if (name.text == "seq") return TypeExpr::seq(one_arg());
    if (name.text == "option") return TypeExpr::option(one_arg());
    for (const auto& p : params_)
      if (p == name.text) return TypeExpr::param(name.text);
    std::vector<TypeExpr> args;
    if (at_punct('[')) {
      next();
      args.push_back(parse_type());
      while (at_punct(',')) {
        next();
        args.push_back(parse_type());
      }
      expect(']');
    }
    return TypeExpr::named(name.text, std::move(args));
  }

  std::vector<DTok> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> params_;
};

void render_body(const TypeDef& def, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 4, ' ');
  out += "{";
  if (def.kind == TypeDef::Kind::Product && def.fields.empty()) {
    out += "}";
    return;
  }
  out += "\n";
  if (def.kind == TypeDef::Kind::Product) {
    for (const auto& f : def.fields) out += pad + "    " + f.name + ": " + f.type.render() + ";\n";
  } else {
    for (const auto& c : def.cases) {
      out += pad + "    " + c.name;
      if (c.kind == TypeDef::Kind::Product && c.fields.empty()) {
        out += ";\n";
      } else {
        out += " ";
        render_body(c, indent + 1, out);
        out += "\n";
      }
    }
  }
  out += pad + "}";
}

}  // namespace

DatatypeSchema parse_data_spec(std::string_view source) {
  DatatypeSchema s = DataParser(tokenize_data(source)).parse();
  auto diags = s.validate();
  if (!diags.empty()) throw SpecError(std::move(diags));
  return s;
}

std::string render_schema(const DatatypeSchema& schema) {
  std::string out;
  for (const auto& d : schema.decls) {
    if (!out.empty()) out += "\n";
    out += "data " + d.def.name;
    if (!d.params.empty()) {
      out += "[";
      for (std::size_t i = 0; i < d.params.size(); ++i) {
        if (i) out += ", ";
        out += d.params[i];
      }
      out += "]";
    }
    out += " ";
    render_body(d.def, 0, out);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Values

namespace {

using Node = detail::ValueNode;

std::shared_ptr<Node> fresh(Node::Kind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  return n;
}

}  // namespace

DataValue DataValue::integer(std::int64_t v) {
  auto n = fresh(Kind::Integer);
  n->i = v;
  return DataValue(std::move(n));
}

DataValue DataValue::string(std::string v) {
  auto n = fresh(Kind::String);
  n->s = std::move(v);
  return DataValue(std::move(n));
}

DataValue DataValue::boolean(bool v) {
  auto n = fresh(Kind::Boolean);
  n->b = v;
  return DataValue(std::move(n));
}

DataValue DataValue::seq(std::vector<DataValue> items) {
  auto n = fresh(Kind::Seq);
  n->items = std::move(items);
  return DataValue(std::move(n));
}

DataValue DataValue::none() { return DataValue(fresh(Kind::None)); }

DataValue DataValue::some(DataValue v) {
  auto n = fresh(Kind::Some);
  n->items.push_back(std::move(v));
  return DataValue(std::move(n));
}

DataValue DataValue::record(std::string path, std::vector<std::pair<std::string, DataValue>> fields) {
  auto n = fresh(Kind::Record);
  n->s = normalize_path(path);
  n->fields = std::move(fields);
  return DataValue(std::move(n));
}

const DataValue* DataValue::field(std::string_view name) const {
  for (const auto& [k, v] : node_->fields)
    if (k == name) return &v;
  return nullptr;
}

bool operator==(const DataValue& a, const DataValue& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case DataValue::Kind::Integer: return x.i == y.i;
    case DataValue::Kind::Boolean: return x.b == y.b;
    case DataValue::Kind::String: return x.s == y.s;
    case DataValue::Kind::None: return true;
    case DataValue::Kind::Seq:
    case DataValue::Kind::Some: return x.items == y.items;
    case DataValue::Kind::Record: return x.s == y.s && x.fields == y.fields;
  }
  return false;
}

namespace {

using Subst = std::map<std::string, TypeExpr>;

TypeExpr apply_subst(const TypeExpr& t, const Subst& s) {
  if (t.kind == TypeExpr::Kind::Param) {
    auto it = s.find(t.name);
    return it == s.end() ? t : it->second;
  }
  TypeExpr out = t;
  for (auto& a : out.args) a = apply_subst(a, s);
  return out;
}

std::optional<std::string> check_value(const DatatypeSchema& schema, const DataValue& v,
                                       const TypeExpr& type, const std::string& where);

std::optional<std::string> check_record(const DatatypeSchema& schema, const DataValue& v,
                                        const TypeDef& def, const Subst& subst,
                                        const std::string& where) {
  if (def.kind == TypeDef::Kind::Sum)
    return where + ": `" + v.path() + "` names a sum, not a concrete case";
  if (v.fields().size() != def.fields.size())
    return where + ": `" + v.path() + "` expects " + std::to_string(def.fields.size()) +
           " field(s), got " + std::to_string(v.fields().size());
  for (std::size_t i = 0; i < def.fields.size(); ++i) {
    const auto& [name, fv] = v.fields()[i];
    if (name != def.fields[i].name)
      return where + ": field " + std::to_string(i) + " of `" + v.path() + "` is `" +
             def.fields[i].name + "`, got `" + name + "`";
    if (auto e = check_value(schema, fv, apply_subst(def.fields[i].type, subst),
                             where + "." + name))
      return e;
  }
  return std::nullopt;
}

std::optional<std::string> check_value(const DatatypeSchema& schema, const DataValue& v,
                                       const TypeExpr& type, const std::string& where) {
  using K = TypeExpr::Kind;
  auto mismatch = [&](const char* want) -> std::optional<std::string> {
    return where + ": expected " + want + " for type " + type.render();
  };
  switch (type.kind) {
    case K::Integer:
      if (v.kind() != DataValue::Kind::Integer) return mismatch("integer");
      return std::nullopt;
    case K::String:
      if (v.kind() != DataValue::Kind::String) return mismatch("string");
      return std::nullopt;
    case K::Boolean:
      if (v.kind() != DataValue::Kind::Boolean) return mismatch("boolean");
      return std::nullopt;
    case K::Seq:
      if (v.kind() != DataValue::Kind::Seq) return mismatch("sequence");
      for (std::size_t i = 0; i < v.items().size(); ++i)
        if (auto e = check_value(schema, v.items()[i], type.args[0],
                                 where + "[" + std::to_string(i) + "]"))
          return e;
      return std::nullopt;
    case K::Option:
      if (v.kind() == DataValue::Kind::None) return std::nullopt;
      if (v.kind() != DataValue::Kind::Some) return mismatch("option");
      return check_value(schema, v.items()[0], type.args[0], where);
    case K::Param:
      // An uninstantiated parameter accepts any value.
      return std::nullopt;
    case K::Named: {
      if (v.kind() != DataValue::Kind::Record) return mismatch("record");
      const DataDecl* d = schema.find(type.name);
      if (!d) return where + ": unknown type `" + type.name + "`";
      auto parts = split_path(v.path());
      if (parts[0] != type.name) return where + ": `" + v.path() + "` is not a " + type.name;
      const TypeDef* def = schema.resolve_path(v.path());
      if (!def) return where + ": undeclared case `" + v.path() + "`";
      Subst subst;
      for (std::size_t i = 0; i < d->params.size() && i < type.args.size(); ++i)
        subst[d->params[i]] = type.args[i];
      return check_record(schema, v, *def, subst, where);
    }
  }
  return std::nullopt;
}

const TypeDef& require_path(const DatatypeSchema& schema, std::string_view path) {
  const TypeDef* def = schema.resolve_path(path);
  if (!def) throw DataError("undeclared type or case `" + normalize_path(path) + "`");
  return *def;
}

}  // namespace

std::optional<std::string> validate_value(const DatatypeSchema& schema, const DataValue& v,
                                          const TypeExpr& type) {
  return check_value(schema, v, type, "value");
}

DataValue construct(const DatatypeSchema& schema, std::string_view path,
                    std::vector<std::pair<std::string, DataValue>> fields) {
  const TypeDef& def = require_path(schema, path);
  if (def.kind != TypeDef::Kind::Product)
    throw DataError("`" + normalize_path(path) + "` is a sum; construct one of its cases");
  std::vector<std::pair<std::string, DataValue>> ordered;
  for (const auto& f : def.fields) {
    auto it = std::find_if(fields.begin(), fields.end(), [&](const auto& p) { return p.first == f.name; });
    if (it == fields.end()) throw DataError("missing field `" + f.name + "`");
    ordered.emplace_back(f.name, it->second);
  }
  if (ordered.size() != fields.size()) throw DataError("unknown field in construction of `" + std::string(path) + "`");
  DataValue v = DataValue::record(std::string(path), std::move(ordered));
  const auto top = split_path(path)[0];
  const DataDecl* d = schema.find(top);
  std::vector<TypeExpr> args;
  for (const auto& p : d->params) args.push_back(TypeExpr::param(p));
  if (auto e = validate_value(schema, v, TypeExpr::named(top, args))) throw DataError(*e);
  return v;
}

std::optional<DataValue> downcast(const DatatypeSchema& schema, const DataValue& v,
                                  std::string_view case_path) {
  if (is_case(schema, v, case_path)) return v;
  return std::nullopt;
}

bool is_case(const DatatypeSchema& schema, const DataValue& v, std::string_view case_path) {
  require_path(schema, case_path);
  if (v.kind() != DataValue::Kind::Record) return false;
  auto want = split_path(case_path);
  auto have = split_path(v.path());
  if (want.size() > have.size()) return false;
  return std::equal(want.begin(), want.end(), have.begin());
}

DataValue substitute_field(const DatatypeSchema& schema, const DataValue& v,
                           std::string_view field, DataValue replacement) {
  if (v.kind() != DataValue::Kind::Record) throw DataError("substitute_field on a non-record value");
  const TypeDef& def = require_path(schema, v.path());
  const Field* f = def.field(field);
  if (!f) throw DataError("`" + v.path() + "` has no field `" + std::string(field) + "`");
  // Instantiate parameters from the value's current field contents is not
  // possible in general; check against the declared type with parameters open.
  if (auto e = check_value(schema, replacement, f->type, std::string(field)))
    throw DataError("type mismatch: " + *e);
  auto fields = v.fields();
  for (auto& [k, fv] : fields)
    if (k == field) fv = std::move(replacement);
  return DataValue::record(v.path(), std::move(fields));
}

namespace {

void print_value(const DataValue& v, std::string& out) {
  switch (v.kind()) {
    case DataValue::Kind::Integer: out += std::to_string(v.as_integer()); return;
    case DataValue::Kind::Boolean: out += v.as_boolean() ? "true" : "false"; return;
    case DataValue::Kind::String: {
      out += '"';
      for (char c : v.as_string()) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
          out += "\\n";
          continue;
        }
        out += c;
      }
      out += '"';
      return;
    }
    case DataValue::Kind::None: out += "None"; return;
    case DataValue::Kind::Some:
      out += "Some(";
      print_value(v.items()[0], out);
      out += ")";
      return;
    case DataValue::Kind::Seq:
      out += "[";
      for (std::size_t i = 0; i < v.items().size(); ++i) {
        if (i) out += ", ";
        print_value(v.items()[i], out);
      }
      out += "]";
      return;
    case DataValue::Kind::Record:
      out += v.path();
      // Field-less cases of a sum print as bare paths (enum style).
      if (v.fields().empty() && v.path().find("::") != std::string::npos) return;
      out += "(";
      for (std::size_t i = 0; i < v.fields().size(); ++i) {
        if (i) out += ", ";
        out += v.fields()[i].first + ": ";
        print_value(v.fields()[i].second, out);
      }
      out += ")";
      return;
  }
}

void put_u64(std::string& out, std::uint64_t x) {
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<char>((x >> (8 * i)) & 0xFF));
}

void put_str(std::string& out, std::string_view s) {
  put_u64(out, s.size());
  out.append(s);
}

void put_digest(std::string& out, const Digest& d) {
  out.append(reinterpret_cast<const char*>(d.data()), d.size());
}

}  // namespace

std::string debug_print(const DataValue& v) {
  std::string out;
  print_value(v, out);
  return out;
}

Digest value_hash(const DataValue& v) {
  const auto& n = *v.node_;
  std::call_once(n.hash_once, [&] {
    g_hash_computations.fetch_add(1, std::memory_order_relaxed);
    std::string buf;
    buf.push_back(static_cast<char>(n.kind));
    switch (n.kind) {
      case DataValue::Kind::Integer: put_u64(buf, static_cast<std::uint64_t>(n.i)); break;
      case DataValue::Kind::Boolean: buf.push_back(n.b ? 1 : 0); break;
      case DataValue::Kind::String: put_str(buf, n.s); break;
      case DataValue::Kind::None: break;
      case DataValue::Kind::Seq:
      case DataValue::Kind::Some:
        put_u64(buf, n.items.size());
        for (const auto& it : n.items) put_digest(buf, value_hash(it));
        break;
      case DataValue::Kind::Record:
        put_str(buf, n.s);
        put_u64(buf, n.fields.size());
        for (const auto& [k, fv] : n.fields) {
          put_str(buf, k);
          put_digest(buf, value_hash(fv));
        }
        break;
    }
    n.hash = sha256(buf);
  });
  return n.hash;
}

std::uint64_t hash_computations() { return g_hash_computations.load(std::memory_order_relaxed); }

}  // namespace langcc::data
