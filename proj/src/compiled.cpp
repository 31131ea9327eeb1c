#include "langcc/compiled.hpp"

#include <stdexcept>

#include "json.hpp"

using nlohmann::json;

namespace langcc::data {

NLOHMANN_JSON_SERIALIZE_ENUM(TypeExpr::Kind, {{TypeExpr::Kind::Integer, "integer"},
                                              {TypeExpr::Kind::String, "string"},
                                              {TypeExpr::Kind::Boolean, "boolean"},
                                              {TypeExpr::Kind::Seq, "seq"},
                                              {TypeExpr::Kind::Option, "option"},
                                              {TypeExpr::Kind::Named, "named"},
                                              {TypeExpr::Kind::Param, "param"}})
NLOHMANN_JSON_SERIALIZE_ENUM(TypeDef::Kind, {{TypeDef::Kind::Product, "product"}, {TypeDef::Kind::Sum, "sum"}})

void to_json(json& j, const TypeExpr& t) { j = json{{"kind", t.kind}, {"name", t.name}, {"args", t.args}}; }
void from_json(const json& j, TypeExpr& t) {
  j.at("kind").get_to(t.kind);
  j.at("name").get_to(t.name);
  j.at("args").get_to(t.args);
}
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Field, name, type)
void to_json(json& j, const TypeDef& t) {
  j = json{{"name", t.name}, {"kind", t.kind}, {"fields", t.fields}, {"cases", t.cases}};
}
void from_json(const json& j, TypeDef& t) {
  j.at("name").get_to(t.name);
  j.at("kind").get_to(t.kind);
  j.at("fields").get_to(t.fields);
  j.at("cases").get_to(t.cases);
}
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DataDecl, params, def)
void to_json(json& j, const DatatypeSchema& s) { j = json{{"decls", s.decls}}; }
void from_json(const json& j, DatatypeSchema& s) { j.at("decls").get_to(s.decls); }

}  // namespace langcc::data

namespace langcc {

NLOHMANN_JSON_SERIALIZE_ENUM(LexAction::Kind, {{LexAction::Kind::Emit, "emit"},
                                               {LexAction::Kind::Pass, "pass"},
                                               {LexAction::Kind::Push, "push"},
                                               {LexAction::Kind::Pop, "pop"},
                                               {LexAction::Kind::PopExtract, "pop_extract"},
                                               {LexAction::Kind::PopEmit, "pop_emit"}})
NLOHMANN_JSON_SERIALIZE_ENUM(FieldConv, {{FieldConv::Token, "token"},
                                         {FieldConv::Node, "node"},
                                         {FieldConv::InlineLabel, "inline_label"}})
NLOHMANN_JSON_SERIALIZE_ENUM(TmplItem::Kind, {{TmplItem::Kind::Text, "text"},
                                              {TmplItem::Kind::Field, "field"},
                                              {TmplItem::Kind::Content, "content"}})
NLOHMANN_JSON_SERIALIZE_ENUM(ProdKind, {{ProdKind::Rule, "rule"},
                                        {ProdKind::AltBranch, "alt_branch"},
                                        {ProdKind::OptNone, "opt_none"},
                                        {ProdKind::OptSome, "opt_some"},
                                        {ProdKind::ListEmpty, "list_empty"},
                                        {ProdKind::ListOne, "list_one"},
                                        {ProdKind::ListTwo, "list_two"},
                                        {ProdKind::ListCons, "list_cons"},
                                        {ProdKind::ListWrap, "list_wrap"},
                                        {ProdKind::ListWrapTrail, "list_wrap_trail"},
                                        {ProdKind::Start, "start"}})
NLOHMANN_JSON_SERIALIZE_ENUM(NtKind, {{NtKind::Source, "source"},
                                      {NtKind::Alt, "alt"},
                                      {NtKind::Opt, "opt"},
                                      {NtKind::List, "list"},
                                      {NtKind::Start, "start"}})
NLOHMANN_JSON_SERIALIZE_ENUM(ListFlavor, {{ListFlavor::L, "L"},
                                          {ListFlavor::B, "B"},
                                          {ListFlavor::B2, "B2"},
                                          {ListFlavor::T, "T"},
                                          {ListFlavor::T2, "T2"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Trailing, {{Trailing::None, "none"},
                                        {Trailing::Optional, "optional"},
                                        {Trailing::Required, "required"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Action::Kind, {{Action::Kind::Shift, "shift"},
                                            {Action::Kind::Reduce, "reduce"},
                                            {Action::Kind::Accept, "accept"},
                                            {Action::Kind::Recur, "recur"},
                                            {Action::Kind::Ret, "ret"}})

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TokenInfo, name, literal)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TokenTable, tokens)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LexTag, rule, token, fallback)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CompiledAction, kind, arg)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CompiledRule, actions, consumes, pattern)

void to_json(json& j, const CompiledMode& m) {
  std::vector<std::uint32_t> starts(m.class_starts.begin(), m.class_starts.end());
  j = json{{"name", m.name},   {"class_starts", starts}, {"num_states", m.num_states}, {"trans", m.trans},
           {"accept", m.accept}, {"tags", m.tags},        {"rules", m.rules}};
}
void from_json(const json& j, CompiledMode& m) {
  j.at("name").get_to(m.name);
  auto starts = j.at("class_starts").get<std::vector<std::uint32_t>>();
  m.class_starts.assign(starts.begin(), starts.end());
  j.at("num_states").get_to(m.num_states);
  j.at("trans").get_to(m.trans);
  j.at("accept").get_to(m.accept);
  j.at("tags").get_to(m.tags);
  j.at("rules").get_to(m.rules);
  m.index();
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CompiledLexer, tokens, modes, main_mode)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Slot, terminal, id, attrs, min_level, any_level, unfold)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FieldSpec, name, slot, conv, label_path)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TmplItem, kind, text, name, slot, value_nt)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Production, lhs, kind, rhs, path, fields, content, klass, level, decl_attrs,
                                   tmpl)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Nonterminal, name, origin, kind, prods, classes, has_prec, max_level,
                                   declared_attrs, type_name, boolean, elem, delim, flavor, min, trailing,
                                   value_type)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(NtClass, nt, level, attrs, prods)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Grammar, tokens, nts, prods, classes, mains, start_prods, notices, schema)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Action, kind, arg, nt)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LrItem, prod, dot, la)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LrState, kernel, items, trans, actions, recur_return)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ConflictSite, state, la, actions, items)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RdEntry, nt, slot)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LrTables, k, num_terminals, rd, states, start_states, conflicts, rd_entries,
                                   notices)

namespace {
constexpr const char* kFormatTag = "langcc-compiled-lang";
}

std::string serialize(const CompiledLang& c) {
  json j{{"format", kFormatTag},      {"version", c.version}, {"name", c.name},
         {"digest", c.digest},        {"indent_unit", c.indent_unit},
         {"lexer", c.lexer},          {"grammar", c.grammar}, {"tables", c.tables}};
  return j.dump(1) + "\n";
}

CompiledLang deserialize(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed compiled language: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != kFormatTag)
    throw std::runtime_error("not a compiled language file");
  int version = j.at("version").get<int>();
  if (version != CompiledLang::kFormatVersion)
    throw std::runtime_error("unsupported compiled language version " + std::to_string(version));
  CompiledLang c;
  try {
    c.version = version;
    j.at("name").get_to(c.name);
    j.at("digest").get_to(c.digest);
    j.at("indent_unit").get_to(c.indent_unit);
    j.at("lexer").get_to(c.lexer);
    j.at("grammar").get_to(c.grammar);
    j.at("tables").get_to(c.tables);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed compiled language: ") + e.what());
  }
  return c;
}

}  // namespace langcc
