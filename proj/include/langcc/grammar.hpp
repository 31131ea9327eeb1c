#pragma once

#include <string>
#include <utility>
#include <vector>

#include "langcc/datacc.hpp"
#include "langcc/lang_spec.hpp"
#include "langcc/lexer.hpp"

namespace langcc {

/// A grammar symbol occurrence. Terminals are token ids; nonterminal slots
/// carry the constraints that decide which productions may fill them.
struct Slot {
  bool terminal = true;
  int id = 0;  // token id or nonterminal id
  std::vector<std::pair<std::string, bool>> attrs;  // attribute -> required value
  int min_level = 0;
  bool any_level = false;  // `pr=*`
  bool unfold = false;     // `~X`
  friend bool operator==(const Slot&, const Slot&) = default;
};

/// How a field value is obtained from the slot that carries it.
enum class FieldConv {
  Token,        // token text with bounds
  Node,         // child value as is
  InlineLabel,  // single literal under a labeled alternation: becomes an enum case
};

struct FieldSpec {
  std::string name;
  int slot = 0;
  FieldConv conv = FieldConv::Node;
  std::string label_path;  // InlineLabel: `Type::Label`
  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

/// Pretty-print template element.
struct TmplItem {
  enum class Kind { Text, Field, Content };
  Kind kind = Kind::Text;
  std::string text;  // Text: printed verbatim; Field/Content: literal of an inline enum label
  std::string name;  // Field: field name
  int slot = -1;     // Field/Content: slot in the owning production (-1 for templates not tied to one)
  int value_nt = -1;  // synthesized nonterminal printing this value, or -1 (token/node/label)
  friend bool operator==(const TmplItem&, const TmplItem&) = default;
};
using Tmpl = std::vector<TmplItem>;

enum class ProdKind {
  Rule,       // source rule: record with fields
  AltBranch,  // synthesized alternation branch: enum/record case
  OptNone,
  OptSome,
  ListEmpty,
  ListOne,
  ListTwo,
  ListCons,
  ListWrap,
  ListWrapTrail,
  Start,
};

struct Production {
  int lhs = 0;
  ProdKind kind = ProdKind::Rule;
  std::vector<Slot> rhs;
  std::string path;  // Rule/AltBranch: record path (`Expr::Lit::Int_`)
  std::vector<FieldSpec> fields;
  std::vector<FieldSpec> content;  // Opt/List productions: element values (slot -1 = unit)
  int klass = 0;             // global class id
  int level = -1;            // precedence level, -1 if none
  std::vector<std::string> decl_attrs;
  Tmpl tmpl;  // Rule/AltBranch
  SourceLoc loc;
  friend bool operator==(const Production&, const Production&) = default;
};

enum class NtKind { Source, Alt, Opt, List, Start };

struct Nonterminal {
  std::string name;    // `Expr`, `X0`, `Expr'`
  std::string origin;  // synthesized: rendered source expression
  NtKind kind = NtKind::Source;
  std::vector<int> prods;
  std::vector<int> classes;
  bool has_prec = false;
  int max_level = -1;
  std::vector<std::string> declared_attrs;  // union over productions
  // Alt: type name of the enum/sum; Opt: boolean when content-free.
  std::string type_name;
  bool boolean = false;
  // Opt/List element and delimiter templates (value position = Content).
  Tmpl elem;
  Tmpl delim;
  ListFlavor flavor = ListFlavor::L;
  int min = 0;
  Trailing trailing = Trailing::None;
  data::TypeExpr value_type;  // type of the value this nonterminal produces
  friend bool operator==(const Nonterminal&, const Nonterminal&) = default;
};

/// Productions with an identical precedence level and attribute set.
struct NtClass {
  int nt = 0;
  int level = -1;
  std::vector<std::string> attrs;
  std::vector<int> prods;
  friend bool operator==(const NtClass&, const NtClass&) = default;
};

struct Grammar {
  TokenTable tokens;
  std::vector<Nonterminal> nts;
  std::vector<Production> prods;
  std::vector<NtClass> classes;
  std::vector<int> mains;        // source nonterminals, default first
  std::vector<int> start_prods;  // parallel to mains: `M' -> M`
  std::vector<std::string> notices;
  data::DatatypeSchema schema;
  friend bool operator==(const Grammar&, const Grammar&) = default;

  int find_nt(std::string_view name) const;
  bool admits(const Slot& s, int klass) const;
  /// Classes admissible at a nonterminal slot (ascending).
  std::vector<int> admissible(const Slot& s) const;
  std::string symbol_name(const Slot& s) const;
  /// `Expr -> Expr X0 Expr`
  std::string render_production(int p) const;
  /// Stable textual listing for `--dump-grammar`.
  std::string dump() const;
};

/// Lowers the parser stanza to a CFG. `tokens` comes from compile_lexer;
/// parser literals must be emitted by some lexer rule.
Grammar lower_grammar(const LangSpec& spec, const TokenTable& tokens);

}  // namespace langcc
