#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "langcc/grammar.hpp"

namespace langcc {

/// Terminal string of length <= kMaxK packed into 64 bits: 15 bits per
/// token, length in bits 60..62.
using LaString = std::uint64_t;

namespace la {
inline constexpr int kMaxK = 4;
inline constexpr LaString kEmpty = 0;
inline int len(LaString s) { return static_cast<int>(s >> 60); }
inline int at(LaString s, int i) { return static_cast<int>((s >> (15 * i)) & 0x7fff); }
LaString append(LaString s, int token);
/// First k tokens of s followed by t.
LaString concat(LaString s, LaString t, int k);
LaString of(const std::vector<int>& tokens);
std::vector<int> to_vector(LaString s);
LaString repeat(int token, int n);
}  // namespace la

struct Action {
  enum class Kind { Shift, Reduce, Accept, Recur, Ret };
  Kind kind = Kind::Shift;
  int arg = -1;  // Shift/Recur: target state; Reduce: production
  int nt = -1;   // Recur: nonterminal entered
  friend bool operator==(const Action&, const Action&) = default;
  friend auto operator<=>(const Action&, const Action&) = default;
};

struct LrItem {
  int prod = 0;
  int dot = 0;
  LaString la = 0;
  friend bool operator==(const LrItem&, const LrItem&) = default;
  friend auto operator<=>(const LrItem&, const LrItem&) = default;
};

struct LrState {
  std::vector<LrItem> kernel;
  std::vector<LrItem> items;  // closure; left empty by build_lr (see lr_closure)
  /// Symbol -> state. Symbols: token id t, or num_terminals + class id.
  std::vector<std::pair<int, int>> trans;
  std::vector<std::pair<LaString, Action>> actions;  // sorted by lookahead; first action per conflict
  int recur_return = -1;  // RD: nonterminal whose sub-automaton this state starts, or -1
  friend bool operator==(const LrState&, const LrState&) = default;
};

struct ConflictSite {
  int state = 0;
  LaString la = 0;
  std::vector<Action> actions;
  std::vector<std::vector<LrItem>> items;  // parallel to actions: items inducing each
  friend bool operator==(const ConflictSite&, const ConflictSite&) = default;
};

/// Pseudo-production used by the RD variant: `N'' -> N` entered by Recur.
struct RdEntry {
  int nt = 0;
  Slot slot;  // constraints copied from the recurring slot
  friend bool operator==(const RdEntry&, const RdEntry&) = default;
};

struct LrTables {
  int k = 1;
  int num_terminals = 0;
  bool rd = false;
  std::vector<LrState> states;
  std::vector<int> start_states;  // parallel to Grammar::mains
  std::vector<ConflictSite> conflicts;
  std::vector<RdEntry> rd_entries;  // production ids grammar.prods.size() + i
  std::vector<std::string> notices;
  friend bool operator==(const LrTables&, const LrTables&) = default;

  const Action* action(int state, LaString la) const;
  int transition(int state, int symbol) const;
  int goto_class(int state, int klass) const { return transition(state, num_terminals + klass); }
};

/// FIRST_k of a slot sequence (strings of length <= k; shorter strings mean
/// the sequence can derive a string that short). Respects admissibility.
std::vector<std::vector<int>> first_k(const Grammar& g, const std::vector<Slot>& seq, int k);

/// Canonical LR(k) construction; conflicts are collected, not thrown.
/// `rd` enables the conservative recursive-descent variant.
LrTables build_lr(const Grammar& g, int k, bool rd = false);

/// Closure of a state's kernel, sorted (kernel items included).
std::vector<LrItem> lr_closure(const Grammar& g, const LrTables& t, int state);

/// Number of slots of production `p`, including RD pseudo-productions.
int production_length(const Grammar& g, const LrTables& t, int p);
const Slot& production_slot(const Grammar& g, const LrTables& t, int p, int i);
int production_lhs(const Grammar& g, const LrTables& t, int p);

std::string render_action(const Grammar& g, const LrTables& t, const Action& a);
std::string render_la(const Grammar& g, LaString s);
std::string render_item(const Grammar& g, const LrTables& t, const LrItem& it);
std::string dump_lr(const Grammar& g, const LrTables& t);

}  // namespace langcc
