#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "langcc/grammar.hpp"
#include "langcc/lr.hpp"

namespace langcc {

/// One step of a viable prefix: a grammar symbol with the concrete tokens it
/// stands for, or (RD tables) a recursive-descent entry into a nonterminal.
struct PrefixStep {
  enum class Kind { Symbol, Recur };
  Kind kind = Kind::Symbol;
  int symbol = -1;          // token id, or num_terminals + class
  int nt = -1;              // Recur: nonterminal entered
  std::vector<int> tokens;  // Symbol: exemplar tokens derived from it
  int state = -1;           // automaton state after the step
};

struct ConflictExemplar {
  int state = 0;
  LaString la = 0;
  std::vector<PrefixStep> prefix;
  std::vector<Action> actions;
  /// Parallel to actions: lookahead plus the shortest continuation (without
  /// the end-of-input padding) under which that action leads to acceptance.
  std::vector<std::vector<int>> completions;
  std::vector<bool> budget_exceeded;  // parallel to actions
  int sites = 1;  // conflict sites sharing this action signature

  std::vector<int> prefix_terminals() const;
};

struct TraceOptions {
  std::size_t budget = 100000;  // search nodes per completion
};

/// Exemplar for one conflict site: shortest prefix reaching the state (by
/// token count, then symbol count, then token ids) and a shortest completion
/// per action.
ConflictExemplar trace_conflict(const Grammar& g, const LrTables& t, const ConflictSite& site,
                                const TraceOptions& opts = {});

/// Groups sites by their rendered action set and traces the site with the
/// shortest prefix of each group; groups ordered by that prefix.
std::vector<ConflictExemplar> trace_conflicts(const Grammar& g, const LrTables& t, const TraceOptions& opts = {});

/// `===== LR conflict i of n` blocks. Empty for no exemplars.
std::string render_conflict_report(const Grammar& g, const LrTables& t, const std::vector<ConflictExemplar>& ex);

/// `Expr`, or `X0=(`+` | `-`)` for synthesized nonterminals.
std::string display_nonterminal(const Grammar& g, int nt);

}  // namespace langcc
