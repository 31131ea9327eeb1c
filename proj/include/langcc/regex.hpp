#pragma once

#include <functional>
#include <string>
#include <vector>

#include "langcc/lang_spec.hpp"
#include "langcc/text.hpp"

namespace langcc::re {

/// Thompson NFA over codepoint intervals. The virtual `eof` symbol is the
/// interval [kEofCodepoint, kEofCodepoint].
struct Nfa {
  struct Edge {
    char32_t lo, hi;  // inclusive
    int to;
  };
  struct State {
    std::vector<int> eps;
    std::vector<Edge> edges;
    int tag = -1;  // accepting with this tag
  };
  std::vector<State> states;

  int add_state() {
    states.emplace_back();
    return static_cast<int>(states.size()) - 1;
  }
};

struct Fragment {
  int start, end;
};

/// Resolves a token name to its pattern (used for alias expansion).
using RefResolver = std::function<const RegexExpr*(const std::string&)>;

/// Appends a fragment for `e` to `nfa`. Throws SpecError on unknown refs or
/// `eof` outside the positions where it is meaningful.
Fragment build_fragment(Nfa& nfa, const RegexExpr& e, const RefResolver& resolve);

/// Interval partition of [0, kEofCodepoint]: class c covers
/// [starts[c], starts[c+1]) (the last class ends at kEofCodepoint + 1).
struct ClassMap {
  std::vector<char32_t> starts;
  int classify(char32_t cp) const;
  int size() const { return static_cast<int>(starts.size()); }
  char32_t hi(int c) const;
};

ClassMap partition(const Nfa& nfa);

struct Dfa {
  ClassMap classes;
  std::vector<int> trans;  // state * classes.size() + class -> state or -1
  std::vector<std::vector<int>> tags;  // sorted accept tags per state
  std::vector<std::vector<int>> members;  // NFA states per DFA state

  int num_states() const { return static_cast<int>(tags.size()); }
  int next(int s, int c) const { return trans[static_cast<std::size_t>(s) * classes.size() + c]; }
};

/// Subset construction from `start`; state 0 is the start state and states
/// are numbered in BFS order (classes ascending).
Dfa determinize(const Nfa& nfa, int start);

/// Direct set simulation of the NFA (reference semantics).
bool nfa_accepts(const Nfa& nfa, int start, std::u32string_view input);
bool dfa_accepts(const Dfa& dfa, std::u32string_view input);

}  // namespace langcc::re
