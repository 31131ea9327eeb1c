#include "langcc/regex.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace langcc::re {

namespace {

void add_edge(Nfa& nfa, int from, char32_t lo, char32_t hi, int to) {
  nfa.states[from].edges.push_back({lo, hi, to});
}

void add_eps(Nfa& nfa, int from, int to) { nfa.states[from].eps.push_back(to); }

std::vector<int> closure(const Nfa& nfa, std::vector<int> seeds) {
  std::vector<char> seen(nfa.states.size(), 0);
  std::vector<int> out, stack;
  for (int s : seeds)
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    out.push_back(s);
    for (int t : nfa.states[s].eps)
      if (!seen[t]) {
        seen[t] = 1;
        stack.push_back(t);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

class Builder {
 public:
  Builder(Nfa& nfa, const RefResolver& resolve) : nfa_(nfa), resolve_(resolve) {}

  Fragment build(const RegexExpr& e) {
    using K = RegexExpr::Kind;
    switch (e.kind) {
      case K::Literal: {
        int start = nfa_.add_state();
        int cur = start;
        for (char32_t c : e.text) {
          int next = nfa_.add_state();
          add_edge(nfa_, cur, c, c, next);
          cur = next;
        }
        return {start, cur};
      }
      case K::CharRange:
        return single(e.lo, e.hi);
      case K::Wildcard:
        return single(0, kMaxCodepoint);
      case K::Eof:
        return single(kEofCodepoint, kEofCodepoint);
      case K::Concat: {
        Fragment f = build(e.items[0]);
        for (std::size_t i = 1; i < e.items.size(); i++) {
          Fragment g = build(e.items[i]);
          add_eps(nfa_, f.end, g.start);
          f.end = g.end;
        }
        return f;
      }
      case K::Alt: {
        int start = nfa_.add_state();
        int end = nfa_.add_state();
        for (const auto& item : e.items) {
          Fragment g = build(item);
          add_eps(nfa_, start, g.start);
          add_eps(nfa_, g.end, end);
        }
        return {start, end};
      }
      case K::Star:
      case K::Plus:
      case K::Optional: {
        int start = nfa_.add_state();
        int end = nfa_.add_state();
        Fragment g = build(e.items[0]);
        add_eps(nfa_, start, g.start);
        add_eps(nfa_, g.end, end);
        if (e.kind != K::Plus) add_eps(nfa_, start, end);
        if (e.kind != K::Optional) add_eps(nfa_, g.end, g.start);
        return {start, end};
      }
      case K::Ref: {
        const RegexExpr* target = resolve_(e.name);
        if (!target) throw SpecError(e.loc, "undeclared token `" + e.name + "`");
        if (std::find(active_.begin(), active_.end(), e.name) != active_.end())
          throw SpecError(e.loc, "cyclic alias reference involving `" + e.name + "`");
        active_.push_back(e.name);
        Fragment f = build(*target);
        active_.pop_back();
        return f;
      }
      case K::Diff:
        return difference(e);
    }
    throw SpecError(e.loc, "unsupported regular expression");
  }

 private:
  Fragment single(char32_t lo, char32_t hi) {
    int start = nfa_.add_state();
    int end = nfa_.add_state();
    add_edge(nfa_, start, lo, hi, end);
    return {start, end};
  }

  // L - R: simulate both sides in one subset construction, then embed the
  // states accepting L but not R.
  Fragment difference(const RegexExpr& e) {
    Nfa sub;
    Builder inner(sub, resolve_);
    inner.active_ = active_;
    int root = sub.add_state();
    for (int side = 0; side < 2; side++) {
      Fragment f = inner.build(e.items[side]);
      add_eps(sub, root, f.start);
      sub.states[f.end].tag = side;
    }
    for (const auto& st : sub.states)
      for (const auto& edge : st.edges)
        if (edge.hi >= kEofCodepoint) throw SpecError(e.loc, "`eof` cannot appear inside a difference");
    Dfa d = determinize(sub, root);
    int n = d.num_states();
    auto good = [&](int s) {
      const auto& t = d.tags[s];
      return std::find(t.begin(), t.end(), 0) != t.end() && std::find(t.begin(), t.end(), 1) == t.end();
    };
    // Keep only states from which an accepting state is reachable.
    std::vector<char> live(n, 0);
    for (int s = 0; s < n; s++) live[s] = good(s);
    for (bool changed = true; changed;) {
      changed = false;
      for (int s = 0; s < n; s++) {
        if (live[s]) continue;
        for (int c = 0; c < d.classes.size(); c++) {
          int t = d.next(s, c);
          if (t >= 0 && live[t]) {
            live[s] = 1;
            changed = true;
            break;
          }
        }
      }
    }
    std::vector<int> id(n);
    for (int s = 0; s < n; s++) id[s] = nfa_.add_state();
    int end = nfa_.add_state();
    for (int s = 0; s < n; s++) {
      if (!live[s]) continue;
      if (good(s)) add_eps(nfa_, id[s], end);
      for (int c = 0; c < d.classes.size(); c++) {
        int t = d.next(s, c);
        if (t < 0 || !live[t]) continue;
        char32_t lo = d.classes.starts[c], hi = d.classes.hi(c);
        // Merge with the previous edge when contiguous and same target.
        auto& edges = nfa_.states[id[s]].edges;
        if (!edges.empty() && edges.back().to == id[t] && edges.back().hi + 1 == lo)
          edges.back().hi = hi;
        else
          add_edge(nfa_, id[s], lo, hi, id[t]);
      }
    }
    return {id[0], end};
  }

  Nfa& nfa_;
  const RefResolver& resolve_;
  std::vector<std::string> active_;
};

}  // namespace

Fragment build_fragment(Nfa& nfa, const RegexExpr& e, const RefResolver& resolve) {
  Builder b(nfa, resolve);
  return b.build(e);
}

int ClassMap::classify(char32_t cp) const {
  auto it = std::upper_bound(starts.begin(), starts.end(), cp);
  return static_cast<int>(it - starts.begin()) - 1;
}

char32_t ClassMap::hi(int c) const {
  return c + 1 < size() ? starts[c + 1] - 1 : kEofCodepoint;
}

ClassMap partition(const Nfa& nfa) {
  std::set<char32_t> bounds{0};
  for (const auto& st : nfa.states)
    for (const auto& e : st.edges) {
      bounds.insert(e.lo);
      if (e.hi < kEofCodepoint) bounds.insert(e.hi + 1);
    }
  bounds.insert(kEofCodepoint);
  ClassMap m;
  m.starts.assign(bounds.begin(), bounds.end());
  return m;
}

Dfa determinize(const Nfa& nfa, int start) {
  Dfa d;
  d.classes = partition(nfa);
  const int nc = d.classes.size();
  std::map<std::vector<int>, int> ids;
  std::deque<int> work;

  auto intern = [&](std::vector<int> set) {
    auto [it, fresh] = ids.emplace(set, d.num_states());
    if (fresh) {
      std::vector<int> tags;
      for (int s : set)
        if (nfa.states[s].tag >= 0) tags.push_back(nfa.states[s].tag);
      std::sort(tags.begin(), tags.end());
      tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
      d.tags.push_back(std::move(tags));
      d.members.push_back(std::move(set));
      d.trans.resize(d.trans.size() + nc, -1);
      work.push_back(it->second);
    }
    return it->second;
  };

  intern(closure(nfa, {start}));
  std::vector<std::vector<int>> buckets(nc);
  while (!work.empty()) {
    int s = work.front();
    work.pop_front();
    for (auto& b : buckets) b.clear();
    for (int q : d.members[s])
      for (const auto& e : nfa.states[q].edges) {
        int c0 = d.classes.classify(e.lo), c1 = d.classes.classify(e.hi);
        for (int c = c0; c <= c1; c++) buckets[c].push_back(e.to);
      }
    for (int c = 0; c < nc; c++) {
      if (buckets[c].empty()) continue;
      int t = intern(closure(nfa, buckets[c]));
      d.trans[static_cast<std::size_t>(s) * nc + c] = t;
    }
  }
  return d;
}

bool nfa_accepts(const Nfa& nfa, int start, std::u32string_view input) {
  auto cur = closure(nfa, {start});
  for (char32_t c : input) {
    std::vector<int> next;
    for (int s : cur)
      for (const auto& e : nfa.states[s].edges)
        if (e.lo <= c && c <= e.hi) next.push_back(e.to);
    if (next.empty()) return false;
    cur = closure(nfa, next);
  }
  for (int s : cur)
    if (nfa.states[s].tag >= 0) return true;
  return false;
}

bool dfa_accepts(const Dfa& dfa, std::u32string_view input) {
  int s = 0;
  for (char32_t c : input) {
    s = dfa.next(s, dfa.classes.classify(c));
    if (s < 0) return false;
  }
  return !dfa.tags[s].empty();
}

}  // namespace langcc::re
