#include "langcc/lr.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_set>

namespace langcc {

namespace la {

LaString append(LaString s, int token) {
  int n = len(s);
  s &= (LaString{1} << 60) - 1;
  s |= static_cast<LaString>(token) << (15 * n);
  return s | (static_cast<LaString>(n + 1) << 60);
}

LaString concat(LaString s, LaString t, int k) {
  for (int i = 0; i < len(t) && len(s) < k; i++) s = append(s, at(t, i));
  return s;
}

LaString of(const std::vector<int>& tokens) {
  LaString s = kEmpty;
  for (int t : tokens) s = append(s, t);
  return s;
}

std::vector<int> to_vector(LaString s) {
  std::vector<int> out;
  for (int i = 0; i < len(s); i++) out.push_back(at(s, i));
  return out;
}

LaString repeat(int token, int n) {
  LaString s = kEmpty;
  for (int i = 0; i < n; i++) s = append(s, token);
  return s;
}

}  // namespace la

const Action* LrTables::action(int state, LaString la) const {
  const auto& acts = states[state].actions;
  auto it = std::lower_bound(acts.begin(), acts.end(), la,
                             [](const std::pair<LaString, Action>& a, LaString b) { return a.first < b; });
  if (it == acts.end() || it->first != la) return nullptr;
  return &it->second;
}

int LrTables::transition(int state, int symbol) const {
  const auto& tr = states[state].trans;
  auto it = std::lower_bound(tr.begin(), tr.end(), symbol,
                             [](const std::pair<int, int>& a, int b) { return a.first < b; });
  if (it == tr.end() || it->first != symbol) return -1;
  return it->second;
}

int production_length(const Grammar& g, const LrTables& t, int p) {
  const int n = static_cast<int>(g.prods.size());
  if (p < n) return static_cast<int>(g.prods[p].rhs.size());
  (void)t;
  return 1;
}

const Slot& production_slot(const Grammar& g, const LrTables& t, int p, int i) {
  const int n = static_cast<int>(g.prods.size());
  if (p < n) return g.prods[p].rhs[i];
  return t.rd_entries[p - n].slot;
}

int production_lhs(const Grammar& g, const LrTables& t, int p) {
  const int n = static_cast<int>(g.prods.size());
  if (p < n) return g.prods[p].lhs;
  return -1 - t.rd_entries[p - n].nt;  // pseudo nonterminal
}

namespace {

using LaSet = std::vector<LaString>;  // sorted, unique

void insert_sorted(LaSet& s, LaString x) {
  auto it = std::lower_bound(s.begin(), s.end(), x);
  if (it == s.end() || *it != x) s.insert(it, x);
}

struct ItemHash {
  std::size_t operator()(const LrItem& i) const {
    std::size_t h = static_cast<std::size_t>(i.prod) * 1000003u + static_cast<std::size_t>(i.dot);
    return h * 0x9e3779b97f4a7c15ull ^ std::hash<LaString>()(i.la);
  }
};

class FirstSets {
 public:
  FirstSets(const Grammar& g, int k) : g_(g), k_(k) {
    class_first_.assign(g.classes.size(), {});
    slot_classes_.resize(g.prods.size());
    for (std::size_t p = 0; p < g.prods.size(); p++)
      for (const auto& s : g.prods[p].rhs) slot_classes_[p].push_back(g.admissible(s));
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t c = 0; c < g.classes.size(); c++) {
        LaSet acc = class_first_[c];
        for (int p : g.classes[c].prods) {
          LaSet f = seq_first(g.prods[p].rhs, slot_classes_[p], 0);
          for (LaString x : f) insert_sorted(acc, x);
        }
        if (acc.size() != class_first_[c].size()) {
          class_first_[c] = std::move(acc);
          changed = true;
        }
      }
    }
  }

  LaSet slot_first(const Slot& s, const std::vector<int>& classes) const {
    if (s.terminal) return {la::append(la::kEmpty, s.id)};
    LaSet out;
    for (int c : classes)
      for (LaString x : class_first_[c]) insert_sorted(out, x);
    return out;
  }

  LaSet seq_first(const std::vector<Slot>& slots, const std::vector<std::vector<int>>& classes,
                  std::size_t from) const {
    LaSet cur{la::kEmpty};
    for (std::size_t i = from; i < slots.size(); i++) {
      bool open = std::any_of(cur.begin(), cur.end(), [&](LaString x) { return la::len(x) < k_; });
      if (!open) break;
      LaSet f = slot_first(slots[i], classes[i]);
      LaSet next;
      for (LaString x : cur) {
        if (la::len(x) >= k_) {
          insert_sorted(next, x);
          continue;
        }
        for (LaString y : f) insert_sorted(next, la::concat(x, y, k_));
      }
      cur = std::move(next);
    }
    return cur;
  }

  const std::vector<std::vector<int>>& slot_classes(int p) const { return slot_classes_[p]; }
  const LaSet& class_first(int c) const { return class_first_[c]; }

 private:
  const Grammar& g_;
  int k_;
  std::vector<LaSet> class_first_;
  std::vector<std::vector<std::vector<int>>> slot_classes_;
};

class Builder {
 public:
  Builder(const Grammar& g, int k, bool rd) : g_(g), k_(k), first_(g, k) {
    t_.k = k;
    t_.rd = rd;
    t_.num_terminals = g.tokens.size();
    const int n = static_cast<int>(g.prods.size());
    for (int p = 0; p < n; p++) add_prod_info(g.prods[p].rhs, first_.slot_classes(p));
  }

  // Closure of a state of already-built tables (RD pseudo-productions included).
  std::vector<LrItem> close(const LrTables& t, int state) {
    for (const auto& e : t.rd_entries) add_prod_info({e.slot}, {g_.admissible(e.slot)});
    return closure(t.states[state].kernel);
  }

  LrTables run() {
    for (int sp : g_.start_prods) t_.start_states.push_back(intern({{sp, 0, la::repeat(kEofToken, k_)}}));
    while (!work_.empty()) {
      int s = work_.front();
      work_.pop_front();
      process(s);
    }
    prune();
    for (std::size_t s = 0; s < t_.states.size(); s++) collect_conflicts(static_cast<int>(s));
    if (degraded_)
      t_.notices.push_back(std::to_string(degraded_) +
                           " lookahead entries could not take a recursive-descent step and stay LR-style");
    return std::move(t_);
  }

 private:
  struct ProdInfo {
    std::vector<Slot> rhs;
    std::vector<std::vector<int>> classes;
    std::vector<LaSet> suffix;  // FIRST_k of rhs[d..], d = 0..n
  };

  void add_prod_info(const std::vector<Slot>& rhs, const std::vector<std::vector<int>>& classes) {
    ProdInfo info{rhs, classes, {}};
    for (std::size_t d = 0; d <= rhs.size(); d++) info.suffix.push_back(first_.seq_first(rhs, classes, d));
    info_.push_back(std::move(info));
  }

  bool is_rd_entry(int p) const { return p >= static_cast<int>(g_.prods.size()); }

  int intern(std::vector<LrItem> kernel) {
    std::sort(kernel.begin(), kernel.end());
    kernel.erase(std::unique(kernel.begin(), kernel.end()), kernel.end());
    auto [it, fresh] = ids_.emplace(kernel, static_cast<int>(t_.states.size()));
    if (fresh) {
      LrState st;
      st.kernel = std::move(kernel);
      t_.states.push_back(std::move(st));
      pending_.emplace_back();
      work_.push_back(it->second);
    }
    return it->second;
  }

  std::vector<LrItem> closure(const std::vector<LrItem>& kernel) const {
    std::unordered_set<LrItem, ItemHash> seen(kernel.begin(), kernel.end());
    std::vector<LrItem> items(kernel.begin(), kernel.end());
    for (std::size_t i = 0; i < items.size(); i++) {
      const LrItem it = items[i];
      const ProdInfo& info = info_[it.prod];
      if (it.dot >= static_cast<int>(info.rhs.size()) || info.rhs[it.dot].terminal) continue;
      LaSet las;
      for (LaString x : info.suffix[it.dot + 1]) insert_sorted(las, la::concat(x, it.la, k_));
      for (int c : info.classes[it.dot])
        for (int q : g_.classes[c].prods)
          for (LaString l : las) {
            LrItem ni{q, 0, l};
            if (seen.insert(ni).second) items.push_back(ni);
          }
    }
    std::sort(items.begin(), items.end());
    return items;
  }

  void process(int s) {
    std::vector<LrItem> items = closure(t_.states[s].kernel);
    // Transitions, in ascending symbol order.
    std::map<int, std::vector<LrItem>> next;
    for (const auto& it : items) {
      const ProdInfo& info = info_[it.prod];
      if (it.dot >= static_cast<int>(info.rhs.size())) continue;
      const Slot& slot = info.rhs[it.dot];
      LrItem adv{it.prod, it.dot + 1, it.la};
      if (slot.terminal)
        next[slot.id].push_back(adv);
      else
        for (int c : info.classes[it.dot]) next[t_.num_terminals + c].push_back(adv);
    }
    std::vector<std::pair<int, int>> trans;
    for (auto& [sym, kernel] : next) trans.emplace_back(sym, intern(std::move(kernel)));
    t_.states[s].trans = trans;

    // Candidate actions per lookahead, with the items inducing them.
    std::map<LaString, std::map<Action, std::vector<LrItem>>> acts;
    for (const auto& it : items) {
      const ProdInfo& info = info_[it.prod];
      const int n = static_cast<int>(info.rhs.size());
      if (it.dot == n) {
        Action a;
        if (is_rd_entry(it.prod)) {
          a.kind = Action::Kind::Ret;
        } else if (g_.prods[it.prod].kind == ProdKind::Start) {
          a.kind = Action::Kind::Accept;
          a.arg = it.prod;
        } else {
          a.kind = Action::Kind::Reduce;
          a.arg = it.prod;
        }
        acts[it.la][a].push_back(it);
        continue;
      }
      const Slot& slot = info.rhs[it.dot];
      if (!slot.terminal) continue;
      Action a{Action::Kind::Shift, t_.states[s].trans.empty() ? -1 : t_.transition(s, slot.id), -1};
      for (LaString x : info.suffix[it.dot]) acts[la::concat(x, it.la, k_)][a].push_back(it);
    }
    if (t_.rd) apply_rd(s, items, acts);
    auto& pend = pending_[s];
    for (auto& [w, m] : acts) {
      t_.states[s].actions.emplace_back(w, m.begin()->first);
      pend.emplace_back(w, std::move(m));
    }
  }

  // Conservative recursive-descent step: if every item acting on `w` was
  // introduced by closing one kernel item's nonterminal slot, replace those
  // actions by Recur into a sub-automaton for that nonterminal.
  void apply_rd(int s, const std::vector<LrItem>& items,
                std::map<LaString, std::map<Action, std::vector<LrItem>>>& acts) {
    const auto kernel = t_.states[s].kernel;
    // Group kernel items by core.
    std::map<std::pair<int, int>, std::vector<LrItem>> groups;
    for (const auto& it : kernel) {
      const ProdInfo& info = info_[it.prod];
      if (it.dot >= static_cast<int>(info.rhs.size())) continue;
      const Slot& slot = info.rhs[it.dot];
      if (slot.terminal || slot.unfold) continue;
      if (is_rd_entry(it.prod) && it.dot == 0) continue;  // already inside the recursion
      groups[{it.prod, it.dot}].push_back(it);
    }
    if (groups.empty()) return;
    std::vector<std::pair<std::pair<int, int>, std::set<LrItem>>> derived;
    for (const auto& [core, its] : groups) {
      auto cl = closure(its);
      std::set<LrItem> d;
      for (const auto& x : cl)
        if (!std::binary_search(kernel.begin(), kernel.end(), x)) d.insert(x);
      derived.emplace_back(core, std::move(d));
    }
    (void)items;
    for (auto& [w, m] : acts) {
      int owner = -1;
      bool ok = true;
      for (const auto& [a, its] : m)
        for (const auto& it : its) {
          int hits = 0, which = -1;
          for (std::size_t gi = 0; gi < derived.size(); gi++)
            if (derived[gi].second.count(it)) {
              hits++;
              which = static_cast<int>(gi);
            }
          if (hits != 1 || (owner >= 0 && owner != which)) ok = false;
          owner = which;
        }
      if (!ok || owner < 0) {
        if (owner >= 0 || m.size() > 1) degraded_++;
        continue;
      }
      const auto& core = derived[owner].first;
      const ProdInfo& info = info_[core.first];
      const Slot& slot = info.rhs[core.second];
      int entry = rd_entry(slot);
      std::vector<LrItem> sub;
      for (const auto& it : groups[core])
        for (LaString x : info.suffix[core.second + 1]) sub.push_back({entry, 0, la::concat(x, it.la, k_)});
      int target = intern(std::move(sub));
      t_.states[target].recur_return = slot.id;
      std::map<Action, std::vector<LrItem>> repl;
      repl[{Action::Kind::Recur, target, slot.id}] = groups[core];
      m = std::move(repl);
    }
  }

  int rd_entry(const Slot& slot) {
    Slot s = slot;
    s.unfold = false;
    for (std::size_t i = 0; i < t_.rd_entries.size(); i++)
      if (t_.rd_entries[i].slot == s) return static_cast<int>(g_.prods.size() + i);
    t_.rd_entries.push_back({slot.id, s});
    add_prod_info({s}, {g_.admissible(s)});
    return static_cast<int>(g_.prods.size() + t_.rd_entries.size() - 1);
  }

  // Drops states only reachable through shifts that RD replaced, then
  // renumbers in BFS order.
  void prune() {
    const int n = static_cast<int>(t_.states.size());
    std::vector<int> order, id(n, -1);
    std::deque<int> q;
    for (int s : t_.start_states)
      if (id[s] < 0) {
        id[s] = static_cast<int>(order.size());
        order.push_back(s);
        q.push_back(s);
      }
    auto visit = [&](int s) {
      if (s >= 0 && id[s] < 0) {
        id[s] = static_cast<int>(order.size());
        order.push_back(s);
        q.push_back(s);
      }
    };
    while (!q.empty()) {
      int s = q.front();
      q.pop_front();
      std::set<int> shift_targets, recur_targets;
      for (const auto& [w, m] : pending_[s])
        for (const auto& [a, its] : m) {
          if (a.kind == Action::Kind::Shift) shift_targets.insert(a.arg);
          if (a.kind == Action::Kind::Recur) recur_targets.insert(a.arg);
        }
      for (const auto& [sym, target] : t_.states[s].trans)
        if (sym >= t_.num_terminals || shift_targets.count(target)) visit(target);
      for (int r : recur_targets) visit(r);
    }
    if (static_cast<int>(order.size()) == n && std::is_sorted(order.begin(), order.end())) {
      bool identity = true;
      for (int i = 0; i < n; i++) identity &= order[i] == i;
      if (identity) return;
    }
    auto remap = [&](Action a) {
      if (a.kind == Action::Kind::Shift || a.kind == Action::Kind::Recur) a.arg = id[a.arg];
      return a;
    };
    std::vector<LrState> states;
    std::vector<std::vector<std::pair<LaString, std::map<Action, std::vector<LrItem>>>>> pend;
    for (int old : order) {
      LrState st = std::move(t_.states[old]);
      std::vector<std::pair<int, int>> tr;
      for (const auto& [sym, target] : st.trans)
        if (id[target] >= 0) tr.emplace_back(sym, id[target]);
      st.trans = std::move(tr);
      for (auto& [w, a] : st.actions) a = remap(a);
      states.push_back(std::move(st));
      std::vector<std::pair<LaString, std::map<Action, std::vector<LrItem>>>> p;
      for (auto& [w, m] : pending_[old]) {
        std::map<Action, std::vector<LrItem>> mm;
        for (auto& [a, its] : m) mm[remap(a)] = std::move(its);
        p.emplace_back(w, std::move(mm));
      }
      pend.push_back(std::move(p));
    }
    for (int& s : t_.start_states) s = id[s];
    t_.states = std::move(states);
    pending_ = std::move(pend);
  }

  void collect_conflicts(int s) {
    for (auto& [w, m] : pending_[s]) {
      if (m.size() < 2) continue;
      ConflictSite c;
      c.state = s;
      c.la = w;
      // Reductions first (by production), then shifts, as displayed.
      for (auto& [a, its] : m)
        if (a.kind != Action::Kind::Shift) {
          c.actions.push_back(a);
          c.items.push_back(its);
        }
      for (auto& [a, its] : m)
        if (a.kind == Action::Kind::Shift) {
          c.actions.push_back(a);
          c.items.push_back(its);
        }
      t_.conflicts.push_back(std::move(c));
    }
  }

  const Grammar& g_;
  int k_;
  FirstSets first_;
  LrTables t_;
  std::vector<ProdInfo> info_;
  std::map<std::vector<LrItem>, int> ids_;
  std::deque<int> work_;
  std::vector<std::vector<std::pair<LaString, std::map<Action, std::vector<LrItem>>>>> pending_;
  int degraded_ = 0;
};

}  // namespace

std::vector<std::vector<int>> first_k(const Grammar& g, const std::vector<Slot>& seq, int k) {
  FirstSets f(g, k);
  std::vector<std::vector<int>> classes;
  for (const auto& s : seq) classes.push_back(g.admissible(s));
  std::vector<std::vector<int>> out;
  for (LaString x : f.seq_first(seq, classes, 0)) out.push_back(la::to_vector(x));
  std::sort(out.begin(), out.end());
  return out;
}

LrTables build_lr(const Grammar& g, int k, bool rd) {
  if (k < 0 || k > la::kMaxK) throw SpecError(SourceLoc{}, "lookahead k must be between 0 and 4");
  if (g.tokens.size() >= 0x7fff) throw SpecError(SourceLoc{}, "too many terminals");
  return Builder(g, k, rd).run();
}

std::vector<LrItem> lr_closure(const Grammar& g, const LrTables& t, int state) {
  return Builder(g, t.k, t.rd).close(t, state);
}

std::string render_la(const Grammar& g, LaString s) {
  std::string out;
  for (int i = 0; i < la::len(s); i++) out += (i ? " " : "") + g.tokens.display(la::at(s, i));
  return out.empty() ? "eps" : out;
}

std::string render_action(const Grammar& g, const LrTables& t, const Action& a) {
  switch (a.kind) {
    case Action::Kind::Shift:
      return "Shift";
    case Action::Kind::Reduce:
      return "Reduce(" + g.render_production(a.arg) + ")";
    case Action::Kind::Accept:
      return "Accept";
    case Action::Kind::Recur:
      return "Recur(" + g.nts[a.nt].name + ")";
    case Action::Kind::Ret:
      return "Ret";
  }
  (void)t;
  return "";
}

std::string render_item(const Grammar& g, const LrTables& t, const LrItem& it) {
  int lhs = production_lhs(g, t, it.prod);
  std::string out = (lhs >= 0 ? g.nts[lhs].name : g.nts[-1 - lhs].name + "''") + " ->";
  int n = production_length(g, t, it.prod);
  for (int i = 0; i < n; i++) {
    if (i == it.dot) out += " .";
    out += " " + g.symbol_name(production_slot(g, t, it.prod, i));
  }
  if (it.dot == n) out += " .";
  return out + ", " + render_la(g, it.la);
}

std::string dump_lr(const Grammar& g, const LrTables& t) {
  std::ostringstream os;
  os << "LR(" << t.k << ")" << (t.rd ? " rd" : "") << ": " << t.states.size() << " states, " << t.conflicts.size()
     << " conflicts\n";
  for (std::size_t i = 0; i < t.start_states.size(); i++)
    os << "start " << g.nts[g.mains[i]].name << ": state " << t.start_states[i] << "\n";
  for (std::size_t s = 0; s < t.states.size(); s++) {
    const auto& st = t.states[s];
    os << "\nstate " << s << "\n";
    for (const auto& it : st.kernel) os << "  " << render_item(g, t, it) << "\n";
    for (const auto& it : lr_closure(g, t, static_cast<int>(s)))
      if (!std::binary_search(st.kernel.begin(), st.kernel.end(), it)) os << "  + " << render_item(g, t, it) << "\n";
    for (const auto& [sym, target] : st.trans) {
      std::string name = sym < t.num_terminals ? g.tokens.display(sym)
                                               : g.nts[g.classes[sym - t.num_terminals].nt].name + "#" +
                                                     std::to_string(sym - t.num_terminals);
      os << "  goto " << name << " -> " << target << "\n";
    }
    for (const auto& [w, a] : st.actions) {
      os << "  on " << render_la(g, w) << ": " << render_action(g, t, a);
      if (a.kind == Action::Kind::Shift || a.kind == Action::Kind::Recur) os << " " << a.arg;
      os << "\n";
    }
    for (const auto& c : t.conflicts) {
      if (c.state != static_cast<int>(s)) continue;
      os << "  conflict on " << render_la(g, c.la) << ":";
      for (std::size_t i = 0; i < c.actions.size(); i++) os << (i ? " |" : "") << " " << render_action(g, t, c.actions[i]);
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace langcc
