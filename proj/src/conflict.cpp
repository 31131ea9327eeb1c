#include "langcc/conflict.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <unordered_set>

#include "langcc/text.hpp"

namespace langcc {

std::vector<int> ConflictExemplar::prefix_terminals() const {
  std::vector<int> out;
  for (const auto& s : prefix) out.insert(out.end(), s.tokens.begin(), s.tokens.end());
  return out;
}

std::string display_nonterminal(const Grammar& g, int nt) {
  const Nonterminal& n = g.nts[nt];
  if (n.kind == NtKind::Source || n.kind == NtKind::Start || n.origin.empty()) return n.name;
  return n.name + "=" + n.origin;
}

namespace {

constexpr int kInf = INT_MAX / 4;

// Shortest terminal sentence per class, ties broken by token ids.
std::vector<std::optional<std::vector<int>>> shortest_sentences(const Grammar& g) {
  const std::size_t nc = g.classes.size();
  std::vector<int> len(nc, kInf);
  std::vector<std::vector<std::vector<int>>> slot_classes(g.prods.size());
  for (std::size_t p = 0; p < g.prods.size(); p++)
    for (const auto& s : g.prods[p].rhs) slot_classes[p].push_back(g.admissible(s));
  auto prod_len = [&](int p) {
    long total = 0;
    const auto& rhs = g.prods[p].rhs;
    for (std::size_t i = 0; i < rhs.size(); i++) {
      if (rhs[i].terminal) {
        total++;
        continue;
      }
      int best = kInf;
      for (int c : slot_classes[p][i]) best = std::min(best, len[c]);
      if (best >= kInf) return kInf;
      total += best;
    }
    return static_cast<int>(std::min<long>(total, kInf));
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t c = 0; c < nc; c++)
      for (int p : g.classes[c].prods) {
        int l = prod_len(p);
        if (l < len[c]) {
          len[c] = l;
          changed = true;
        }
      }
  }
  std::vector<std::optional<std::vector<int>>> sent(nc);
  for (std::size_t round = 0; round <= nc + 1; round++) {
    bool changed = false;
    for (std::size_t c = 0; c < nc; c++) {
      if (len[c] >= kInf) continue;
      for (int p : g.classes[c].prods) {
        if (prod_len(p) != len[c]) continue;
        std::vector<int> cand;
        bool ok = true;
        const auto& rhs = g.prods[p].rhs;
        for (std::size_t i = 0; i < rhs.size() && ok; i++) {
          if (rhs[i].terminal) {
            cand.push_back(rhs[i].id);
            continue;
          }
          const std::vector<int>* best = nullptr;
          for (int d : slot_classes[p][i])
            if (len[d] < kInf && sent[d] && static_cast<int>(sent[d]->size()) == len[d] &&
                (!best || best->size() > sent[d]->size() ||
                 (best->size() == sent[d]->size() && *sent[d] < *best)))
              best = &*sent[d];
          if (!best) {
            ok = false;
            break;
          }
          cand.insert(cand.end(), best->begin(), best->end());
        }
        if (ok && (!sent[c] || cand < *sent[c])) {
          sent[c] = std::move(cand);
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return sent;
}

struct PathKey {
  int terms = 0;
  int syms = 0;
  std::vector<int> toks;
  friend auto operator<=>(const PathKey&, const PathKey&) = default;
};

// Shortest viable prefixes to every reachable state.
struct PrefixSearch {
  std::vector<std::optional<PathKey>> best;
  std::vector<int> prev;
  std::vector<PrefixStep> via;
  std::vector<int> root;

  PrefixSearch(const Grammar& g, const LrTables& t) {
    const int n = static_cast<int>(t.states.size());
    best.assign(n, std::nullopt);
    prev.assign(n, -1);
    via.assign(n, {});
    root.assign(n, -1);
    auto sent = shortest_sentences(g);
    // Terminal transitions that some action actually shifts.
    std::vector<std::set<int>> shifts(n);
    for (int s = 0; s < n; s++)
      for (const auto& [w, a] : t.states[s].actions)
        if (a.kind == Action::Kind::Shift && la::len(w) > 0) shifts[s].insert(la::at(w, 0));
    for (const auto& c : t.conflicts)
      for (const auto& a : c.actions)
        if (a.kind == Action::Kind::Shift && la::len(c.la) > 0) shifts[c.state].insert(la::at(c.la, 0));

    using QItem = std::pair<PathKey, int>;
    auto cmp = [](const QItem& a, const QItem& b) { return b < a; };
    std::priority_queue<QItem, std::vector<QItem>, decltype(cmp)> q(cmp);
    std::vector<bool> done(n, false);
    for (int s : t.start_states)
      if (!best[s]) {
        best[s] = PathKey{};
        root[s] = s;
        q.push({PathKey{}, s});
      }
    auto relax = [&](int from, int to, PathKey key, PrefixStep step) {
      if (to < 0 || done[to]) return;
      if (best[to] && !(key < *best[to])) return;
      best[to] = key;
      prev[to] = from;
      step.state = to;
      via[to] = std::move(step);
      root[to] = root[from];
      q.push({std::move(key), to});
    };
    while (!q.empty()) {
      auto [key, s] = q.top();
      q.pop();
      if (done[s] || !best[s] || key != *best[s]) continue;
      done[s] = true;
      for (const auto& [sym, target] : t.states[s].trans) {
        PrefixStep step;
        step.symbol = sym;
        if (sym < t.num_terminals) {
          if (t.k > 0 && !shifts[s].count(sym)) continue;
          step.tokens = {sym};
        } else {
          const auto& sn = sent[sym - t.num_terminals];
          if (!sn) continue;
          step.tokens = *sn;
        }
        PathKey nk = key;
        nk.terms += static_cast<int>(step.tokens.size());
        nk.syms += 1;
        nk.toks.insert(nk.toks.end(), step.tokens.begin(), step.tokens.end());
        relax(s, target, std::move(nk), std::move(step));
      }
      for (const auto& [w, a] : t.states[s].actions)
        if (a.kind == Action::Kind::Recur) {
          PrefixStep step;
          step.kind = PrefixStep::Kind::Recur;
          step.nt = a.nt;
          relax(s, a.arg, key, std::move(step));
        }
    }
  }

  std::vector<PrefixStep> path(int s) const {
    std::vector<PrefixStep> out;
    for (int cur = s; prev[cur] >= 0; cur = prev[cur]) out.push_back(via[cur]);
    std::reverse(out.begin(), out.end());
    return out;
  }
};

struct Config {
  std::vector<std::pair<int, int>> stack;  // (state, symbol); symbol -1 marks a recursion entry
  std::vector<int> recur;
  std::vector<int> window;
  std::vector<int> suffix;

  std::string key() const {
    std::string k;
    auto put = [&](int x) { k.append(reinterpret_cast<const char*>(&x), sizeof x); };
    for (const auto& [s, y] : stack) {
      put(s);
      put(y);
    }
    put(-7);
    for (int r : recur) put(r);
    put(-7);
    for (int w : window) put(w);
    return k;
  }
};

class Completer {
 public:
  Completer(const Grammar& g, const LrTables& t, std::size_t budget) : g_(g), t_(t), budget_(budget) {}

  // Shortest continuation after forcing `first`; nullopt if none within budget.
  std::optional<std::vector<int>> run(Config start, const Action& first, bool& exceeded) {
    std::deque<std::pair<Config, bool>> dq;  // (config, first step pending)
    std::unordered_set<std::string> seen;
    dq.push_back({std::move(start), true});
    std::size_t expanded = 0;
    exceeded = false;
    while (!dq.empty()) {
      auto [c, forced] = std::move(dq.front());
      dq.pop_front();
      if (!forced && !seen.insert(c.key()).second) continue;
      if (++expanded > budget_) {
        exceeded = true;
        return std::nullopt;
      }
      const int top = c.stack.back().first;
      const Action* a = forced ? &first : t_.action(top, la::of(c.window));
      if (!a) continue;
      switch (a->kind) {
        case Action::Kind::Accept:
          return c.suffix;
        case Action::Kind::Shift: {
          int tok = t_.k > 0 ? c.window[0] : -1;
          if (t_.k == 0) {
            for (int x = 0; x < t_.num_terminals; x++) {
              int target = t_.transition(top, x);
              if (target < 0) continue;
              Config d = c;
              d.stack.push_back({target, x});
              if (x != kEofToken) d.suffix.push_back(x);
              if (x == kEofToken)
                dq.push_front({std::move(d), false});
              else
                dq.push_back({std::move(d), false});
            }
            break;
          }
          int target = t_.transition(top, tok);
          if (target < 0) break;
          Config base = std::move(c);
          base.stack.push_back({target, tok});
          base.window.erase(base.window.begin());
          const bool ended = !base.window.empty() ? base.window.back() == kEofToken : tok == kEofToken;
          if (ended) {
            base.window.push_back(kEofToken);
            if (t_.action(target, la::of(base.window))) dq.push_front({std::move(base), false});
            break;
          }
          for (int x = 0; x < t_.num_terminals; x++) {
            Config d = base;
            d.window.push_back(x);
            if (!t_.action(target, la::of(d.window))) continue;
            if (x == kEofToken) {
              dq.push_front({std::move(d), false});
            } else {
              d.suffix.push_back(x);
              dq.push_back({std::move(d), false});
            }
          }
          break;
        }
        case Action::Kind::Reduce: {
          const int len = production_length(g_, t_, a->arg);
          if (static_cast<int>(c.stack.size()) <= len) break;
          c.stack.resize(c.stack.size() - len);
          int target = t_.goto_class(c.stack.back().first, g_.prods[a->arg].klass);
          if (target < 0) break;
          c.stack.push_back({target, t_.num_terminals + g_.prods[a->arg].klass});
          dq.push_front({std::move(c), false});
          break;
        }
        case Action::Kind::Recur:
          c.recur.push_back(static_cast<int>(c.stack.size()));
          c.stack.push_back({a->arg, -1});
          dq.push_front({std::move(c), false});
          break;
        case Action::Kind::Ret: {
          if (c.recur.empty()) break;
          const int sym = c.stack.back().second;
          c.stack.resize(c.recur.back());
          c.recur.pop_back();
          int target = t_.transition(c.stack.back().first, sym);
          if (target < 0) break;
          c.stack.push_back({target, sym});
          dq.push_front({std::move(c), false});
          break;
        }
      }
    }
    return std::nullopt;
  }

 private:
  const Grammar& g_;
  const LrTables& t_;
  std::size_t budget_;
};

ConflictExemplar trace_with(const Grammar& g, const LrTables& t, const PrefixSearch& ps, const ConflictSite& site,
                            const TraceOptions& opts) {
  ConflictExemplar ex;
  ex.state = site.state;
  ex.la = site.la;
  ex.actions = site.actions;
  ex.prefix = ps.path(site.state);
  Config start;
  start.stack.push_back({ps.root[site.state] >= 0 ? ps.root[site.state] : t.start_states[0], -1});
  for (const auto& step : ex.prefix) {
    if (step.kind == PrefixStep::Kind::Recur) {
      start.recur.push_back(static_cast<int>(start.stack.size()));
      start.stack.push_back({step.state, -1});
    } else {
      start.stack.push_back({step.state, step.symbol});
    }
  }
  start.window = la::to_vector(site.la);
  Completer comp(g, t, opts.budget);
  for (const auto& a : site.actions) {
    bool exceeded = false;
    auto suffix = comp.run(start, a, exceeded);
    std::vector<int> c = start.window;
    if (suffix) c.insert(c.end(), suffix->begin(), suffix->end());
    ex.completions.push_back(std::move(c));
    ex.budget_exceeded.push_back(exceeded);
  }
  return ex;
}

std::vector<std::string> signature(const Grammar& g, const LrTables& t, const ConflictSite& s) {
  std::vector<std::string> out;
  for (const auto& a : s.actions) out.push_back(render_action(g, t, a));
  return out;
}

std::size_t width(const std::string& s) { return decode_utf8_all(s).size(); }

std::string pad_left(const std::string& s, std::size_t w) {
  std::size_t n = width(s);
  return n >= w ? s : std::string(w - n, ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t w) {
  std::size_t n = width(s);
  return n >= w ? s : s + std::string(w - n, ' ');
}

void rstrip(std::string& s) {
  while (!s.empty() && s.back() == ' ') s.pop_back();
}

std::string join_tokens(const Grammar& g, const std::vector<int>& toks) {
  std::string out;
  for (std::size_t i = 0; i < toks.size(); i++) out += (i ? " " : "") + g.tokens.display(toks[i]);
  return out;
}

}  // namespace

ConflictExemplar trace_conflict(const Grammar& g, const LrTables& t, const ConflictSite& site,
                                const TraceOptions& opts) {
  PrefixSearch ps(g, t);
  return trace_with(g, t, ps, site, opts);
}

std::vector<ConflictExemplar> trace_conflicts(const Grammar& g, const LrTables& t, const TraceOptions& opts) {
  if (t.conflicts.empty()) return {};
  PrefixSearch ps(g, t);
  struct Pick {
    std::optional<PathKey> key;
    std::vector<int> la;
    int site = -1;
    int count = 0;
  };
  std::map<std::vector<std::string>, Pick> groups;
  for (std::size_t i = 0; i < t.conflicts.size(); i++) {
    const auto& c = t.conflicts[i];
    Pick& p = groups[signature(g, t, c)];
    p.count++;
    auto key = ps.best[c.state];
    auto la = la::to_vector(c.la);
    bool better = p.site < 0 || (key && !p.key) ||
                  (key && p.key && (*key < *p.key || (*key == *p.key && la < p.la)));
    if (better) {
      p.key = key;
      p.la = la;
      p.site = static_cast<int>(i);
    }
  }
  std::vector<std::pair<std::pair<std::optional<PathKey>, std::vector<std::string>>, const Pick*>> order;
  for (const auto& [sig, p] : groups) order.push_back({{p.key, sig}, &p});
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    const auto& ka = a.first.first;
    const auto& kb = b.first.first;
    if (ka.has_value() != kb.has_value()) return ka.has_value();
    if (ka && kb && *ka != *kb) return *ka < *kb;
    return a.first.second < b.first.second;
  });
  std::vector<ConflictExemplar> out;
  for (const auto& [k, p] : order) {
    ConflictExemplar ex = trace_with(g, t, ps, t.conflicts[p->site], opts);
    ex.sites = p->count;
    out.push_back(std::move(ex));
  }
  return out;
}

std::string render_conflict_report(const Grammar& g, const LrTables& t, const std::vector<ConflictExemplar>& ex) {
  std::string out;
  const std::string indent = "    ";
  const std::string gap = "    ";
  for (std::size_t i = 0; i < ex.size(); i++) {
    const ConflictExemplar& e = ex[i];
    if (i) out += "\n";
    out += indent + "===== LR conflict " + std::to_string(i + 1) + " of " + std::to_string(ex.size()) + "\n\n";
    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& step : e.prefix) {
      if (step.kind == PrefixStep::Kind::Recur) {
        std::string ctx = "&" + g.nts[step.nt].name;
        rows.push_back({ctx, ctx});
        rows.push_back({"", "RecurStep(" + g.nts[step.nt].name + ")"});
        continue;
      }
      std::string sym = step.symbol < t.num_terminals
                            ? g.tokens.display(step.symbol)
                            : display_nonterminal(g, g.classes[step.symbol - t.num_terminals].nt);
      rows.push_back({sym, join_tokens(g, step.tokens)});
    }
    // Columns: symbols, then one column per action (the first shared with the
    // terminal exemplar).
    std::vector<std::vector<std::string>> cols(e.actions.size());
    for (std::size_t a = 0; a < e.actions.size(); a++) {
      for (int tok : e.completions[a]) cols[a].push_back(g.tokens.display(tok));
      if (e.budget_exceeded[a]) cols[a].push_back("...");
    }
    std::size_t w0 = 0, w1 = 0;
    for (const auto& [l, r] : rows) {
      w0 = std::max(w0, width(l));
      w1 = std::max(w1, width(r));
    }
    std::vector<std::string> acts;
    for (const auto& a : e.actions) acts.push_back(render_action(g, t, a));
    w1 = std::max(w1, width(acts[0]));
    for (const auto& s : cols[0]) w1 = std::max(w1, width(s));
    std::vector<std::size_t> wa(e.actions.size(), 0);
    for (std::size_t a = 1; a < e.actions.size(); a++) {
      wa[a] = width(acts[a]);
      for (const auto& s : cols[a]) wa[a] = std::max(wa[a], width(s));
    }
    const std::string lead = indent + (w0 ? std::string(w0, ' ') + gap : "");
    for (const auto& [l, r] : rows) {
      std::string line = indent + (w0 ? pad_left(l, w0) + gap : "") + pad_left(r, w1);
      rstrip(line);
      out += line + "\n";
    }
    if (!rows.empty()) out += "\n";
    auto tail = [&](const std::vector<std::string>& cells) {
      std::string line = lead + pad_left(cells[0], w1);
      for (std::size_t a = 1; a < cells.size(); a++) line += gap + pad_right(cells[a], wa[a]);
      rstrip(line);
      return line + "\n";
    };
    out += tail(acts);
    out += "\n";
    std::size_t depth = 0;
    for (const auto& c : cols) depth = std::max(depth, c.size());
    for (std::size_t r = 0; r < depth; r++) {
      std::vector<std::string> cells;
      for (const auto& c : cols) cells.push_back(r < c.size() ? c[r] : "");
      out += tail(cells);
    }
  }
  return out;
}

}  // namespace langcc
