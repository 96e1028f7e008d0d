#pragma once

// Brute-force reference computations used to derive expected values in the
// tests. Nothing here calls into the library: states are plain bitmasks,
// enumeration is hand-rolled recursion, and matrices are dense arrays.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <boost/rational.hpp>

namespace oracle {

using Frac = boost::rational<std::int64_t>;

// --- two-variable collaborative game; bit 1 = a, bit 0 = b ---------------------

struct Write {
  int var;  // 0 = a, 1 = b
  bool value;
};

inline unsigned set_bit(unsigned state, int var, bool value, int nvars) {
  const unsigned bit = 1u << (nvars - 1 - var);
  return value ? (state | bit) : (state & ~bit);
}

inline bool get_bit(unsigned state, int var, int nvars) {
  return (state >> (nvars - 1 - var)) & 1u;
}

// Chain of (target, connector-to-next) with 'X', 'F' or 0 on the last step.
struct Link {
  unsigned target;
  char next;
};
using Chain = std::vector<Link>;

// Anchored at `start`; F takes the first later occurrence.
inline std::optional<std::size_t> anchored(const std::vector<unsigned>& t, const Chain& c,
                                           std::size_t start) {
  if (start >= t.size() || t[start] != c[0].target) return std::nullopt;
  std::size_t pos = start;
  for (std::size_t k = 1; k < c.size(); ++k) {
    const char conn = c[k - 1].next;
    if (conn == 'X') {
      if (pos + 1 >= t.size() || t[pos + 1] != c[k].target) return std::nullopt;
      ++pos;
    } else {
      std::size_t q = pos + 1;
      while (q < t.size() && t[q] != c[k].target) ++q;
      if (q >= t.size()) return std::nullopt;
      pos = q;
    }
  }
  return pos;
}

// Greedy non-overlapping count over a disjunction of chains.
inline std::size_t count(const std::vector<unsigned>& t, const std::vector<Chain>& f) {
  std::size_t n = 0;
  std::size_t i = 0;
  while (i < t.size()) {
    std::optional<std::size_t> best;
    for (const auto& c : f) {
      const auto e = anchored(t, c, i);
      if (e && (!best || *e < *best)) best = e;
    }
    if (best) {
      ++n;
      i = *best + 1;
    } else {
      ++i;
    }
  }
  return n;
}

// Collaborative goals: a¬b reached then immediately ab; ¬ab immediately then ab.
inline std::vector<Chain> collab_phi() { return {{{0, 'F'}, {2, 'X'}, {3, 0}}}; }
inline std::vector<Chain> collab_psi() { return {{{0, 'X'}, {1, 'F'}, {3, 0}}}; }

struct Outcome {
  Frac phi_only{0}, psi_only{0}, both{0}, neither{0}, length{0};
  std::size_t leaves = 0;
};

inline void classify(Outcome& o, const std::vector<unsigned>& trace, Frac weight) {
  const bool phi = count(trace, collab_phi()) > 0;
  const bool psi = count(trace, collab_psi()) > 0;
  (phi ? (psi ? o.both : o.phi_only) : (psi ? o.psi_only : o.neither)) += weight;
  o.length += weight * static_cast<std::int64_t>(trace.size() - 1);
  ++o.leaves;
}

// Every ordering of `writes` (positional), applied from ¬a¬b.
inline Outcome all_orders(const std::vector<Write>& writes) {
  std::vector<std::vector<Write>> orders;
  std::vector<Write> cur;
  std::vector<bool> used(writes.size(), false);
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == writes.size()) {
      orders.push_back(cur);
      return;
    }
    for (std::size_t i = 0; i < writes.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      cur.push_back(writes[i]);
      self(self);
      cur.pop_back();
      used[i] = false;
    }
  };
  rec(rec);
  Outcome o;
  const Frac w(1, static_cast<std::int64_t>(orders.size()));
  for (const auto& order : orders) {
    std::vector<unsigned> trace{0};
    for (const auto& wr : order) trace.push_back(set_bit(trace.back(), wr.var, wr.value, 2));
    classify(o, trace, w);
  }
  return o;
}

// Script element: a write, or a check of `var == value` that either aborts
// the rest of the script or waits (at most `cap` applied writes).
struct Item {
  bool is_check;
  int var;
  bool value;
  bool wait;
  std::size_t cap;
};
inline Item W(int var, bool value) { return {false, var, value, false, 0}; }
inline Item Abort(int var, bool value) { return {true, var, value, false, 0}; }
inline Item Wait(int var, bool value, std::size_t cap) { return {true, var, value, true, cap}; }

struct AgentPos {
  std::size_t next = 0;
  std::size_t waited = 0;
  bool done = false;
};

// Tree of sampler choices: at each step an agent whose head (after checks)
// is a write is picked uniformly.
inline Outcome staggered(const std::array<std::vector<Item>, 2>& scripts) {
  Outcome o;
  auto settle = [&](unsigned state, std::array<AgentPos, 2>& pos, std::array<bool, 2>& ready) {
    for (int a = 0; a < 2; ++a) {
      ready[a] = false;
      auto& p = pos[a];
      while (!p.done && p.next < scripts[a].size()) {
        const Item& it = scripts[a][p.next];
        if (!it.is_check) {
          ready[a] = true;
          break;
        }
        if (get_bit(state, it.var, 2) == it.value) {
          ++p.next;
          p.waited = 0;
          continue;
        }
        if (!it.wait || p.waited >= it.cap) {
          p.done = true;
          break;
        }
        break;  // blocked
      }
    }
  };
  auto rec = [&](auto&& self, std::vector<unsigned> trace, std::array<AgentPos, 2> pos,
                 Frac weight) -> void {
    std::array<bool, 2> ready{};
    settle(trace.back(), pos, ready);
    const int n = int(ready[0]) + int(ready[1]);
    if (n == 0) {
      classify(o, trace, weight);
      return;
    }
    for (int a = 0; a < 2; ++a) {
      if (!ready[a]) continue;
      auto p2 = pos;
      auto t2 = trace;
      const Item& it = scripts[a][p2[a].next++];
      t2.push_back(set_bit(t2.back(), it.var, it.value, 2));
      for (int b = 0; b < 2; ++b)
        if (b != a && !p2[b].done && p2[b].next < scripts[b].size() &&
            scripts[b][p2[b].next].is_check)
          ++p2[b].waited;
      self(self, t2, p2, weight / Frac(n));
    }
  };
  rec(rec, {0}, {}, Frac(1));
  return o;
}

// --- three-variable adversarial game; index = 4a + 2b + c ------------------------

// Head action per state: variable (0 = a, 1 = b, 2 = c) and value, or -1 for none.
struct Act {
  int var;
  bool value;
};
using Table = std::array<std::optional<Act>, 8>;

using Dense = std::array<std::array<double, 8>, 8>;

inline unsigned act_on(unsigned s, const std::optional<Act>& a) {
  return a ? set_bit(s, a->var, a->value, 3) : s;
}

// Every interpretation scenario as explicit weighted legs, then row scaling.
inline Dense scenario_matrix(const Table& c0, const Table& c1, double p01, double p10,
                             double psim) {
  Dense w{};
  struct Leg {
    unsigned from, to;
    double weight;
  };
  for (unsigned s = 0; s < 8; ++s) {
    if (!c0[s] && !c1[s]) continue;
    std::vector<Leg> legs;
    legs.push_back({s, act_on(act_on(s, c0[s]), c1[s]), psim});
    const unsigned m01 = act_on(s, c0[s]);
    legs.push_back({s, m01, p01});
    legs.push_back({m01, act_on(m01, c1[s]), p01});
    const unsigned m10 = act_on(s, c1[s]);
    legs.push_back({s, m10, p10});
    legs.push_back({m10, act_on(m10, c0[s]), p10});
    for (const auto& l : legs)
      if (l.from != l.to) w[l.from][l.to] += l.weight;
  }
  for (auto& row : w) {
    double g = 0;
    for (double x : row) g += x;
    if (g > 0)
      for (double& x : row) x /= g;
  }
  return w;
}

// Greedy successor walk from every row, lowest index on ties.
inline std::vector<std::vector<unsigned>> greedy_cycles(const std::vector<std::vector<double>>& t) {
  std::vector<std::vector<unsigned>> found;
  const std::size_t n = t.size();
  for (unsigned start = 0; start < n; ++start) {
    std::vector<unsigned> walk{start};
    for (;;) {
      const auto& row = t[walk.back()];
      unsigned best = 0;
      for (unsigned j = 1; j < n; ++j)
        if (row[j] > row[best]) best = j;
      auto hit = std::find(walk.begin(), walk.end(), best);
      if (hit != walk.end()) {
        std::vector<unsigned> loop(hit, walk.end());
        std::rotate(loop.begin(), std::min_element(loop.begin(), loop.end()), loop.end());
        if (std::find(found.begin(), found.end(), loop) == found.end()) found.push_back(loop);
        break;
      }
      walk.push_back(best);
    }
  }
  return found;
}

}  // namespace oracle
