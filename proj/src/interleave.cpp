#include "cpg/interleave.hpp"

#include <cmath>

namespace cpg {

Rng make_rng(std::uint64_t seed, std::uint64_t replication) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replication),
                    static_cast<std::uint32_t>(replication >> 32)};
  return Rng(seq);
}

void OrderingProbs::validate() const {
  for (double p : {p_c0_first, p_c1_first, p_sim})
    if (!(p >= 0.0) || !std::isfinite(p))
      throw ValidationError("ordering probabilities must be finite and non-negative");
  const double total = p_c0_first + p_c1_first + p_sim;
  if (std::abs(total - 1.0) > 1e-12)
    throw ValidationError("ordering probabilities sum to " + std::to_string(total) +
                          ", expected 1");
}

OrderingProbs OrderingProbs::make(double c0_first, double c1_first, double sim) {
  OrderingProbs p{c0_first, c1_first, sim};
  p.validate();
  return p;
}

std::string_view to_string(PairOrder o) noexcept {
  switch (o) {
    case PairOrder::c0_first: return "c0_first";
    case PairOrder::c1_first: return "c1_first";
    case PairOrder::simultaneous: return "simultaneous";
  }
  return "?";
}

PairOrder sample_pair_order(const OrderingProbs& p, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  if (u < p.p_c0_first) return PairOrder::c0_first;
  if (u < p.p_c0_first + p.p_c1_first) return PairOrder::c1_first;
  // Absorbs rounding when p_sim is zero but the first two sum to 1 - eps.
  if (p.p_sim == 0.0) return p.p_c1_first > 0.0 ? PairOrder::c1_first : PairOrder::c0_first;
  return PairOrder::simultaneous;
}

// --- scripts ------------------------------------------------------------------

Agent owner(const ScriptStep& step) noexcept {
  return std::visit([](const auto& s) { return s.agent; }, step);
}

bool is_write(const ScriptEntry& e) noexcept {
  return std::holds_alternative<ActionMsg>(e.step);
}

std::vector<ActionMsg> writes_of(const Script& script) {
  std::vector<ActionMsg> out;
  for (const auto& e : script)
    if (const auto* m = std::get_if<ActionMsg>(&e.step)) out.push_back(*m);
  return out;
}

ScriptQueue::ScriptQueue(const Script& c0, const Script& c1) {
  for (const auto* script : {&c0, &c1}) {
    const Agent expected = script == &c0 ? Agent::c0 : Agent::c1;
    for (const auto& e : *script)
      if (owner(e.step) != expected)
        throw ValidationError("script entry owned by the wrong agent");
  }
  queues_[0].assign(c0.begin(), c0.end());
  queues_[1].assign(c1.begin(), c1.end());
}

bool ScriptQueue::has_senses() const noexcept {
  for (const auto& q : queues_)
    for (const auto& e : q)
      if (!is_write(e)) return true;
  return false;
}

// --- staggered execution ------------------------------------------------------

namespace {

struct Cursor {
  std::array<std::deque<ScriptEntry>, 2> queues;
  std::array<std::size_t, 2> waited = {0, 0};
  Interleaving run;
  EnvState state;
};

Cursor make_cursor(const ScriptQueue& queues, const EnvState& start) {
  Cursor c;
  for (Agent a : kAgents)
    c.queues[agent_slot(a)].assign(queues.pending(a).begin(), queues.pending(a).end());
  c.state = start;
  c.run.states.push_back(start);
  return c;
}

bool blocked(const Cursor& c, Agent a) {
  const auto& q = c.queues[agent_slot(a)];
  return !q.empty() && !is_write(q.front());
}

// Resolves sense steps at queue heads and returns the agents whose head is a
// write. Agents left with a sense at the head are blocked.
std::vector<Agent> resolve(Cursor& c) {
  std::vector<Agent> available;
  for (Agent a : kAgents) {
    const auto slot = agent_slot(a);
    auto& q = c.queues[slot];
    while (!q.empty()) {
      const auto* sense = std::get_if<SenseStep>(&q.front().step);
      if (sense == nullptr) {
        available.push_back(a);
        break;
      }
      if (sense->holds(c.state)) {
        q.pop_front();
        c.waited[slot] = 0;
        continue;
      }
      if (sense->on_fail == OnFail::abort) {
        q.clear();
        c.run.aborted[slot] = true;
      } else if (c.waited[slot] >= sense->max_wait) {
        q.clear();
        c.run.aborted[slot] = true;
        ++c.run.cap_hits;
      }
      break;
    }
  }
  if (available.empty() && !(c.queues[0].empty() && c.queues[1].empty()))
    c.run.deadlock = true;
  return available;
}

void step(const GameSpec& game, Cursor& c, Agent a) {
  // Only agents blocked before this write spend wait budget on it.
  for (Agent other : kAgents)
    if (other != a && blocked(c, other)) ++c.waited[agent_slot(other)];
  auto& q = c.queues[agent_slot(a)];
  const ActionMsg msg = std::get<ActionMsg>(q.front().step);
  q.pop_front();
  c.state = apply(game, c.state, msg);
  c.run.states.push_back(c.state);
  c.run.writes.push_back({msg, c.run.states.size() - 1});
}

void enumerate(const GameSpec& game, Cursor c, Rational prob,
               std::vector<WeightedInterleaving>& out, std::size_t max_leaves) {
  const auto available = resolve(c);
  if (available.empty()) {
    if (out.size() >= max_leaves)
      throw SizeLimitError("staggered enumeration exceeded " + std::to_string(max_leaves) +
                           " interleavings");
    out.push_back({std::move(c.run), prob});
    return;
  }
  const Rational share = prob / static_cast<std::int64_t>(available.size());
  for (Agent a : available) {
    Cursor next = c;
    step(game, next, a);
    enumerate(game, std::move(next), share, out, max_leaves);
  }
}

}  // namespace

Interleaving staggered_interleave(const GameSpec& game, const ScriptQueue& queues,
                                  const EnvState& start, Rng& rng) {
  Cursor c = make_cursor(queues, start);
  for (;;) {
    const auto available = resolve(c);
    if (available.empty()) break;
    Agent chosen = available.front();
    if (available.size() > 1) {
      std::uniform_int_distribution<std::size_t> pick(0, available.size() - 1);
      chosen = available[pick(rng)];
    }
    step(game, c, chosen);
  }
  return std::move(c.run);
}

std::vector<WeightedInterleaving> enumerate_staggered(const GameSpec& game,
                                                      const ScriptQueue& queues,
                                                      const EnvState& start,
                                                      std::size_t max_leaves) {
  std::vector<WeightedInterleaving> out;
  enumerate(game, make_cursor(queues, start), Rational(1), out, max_leaves);
  return out;
}

Interleaving apply_sequence(const GameSpec& game, std::span<const ActionMsg> writes,
                            const EnvState& start) {
  Interleaving run;
  run.states.reserve(writes.size() + 1);
  run.states.push_back(start);
  EnvState s = start;
  for (const auto& m : writes) {
    s = apply(game, s, m);
    run.states.push_back(s);
    run.writes.push_back({m, run.states.size() - 1});
  }
  return run;
}

}  // namespace cpg
