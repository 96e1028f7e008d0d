#include "cpg/engine.hpp"

#include <algorithm>

namespace cpg {

double CollabRunReport::phi_rate() const {
  return iterations == 0 ? 0.0 : static_cast<double>(phi_only + both) / iterations;
}

double CollabRunReport::psi_rate() const {
  return iterations == 0 ? 0.0 : static_cast<double>(psi_only + both) / iterations;
}

double CollabRunReport::avg_length() const {
  return iterations == 0 ? 0.0 : static_cast<double>(total_ticks) / iterations;
}

CollabRun run_collab(const ModePair& modes, std::size_t iterations, std::uint64_t seed,
                     std::uint64_t replication, std::size_t poll_cap) {
  if (iterations == 0) throw ValidationError("iterations must be at least 1");
  const GameSpec game = GameSpec::collaborative();
  const FormulaPair f = fixture_formulas(GameKind::collaborative);
  const CollabScripts scripts = collab_scripts(modes, poll_cap);
  const ScriptQueue queue = scripts.queue();
  const bool staggered = queue.has_senses();
  const std::vector<ActionMsg> writes = scripts.combined_writes();

  Rng rng = make_rng(seed, replication);
  CollabRun out;
  auto& rep = out.report;
  rep.modes = modes;
  rep.iterations = iterations;
  rep.seed = seed;
  rep.replication = replication;
  rep.phi_cum.reserve(iterations);
  rep.psi_cum.reserve(iterations);
  rep.per_iteration.reserve(iterations);

  std::size_t phi_cum = 0, psi_cum = 0;
  for (std::size_t it = 0; it < iterations; ++it) {
    Interleaving run;
    if (staggered) {
      run = staggered_interleave(game, queue, game.initial(), rng);
    } else {
      const auto order = fisher_yates<ActionMsg>(writes, rng);
      run = apply_sequence(game, order, game.initial());
    }

    CollabIteration summary;
    summary.length = run.ticks();
    summary.phi = count_satisfactions(run.states, f.phi).count > 0;
    summary.psi = count_satisfactions(run.states, f.psi).count > 0;
    summary.deadlock = run.deadlock;
    summary.cap_hits = run.cap_hits;

    if (summary.phi && summary.psi)
      ++rep.both;
    else if (summary.phi)
      ++rep.phi_only;
    else if (summary.psi)
      ++rep.psi_only;
    else
      ++rep.neither;
    phi_cum += summary.phi;
    psi_cum += summary.psi;
    rep.phi_cum.push_back(phi_cum);
    rep.psi_cum.push_back(psi_cum);
    rep.total_ticks += summary.length;
    rep.deadlocks += summary.deadlock;
    rep.cap_hits += summary.cap_hits;
    rep.per_iteration.push_back(summary);

    const std::size_t offset = out.trace.states.size();
    out.trace.iteration_starts.push_back(offset);
    out.trace.states.insert(out.trace.states.end(), run.states.begin(), run.states.end());
    for (auto w : run.writes) {
      w.tick += offset;
      out.trace.log.push_back(w);
    }
  }
  return out;
}

AdverRun run_adver(const ModePair& modes, const OrderingProbs& probs, std::size_t ticks,
                   std::uint64_t seed, std::uint64_t replication) {
  probs.validate();
  if (ticks == 0) throw ValidationError("ticks must be at least 1");
  const GameSpec game = GameSpec::adversarial();
  const PolicyPair policies = adver_policies(modes);
  policies.c0.validate(game);
  policies.c1.validate(game);

  Rng rng = make_rng(seed, replication);
  AdverRun out;
  auto& rep = out.report;
  rep.modes = modes;
  rep.probs = probs;
  rep.agent_ticks = ticks;
  rep.seed = seed;
  rep.replication = replication;

  EnvState state = game.initial();
  std::array<BeliefState, 2> belief = {BeliefState{state}, BeliefState{state}};
  std::array<std::optional<SenseStep>, 2> gate;
  auto& states = out.trace.states;
  states.reserve(2 * ticks + 1);
  states.push_back(state);

  auto commit = [&](const EnvState& next, const ActionMsg* msg) {
    state = next;
    states.push_back(state);
    if (msg) out.trace.log.push_back({*msg, states.size() - 1});
  };

  for (std::size_t t = 0; t < ticks; ++t) {
    std::array<std::optional<ActionMsg>, 2> act;
    for (Agent a : kAgents) {
      const auto slot = agent_slot(a);
      const bool believer = modes[a].uses_belief();
      if (believer && belief[slot].believed != state) ++rep.belief_divergent_ticks[slot];
      if (gate[slot]) {
        const bool ok = gate[slot]->holds(state);
        gate[slot].reset();
        if (!ok) {
          ++rep.gate_skips[slot];
          continue;
        }
      }
      const EnvState& view = believer ? belief[slot].believed : state;
      const Decision d = decide(a, policies[a], view);
      act[slot] = d.action;
      gate[slot] = d.gate;
      if (believer && d.action) belief[slot] = update_belief(game, belief[slot], *d.action);
    }

    const auto& a0 = act[0];
    const auto& a1 = act[1];
    if (a0 && a1) {
      const PairOrder order = sample_pair_order(probs, rng);
      ++rep.order_counts[static_cast<std::size_t>(order)];
      switch (order) {
        case PairOrder::simultaneous:
          commit(apply_simultaneous(game, state, *a0, *a1), nullptr);
          out.trace.log.push_back({*a0, states.size() - 1});
          out.trace.log.push_back({*a1, states.size() - 1});
          break;
        case PairOrder::c0_first:
          commit(apply(game, state, *a0), &*a0);
          commit(apply(game, state, *a1), &*a1);
          break;
        case PairOrder::c1_first:
          commit(apply(game, state, *a1), &*a1);
          commit(apply(game, state, *a0), &*a0);
          break;
      }
    } else if (a0 || a1) {
      const ActionMsg& m = a0 ? *a0 : *a1;
      commit(apply(game, state, m), &m);
    } else {
      commit(state, nullptr);
    }
  }

  rep.env_ticks = states.size() - 1;
  const FormulaPair f = fixture_formulas(GameKind::adversarial);
  rep.phi_cum = cumulative_counts(count_satisfactions(states, f.phi), states.size());
  rep.psi_cum = cumulative_counts(count_satisfactions(states, f.psi), states.size());
  return out;
}

namespace {

bool occurs_at(std::span<const EnvState> states, const StatePath& path, std::size_t i) {
  const std::size_t len = path.size();
  for (std::size_t r = 0; r < len; ++r) {
    bool ok = true;
    for (std::size_t k = 0; k < len && ok; ++k)
      ok = states[i + k].index() == path[(r + k) % len];
    if (ok) return true;
  }
  return false;
}

}  // namespace

std::size_t count_path_occurrences(std::span<const EnvState> states, const StatePath& path) {
  if (path.empty()) throw ValidationError("path must not be empty");
  if (states.size() < path.size()) return 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i + path.size() <= states.size(); ++i) n += occurs_at(states, path, i);
  return n;
}

std::size_t count_cycle_traversals(std::span<const EnvState> states, const StatePath& cycle) {
  if (cycle.empty()) throw ValidationError("cycle must not be empty");
  const std::size_t len = cycle.size();
  std::size_t n = 0;
  for (std::size_t i = 0; i + len < states.size(); ++i)
    n += states[i + len] == states[i] && occurs_at(states, cycle, i);
  return n;
}

namespace {

void extend_cycles(StatePath& prefix, std::size_t length, std::size_t num_states,
                   std::vector<StatePath>& out) {
  if (prefix.size() == length) {
    out.push_back(prefix);
    return;
  }
  // The first state is the smallest, so each rotation class appears once.
  for (std::uint32_t s = prefix.front() + 1; s < num_states; ++s) {
    if (std::find(prefix.begin(), prefix.end(), s) != prefix.end()) continue;
    prefix.push_back(s);
    extend_cycles(prefix, length, num_states, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<CycleCount> rank_cycles(std::span<const EnvState> states, std::size_t length,
                                    std::size_t num_states) {
  if (length < 2 || length > num_states)
    throw ValidationError("cycle length must be between 2 and the number of states");
  std::vector<StatePath> cycles;
  for (std::uint32_t first = 0; first < num_states; ++first) {
    StatePath prefix{first};
    extend_cycles(prefix, length, num_states, cycles);
  }
  std::vector<CycleCount> out;
  out.reserve(cycles.size());
  for (auto& c : cycles) {
    const std::size_t n = count_cycle_traversals(states, c);
    out.push_back({std::move(c), n});
  }
  std::stable_sort(out.begin(), out.end(), [](const CycleCount& x, const CycleCount& y) {
    return x.occurrences > y.occurrences;
  });
  return out;
}

std::vector<bool> path_coverage(std::span<const EnvState> states,
                                std::span<const StatePath> paths) {
  std::vector<bool> covered(states.size(), false);
  for (const auto& path : paths) {
    if (path.empty() || states.size() < path.size()) continue;
    for (std::size_t i = 0; i + path.size() <= states.size(); ++i)
      if (occurs_at(states, path, i))
        for (std::size_t k = 0; k < path.size(); ++k) covered[i + k] = true;
  }
  return covered;
}

}  // namespace cpg
