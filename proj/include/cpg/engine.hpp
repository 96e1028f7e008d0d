#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cpg/core.hpp"
#include "cpg/formulas.hpp"
#include "cpg/interleave.hpp"
#include "cpg/strategies.hpp"

namespace cpg {

/// Environment states indexed by environment tick.
struct Trace {
  std::vector<EnvState> states;
  // Collaborative runs: index into `states` where each iteration starts.
  std::vector<std::size_t> iteration_starts;
  // Every applied write; tick is the index of the resulting state.
  std::vector<AppliedWrite> log;

  friend bool operator==(const Trace&, const Trace&) = default;
};

struct CollabIteration {
  std::size_t length = 0;  // ticks, i.e. writes applied
  bool phi = false;
  bool psi = false;
  bool deadlock = false;
  std::size_t cap_hits = 0;
  friend bool operator==(const CollabIteration&, const CollabIteration&) = default;
};

struct CollabRunReport {
  ModePair modes;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;

  std::size_t phi_only = 0;
  std::size_t psi_only = 0;
  std::size_t both = 0;
  std::size_t neither = 0;
  std::size_t total_ticks = 0;
  std::size_t deadlocks = 0;
  std::size_t cap_hits = 0;

  // Cumulative satisfied-iteration counts after each iteration.
  std::vector<std::size_t> phi_cum;
  std::vector<std::size_t> psi_cum;
  std::vector<CollabIteration> per_iteration;

  double phi_rate() const;  // (phi_only + both) / iterations
  double psi_rate() const;
  double avg_length() const;

  friend bool operator==(const CollabRunReport&, const CollabRunReport&) = default;
};

struct CollabRun {
  Trace trace;
  CollabRunReport report;
};

/// Plays `iterations` independent iterations of the collaborative game.
/// Scripts without sense steps are applied as a uniform permutation of the
/// combined writes; scripts with senses run through staggered_interleave.
/// The environment is reset between iterations without a tick.
CollabRun run_collab(const ModePair& modes, std::size_t iterations, std::uint64_t seed,
                     std::uint64_t replication = 0, std::size_t poll_cap = kDefaultPollCap);

struct AdverRunReport {
  ModePair modes;
  OrderingProbs probs;
  std::size_t agent_ticks = 0;
  std::size_t env_ticks = 0;
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;

  // Indexed by environment tick (same length as the trace).
  std::vector<std::size_t> phi_cum;
  std::vector<std::size_t> psi_cum;

  std::array<std::size_t, 3> order_counts = {0, 0, 0};  // by PairOrder
  std::array<std::size_t, 2> gate_skips = {0, 0};
  // Agent ticks on which a belief-driven agent's belief differed from the
  // actual state; zero for agents that sense.
  std::array<std::size_t, 2> belief_divergent_ticks = {0, 0};

  std::size_t phi_total() const { return phi_cum.empty() ? 0 : phi_cum.back(); }
  std::size_t psi_total() const { return psi_cum.empty() ? 0 : psi_cum.back(); }

  friend bool operator==(const AdverRunReport&, const AdverRunReport&) = default;
};

struct AdverRun {
  Trace trace;
  AdverRunReport report;
};

/// Free-running adversarial play. Each agent tick both agents decide; a pair
/// of writes is interpreted per sample_pair_order (sequential orders take two
/// environment ticks, simultaneous one). Idle writes still take a tick.
AdverRun run_adver(const ModePair& modes, const OrderingProbs& probs, std::size_t ticks,
                   std::uint64_t seed, std::uint64_t replication = 0);

using StatePath = std::vector<std::uint32_t>;

/// Positions where the trace walks `path` consecutively, from any rotation.
std::size_t count_path_occurrences(std::span<const EnvState> states, const StatePath& path);

/// Positions where the trace goes once around `cycle`, from any rotation,
/// and is back at its starting state: k states of the cycle plus the return.
std::size_t count_cycle_traversals(std::span<const EnvState> states, const StatePath& cycle);

struct CycleCount {
  StatePath cycle;  // rotated so the smallest state comes first
  std::size_t occurrences = 0;
};

/// Every directed simple cycle of `length` distinct states out of
/// `num_states`, one per rotation class, with its traversal count in the
/// trace. Sorted by count (descending), then lexicographically.
std::vector<CycleCount> rank_cycles(std::span<const EnvState> states, std::size_t length,
                                    std::size_t num_states);

/// Flags every tick covered by an occurrence of any of `paths`.
std::vector<bool> path_coverage(std::span<const EnvState> states,
                                std::span<const StatePath> paths);

}  // namespace cpg
