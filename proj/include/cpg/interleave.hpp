#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

#include "cpg/core.hpp"

namespace cpg {

using Rng = std::mt19937_64;
using Rational = boost::rational<std::int64_t>;

/// Independent stream for replication `replication` of a run seeded with `seed`.
Rng make_rng(std::uint64_t seed, std::uint64_t replication = 0);

/// Uniform random permutation (Durstenfeld's in-place form on a copy).
template <typename T>
std::vector<T> fisher_yates(std::span<const T> items, Rng& rng) {
  std::vector<T> out(items.begin(), items.end());
  for (std::size_t i = out.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::size_t j = pick(rng);
    using std::swap;
    swap(out[i - 1], out[j]);
  }
  return out;
}

inline constexpr std::size_t kMaxEnumeratedItems = 8;

/// All n! positional orderings of `items` (items that compare equal still
/// yield separate sequences). Lexicographic in the original positions.
template <typename T>
std::vector<std::vector<T>> enumerate_permutations(std::span<const T> items) {
  if (items.size() > kMaxEnumeratedItems)
    throw SizeLimitError("refusing to enumerate permutations of " +
                         std::to_string(items.size()) + " items (limit " +
                         std::to_string(kMaxEnumeratedItems) + ")");
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::vector<T>> out;
  do {
    std::vector<T> seq;
    seq.reserve(order.size());
    for (std::size_t i : order) seq.push_back(items[i]);
    out.push_back(std::move(seq));
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

// --- pairwise interpretation order ----------------------------------------

struct OrderingProbs {
  double p_c0_first = 0.25;
  double p_c1_first = 0.25;
  double p_sim = 0.5;

  /// Throws ValidationError unless all are >= 0 and they sum to 1 (1e-12).
  void validate() const;
  static OrderingProbs make(double c0_first, double c1_first, double sim);

  friend bool operator==(const OrderingProbs&, const OrderingProbs&) = default;
};

enum class PairOrder : std::uint8_t { c0_first, c1_first, simultaneous };

std::string_view to_string(PairOrder o) noexcept;

PairOrder sample_pair_order(const OrderingProbs& p, Rng& rng);

// --- staggered interleaving of agent scripts --------------------------------

using ScriptStep = std::variant<ActionMsg, SenseStep>;

struct ScriptEntry {
  ScriptStep step;
  // Nominal schedule position for synchronized (social) scripts.
  std::optional<int> slot;

  friend bool operator==(const ScriptEntry&, const ScriptEntry&) = default;
};

using Script = std::vector<ScriptEntry>;

Agent owner(const ScriptStep& step) noexcept;
bool is_write(const ScriptEntry& e) noexcept;
std::vector<ActionMsg> writes_of(const Script& script);

/// Per-agent queue of script entries. Emission order within an agent is
/// never changed by any interleaving.
class ScriptQueue {
 public:
  ScriptQueue() = default;
  ScriptQueue(const Script& c0, const Script& c1);

  const std::deque<ScriptEntry>& pending(Agent a) const { return queues_[agent_slot(a)]; }
  bool empty() const noexcept { return queues_[0].empty() && queues_[1].empty(); }
  bool has_senses() const noexcept;

 private:
  std::array<std::deque<ScriptEntry>, 2> queues_;
};

struct AppliedWrite {
  ActionMsg msg;
  std::size_t tick = 0;  // environment tick at which the write took effect
  friend bool operator==(const AppliedWrite&, const AppliedWrite&) = default;
};

struct Interleaving {
  std::vector<AppliedWrite> writes;
  std::vector<EnvState> states;  // states[0] is the starting state
  bool deadlock = false;
  std::array<bool, 2> aborted = {false, false};
  std::size_t cap_hits = 0;

  std::size_t ticks() const noexcept { return writes.size(); }
  friend bool operator==(const Interleaving&, const Interleaving&) = default;
};

/// One leaf of an exhaustive enumeration with its probability under the
/// uniform-among-unblocked-agents sampler.
struct WeightedInterleaving {
  Interleaving run;
  Rational probability;
};

/// Sampled: at every step one unblocked agent with a pending write is picked
/// uniformly and its head write applied. Sense steps are resolved as soon as
/// they reach the head of their queue; they never consume a tick.
Interleaving staggered_interleave(const GameSpec& game, const ScriptQueue& queues,
                                  const EnvState& start, Rng& rng);

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

/// Every choice sequence of the sampler, each weighted by its probability.
/// Probabilities sum to 1.
std::vector<WeightedInterleaving> enumerate_staggered(
    const GameSpec& game, const ScriptQueue& queues, const EnvState& start,
    std::size_t max_leaves = kDefaultEnumerationCap);

/// Applies `writes` in order starting at `start`, one environment tick each.
Interleaving apply_sequence(const GameSpec& game, std::span<const ActionMsg> writes,
                            const EnvState& start);

}  // namespace cpg
