#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cpg/analysis.hpp"
#include "cpg/engine.hpp"
#include "cpg/formulas.hpp"
#include "cpg/pfa.hpp"
#include "cpg/strategies.hpp"

namespace cpg {

// Insertion-ordered so emitted documents keep a readable, stable key order.
using Json = nlohmann::ordered_json;

std::string_view version() noexcept;

// --- experiment configuration ---------------------------------------------------

struct ExperimentConfig {
  GameKind game = GameKind::collaborative;
  ModePair modes = ModePair::same(AgentMode::unsocial_optimistic);
  std::optional<OrderingProbs> probs;  // adversarial only
  std::size_t iterations = 0;          // collaborative
  std::size_t ticks = 0;               // adversarial, agent ticks
  std::optional<std::uint64_t> seed;
  std::size_t poll_cap = kDefaultPollCap;
  std::size_t replications = 1;
  TieMode ties = TieMode::lowest_index;
  // Latency parameters (l, l0, noise mean and variance) are recorded for
  // documentation only; runs always use queued, no-delay arrival.
  Json latency = Json::object();

  /// Checks the invariants a run needs: probs present iff adversarial,
  /// iteration or tick count >= 1, a seed, at least one replication.
  void validate_for_run() const;
};

/// Strict: unknown keys and wrong types raise ParseError.
ExperimentConfig config_from_json(const Json& j);
Json to_json(const ExperimentConfig& c);

/// "# cpg <version> config=<compact json>", the first line of every CSV.
std::string provenance_line(const Json& config);

// --- model objects -----------------------------------------------------------------

Json to_json(const GameSpec& g);
GameSpec game_from_json(const Json& j);

Json to_json(const ModePair& m);
ModePair modes_from_json(const Json& j);

Json to_json(const OrderingProbs& p);
OrderingProbs probs_from_json(const Json& j);

Json to_json(const SequenceTemplate& t);
SequenceTemplate template_from_json(const Json& j, const GameSpec& game);

Json to_json(const ScriptStep& step, const GameSpec& game);
ScriptStep step_from_json(const Json& j, const GameSpec& game);
Json to_json(const CollabScripts& s, const GameSpec& game);
Json to_json(const AdverPolicy& p, const GameSpec& game);
AdverPolicy policy_from_json(const Json& j, const GameSpec& game);

// --- matrices and paths --------------------------------------------------------------

Json to_json(const TransitionMatrix& t);
TransitionMatrix matrix_from_json(const Json& j);

/// Header row c0..c{n-1}, one row per state, fixed decimals.
std::string matrix_to_csv(const TransitionMatrix& t, int decimals = 6);
/// Lines starting with '#' are skipped; an optional non-numeric header row is
/// allowed. Errors name the offending row and column.
TransitionMatrix parse_matrix_csv(std::string_view text);
/// Dispatches on the first non-blank character: '[' or '{' means JSON.
TransitionMatrix parse_matrix(std::string_view text);

Json to_json(const std::vector<CellDelta>& diff);
/// Labels are rendered when the matrix is the adversarial state space.
Json to_json(const PathSet& paths, const GameSpec* game = nullptr);

// --- reports ------------------------------------------------------------------------

Json to_json(const Rational& r);
Json to_json(const RateBreakdown& r, bool with_leaves = false);
Json to_json(const Payoff& p);
Json to_json(const ErrataReport& e);
Json to_json(const CollabRunReport& r);
Json to_json(const AdverRunReport& r);
Json to_json(const ComparisonReport& c);

// --- CSV outputs -----------------------------------------------------------------------

/// Fixed-point rendering independent of the global locale.
std::string format_decimal(double x, int decimals);

/// tick,iteration,state_index
std::string collab_trace_csv(const CollabRun& run, const std::string& provenance);
/// iteration,length,phi,psi,phi_cum,psi_cum,deadlock,cap_hits
std::string collab_iterations_csv(const CollabRunReport& r, const std::string& provenance);
/// tick,state_index,phi_cum,psi_cum,in_predicted_path
std::string adver_trace_csv(const AdverRun& run, const std::vector<bool>& in_path,
                            const std::string& provenance);
/// iteration,predicted_phi,simulated_phi,predicted_psi,simulated_psi
std::string comparison_csv(const ComparisonReport& c, const std::string& provenance);

}  // namespace cpg
