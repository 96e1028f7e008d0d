#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cpg/engine.hpp"
#include "cpg/interleave.hpp"
#include "cpg/strategies.hpp"

namespace cpg {

/// One enumerated interleaving of the collaborative scripts.
struct OracleLeaf {
  std::vector<std::uint32_t> states;  // state indices, initial state included
  Rational probability;
  bool phi = false;
  bool psi = false;
  bool deadlock = false;
};

/// Exact outcome distribution of one collaborative iteration.
struct RateBreakdown {
  ModePair modes;
  Rational phi_only{0};
  Rational psi_only{0};
  Rational both{0};
  Rational neither{0};
  Rational avg_length{0};
  std::vector<OracleLeaf> leaves;

  Rational phi_rate() const { return phi_only + both; }
  Rational psi_rate() const { return psi_only + both; }
};

/// Enumerates every admissible interleaving of the mode's collaborative
/// scripts: all n! orders of the combined writes when no agent senses, all
/// staggered choice sequences (weighted by sampler probability) otherwise.
RateBreakdown exhaustive_collab_rates(const ModePair& modes,
                                      std::size_t poll_cap = kDefaultPollCap,
                                      std::size_t max_leaves = kDefaultEnumerationCap);

double to_double(const Rational& r);

// --- payoff table ----------------------------------------------------------------

enum class PayoffBasis : std::uint8_t {
  total,      // only + both
  exclusive,  // only
};

struct PayoffOptions {
  PayoffBasis basis = PayoffBasis::total;
  // Round each rate to a whole percent before dividing, as a table built from
  // printed percentages would.
  bool whole_percent = false;
};

/// Expected ticks per satisfaction; nullopt marks an undefined payoff (zero rate).
struct Payoff {
  std::optional<double> phi_steps;
  std::optional<double> psi_steps;
};

Payoff steps_per_satisfaction(const RateBreakdown& r, PayoffOptions opts = {});

// --- published reference figures -------------------------------------------------

struct ReferenceFigures {
  AgentMode mode;
  // Rates in percent; `exclusive` says whether phi/psi exclude "both".
  double phi_pct = 0;
  double psi_pct = 0;
  std::optional<double> both_pct;
  std::optional<double> neither_pct;
  bool exclusive = false;
  double avg_length = 0;
  double phi_steps = 0;
  double psi_steps = 0;
};

ReferenceFigures reference_figures(AgentMode mode);

inline constexpr double kErrataThresholdPct = 5.0;

struct FigureDelta {
  std::string quantity;  // "phi", "psi", "both", "neither", "avg_length"
  double reference = 0;
  double computed = 0;
  bool flagged = false;  // |delta| over threshold (percentage points, or 5% for lengths)
};

struct ErrataReport {
  ModePair modes;
  std::vector<FigureDelta> deltas;
  bool any_flagged() const;
};

/// Oracle rates against the published figures for the same mode.
ErrataReport errata_report(const RateBreakdown& oracle);

// --- simulation vs prediction ------------------------------------------------------

struct ComparisonReport {
  ModePair modes;
  std::size_t iterations = 0;
  double predicted_phi_rate = 0;
  double predicted_psi_rate = 0;
  std::vector<std::size_t> simulated_phi;  // cumulative counts
  std::vector<std::size_t> simulated_psi;
  // Mean squared difference of cumulative counts against rate * iteration.
  double phi_mse = 0;
  double psi_mse = 0;
  // Mean squared difference of running rates (cumulative / iteration) against
  // the predicted rate; tends to zero with more iterations.
  double phi_rate_mse = 0;
  double psi_rate_mse = 0;

  double predicted_phi(std::size_t i) const { return predicted_phi_rate * double(i + 1); }
  double predicted_psi(std::size_t i) const { return predicted_psi_rate * double(i + 1); }
};

/// Throws ConfigMismatchError when the mode pairs differ.
ComparisonReport compare(const CollabRunReport& sim, const RateBreakdown& predicted);

}  // namespace cpg
