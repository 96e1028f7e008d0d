#include "cpg/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "cpg/formulas.hpp"

namespace cpg {

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

RateBreakdown exhaustive_collab_rates(const ModePair& modes, std::size_t poll_cap,
                                      std::size_t max_leaves) {
  const GameSpec game = GameSpec::collaborative();
  const FormulaPair f = fixture_formulas(GameKind::collaborative);
  const CollabScripts scripts = collab_scripts(modes, poll_cap);
  const ScriptQueue queue = scripts.queue();

  std::vector<WeightedInterleaving> runs;
  if (queue.has_senses()) {
    runs = enumerate_staggered(game, queue, game.initial(), max_leaves);
  } else {
    const auto writes = scripts.combined_writes();
    const auto orders = enumerate_permutations<ActionMsg>(writes);
    if (orders.size() > max_leaves)
      throw SizeLimitError("enumeration exceeds " + std::to_string(max_leaves) + " leaves");
    const Rational share(1, static_cast<std::int64_t>(orders.size()));
    runs.reserve(orders.size());
    for (const auto& order : orders)
      runs.push_back({apply_sequence(game, order, game.initial()), share});
  }

  RateBreakdown out;
  out.modes = modes;
  out.leaves.reserve(runs.size());
  for (const auto& w : runs) {
    OracleLeaf leaf;
    leaf.probability = w.probability;
    leaf.phi = count_satisfactions(w.run.states, f.phi).count > 0;
    leaf.psi = count_satisfactions(w.run.states, f.psi).count > 0;
    leaf.deadlock = w.run.deadlock;
    for (const auto& s : w.run.states) leaf.states.push_back(s.index());

    Rational& bucket = leaf.phi ? (leaf.psi ? out.both : out.phi_only)
                                : (leaf.psi ? out.psi_only : out.neither);
    bucket += w.probability;
    out.avg_length += w.probability * static_cast<std::int64_t>(w.run.ticks());
    out.leaves.push_back(std::move(leaf));
  }
  return out;
}

// --- payoffs -------------------------------------------------------------------------

Payoff steps_per_satisfaction(const RateBreakdown& r, PayoffOptions opts) {
  const bool total = opts.basis == PayoffBasis::total;
  auto steps = [&](const Rational& rate) -> std::optional<double> {
    double p = to_double(rate);
    if (opts.whole_percent) p = std::round(p * 100.0) / 100.0;
    if (p <= 0.0) return std::nullopt;
    return to_double(r.avg_length) / p;
  };
  return {steps(total ? r.phi_rate() : r.phi_only), steps(total ? r.psi_rate() : r.psi_only)};
}

// --- published figures -----------------------------------------------------------------

ReferenceFigures reference_figures(AgentMode mode) {
  ReferenceFigures f;
  f.mode = mode;
  if (mode == AgentMode::unsocial_optimistic) {
    f.phi_pct = 33, f.psi_pct = 50, f.neither_pct = 17;
    f.avg_length = 4, f.phi_steps = 12.12, f.psi_steps = 8;
  } else if (mode == AgentMode::unsocial_realistic) {
    f.phi_pct = 40, f.psi_pct = 40, f.neither_pct = 10;
    f.avg_length = 3.8, f.phi_steps = 9.5, f.psi_steps = 9.5;
  } else if (mode == AgentMode::social_optimistic) {
    f.phi_pct = 25, f.psi_pct = 33, f.both_pct = 17, f.neither_pct = 25;
    f.exclusive = true;
    f.avg_length = 4, f.phi_steps = 16, f.psi_steps = 12.12;
  } else {
    f.phi_pct = 50, f.psi_pct = 100;
    f.avg_length = 2.3, f.phi_steps = 4.6, f.psi_steps = 2.3;
  }
  return f;
}

bool ErrataReport::any_flagged() const {
  return std::any_of(deltas.begin(), deltas.end(), [](const FigureDelta& d) { return d.flagged; });
}

ErrataReport errata_report(const RateBreakdown& oracle) {
  if (oracle.modes.c0 != oracle.modes.c1)
    throw ValidationError("published figures exist for matching mode pairs only");
  const ReferenceFigures ref = reference_figures(oracle.modes.c0);
  ErrataReport out;
  out.modes = oracle.modes;
  auto pct = [&](const std::string& name, double reference, const Rational& computed) {
    const double c = 100.0 * to_double(computed);
    out.deltas.push_back({name, reference, c, std::abs(c - reference) > kErrataThresholdPct});
  };
  pct("phi", ref.phi_pct, ref.exclusive ? oracle.phi_only : oracle.phi_rate());
  pct("psi", ref.psi_pct, ref.exclusive ? oracle.psi_only : oracle.psi_rate());
  if (ref.both_pct) pct("both", *ref.both_pct, oracle.both);
  if (ref.neither_pct) pct("neither", *ref.neither_pct, oracle.neither);
  const double len = to_double(oracle.avg_length);
  out.deltas.push_back({"avg_length", ref.avg_length, len,
                        std::abs(len - ref.avg_length) >
                            ref.avg_length * kErrataThresholdPct / 100.0});
  return out;
}

// --- comparison ------------------------------------------------------------------------

ComparisonReport compare(const CollabRunReport& sim, const RateBreakdown& predicted) {
  if (sim.modes != predicted.modes)
    throw ConfigMismatchError("simulation modes " + to_string(sim.modes) +
                              " differ from prediction modes " + to_string(predicted.modes));
  if (sim.phi_cum.size() != sim.iterations || sim.psi_cum.size() != sim.iterations)
    throw ValidationError("run report curves do not match its iteration count");

  ComparisonReport out;
  out.modes = sim.modes;
  out.iterations = sim.iterations;
  out.predicted_phi_rate = to_double(predicted.phi_rate());
  out.predicted_psi_rate = to_double(predicted.psi_rate());
  out.simulated_phi = sim.phi_cum;
  out.simulated_psi = sim.psi_cum;

  const double n = static_cast<double>(sim.iterations);
  for (std::size_t i = 0; i < sim.iterations; ++i) {
    const double k = static_cast<double>(i + 1);
    const double dphi = double(sim.phi_cum[i]) - out.predicted_phi(i);
    const double dpsi = double(sim.psi_cum[i]) - out.predicted_psi(i);
    out.phi_mse += dphi * dphi / n;
    out.psi_mse += dpsi * dpsi / n;
    out.phi_rate_mse += (dphi / k) * (dphi / k) / n;
    out.psi_rate_mse += (dpsi / k) * (dpsi / k) / n;
  }
  return out;
}

}  // namespace cpg
