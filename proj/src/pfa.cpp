#include "cpg/pfa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cpg {

TransitionMatrix::TransitionMatrix(std::size_t n) : n_(n), cells_(n * n, 0.0) {}

TransitionMatrix TransitionMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  TransitionMatrix t(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size())
      throw ValidationError("row " + std::to_string(i) + " has " +
                            std::to_string(rows[i].size()) + " columns, expected " +
                            std::to_string(rows.size()));
    std::copy(rows[i].begin(), rows[i].end(), t.cells_.begin() + i * t.n_);
  }
  return t;
}

double TransitionMatrix::row_sum(std::size_t i) const {
  const auto r = row(i);
  return std::accumulate(r.begin(), r.end(), 0.0);
}

bool TransitionMatrix::row_is_zero(std::size_t i) const {
  const auto r = row(i);
  return std::all_of(r.begin(), r.end(), [](double x) { return x == 0.0; });
}

std::vector<std::size_t> TransitionMatrix::normalize_rows() {
  std::vector<std::size_t> zero;
  for (std::size_t i = 0; i < n_; ++i) {
    const double g = row_sum(i);
    if (g <= 0.0) {
      zero.push_back(i);
      continue;
    }
    for (std::size_t j = 0; j < n_; ++j) (*this)(i, j) /= g;
  }
  return zero;
}

void TransitionMatrix::validate(double row_tolerance, bool allow_zero_rows) const {
  for (std::size_t i = 0; i < n_; ++i) {
    if ((*this)(i, i) != 0.0)
      throw ValidationError("diagonal entry (" + std::to_string(i) + "," + std::to_string(i) +
                            ") is non-zero");
    for (std::size_t j = 0; j < n_; ++j) {
      const double x = (*this)(i, j);
      if (!(x >= 0.0 && x <= 1.0))
        throw ValidationError("entry (" + std::to_string(i) + "," + std::to_string(j) +
                              ") outside [0,1]");
    }
    if (row_is_zero(i)) {
      if (allow_zero_rows) continue;
      throw DegenerateRowError(i, "row " + std::to_string(i) + " is all zero");
    }
    if (std::abs(row_sum(i) - 1.0) > row_tolerance)
      throw ValidationError("row " + std::to_string(i) + " sums to " +
                            std::to_string(row_sum(i)));
  }
}

// --- constructive builder -------------------------------------------------------

MatrixBuild build_matrix(const PolicyPair& policies, const OrderingProbs& probs) {
  probs.validate();
  const GameSpec game = GameSpec::adversarial();
  policies.c0.validate(game);
  policies.c1.validate(game);
  const std::size_t n = game.num_states();

  TransitionMatrix weights(n);
  auto add = [&](const EnvState& from, const EnvState& to, double w) {
    if (from != to && w > 0.0) weights(from.index(), to.index()) += w;
  };
  auto apply_opt = [&](const EnvState& s, const std::optional<ActionMsg>& m) {
    return m ? apply(game, s, *m) : s;
  };
  // first leg from s, second leg from wherever the first one landed
  auto sequential = [&](const EnvState& s, const std::optional<ActionMsg>& first,
                        const std::optional<ActionMsg>& second, double w) {
    const EnvState mid = apply_opt(s, first);
    add(s, mid, w);
    add(mid, apply_opt(mid, second), w);
  };

  for (std::uint32_t i = 0; i < n; ++i) {
    const EnvState s = game.state_from_index(i);
    const auto a0 = policies.c0.head_action(i);
    const auto a1 = policies.c1.head_action(i);
    if (!a0 && !a1) continue;
    const EnvState together =
        (a0 && a1) ? apply_simultaneous(game, s, *a0, *a1) : apply_opt(s, a0 ? a0 : a1);
    add(s, together, probs.p_sim);
    sequential(s, a0, a1, probs.p_c0_first);
    sequential(s, a1, a0, probs.p_c1_first);
  }

  MatrixBuild out;
  out.unreachable_rows = weights.normalize_rows();
  out.matrix = std::move(weights);
  return out;
}

// --- fixtures ---------------------------------------------------------------------

std::string_view to_string(FixtureConfig c) noexcept {
  switch (c) {
    case FixtureConfig::unsocial_optimistic: return "unsocial-optimistic";
    case FixtureConfig::unsocial_realistic: return "unsocial-realistic";
    case FixtureConfig::social_optimistic: return "social-optimistic";
    case FixtureConfig::social_realistic: return "social-realistic";
  }
  return "?";
}

FixtureConfig fixture_for(AgentMode m) {
  if (!m.social) return m.realistic ? FixtureConfig::unsocial_realistic
                                    : FixtureConfig::unsocial_optimistic;
  return m.realistic ? FixtureConfig::social_realistic : FixtureConfig::social_optimistic;
}

TransitionMatrix fixture_matrix(FixtureConfig config) {
  switch (config) {
    case FixtureConfig::unsocial_optimistic:
    case FixtureConfig::unsocial_realistic:
      return TransitionMatrix::from_rows({
          {0, 0.4, 0.2, 0.4, 0, 0, 0, 0},
          {0, 0, 0, 0.333, 0, 0.167, 0.167, 0.333},
          {0.2, 0.4, 0, 0.4, 0, 0, 0, 0},
          {0, 0.2, 0.2, 0, 0, 0.4, 0, 0.2},
          {0, 0, 0, 0, 0, 0.2, 0.4, 0.4},
          {0, 0, 0, 0, 0.167, 0, 0.333, 0.5},
          {0, 0, 0, 0, 0, 0, 0, 1},
          {0, 0, 0, 0.5, 0.167, 0.167, 0.167, 0},
      });
    case FixtureConfig::social_optimistic:
      return TransitionMatrix::from_rows({
          {0, 0.714, 0.286, 0, 0, 0, 0, 0},
          {0.25, 0, 0.5, 0.25, 0, 0, 0, 0},
          {0, 0.667, 0, 0.333, 0, 0, 0, 0},
          {0.143, 0.286, 0, 0, 0, 0, 0, 0.571},
          {0.2, 0, 0.6, 0, 0, 0, 0.2, 0},
          {0, 0, 0, 0.2, 0.2, 0, 0.4, 0.2},
          {0, 0, 0.8, 0, 0.2, 0, 0, 0},
          {0, 0, 0, 0, 0.4, 0.2, 0.4, 0},
      });
    case FixtureConfig::social_realistic:
      return TransitionMatrix::from_rows({
          {0, 0.167, 0.167, 0.5, 0.167, 0, 0, 0},
          {0.167, 0, 0, 0.333, 0, 0.167, 0, 0.333},
          {0.333, 0, 0, 0.167, 0.333, 0, 0.167, 0},
          {0.4, 0.2, 0.2, 0, 0, 0, 0, 0.2},
          {0.2, 0, 0.4, 0, 0, 0, 0.4, 0},
          {0, 0, 0, 0, 0.2, 0, 0.4, 0.4},
          {0, 0, 0.286, 0, 0.143, 0, 0, 0.571},
          {0, 0, 0, 0.8, 0, 0, 0.2, 0},
      });
  }
  throw ValidationError("unknown fixture configuration");
}

std::vector<CellDelta> cell_diff(const TransitionMatrix& built, const TransitionMatrix& fixture,
                                 double tolerance) {
  if (built.size() != fixture.size()) throw ValidationError("matrix sizes differ");
  std::vector<CellDelta> out;
  for (std::size_t i = 0; i < built.size(); ++i)
    for (std::size_t j = 0; j < built.size(); ++j)
      if (std::abs(built(i, j) - fixture(i, j)) > tolerance)
        out.push_back({i, j, built(i, j), fixture(i, j)});
  return out;
}

// --- most likely paths ------------------------------------------------------------

bool rotation_equivalent(const StatePath& x, const StatePath& y) {
  if (x.size() != y.size()) return false;
  if (x.empty()) return true;
  for (std::size_t r = 0; r < x.size(); ++r) {
    bool same = true;
    for (std::size_t k = 0; k < x.size() && same; ++k) same = x[(r + k) % x.size()] == y[k];
    if (same) return true;
  }
  return false;
}

StatePath canonical_rotation(StatePath p) {
  if (!p.empty()) std::rotate(p.begin(), std::min_element(p.begin(), p.end()), p.end());
  return p;
}

bool PathSet::contains(const StatePath& p) const {
  return std::any_of(paths.begin(), paths.end(),
                     [&](const StatePath& q) { return rotation_equivalent(p, q); });
}

namespace {

std::vector<std::uint32_t> best_successors(const TransitionMatrix& t, std::uint32_t row,
                                           TieMode ties) {
  const auto r = t.row(row);
  const double best = *std::max_element(r.begin(), r.end());
  if (!(best > 0.0))
    throw DegenerateRowError(row, "row " + std::to_string(row) +
                                      " has no positive entry; the walk cannot continue");
  std::vector<std::uint32_t> out;
  for (std::uint32_t j = 0; j < r.size(); ++j) {
    if (best - r[j] <= kTieTolerance) {
      out.push_back(j);
      if (ties == TieMode::lowest_index) break;
    }
  }
  return out;
}

void walk(const TransitionMatrix& t, TieMode ties, StatePath& path, PathSet& found) {
  for (std::uint32_t next : best_successors(t, path.back(), ties)) {
    auto hit = std::find(path.begin(), path.end(), next);
    if (hit != path.end()) {
      StatePath loop(hit, path.end());
      if (!found.contains(loop)) found.paths.push_back(std::move(loop));
      continue;
    }
    path.push_back(next);
    walk(t, ties, path, found);
    path.pop_back();
  }
}

}  // namespace

PathSet most_likely_paths(const TransitionMatrix& t, TieMode ties) {
  PathSet found;
  for (std::uint32_t i = 0; i < t.size(); ++i) {
    StatePath path{i};
    walk(t, ties, path, found);
  }
  return found;
}

}  // namespace cpg
