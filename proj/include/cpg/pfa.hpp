#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "cpg/engine.hpp"
#include "cpg/interleave.hpp"
#include "cpg/strategies.hpp"

namespace cpg {

/// Square next-state probability matrix, row = current state index,
/// column = next state index.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  explicit TransitionMatrix(std::size_t n);
  static TransitionMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return cells_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {cells_.data() + i * n_, n_}; }

  double row_sum(std::size_t i) const;
  bool row_is_zero(std::size_t i) const;

  /// Scales each non-zero row to sum to 1; returns the all-zero rows.
  std::vector<std::size_t> normalize_rows();

  /// Zero diagonal, entries in [0,1], every non-zero row summing to 1 within
  /// `row_tolerance`. All-zero rows are rejected unless `allow_zero_rows`.
  void validate(double row_tolerance, bool allow_zero_rows = false) const;

  friend bool operator==(const TransitionMatrix&, const TransitionMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> cells_;
};

inline constexpr double kStochasticTolerance = 1e-9;
// Published matrices are rounded to three decimals.
inline constexpr double kFixtureTolerance = 2e-3;

struct MatrixBuild {
  TransitionMatrix matrix;
  std::vector<std::size_t> unreachable_rows;  // zero total weight, left all-zero
};

/// Constructive transition matrix for a pair of adversarial policies. For
/// every source state the head actions of both policies are interpreted under
/// each order: simultaneous contributes one leg, each sequential order two
/// legs (the second accumulated into the intermediate state's row), all
/// weighted by that order's probability. Idle legs are dropped and every row
/// normalized.
MatrixBuild build_matrix(const PolicyPair& policies, const OrderingProbs& probs);

enum class FixtureConfig : std::uint8_t {
  unsocial_optimistic,
  unsocial_realistic,
  social_optimistic,
  social_realistic,
};

std::string_view to_string(FixtureConfig c) noexcept;
FixtureConfig fixture_for(AgentMode m);

/// Published 8x8 matrices for p = (0.25, 0.25, 0.5), verbatim. The unsocial
/// realistic matrix is the unsocial optimistic one.
TransitionMatrix fixture_matrix(FixtureConfig config);

struct CellDelta {
  std::size_t row = 0;
  std::size_t col = 0;
  double built = 0.0;
  double fixture = 0.0;
  double delta() const noexcept { return built - fixture; }
};

/// Cells where |built - fixture| exceeds `tolerance`.
std::vector<CellDelta> cell_diff(const TransitionMatrix& built, const TransitionMatrix& fixture,
                                 double tolerance = 1e-3);

enum class TieMode : std::uint8_t { lowest_index, expand };

struct PathSet {
  std::vector<StatePath> paths;  // insertion order; no two rotation-equivalent
  bool contains(const StatePath& p) const;  // up to rotation
};

bool rotation_equivalent(const StatePath& x, const StatePath& y);
StatePath canonical_rotation(StatePath p);

inline constexpr double kTieTolerance = 1e-12;

/// From every start row, follow the per-row most probable successor until a
/// state repeats, drop the non-loop prefix, and collect the distinct cycles.
/// Throws DegenerateRowError on an all-zero row met during a walk.
PathSet most_likely_paths(const TransitionMatrix& t, TieMode ties = TieMode::lowest_index);

}  // namespace cpg
