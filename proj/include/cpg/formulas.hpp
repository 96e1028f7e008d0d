#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cpg/core.hpp"

namespace cpg {

enum class Connector : std::uint8_t { none, next, finally };

struct TemplateStep {
  EnvState target;
  Connector to_next = Connector::none;  // none only on the last step
  friend bool operator==(const TemplateStep&, const TemplateStep&) = default;
};

using TemplateBranch = std::vector<TemplateStep>;

/// Disjunction of state chains linked by X (next tick) or F (some strictly
/// later tick) connectors.
struct SequenceTemplate {
  std::vector<TemplateBranch> branches;

  void validate(const GameSpec& game) const;
  friend bool operator==(const SequenceTemplate&, const SequenceTemplate&) = default;
};

struct FormulaPair {
  SequenceTemplate phi;  // goal of c0
  SequenceTemplate psi;  // goal of c1
};

FormulaPair fixture_formulas(GameKind kind);

/// Smallest end index of a match of `branch` anchored at `start`, or nullopt.
/// Finally takes the earliest later occurrence of its target and does not
/// backtrack.
std::optional<std::size_t> match_from(std::span<const EnvState> trace,
                                      const TemplateBranch& branch, std::size_t start);

struct SatisfactionCount {
  std::size_t count = 0;
  std::vector<std::size_t> ends;
};

/// Greedy left-to-right, non-overlapping. At each index the branch that
/// completes earliest wins, ties going to the earlier-declared branch.
SatisfactionCount count_satisfactions(std::span<const EnvState> trace,
                                      const SequenceTemplate& f);

/// cumulative[k] = number of counted matches ending at or before index k.
std::vector<std::size_t> cumulative_counts(const SatisfactionCount& c,
                                           std::size_t trace_length);

}  // namespace cpg
