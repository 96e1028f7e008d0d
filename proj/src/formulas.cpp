#include "cpg/formulas.hpp"

namespace cpg {

void SequenceTemplate::validate(const GameSpec& game) const {
  if (branches.empty()) throw ValidationError("template has no branches");
  for (const auto& branch : branches) {
    if (branch.size() < 2) throw ValidationError("template branch needs at least two steps");
    for (std::size_t i = 0; i < branch.size(); ++i) {
      if (branch[i].target.size() != game.num_vars())
        throw ValidationError("template state arity does not match the game");
      const bool last = i + 1 == branch.size();
      if (last != (branch[i].to_next == Connector::none))
        throw ValidationError("only the last template step may lack a connector");
    }
  }
}

namespace {

TemplateBranch chain(std::initializer_list<TemplateStep> steps) { return steps; }

}  // namespace

FormulaPair fixture_formulas(GameKind kind) {
  using C = Connector;
  if (kind == GameKind::collaborative) {
    const EnvState nn{false, false}, an{true, false}, nb{false, true}, ab{true, true};
    return {
        SequenceTemplate{{chain({{nn, C::finally}, {an, C::next}, {ab, C::none}})}},
        SequenceTemplate{{chain({{nn, C::next}, {nb, C::finally}, {ab, C::none}})}},
    };
  }
  auto s = [](bool a, bool b, bool c) { return EnvState{a, b, c}; };
  return {
      SequenceTemplate{{
          chain({{s(0, 0, 0), C::next}, {s(0, 0, 1), C::next}, {s(1, 0, 1), C::none}}),
          chain({{s(0, 1, 0), C::next}, {s(0, 1, 1), C::next}, {s(1, 0, 1), C::none}}),
          chain({{s(1, 1, 0), C::next}, {s(1, 1, 1), C::next}, {s(0, 1, 1), C::none}}),
      }},
      SequenceTemplate{{
          chain({{s(0, 1, 0), C::next}, {s(0, 0, 0), C::none}}),
          chain({{s(0, 1, 1), C::next}, {s(0, 0, 1), C::none}}),
      }},
  };
}

std::optional<std::size_t> match_from(std::span<const EnvState> trace,
                                      const TemplateBranch& branch, std::size_t start) {
  if (branch.empty() || start >= trace.size() || trace[start] != branch.front().target)
    return std::nullopt;
  std::size_t pos = start;
  for (std::size_t k = 1; k < branch.size(); ++k) {
    const auto& target = branch[k].target;
    switch (branch[k - 1].to_next) {
      case Connector::next:
        if (pos + 1 >= trace.size() || trace[pos + 1] != target) return std::nullopt;
        ++pos;
        break;
      case Connector::finally: {
        std::size_t j = pos + 1;
        while (j < trace.size() && trace[j] != target) ++j;
        if (j == trace.size()) return std::nullopt;
        pos = j;
        break;
      }
      case Connector::none:
        return std::nullopt;
    }
  }
  return pos;
}

SatisfactionCount count_satisfactions(std::span<const EnvState> trace,
                                      const SequenceTemplate& f) {
  SatisfactionCount out;
  std::size_t i = 0;
  while (i < trace.size()) {
    std::optional<std::size_t> best;
    for (const auto& branch : f.branches) {
      const auto end = match_from(trace, branch, i);
      if (end && (!best || *end < *best)) best = end;
    }
    if (best) {
      ++out.count;
      out.ends.push_back(*best);
      i = *best + 1;
    } else {
      ++i;
    }
  }
  return out;
}

std::vector<std::size_t> cumulative_counts(const SatisfactionCount& c,
                                           std::size_t trace_length) {
  std::vector<std::size_t> cum(trace_length, 0);
  std::size_t next = 0, running = 0;
  for (std::size_t k = 0; k < trace_length; ++k) {
    while (next < c.ends.size() && c.ends[next] == k) {
      ++running;
      ++next;
    }
    cum[k] = running;
  }
  return cum;
}

}  // namespace cpg
