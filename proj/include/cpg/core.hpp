#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cpg/error.hpp"

namespace cpg {

enum class Agent : std::uint8_t { c0 = 0, c1 = 1 };

inline constexpr std::array<Agent, 2> kAgents = {Agent::c0, Agent::c1};

constexpr std::size_t agent_slot(Agent a) noexcept {
  return static_cast<std::size_t>(a);
}
std::string_view to_string(Agent a) noexcept;
Agent parse_agent(std::string_view name);

enum class GameKind : std::uint8_t { collaborative, adversarial };

std::string_view to_string(GameKind k) noexcept;
GameKind parse_game_kind(std::string_view name);

/// Position of a variable in its game's declaration list.
struct VarId {
  std::uint8_t index = 0;
  friend constexpr bool operator==(VarId, VarId) = default;
};

/// Truth assignment over the declared variables. The first declared
/// variable is the most significant bit of index().
class EnvState {
 public:
  static constexpr std::size_t kMaxVars = 16;

  EnvState() = default;
  explicit EnvState(std::size_t num_vars);
  EnvState(std::initializer_list<bool> values);
  explicit EnvState(const std::vector<bool>& values);

  static EnvState from_index(std::size_t num_vars, std::uint32_t index);

  std::size_t size() const noexcept { return n_; }
  std::uint32_t index() const noexcept { return bits_; }
  std::size_t num_states() const noexcept { return std::size_t{1} << n_; }

  bool get(VarId v) const;
  EnvState with(VarId v, bool value) const;
  std::vector<bool> values() const;

  friend bool operator==(const EnvState&, const EnvState&) = default;

 private:
  std::uint32_t mask(VarId v) const;

  std::uint32_t bits_ = 0;
  std::uint8_t n_ = 0;
};

/// Canonical integer index of a state; bijective with index_to_state.
inline std::uint32_t state_index(const EnvState& s) noexcept { return s.index(); }
inline EnvState index_to_state(std::size_t num_vars, std::uint32_t index) {
  return EnvState::from_index(num_vars, index);
}

struct ActionMsg {
  Agent agent = Agent::c0;
  VarId var;
  bool value = false;
  friend bool operator==(const ActionMsg&, const ActionMsg&) = default;
};

enum class OnFail : std::uint8_t { abort, wait };

struct SenseStep {
  Agent agent = Agent::c0;
  VarId var;
  bool expected = false;
  OnFail on_fail = OnFail::abort;
  // Only meaningful for OnFail::wait: environment ticks the agent may stay
  // blocked before the step is treated as an abort.
  std::size_t max_wait = 16;

  bool holds(const EnvState& s) const { return s.get(var) == expected; }
  friend bool operator==(const SenseStep&, const SenseStep&) = default;
};

/// The rules of one game: variables, who may write what, and the initial state.
class GameSpec {
 public:
  GameSpec(std::vector<std::string> variables,
           std::array<std::vector<VarId>, 2> control, GameKind kind,
           EnvState initial);

  /// Two agents, variables {a,b}, both may write both.
  static GameSpec collaborative();
  /// Two agents, variables {a,b,c}; c0 controls {a,c}, c1 controls {b}.
  static GameSpec adversarial();
  static GameSpec for_kind(GameKind kind);

  const std::vector<std::string>& variables() const noexcept { return vars_; }
  std::size_t num_vars() const noexcept { return vars_.size(); }
  std::size_t num_states() const noexcept { return std::size_t{1} << vars_.size(); }
  GameKind kind() const noexcept { return kind_; }
  const EnvState& initial() const noexcept { return initial_; }
  const std::vector<VarId>& control(Agent a) const { return control_[agent_slot(a)]; }

  bool controls(Agent a, VarId v) const;
  bool has_var(VarId v) const noexcept { return v.index < vars_.size(); }
  VarId var(std::string_view name) const;
  const std::string& var_name(VarId v) const;

  EnvState state(std::initializer_list<bool> values) const;
  EnvState state_from_index(std::uint32_t index) const {
    return EnvState::from_index(num_vars(), index);
  }

  /// Renders a state as e.g. "{¬ab¬c}".
  std::string label(const EnvState& s) const;

  friend bool operator==(const GameSpec&, const GameSpec&) = default;

 private:
  std::vector<std::string> vars_;
  std::array<std::vector<VarId>, 2> control_;
  GameKind kind_;
  EnvState initial_;
};

// Collaborative update: exactly one variable written per call.
EnvState apply_collab(const GameSpec& game, const EnvState& state,
                      const ActionMsg& msg);

// Adversarial update: as apply_collab, but the writer must control the
// variable.
EnvState apply_adver(const GameSpec& game, const EnvState& state,
                     const ActionMsg& msg);

// Dispatches on game.kind().
EnvState apply(const GameSpec& game, const EnvState& state, const ActionMsg& msg);

/// Both writes applied as one composite transition. The messages must come
/// from distinct agents and target distinct variables.
EnvState apply_simultaneous(const GameSpec& game, const EnvState& state,
                            const ActionMsg& m0, const ActionMsg& m1);

}  // namespace cpg
