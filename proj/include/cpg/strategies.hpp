#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cpg/core.hpp"
#include "cpg/interleave.hpp"

namespace cpg {

struct AgentMode {
  bool social = false;
  bool realistic = false;

  static const AgentMode unsocial_optimistic;
  static const AgentMode unsocial_realistic;
  static const AgentMode social_optimistic;
  static const AgentMode social_realistic;

  // Optimistic unsocial agents plan against their own belief, never the
  // sensed environment.
  bool uses_belief() const noexcept { return !social && !realistic; }

  friend bool operator==(const AgentMode&, const AgentMode&) = default;
};

inline constexpr AgentMode AgentMode::unsocial_optimistic{false, false};
inline constexpr AgentMode AgentMode::unsocial_realistic{false, true};
inline constexpr AgentMode AgentMode::social_optimistic{true, false};
inline constexpr AgentMode AgentMode::social_realistic{true, true};

inline constexpr std::array<AgentMode, 4> kAllModes = {
    AgentMode::unsocial_optimistic, AgentMode::unsocial_realistic,
    AgentMode::social_optimistic, AgentMode::social_realistic};

/// "unsocial-optimistic", "social-realistic", ...
std::string to_string(AgentMode m);
AgentMode parse_mode(std::string_view name);

struct ModePair {
  AgentMode c0;
  AgentMode c1;

  static constexpr ModePair same(AgentMode m) noexcept { return {m, m}; }
  const AgentMode& operator[](Agent a) const noexcept { return a == Agent::c0 ? c0 : c1; }
  friend bool operator==(const ModePair&, const ModePair&) = default;
};

std::string to_string(const ModePair& m);

// --- collaborative scripts ---------------------------------------------------

struct CollabScripts {
  Script c0;
  Script c1;

  const Script& operator[](Agent a) const noexcept { return a == Agent::c0 ? c0 : c1; }
  ScriptQueue queue() const { return ScriptQueue(c0, c1); }
  bool has_senses() const { return queue().has_senses(); }
  std::vector<ActionMsg> combined_writes() const;
};

/// Default poll budget for the social-realistic wait on b = ⊥.
inline constexpr std::size_t kDefaultPollCap = 16;

/// One iteration of the collaborative strategy for a mode row. Both agents
/// must share the mode.
CollabScripts collab_scripts(const ModePair& modes, std::size_t poll_cap = kDefaultPollCap);

/// The synchronized social schedule: all writes of both scripts ordered by slot.
std::vector<ActionMsg> nominal_schedule(const CollabScripts& scripts);

// --- adversarial policies ----------------------------------------------------

/// Decision table over all 8 adversarial states: each entry is zero or more
/// writes, optionally followed by a probe on the write's effect.
class AdverPolicy {
 public:
  static constexpr std::size_t kStates = 8;
  using Entry = std::vector<ScriptEntry>;

  AdverPolicy(Agent agent, std::array<Entry, kStates> entries);

  Agent agent() const noexcept { return agent_; }
  const Entry& at(const EnvState& s) const;
  const Entry& at(std::uint32_t index) const { return entries_.at(index); }
  std::optional<ActionMsg> head_action(std::uint32_t index) const;

  /// Throws ControlViolationError for any write outside the agent's control.
  void validate(const GameSpec& game) const;

  friend bool operator==(const AdverPolicy&, const AdverPolicy&) = default;

 private:
  Agent agent_;
  std::array<Entry, kStates> entries_;
};

AdverPolicy adver_policy(Agent agent, const ModePair& modes);

struct PolicyPair {
  AdverPolicy c0;
  AdverPolicy c1;
  const AdverPolicy& operator[](Agent a) const noexcept { return a == Agent::c0 ? c0 : c1; }
};

PolicyPair adver_policies(const ModePair& modes);

struct Decision {
  std::optional<ActionMsg> action;
  std::optional<SenseStep> gate;  // probe to check before the next action
};

Decision decide(Agent agent, const AdverPolicy& policy, const EnvState& view);

struct BeliefState {
  EnvState believed;
  friend bool operator==(const BeliefState&, const BeliefState&) = default;
};

BeliefState update_belief(const GameSpec& game, const BeliefState& b,
                          const ActionMsg& own_action);

}  // namespace cpg
