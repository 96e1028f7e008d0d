#include "cpg/strategies.hpp"

#include <algorithm>

namespace cpg {

std::string to_string(AgentMode m) {
  return std::string(m.social ? "social" : "unsocial") + "-" +
         (m.realistic ? "realistic" : "optimistic");
}

AgentMode parse_mode(std::string_view name) {
  for (const auto& m : kAllModes)
    if (to_string(m) == name) return m;
  throw ParseError("unknown agent mode '" + std::string(name) +
                   "' (expected e.g. unsocial-optimistic)");
}

std::string to_string(const ModePair& m) {
  if (m.c0 == m.c1) return to_string(m.c0);
  return to_string(m.c0) + "/" + to_string(m.c1);
}

// --- collaborative -------------------------------------------------------------

namespace {

constexpr VarId kA{0}, kB{1}, kC{2};

ScriptEntry write(Agent who, VarId v, bool value, std::optional<int> slot = std::nullopt) {
  return {ActionMsg{who, v, value}, slot};
}

ScriptEntry sense(Agent who, VarId v, bool expected, OnFail on_fail,
                  std::size_t max_wait = kDefaultPollCap,
                  std::optional<int> slot = std::nullopt) {
  return {SenseStep{who, v, expected, on_fail, max_wait}, slot};
}

}  // namespace

std::vector<ActionMsg> CollabScripts::combined_writes() const {
  auto out = writes_of(c0);
  const auto more = writes_of(c1);
  out.insert(out.end(), more.begin(), more.end());
  return out;
}

CollabScripts collab_scripts(const ModePair& modes, std::size_t poll_cap) {
  if (modes.c0 != modes.c1)
    throw ValidationError("collaborative strategies are defined for matching mode pairs only");
  constexpr Agent c0 = Agent::c0, c1 = Agent::c1;
  const AgentMode m = modes.c0;
  if (m == AgentMode::unsocial_optimistic)
    return {{write(c0, kA, true), write(c0, kB, true)},
            {write(c1, kB, true), write(c1, kA, true)}};
  if (m == AgentMode::unsocial_realistic)
    return {{write(c0, kA, true), write(c0, kB, true)},
            {write(c1, kB, true), sense(c1, kB, true, OnFail::abort), write(c1, kA, true)}};
  if (m == AgentMode::social_optimistic)
    return {{write(c0, kB, true, 0), write(c0, kA, true, 2)},
            {write(c1, kB, false, 1), write(c1, kB, true, 3)}};
  // social-realistic: c0 polls for c1's reset of b before finishing.
  return {{write(c0, kB, true, 0), sense(c0, kB, false, OnFail::wait, poll_cap, 3),
           write(c0, kA, true, 4), write(c0, kB, true, 5)},
          {sense(c1, kB, true, OnFail::wait, poll_cap, 1), write(c1, kB, false, 2)}};
}

std::vector<ActionMsg> nominal_schedule(const CollabScripts& scripts) {
  std::vector<std::pair<int, ActionMsg>> slotted;
  for (const Script* s : {&scripts.c0, &scripts.c1}) {
    int fallback = 0;
    for (const auto& e : *s) {
      const int slot = e.slot.value_or(fallback);
      fallback = slot + 1;
      if (const auto* m = std::get_if<ActionMsg>(&e.step)) slotted.emplace_back(slot, *m);
    }
  }
  std::stable_sort(slotted.begin(), slotted.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<ActionMsg> out;
  for (auto& [slot, m] : slotted) out.push_back(m);
  return out;
}

// --- adversarial ---------------------------------------------------------------

AdverPolicy::AdverPolicy(Agent agent, std::array<Entry, kStates> entries)
    : agent_(agent), entries_(std::move(entries)) {
  for (const auto& entry : entries_)
    for (const auto& e : entry)
      if (owner(e.step) != agent_)
        throw ValidationError("policy entry owned by the wrong agent");
}

const AdverPolicy::Entry& AdverPolicy::at(const EnvState& s) const {
  if (s.size() != 3) throw ValidationError("adversarial policies are indexed by 3-variable states");
  return entries_[s.index()];
}

std::optional<ActionMsg> AdverPolicy::head_action(std::uint32_t index) const {
  for (const auto& e : entries_.at(index))
    if (const auto* m = std::get_if<ActionMsg>(&e.step)) return *m;
  return std::nullopt;
}

void AdverPolicy::validate(const GameSpec& game) const {
  for (const auto& entry : entries_)
    for (const auto& e : entry)
      if (const auto* m = std::get_if<ActionMsg>(&e.step); m && !game.controls(m->agent, m->var))
        throw ControlViolationError(std::string(to_string(m->agent)) +
                                    " policy writes uncontrolled variable '" +
                                    game.var_name(m->var) + "'");
}

namespace {

using Entry = AdverPolicy::Entry;

Entry act(Agent who, VarId v, bool value, bool probe) {
  Entry e{write(who, v, value)};
  if (probe) e.push_back(sense(who, v, value, OnFail::wait));
  return e;
}

// Optimistic and realistic unsocial agents share the table; realistic ones
// probe each write.
AdverPolicy unsocial_c0(bool probe) {
  constexpr Agent c0 = Agent::c0;
  return AdverPolicy(c0, {act(c0, kC, true, probe), act(c0, kA, true, probe),
                          act(c0, kC, true, probe), act(c0, kA, true, probe),
                          act(c0, kC, true, probe), act(c0, kC, false, probe),
                          act(c0, kC, true, probe), act(c0, kA, false, probe)});
}

AdverPolicy unsocial_c1(bool probe) {
  constexpr Agent c1 = Agent::c1;
  const Entry set = act(c1, kB, true, probe), clear = act(c1, kB, false, probe);
  // {⊥,⊥,*} -> b←⊤, {⊥,⊤,*} -> b←⊥, {⊤,*,*} -> b←⊤
  return AdverPolicy(c1, {set, set, clear, clear, set, set, set, set});
}

AdverPolicy social_optimistic_c0() {
  constexpr Agent c0 = Agent::c0;
  return AdverPolicy(c0, {Entry{}, act(c0, kC, false, false), act(c0, kC, true, false),
                          act(c0, kA, true, false), act(c0, kA, false, false),
                          act(c0, kC, false, false), act(c0, kA, false, false),
                          act(c0, kC, false, false)});
}

AdverPolicy social_optimistic_c1() {
  constexpr Agent c1 = Agent::c1;
  const Entry set = act(c1, kB, true, false), clear = act(c1, kB, false, false);
  return AdverPolicy(c1, {set, set, clear, Entry{}, set, set, Entry{}, clear});
}

AdverPolicy social_realistic_c0() {
  constexpr Agent c0 = Agent::c0;
  return AdverPolicy(c0, {act(c0, kC, true, false), act(c0, kA, true, false),
                          act(c0, kA, true, false), act(c0, kC, false, false),
                          act(c0, kA, false, false), act(c0, kC, false, false),
                          act(c0, kC, true, false), act(c0, kA, false, false)});
}

AdverPolicy social_realistic_c1() {
  constexpr Agent c1 = Agent::c1;
  const Entry set = act(c1, kB, true, false), clear = act(c1, kB, false, false);
  return AdverPolicy(c1, {set, set, clear, clear, set, set, Entry{}, Entry{}});
}

}  // namespace

AdverPolicy adver_policy(Agent agent, const ModePair& modes) {
  const AgentMode m = modes[agent];
  const bool c0 = agent == Agent::c0;
  if (!m.social) return c0 ? unsocial_c0(m.realistic) : unsocial_c1(m.realistic);
  if (!m.realistic) return c0 ? social_optimistic_c0() : social_optimistic_c1();
  return c0 ? social_realistic_c0() : social_realistic_c1();
}

PolicyPair adver_policies(const ModePair& modes) {
  return {adver_policy(Agent::c0, modes), adver_policy(Agent::c1, modes)};
}

Decision decide(Agent agent, const AdverPolicy& policy, const EnvState& view) {
  if (policy.agent() != agent) throw ValidationError("policy belongs to the other agent");
  Decision d;
  for (const auto& e : policy.at(view)) {
    if (!d.action) {
      if (const auto* m = std::get_if<ActionMsg>(&e.step)) d.action = *m;
    } else if (const auto* s = std::get_if<SenseStep>(&e.step)) {
      d.gate = *s;
      break;
    }
  }
  return d;
}

BeliefState update_belief(const GameSpec& game, const BeliefState& b,
                          const ActionMsg& own_action) {
  return {apply(game, b.believed, own_action)};
}

}  // namespace cpg
