#include "cpg/core.hpp"

#include <algorithm>
#include <sstream>

namespace cpg {

std::string_view to_string(Agent a) noexcept {
  return a == Agent::c0 ? "c0" : "c1";
}

Agent parse_agent(std::string_view name) {
  if (name == "c0") return Agent::c0;
  if (name == "c1") return Agent::c1;
  throw ParseError("unknown agent '" + std::string(name) + "'");
}

std::string_view to_string(GameKind k) noexcept {
  return k == GameKind::collaborative ? "collaborative" : "adversarial";
}

GameKind parse_game_kind(std::string_view name) {
  if (name == "collaborative" || name == "collab") return GameKind::collaborative;
  if (name == "adversarial" || name == "adver") return GameKind::adversarial;
  throw ParseError("unknown game kind '" + std::string(name) + "'");
}

// --- EnvState ---------------------------------------------------------------

EnvState::EnvState(std::size_t num_vars) {
  if (num_vars > kMaxVars) throw ValidationError("too many variables");
  n_ = static_cast<std::uint8_t>(num_vars);
}

EnvState::EnvState(std::initializer_list<bool> values)
    : EnvState(std::vector<bool>(values)) {}

EnvState::EnvState(const std::vector<bool>& values) : EnvState(values.size()) {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i]) bits_ |= mask(VarId{static_cast<std::uint8_t>(i)});
}

EnvState EnvState::from_index(std::size_t num_vars, std::uint32_t index) {
  EnvState s(num_vars);
  if (index >= s.num_states())
    throw ValidationError("state index " + std::to_string(index) +
                          " out of range for " + std::to_string(num_vars) +
                          " variables");
  s.bits_ = index;
  return s;
}

std::uint32_t EnvState::mask(VarId v) const {
  if (v.index >= n_)
    throw InvalidMessageError("variable index " + std::to_string(v.index) +
                              " out of range");
  return std::uint32_t{1} << (n_ - 1 - v.index);
}

bool EnvState::get(VarId v) const { return (bits_ & mask(v)) != 0; }

EnvState EnvState::with(VarId v, bool value) const {
  EnvState out = *this;
  if (value)
    out.bits_ |= mask(v);
  else
    out.bits_ &= ~mask(v);
  return out;
}

std::vector<bool> EnvState::values() const {
  std::vector<bool> out(n_);
  for (std::size_t i = 0; i < n_; ++i)
    out[i] = get(VarId{static_cast<std::uint8_t>(i)});
  return out;
}

// --- GameSpec ---------------------------------------------------------------

GameSpec::GameSpec(std::vector<std::string> variables,
                   std::array<std::vector<VarId>, 2> control, GameKind kind,
                   EnvState initial)
    : vars_(std::move(variables)),
      control_(std::move(control)),
      kind_(kind),
      initial_(initial) {
  if (vars_.empty() || vars_.size() > EnvState::kMaxVars)
    throw ValidationError("game must declare between 1 and 16 variables");
  if (initial_.size() != vars_.size())
    throw ValidationError("initial state has " + std::to_string(initial_.size()) +
                          " values, expected " + std::to_string(vars_.size()));
  std::vector<bool> covered(vars_.size(), false);
  for (const auto& set : control_) {
    for (VarId v : set) {
      if (!has_var(v)) throw ValidationError("control set names an undeclared variable");
      covered[v.index] = true;
    }
  }
  if (std::find(covered.begin(), covered.end(), false) != covered.end())
    throw ValidationError("control sets must cover every declared variable");
  if (kind_ == GameKind::adversarial) {
    for (VarId v : control_[0])
      if (std::find(control_[1].begin(), control_[1].end(), v) != control_[1].end())
        throw ValidationError("adversarial control sets must be disjoint (variable '" +
                              vars_[v.index] + "')");
  }
}

GameSpec GameSpec::collaborative() {
  std::vector<VarId> both = {VarId{0}, VarId{1}};
  return GameSpec({"a", "b"}, {both, both}, GameKind::collaborative,
                  EnvState{false, false});
}

GameSpec GameSpec::adversarial() {
  return GameSpec({"a", "b", "c"}, {std::vector<VarId>{VarId{0}, VarId{2}},
                                    std::vector<VarId>{VarId{1}}},
                  GameKind::adversarial, EnvState{false, false, false});
}

GameSpec GameSpec::for_kind(GameKind kind) {
  return kind == GameKind::collaborative ? collaborative() : adversarial();
}

bool GameSpec::controls(Agent a, VarId v) const {
  const auto& set = control(a);
  return std::find(set.begin(), set.end(), v) != set.end();
}

VarId GameSpec::var(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) return VarId{static_cast<std::uint8_t>(i)};
  throw InvalidMessageError("unknown variable '" + std::string(name) + "'");
}

const std::string& GameSpec::var_name(VarId v) const {
  if (!has_var(v)) throw InvalidMessageError("unknown variable index");
  return vars_[v.index];
}

EnvState GameSpec::state(std::initializer_list<bool> values) const {
  EnvState s(values);
  if (s.size() != num_vars()) throw ValidationError("state arity mismatch");
  return s;
}

std::string GameSpec::label(const EnvState& s) const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (!s.get(VarId{static_cast<std::uint8_t>(i)})) os << "¬";
    os << vars_[i];
  }
  os << '}';
  return os.str();
}

// --- update functions -------------------------------------------------------

namespace {

void check_state(const GameSpec& game, const EnvState& state) {
  if (state.size() != game.num_vars())
    throw ValidationError("state arity does not match the game");
}

void check_var(const GameSpec& game, const ActionMsg& msg) {
  if (!game.has_var(msg.var))
    throw InvalidMessageError("message from " + std::string(to_string(msg.agent)) +
                              " writes an unknown variable");
}

void check_control(const GameSpec& game, const ActionMsg& msg) {
  if (!game.controls(msg.agent, msg.var))
    throw ControlViolationError(std::string(to_string(msg.agent)) +
                                " does not control variable '" +
                                game.var_name(msg.var) + "'");
}

}  // namespace

EnvState apply_collab(const GameSpec& game, const EnvState& state,
                      const ActionMsg& msg) {
  check_state(game, state);
  check_var(game, msg);
  return state.with(msg.var, msg.value);
}

EnvState apply_adver(const GameSpec& game, const EnvState& state,
                     const ActionMsg& msg) {
  check_state(game, state);
  check_var(game, msg);
  check_control(game, msg);
  return state.with(msg.var, msg.value);
}

EnvState apply(const GameSpec& game, const EnvState& state, const ActionMsg& msg) {
  return game.kind() == GameKind::collaborative ? apply_collab(game, state, msg)
                                                : apply_adver(game, state, msg);
}

EnvState apply_simultaneous(const GameSpec& game, const EnvState& state,
                            const ActionMsg& m0, const ActionMsg& m1) {
  check_state(game, state);
  check_var(game, m0);
  check_var(game, m1);
  if (m0.agent == m1.agent)
    throw WriteConflictError("simultaneous messages must come from distinct agents");
  if (m0.var == m1.var)
    throw WriteConflictError("simultaneous messages both target variable '" +
                             game.var_name(m0.var) + "'");
  if (game.kind() == GameKind::adversarial) {
    check_control(game, m0);
    check_control(game, m1);
  }
  return state.with(m0.var, m0.value).with(m1.var, m1.value);
}

}  // namespace cpg
