#include "cpg/io.hpp"

#include <charconv>
#include <initializer_list>
#include <iomanip>
#include <locale>
#include <sstream>

namespace cpg {

#ifndef CPG_VERSION
#define CPG_VERSION "0.0.0"
#endif

std::string_view version() noexcept { return CPG_VERSION; }

namespace {

void require_object(const Json& j, std::string_view what) {
  if (!j.is_object()) throw ParseError(std::string(what) + " must be a JSON object");
}

void reject_unknown(const Json& j, std::string_view what,
                    std::initializer_list<std::string_view> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (auto a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ParseError("unknown key '" + it.key() + "' in " + std::string(what));
  }
}

template <typename T>
T get_as(const Json& j, std::string_view key, std::string_view what) {
  try {
    return j.at(std::string(key)).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError("field '" + std::string(key) + "' in " + std::string(what) +
                     " is missing or has the wrong type");
  }
}

std::size_t get_count(const Json& j, std::string_view key, std::string_view what) {
  const Json& v = j.at(std::string(key));
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    throw ParseError("field '" + std::string(key) + "' in " + std::string(what) +
                     " must be a non-negative integer");
  return v.get<std::size_t>();
}

std::string_view to_string(TieMode t) noexcept {
  return t == TieMode::expand ? "expand" : "lowest";
}

TieMode parse_ties(std::string_view s) {
  if (s == "lowest") return TieMode::lowest_index;
  if (s == "expand") return TieMode::expand;
  throw ParseError("ties must be 'lowest' or 'expand', got '" + std::string(s) + "'");
}

Json bools(const EnvState& s) {
  Json out = Json::array();
  for (bool b : s.values()) out.push_back(b);
  return out;
}

EnvState state_from_json(const Json& j, const GameSpec& game, std::string_view what) {
  if (!j.is_array() || j.size() != game.num_vars())
    throw ParseError(std::string(what) + " must be an array of " +
                     std::to_string(game.num_vars()) + " booleans");
  std::vector<bool> v;
  for (const auto& b : j) {
    if (!b.is_boolean()) throw ParseError(std::string(what) + " must contain booleans only");
    v.push_back(b.get<bool>());
  }
  return EnvState(v);
}

VarId var_from_json(const Json& j, const GameSpec& game) {
  if (!j.is_string()) throw ParseError("variable names must be strings");
  try {
    return game.var(j.get<std::string>());
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

}  // namespace

// --- config ----------------------------------------------------------------------------

void ExperimentConfig::validate_for_run() const {
  const bool adversarial = game == GameKind::adversarial;
  if (adversarial && !probs) throw ValidationError("adversarial runs need ordering probabilities");
  if (!adversarial && probs)
    throw ValidationError("ordering probabilities apply to adversarial runs only");
  if (probs) probs->validate();
  if (adversarial && ticks == 0) throw ValidationError("ticks must be at least 1");
  if (!adversarial && iterations == 0) throw ValidationError("iterations must be at least 1");
  if (!seed) throw ValidationError("no seed given (config, --seed or CPG_SEED)");
  if (replications == 0) throw ValidationError("replications must be at least 1");
  if (!adversarial) (void)collab_scripts(modes, poll_cap);
}

ExperimentConfig config_from_json(const Json& j) {
  require_object(j, "config");
  reject_unknown(j, "config", {"game", "modes", "probs", "iterations", "ticks", "seed",
                               "poll_cap", "replications", "ties", "latency"});
  ExperimentConfig c;
  try {
    if (j.contains("game")) c.game = parse_game_kind(get_as<std::string>(j, "game", "config"));
    if (j.contains("modes")) c.modes = modes_from_json(j["modes"]);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  if (j.contains("probs")) c.probs = probs_from_json(j["probs"]);
  if (j.contains("iterations")) c.iterations = get_count(j, "iterations", "config");
  if (j.contains("ticks")) c.ticks = get_count(j, "ticks", "config");
  if (j.contains("seed")) {
    const Json& s = j["seed"];
    if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<std::int64_t>() < 0))
      throw ParseError("seed must be a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (j.contains("poll_cap")) c.poll_cap = get_count(j, "poll_cap", "config");
  if (j.contains("replications")) c.replications = get_count(j, "replications", "config");
  if (j.contains("ties")) c.ties = parse_ties(get_as<std::string>(j, "ties", "config"));
  if (j.contains("latency")) {
    require_object(j["latency"], "latency");
    reject_unknown(j["latency"], "latency", {"l", "l0", "w_mean", "w_variance"});
    c.latency = j["latency"];
  }
  return c;
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  j["game"] = std::string(to_string(c.game));
  j["modes"] = to_json(c.modes);
  if (c.probs) j["probs"] = to_json(*c.probs);
  if (c.game == GameKind::collaborative)
    j["iterations"] = c.iterations;
  else
    j["ticks"] = c.ticks;
  if (c.seed) j["seed"] = *c.seed;
  j["poll_cap"] = c.poll_cap;
  j["replications"] = c.replications;
  j["ties"] = std::string(to_string(c.ties));
  if (!c.latency.empty()) j["latency"] = c.latency;
  return j;
}

std::string provenance_line(const Json& config) {
  return "# cpg " + std::string(version()) + " config=" + config.dump() + "\n";
}

// --- game, modes, probs -------------------------------------------------------------------

Json to_json(const GameSpec& g) {
  Json control;
  for (Agent a : kAgents) {
    Json vars = Json::array();
    for (VarId v : g.control(a)) vars.push_back(g.var_name(v));
    control[std::string(to_string(a))] = vars;
  }
  Json j;
  j["variables"] = g.variables();
  j["control"] = control;
  j["update"] = std::string(to_string(g.kind()));
  j["initial"] = bools(g.initial());
  return j;
}

GameSpec game_from_json(const Json& j) {
  require_object(j, "game");
  reject_unknown(j, "game", {"variables", "control", "update", "initial"});
  const auto vars = get_as<std::vector<std::string>>(j, "variables", "game");
  const Json& control = j.at("control");
  require_object(control, "control");
  reject_unknown(control, "control", {"c0", "c1"});
  try {
    std::array<std::vector<VarId>, 2> sets;
    for (Agent a : kAgents) {
      const auto names = get_as<std::vector<std::string>>(control, to_string(a), "control");
      for (const auto& n : names) {
        auto it = std::find(vars.begin(), vars.end(), n);
        if (it == vars.end()) throw ParseError("control names undeclared variable '" + n + "'");
        sets[agent_slot(a)].push_back(VarId{static_cast<std::uint8_t>(it - vars.begin())});
      }
    }
    const GameKind kind = parse_game_kind(get_as<std::string>(j, "update", "game"));
    const auto init = get_as<std::vector<bool>>(j, "initial", "game");
    return GameSpec(vars, sets, kind, EnvState(init));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("invalid game: ") + e.what());
  }
}

Json to_json(const ModePair& m) {
  return Json{{"c0", to_string(m.c0)}, {"c1", to_string(m.c1)}};
}

ModePair modes_from_json(const Json& j) {
  if (j.is_string()) return ModePair::same(parse_mode(j.get<std::string>()));
  require_object(j, "modes");
  reject_unknown(j, "modes", {"c0", "c1"});
  return {parse_mode(get_as<std::string>(j, "c0", "modes")),
          parse_mode(get_as<std::string>(j, "c1", "modes"))};
}

Json to_json(const OrderingProbs& p) {
  return Json{{"c0_first", p.p_c0_first}, {"c1_first", p.p_c1_first}, {"simultaneous", p.p_sim}};
}

OrderingProbs probs_from_json(const Json& j) {
  require_object(j, "probs");
  reject_unknown(j, "probs", {"c0_first", "c1_first", "simultaneous"});
  OrderingProbs p;
  p.p_c0_first = get_as<double>(j, "c0_first", "probs");
  p.p_c1_first = get_as<double>(j, "c1_first", "probs");
  p.p_sim = get_as<double>(j, "simultaneous", "probs");
  return p;
}

// --- templates, scripts, policies -----------------------------------------------------------

Json to_json(const SequenceTemplate& t) {
  Json branches = Json::array();
  for (const auto& branch : t.branches) {
    Json steps = Json::array();
    for (const auto& step : branch) {
      Json s;
      s["state"] = bools(step.target);
      if (step.to_next == Connector::next) s["next"] = "X";
      if (step.to_next == Connector::finally) s["next"] = "F";
      steps.push_back(s);
    }
    branches.push_back(steps);
  }
  return Json{{"branches", branches}};
}

SequenceTemplate template_from_json(const Json& j, const GameSpec& game) {
  const Json& branches = j.is_object() ? j.at("branches") : j;
  if (!branches.is_array()) throw ParseError("template branches must be an array");
  SequenceTemplate t;
  for (const auto& b : branches) {
    if (!b.is_array()) throw ParseError("template branch must be an array of steps");
    TemplateBranch branch;
    for (const auto& s : b) {
      require_object(s, "template step");
      reject_unknown(s, "template step", {"state", "next"});
      TemplateStep step{state_from_json(s.at("state"), game, "template state"), Connector::none};
      if (s.contains("next")) {
        const auto c = get_as<std::string>(s, "next", "template step");
        if (c == "X")
          step.to_next = Connector::next;
        else if (c == "F")
          step.to_next = Connector::finally;
        else
          throw ParseError("connector must be \"X\" or \"F\", got \"" + c + "\"");
      }
      branch.push_back(step);
    }
    t.branches.push_back(std::move(branch));
  }
  try {
    t.validate(game);
  } catch (const Error& e) {
    throw ParseError(std::string("invalid template: ") + e.what());
  }
  return t;
}

Json to_json(const ScriptStep& step, const GameSpec& game) {
  Json j;
  if (const auto* m = std::get_if<ActionMsg>(&step)) {
    j["agent"] = std::string(to_string(m->agent));
    j["write"] = game.var_name(m->var);
    j["value"] = m->value;
  } else {
    const auto& s = std::get<SenseStep>(step);
    j["agent"] = std::string(to_string(s.agent));
    j["sense"] = game.var_name(s.var);
    j["expected"] = s.expected;
    j["on_fail"] = s.on_fail == OnFail::abort ? "abort" : "wait";
    j["max_wait"] = s.max_wait;
  }
  return j;
}

ScriptStep step_from_json(const Json& j, const GameSpec& game) {
  require_object(j, "script step");
  const Agent agent = parse_agent(get_as<std::string>(j, "agent", "script step"));
  if (j.contains("write")) {
    reject_unknown(j, "write step", {"agent", "write", "value", "slot"});
    return ActionMsg{agent, var_from_json(j["write"], game), get_as<bool>(j, "value", "write step")};
  }
  if (j.contains("sense")) {
    reject_unknown(j, "sense step",
                   {"agent", "sense", "expected", "on_fail", "max_wait", "slot"});
    SenseStep s{agent, var_from_json(j["sense"], game), get_as<bool>(j, "expected", "sense step"),
                OnFail::abort, kDefaultPollCap};
    const auto on_fail = get_as<std::string>(j, "on_fail", "sense step");
    if (on_fail == "wait")
      s.on_fail = OnFail::wait;
    else if (on_fail != "abort")
      throw ParseError("on_fail must be 'abort' or 'wait'");
    if (j.contains("max_wait")) s.max_wait = get_count(j, "max_wait", "sense step");
    return s;
  }
  throw ParseError("script step needs a 'write' or 'sense' field");
}

namespace {

Json script_json(const Script& script, const GameSpec& game) {
  Json out = Json::array();
  for (const auto& e : script) {
    Json step = to_json(e.step, game);
    if (e.slot) step["slot"] = *e.slot;
    out.push_back(step);
  }
  return out;
}

}  // namespace

Json to_json(const CollabScripts& s, const GameSpec& game) {
  return Json{{"c0", script_json(s.c0, game)}, {"c1", script_json(s.c1, game)}};
}

Json to_json(const AdverPolicy& p, const GameSpec& game) {
  Json entries = Json::array();
  for (std::uint32_t i = 0; i < AdverPolicy::kStates; ++i) {
    Json e;
    e["state"] = i;
    e["label"] = game.label(game.state_from_index(i));
    e["steps"] = script_json(p.at(i), game);
    entries.push_back(e);
  }
  return Json{{"agent", std::string(to_string(p.agent()))}, {"entries", entries}};
}

AdverPolicy policy_from_json(const Json& j, const GameSpec& game) {
  require_object(j, "policy");
  reject_unknown(j, "policy", {"agent", "entries"});
  const Agent agent = parse_agent(get_as<std::string>(j, "agent", "policy"));
  const Json& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != AdverPolicy::kStates)
    throw ParseError("policy needs exactly 8 state entries");
  std::array<AdverPolicy::Entry, AdverPolicy::kStates> table;
  std::array<bool, AdverPolicy::kStates> seen{};
  for (const auto& e : entries) {
    require_object(e, "policy entry");
    reject_unknown(e, "policy entry", {"state", "label", "steps"});
    const std::size_t idx = get_count(e, "state", "policy entry");
    if (idx >= AdverPolicy::kStates || seen[idx])
      throw ParseError("policy entry state " + std::to_string(idx) + " out of range or repeated");
    seen[idx] = true;
    for (const auto& s : e.at("steps")) table[idx].push_back({step_from_json(s, game), std::nullopt});
  }
  try {
    AdverPolicy p(agent, std::move(table));
    p.validate(game);
    return p;
  } catch (const ControlViolationError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("invalid policy: ") + e.what());
  }
}

// --- matrices -----------------------------------------------------------------------------

Json to_json(const TransitionMatrix& t) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto r = t.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return Json{{"size", t.size()}, {"rows", rows}};
}

TransitionMatrix matrix_from_json(const Json& j) {
  const Json* rows = &j;
  if (j.is_object()) {
    reject_unknown(j, "matrix", {"size", "rows", "label"});
    if (!j.contains("rows")) throw ParseError("matrix object needs a 'rows' field");
    rows = &j["rows"];
  }
  if (!rows->is_array() || rows->empty()) throw ParseError("matrix rows must be a non-empty array");
  const std::size_t n = rows->size();
  std::vector<std::vector<double>> cells;
  for (std::size_t i = 0; i < n; ++i) {
    const Json& r = (*rows)[i];
    if (!r.is_array() || r.size() != n)
      throw ParseError("row " + std::to_string(i) + ": expected " + std::to_string(n) +
                       " columns, found " + std::to_string(r.is_array() ? r.size() : 0));
    std::vector<double> row;
    for (std::size_t k = 0; k < n; ++k) {
      if (!r[k].is_number())
        throw ParseError("row " + std::to_string(i) + ", column " + std::to_string(k) +
                         ": not a number");
      row.push_back(r[k].get<double>());
    }
    cells.push_back(std::move(row));
  }
  return TransitionMatrix::from_rows(cells);
}

std::string matrix_to_csv(const TransitionMatrix& t, int decimals) {
  std::string out;
  for (std::size_t j = 0; j < t.size(); ++j) out += (j ? ",c" : "c") + std::to_string(j);
  out += "\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (j) out += ",";
      out += format_decimal(t(i, j), decimals);
    }
    out += "\n";
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return x;
}

}  // namespace

TransitionMatrix parse_matrix_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  bool header_allowed = true;
  for (auto line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split(line, ',');
    std::vector<double> row;
    bool numeric = true;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const auto x = parse_number(cells[k]);
      if (!x) {
        if (header_allowed && rows.empty()) {
          numeric = false;
          break;
        }
        throw ParseError("line " + std::to_string(line_no) + ", row " +
                         std::to_string(rows.size()) + ", column " + std::to_string(k) +
                         ": cannot parse '" + std::string(trim(cells[k])) + "' as a number");
      }
      row.push_back(*x);
    }
    header_allowed = false;
    if (!numeric) continue;  // header row
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("matrix CSV has no data rows");
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].size() != rows.size())
      throw ParseError("row " + std::to_string(i) + ": expected " + std::to_string(rows.size()) +
                       " columns, found " + std::to_string(rows[i].size()));
  return TransitionMatrix::from_rows(rows);
}

TransitionMatrix parse_matrix(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && (text[first] == '[' || text[first] == '{')) {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("malformed matrix JSON: ") + e.what());
    }
    return matrix_from_json(j);
  }
  return parse_matrix_csv(text);
}

Json to_json(const std::vector<CellDelta>& diff) {
  Json out = Json::array();
  for (const auto& d : diff)
    out.push_back(Json{{"row", d.row}, {"col", d.col}, {"built", d.built},
                       {"fixture", d.fixture}, {"delta", d.delta()}});
  return out;
}

Json to_json(const PathSet& paths, const GameSpec* game) {
  Json out = Json::array();
  for (const auto& p : paths.paths) {
    Json e;
    e["states"] = p;
    if (game) {
      Json labels = Json::array();
      for (auto i : p) labels.push_back(game->label(game->state_from_index(i)));
      e["labels"] = labels;
    }
    out.push_back(e);
  }
  return Json{{"paths", out}};
}

// --- reports ----------------------------------------------------------------------------------

Json to_json(const Rational& r) { return Json{{"num", r.numerator()}, {"den", r.denominator()}}; }

Json to_json(const RateBreakdown& r, bool with_leaves) {
  Json j;
  j["modes"] = to_json(r.modes);
  j["phi_only"] = to_json(r.phi_only);
  j["psi_only"] = to_json(r.psi_only);
  j["both"] = to_json(r.both);
  j["neither"] = to_json(r.neither);
  j["phi_rate"] = to_json(r.phi_rate());
  j["psi_rate"] = to_json(r.psi_rate());
  j["avg_length"] = to_json(r.avg_length);
  j["leaf_count"] = r.leaves.size();
  if (with_leaves) {
    Json leaves = Json::array();
    for (const auto& l : r.leaves)
      leaves.push_back(Json{{"states", l.states}, {"probability", to_json(l.probability)},
                            {"phi", l.phi}, {"psi", l.psi}, {"deadlock", l.deadlock}});
    j["leaves"] = leaves;
  }
  return j;
}

Json to_json(const Payoff& p) {
  auto cell = [](const std::optional<double>& x) { return x ? Json(*x) : Json("undefined"); };
  return Json{{"phi_steps", cell(p.phi_steps)}, {"psi_steps", cell(p.psi_steps)}};
}

Json to_json(const ErrataReport& e) {
  Json deltas = Json::array();
  for (const auto& d : e.deltas)
    deltas.push_back(Json{{"quantity", d.quantity}, {"reference", d.reference},
                          {"computed", d.computed}, {"delta", d.computed - d.reference},
                          {"flagged", d.flagged}});
  return Json{{"tag", e.any_flagged() ? "errata-candidate" : "consistent"},
              {"modes", to_json(e.modes)},
              {"threshold_pct", kErrataThresholdPct},
              {"deltas", deltas}};
}

Json to_json(const CollabRunReport& r) {
  Json j;
  j["modes"] = to_json(r.modes);
  j["iterations"] = r.iterations;
  j["seed"] = r.seed;
  j["replication"] = r.replication;
  j["phi_only"] = r.phi_only;
  j["psi_only"] = r.psi_only;
  j["both"] = r.both;
  j["neither"] = r.neither;
  j["phi_rate"] = r.phi_rate();
  j["psi_rate"] = r.psi_rate();
  j["total_ticks"] = r.total_ticks;
  j["avg_length"] = r.avg_length();
  j["deadlocks"] = r.deadlocks;
  j["cap_hits"] = r.cap_hits;
  return j;
}

Json to_json(const AdverRunReport& r) {
  Json j;
  j["modes"] = to_json(r.modes);
  j["probs"] = to_json(r.probs);
  j["agent_ticks"] = r.agent_ticks;
  j["env_ticks"] = r.env_ticks;
  j["seed"] = r.seed;
  j["replication"] = r.replication;
  j["phi_total"] = r.phi_total();
  j["psi_total"] = r.psi_total();
  j["order_counts"] = Json{{"c0_first", r.order_counts[0]},
                           {"c1_first", r.order_counts[1]},
                           {"simultaneous", r.order_counts[2]}};
  j["gate_skips"] = Json{{"c0", r.gate_skips[0]}, {"c1", r.gate_skips[1]}};
  j["belief_divergent_ticks"] =
      Json{{"c0", r.belief_divergent_ticks[0]}, {"c1", r.belief_divergent_ticks[1]}};
  return j;
}

Json to_json(const ComparisonReport& c) {
  const double n = c.iterations ? double(c.iterations) : 1.0;
  Json j;
  j["modes"] = to_json(c.modes);
  j["iterations"] = c.iterations;
  j["predicted_phi_rate"] = c.predicted_phi_rate;
  j["predicted_psi_rate"] = c.predicted_psi_rate;
  j["simulated_phi_rate"] = c.simulated_phi.empty() ? 0.0 : double(c.simulated_phi.back()) / n;
  j["simulated_psi_rate"] = c.simulated_psi.empty() ? 0.0 : double(c.simulated_psi.back()) / n;
  j["phi_mse"] = c.phi_mse;
  j["psi_mse"] = c.psi_mse;
  j["phi_rate_mse"] = c.phi_rate_mse;
  j["psi_rate_mse"] = c.psi_rate_mse;
  return j;
}

// --- CSV ---------------------------------------------------------------------------------------

std::string format_decimal(double x, int decimals) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::fixed << std::setprecision(decimals) << x;
  return os.str();
}

std::string collab_trace_csv(const CollabRun& run, const std::string& provenance) {
  std::ostringstream os;
  os << provenance << "tick,iteration,state_index\n";
  const auto& t = run.trace;
  std::size_t it = 0;
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    while (it + 1 < t.iteration_starts.size() && t.iteration_starts[it + 1] <= k) ++it;
    os << k << ',' << it << ',' << t.states[k].index() << '\n';
  }
  return os.str();
}

std::string collab_iterations_csv(const CollabRunReport& r, const std::string& provenance) {
  std::ostringstream os;
  os << provenance << "iteration,length,phi,psi,phi_cum,psi_cum,deadlock,cap_hits\n";
  for (std::size_t i = 0; i < r.per_iteration.size(); ++i) {
    const auto& s = r.per_iteration[i];
    os << i << ',' << s.length << ',' << int(s.phi) << ',' << int(s.psi) << ',' << r.phi_cum[i]
       << ',' << r.psi_cum[i] << ',' << int(s.deadlock) << ',' << s.cap_hits << '\n';
  }
  return os.str();
}

std::string adver_trace_csv(const AdverRun& run, const std::vector<bool>& in_path,
                            const std::string& provenance) {
  const auto& states = run.trace.states;
  if (!in_path.empty() && in_path.size() != states.size())
    throw ValidationError("path coverage does not match the trace length");
  std::ostringstream os;
  os << provenance << "tick,state_index,phi_cum,psi_cum,in_predicted_path\n";
  for (std::size_t k = 0; k < states.size(); ++k)
    os << k << ',' << states[k].index() << ',' << run.report.phi_cum[k] << ','
       << run.report.psi_cum[k] << ',' << (in_path.empty() ? 0 : int(in_path[k])) << '\n';
  return os.str();
}

std::string comparison_csv(const ComparisonReport& c, const std::string& provenance) {
  std::ostringstream os;
  os << provenance << "iteration,predicted_phi,simulated_phi,predicted_psi,simulated_psi\n";
  for (std::size_t i = 0; i < c.iterations; ++i)
    os << (i + 1) << ',' << format_decimal(c.predicted_phi(i), 6) << ',' << c.simulated_phi[i]
       << ',' << format_decimal(c.predicted_psi(i), 6) << ',' << c.simulated_psi[i] << '\n';
  return os.str();
}

}  // namespace cpg
