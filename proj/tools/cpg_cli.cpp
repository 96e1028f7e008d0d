// Command-line driver: runs experiments from a JSON config plus flag
// overrides and writes JSON reports and plot-ready CSV files.

#include <charconv>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "cpg/io.hpp"

namespace fs = std::filesystem;
using namespace cpg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

class IoError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

Json envelope(const Json& config, Json result) {
  Json j;
  j["tool"] = "cpg";
  j["version"] = std::string(version());
  j["config"] = config;
  j["result"] = std::move(result);
  return j;
}

void write_json(const fs::path& path, const Json& j) { write_file(path, j.dump(2) + "\n"); }

ModePair parse_modes(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return ModePair::same(parse_mode(s));
  return {parse_mode(s.substr(0, slash)), parse_mode(s.substr(slash + 1))};
}

OrderingProbs parse_probs(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  ss.imbue(std::locale::classic());
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("cannot parse '" + item + "' in --probs");
    }
  }
  if (v.size() != 3) throw ParseError("--probs takes three comma-separated values");
  return OrderingProbs::make(v[0], v[1], v[2]);
}

std::uint64_t parse_seed(const std::string& s, const std::string& source) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ValidationError(source + " must be a non-negative integer, got '" + s + "'");
  return x;
}

// Flag values; empty optionals leave the config file value in place.
struct Overrides {
  std::string config_path;
  std::optional<std::string> modes;
  std::optional<std::string> probs;
  std::optional<std::size_t> iterations;
  std::optional<std::size_t> ticks;
  std::optional<std::string> seed;
  std::optional<std::size_t> poll_cap;
  std::optional<std::size_t> replications;
  std::optional<std::string> ties;
  std::string out_dir = ".";
};

ExperimentConfig resolve(const Overrides& o, GameKind game) {
  ExperimentConfig c;
  if (!o.config_path.empty()) {
    Json j;
    try {
      j = Json::parse(read_file(o.config_path));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("malformed config JSON: " + std::string(e.what()));
    }
    const bool has_game = j.is_object() && j.contains("game");
    c = config_from_json(j);
    if (has_game && c.game != game)
      throw ConfigMismatchError("config is for the " + std::string(to_string(c.game)) +
                                " game but the command runs the " +
                                std::string(to_string(game)) + " game");
  }
  c.game = game;
  if (o.modes) c.modes = parse_modes(*o.modes);
  if (o.probs) c.probs = parse_probs(*o.probs);
  if (game == GameKind::adversarial && !c.probs) c.probs = OrderingProbs{};
  if (o.iterations) c.iterations = *o.iterations;
  if (o.ticks) c.ticks = *o.ticks;
  if (o.poll_cap) c.poll_cap = *o.poll_cap;
  if (o.replications) c.replications = *o.replications;
  if (o.ties) c.ties = *o.ties == "expand" ? TieMode::expand : TieMode::lowest_index;
  if (o.seed) {
    c.seed = parse_seed(*o.seed, "--seed");
  } else if (!c.seed) {
    if (const char* env = std::getenv("CPG_SEED")) c.seed = parse_seed(env, "CPG_SEED");
  }
  return c;
}

fs::path prepare_out_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  return p;
}

std::string suffixed(const std::string& stem, std::size_t rep, std::size_t reps,
                     const std::string& ext) {
  return reps == 1 ? stem + ext : stem + "_r" + std::to_string(rep) + ext;
}

/// Runs `work(r)` for every replication index, in parallel, and returns the
/// results ordered by index.
template <typename Result, typename Work>
std::vector<Result> fan_out(std::size_t reps, Work work) {
  std::vector<std::optional<Result>> slots(reps);
  std::vector<std::exception_ptr> errors(reps);
  std::vector<std::thread> threads;
  threads.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    threads.emplace_back([&, r] {
      try {
        slots[r].emplace(work(r));
      } catch (...) {
        errors[r] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<Result> out;
  out.reserve(reps);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

Json payoff_table(const RateBreakdown& oracle) {
  return Json{
      {"exact", to_json(steps_per_satisfaction(oracle, {PayoffBasis::total, false}))},
      {"whole_percent", to_json(steps_per_satisfaction(oracle, {PayoffBasis::total, true}))},
      {"exclusive_whole_percent",
       to_json(steps_per_satisfaction(oracle, {PayoffBasis::exclusive, true}))}};
}

Json oracle_section(const RateBreakdown& oracle, bool with_leaves) {
  Json j;
  j["rates"] = to_json(oracle, with_leaves);
  j["payoff"] = payoff_table(oracle);
  if (oracle.modes.c0 == oracle.modes.c1) j["published_comparison"] = to_json(errata_report(oracle));
  return j;
}

// --- commands ---------------------------------------------------------------------------

int cmd_collab(const Overrides& o) {
  ExperimentConfig c = resolve(o, GameKind::collaborative);
  c.validate_for_run();
  const Json config = to_json(c);
  const std::string prov = provenance_line(config);
  const fs::path dir = prepare_out_dir(o.out_dir);

  const RateBreakdown oracle = exhaustive_collab_rates(c.modes, c.poll_cap);
  const auto runs = fan_out<CollabRun>(c.replications, [&](std::size_t r) {
    return run_collab(c.modes, c.iterations, *c.seed, r, c.poll_cap);
  });

  Json reps = Json::array();
  std::size_t phi_only = 0, psi_only = 0, both = 0, neither = 0, ticks = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& rep = runs[r].report;
    const ComparisonReport cmp = compare(rep, oracle);
    write_file(dir / suffixed("collab_trace", r, runs.size(), ".csv"),
               collab_trace_csv(runs[r], prov));
    write_file(dir / suffixed("collab_iterations", r, runs.size(), ".csv"),
               collab_iterations_csv(rep, prov));
    write_file(dir / suffixed("comparison", r, runs.size(), ".csv"), comparison_csv(cmp, prov));
    reps.push_back(Json{{"report", to_json(rep)}, {"comparison", to_json(cmp)}});
    phi_only += rep.phi_only, psi_only += rep.psi_only, both += rep.both;
    neither += rep.neither, ticks += rep.total_ticks;
  }
  const double n = double(c.iterations * runs.size());
  Json merged{{"iterations", c.iterations * runs.size()},
              {"phi_only", phi_only},
              {"psi_only", psi_only},
              {"both", both},
              {"neither", neither},
              {"phi_rate", double(phi_only + both) / n},
              {"psi_rate", double(psi_only + both) / n},
              {"avg_length", double(ticks) / n}};
  write_json(dir / "collab_report.json",
             envelope(config, Json{{"replications", reps},
                                   {"merged", merged},
                                   {"oracle", oracle_section(oracle, false)}}));
  return kExitOk;
}

int cmd_adver(const Overrides& o) {
  ExperimentConfig c = resolve(o, GameKind::adversarial);
  c.validate_for_run();
  const Json config = to_json(c);
  const std::string prov = provenance_line(config);
  const fs::path dir = prepare_out_dir(o.out_dir);
  const GameSpec game = GameSpec::adversarial();

  // Prediction source: the published matrix for matching modes, otherwise
  // the constructive one.
  const bool fixture = c.modes.c0 == c.modes.c1;
  const TransitionMatrix t = fixture ? fixture_matrix(fixture_for(c.modes.c0))
                                     : build_matrix(adver_policies(c.modes), *c.probs).matrix;
  const PathSet predicted = most_likely_paths(t, c.ties);

  const auto runs = fan_out<AdverRun>(c.replications, [&](std::size_t r) {
    return run_adver(c.modes, *c.probs, c.ticks, *c.seed, r);
  });

  Json reps = Json::array();
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& states = runs[r].trace.states;
    const auto coverage = path_coverage(states, predicted.paths);
    write_file(dir / suffixed("adver_trace", r, runs.size(), ".csv"),
               adver_trace_csv(runs[r], coverage, prov));
    Json occurrences = Json::array();
    for (const auto& p : predicted.paths) {
      const std::size_t k = count_cycle_traversals(states, p);
      occurrences.push_back(Json{{"path", p}, {"traversals", k},
                                 {"rate", double(k) / double(states.size())},
                                 {"windows", count_path_occurrences(states, p)}});
    }
    Json top = Json::array();
    const auto ranked = rank_cycles(states, 3, game.num_states());
    for (std::size_t i = 0; i < std::min<std::size_t>(5, ranked.size()); ++i)
      top.push_back(Json{{"cycle", ranked[i].cycle}, {"traversals", ranked[i].occurrences}});
    reps.push_back(Json{{"report", to_json(runs[r].report)},
                        {"predicted_path_occurrences", occurrences},
                        {"top_three_cycles", top}});
  }
  write_json(dir / "adver_report.json",
             envelope(config, Json{{"prediction_source", fixture ? "fixture" : "constructive"},
                                   {"predicted_paths", to_json(predicted, &game)},
                                   {"replications", reps}}));
  return kExitOk;
}

int cmd_matrix(const Overrides& o) {
  ExperimentConfig c = resolve(o, GameKind::adversarial);
  c.probs->validate();
  Json config = to_json(c);
  config.erase("ticks");
  config.erase("replications");
  if (!c.seed) config.erase("seed");
  const std::string prov = provenance_line(config);
  const fs::path dir = prepare_out_dir(o.out_dir);

  const MatrixBuild built = build_matrix(adver_policies(c.modes), *c.probs);
  Json result;
  result["built"] = to_json(built.matrix);
  result["unreachable_rows"] = built.unreachable_rows;
  write_file(dir / "matrix_built.csv", prov + matrix_to_csv(built.matrix));
  if (c.modes.c0 == c.modes.c1) {
    const FixtureConfig which = fixture_for(c.modes.c0);
    const TransitionMatrix fx = fixture_matrix(which);
    result["fixture_name"] = std::string(to_string(which));
    result["fixture"] = to_json(fx);
    result["cell_diff"] = to_json(cell_diff(built.matrix, fx));
    write_file(dir / "matrix_fixture.csv", prov + matrix_to_csv(fx, 3));
  }
  write_json(dir / "matrix_report.json", envelope(config, result));
  return kExitOk;
}

int cmd_paths(const std::string& matrix_file, const Overrides& o, const std::string& out) {
  const TieMode ties =
      o.ties && *o.ties == "expand" ? TieMode::expand : TieMode::lowest_index;
  const TransitionMatrix t = parse_matrix(read_file(matrix_file));
  t.validate(kFixtureTolerance);
  const GameSpec game = GameSpec::adversarial();
  const bool labelled = t.size() == game.num_states();
  const Json config{{"matrix_file", matrix_file}, {"ties", ties == TieMode::expand ? "expand" : "lowest"}};
  const Json doc = envelope(config, to_json(most_likely_paths(t, ties), labelled ? &game : nullptr));
  if (out.empty() || out == "-")
    std::cout << doc.dump(2) << "\n";
  else
    write_json(out, doc);
  return kExitOk;
}

int cmd_predict(const Overrides& o) {
  ExperimentConfig c = resolve(o, GameKind::collaborative);
  (void)collab_scripts(c.modes, c.poll_cap);
  Json config{{"game", "collaborative"}, {"modes", to_json(c.modes)}, {"poll_cap", c.poll_cap}};
  const fs::path dir = prepare_out_dir(o.out_dir);
  const RateBreakdown oracle = exhaustive_collab_rates(c.modes, c.poll_cap);
  write_json(dir / "predict_report.json", envelope(config, oracle_section(oracle, true)));
  return kExitOk;
}

// Rebuilds a run report from a collab_iterations CSV written by `collab`.
CollabRunReport report_from_iterations_csv(const std::string& text, Json& config) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# cpg ", 0) != 0)
    throw ParseError("iterations CSV lacks the provenance line");
  const auto at = line.find("config=");
  if (at == std::string::npos) throw ParseError("provenance line lacks the config echo");
  try {
    config = Json::parse(line.substr(at + 7));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed config echo: " + std::string(e.what()));
  }
  const ExperimentConfig c = config_from_json(config);
  if (!std::getline(in, line) || line != "iteration,length,phi,psi,phi_cum,psi_cum,deadlock,cap_hits")
    throw ParseError("unexpected iterations CSV header");

  CollabRunReport r;
  r.modes = c.modes;
  r.seed = c.seed.value_or(0);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::size_t> v;
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t col = 0; std::getline(ss, cell, ','); ++col) {
      try {
        std::size_t used = 0;
        v.push_back(std::stoull(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                         ": cannot parse '" + cell + "'");
      }
    }
    if (v.size() != 8) throw ParseError("row " + std::to_string(row) + ": expected 8 columns");
    CollabIteration it{v[1], v[2] != 0, v[3] != 0, v[6] != 0, v[7]};
    (it.phi ? (it.psi ? r.both : r.phi_only) : (it.psi ? r.psi_only : r.neither))++;
    r.total_ticks += it.length;
    r.deadlocks += it.deadlock;
    r.cap_hits += it.cap_hits;
    r.phi_cum.push_back(v[4]);
    r.psi_cum.push_back(v[5]);
    r.per_iteration.push_back(it);
    ++row;
  }
  r.iterations = row;
  return r;
}

int cmd_compare(const std::string& iterations_file, const Overrides& o) {
  Json run_config;
  const CollabRunReport sim = report_from_iterations_csv(read_file(iterations_file), run_config);
  const ModePair predicted_modes = o.modes ? parse_modes(*o.modes) : sim.modes;
  const std::size_t poll_cap = o.poll_cap.value_or(
      run_config.contains("poll_cap") ? run_config["poll_cap"].get<std::size_t>() : kDefaultPollCap);
  const RateBreakdown oracle = exhaustive_collab_rates(predicted_modes, poll_cap);
  const ComparisonReport cmp = compare(sim, oracle);

  Json config{{"iterations_file", iterations_file},
              {"run_config", run_config},
              {"predicted_modes", to_json(predicted_modes)}};
  const fs::path dir = prepare_out_dir(o.out_dir);
  write_file(dir / "comparison.csv", comparison_csv(cmp, provenance_line(config)));
  write_json(dir / "comparison_report.json", envelope(config, to_json(cmp)));
  return kExitOk;
}

void add_run_flags(CLI::App* cmd, Overrides& o, bool collab) {
  cmd->add_option("--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--modes", o.modes, "agent mode, or c0-mode/c1-mode");
  cmd->add_option("--seed", o.seed, "64-bit seed (falls back to the config, then CPG_SEED)");
  cmd->add_option("--replications", o.replications, "independent seeded runs, merged by index");
  cmd->add_option("--out-dir", o.out_dir, "directory for output files");
  if (collab) {
    cmd->add_option("--iterations", o.iterations, "iterations of the collaborative game");
    cmd->add_option("--poll-cap", o.poll_cap, "poll budget of waiting sense steps");
  } else {
    cmd->add_option("--ticks", o.ticks, "agent ticks of adversarial play");
    cmd->add_option("--probs", o.probs, "c0-first,c1-first,simultaneous probabilities");
    cmd->add_option("--ties", o.ties, "argmax ties: lowest or expand")
        ->check(CLI::IsMember({"lowest", "expand"}));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyber physical game simulator and transition-matrix analyzer"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  Overrides o;
  std::string matrix_file, paths_out, iterations_file;

  auto* collab = app.add_subcommand("collab", "simulate the collaborative game");
  add_run_flags(collab, o, true);

  auto* adver = app.add_subcommand("adver", "simulate the adversarial game");
  add_run_flags(adver, o, false);

  auto* matrix = app.add_subcommand("matrix", "build the transition matrix and diff it");
  matrix->add_option("--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  matrix->add_option("--modes", o.modes, "agent mode, or c0-mode/c1-mode");
  matrix->add_option("--probs", o.probs, "c0-first,c1-first,simultaneous probabilities");
  matrix->add_option("--out-dir", o.out_dir, "directory for output files");

  auto* paths = app.add_subcommand("paths", "most likely cycles of a matrix file");
  paths->add_option("matrix", matrix_file, "matrix as CSV or JSON")->required();
  paths->add_option("--ties", o.ties, "argmax ties: lowest or expand")
      ->check(CLI::IsMember({"lowest", "expand"}));
  paths->add_option("--out", paths_out, "output file (default: stdout)");

  auto* predict = app.add_subcommand("predict", "exact collaborative outcome rates");
  predict->add_option("--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  predict->add_option("--modes", o.modes, "agent mode");
  predict->add_option("--poll-cap", o.poll_cap, "poll budget of waiting sense steps");
  predict->add_option("--out-dir", o.out_dir, "directory for output files");

  auto* cmp = app.add_subcommand("compare", "compare a collaborative run with the exact rates");
  cmp->add_option("iterations", iterations_file, "collab_iterations CSV from `collab`")
      ->required()
      ->check(CLI::ExistingFile);
  cmp->add_option("--modes", o.modes, "mode pair the prediction is computed for");
  cmp->add_option("--poll-cap", o.poll_cap, "poll budget of waiting sense steps");
  cmp->add_option("--out-dir", o.out_dir, "directory for output files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (collab->parsed()) return cmd_collab(o);
    if (adver->parsed()) return cmd_adver(o);
    if (matrix->parsed()) return cmd_matrix(o);
    if (paths->parsed()) return cmd_paths(matrix_file, o, paths_out);
    if (predict->parsed()) return cmd_predict(o);
    if (cmp->parsed()) return cmd_compare(iterations_file, o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ConfigMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ControlViolationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
