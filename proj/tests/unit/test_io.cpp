#include <doctest.h>

#include <clocale>
#include <string>

#include "cpg/io.hpp"

using namespace cpg;

namespace {

std::string message_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("game spec round trips through JSON") {
  const auto j = Json::parse(R"({"variables":["a","b","c"],
      "control":{"c0":["a","c"],"c1":["b"]},"update":"adversarial",
      "initial":[false,false,false]})");
  const auto g = game_from_json(j);
  CHECK(g == GameSpec::adversarial());
  CHECK(game_from_json(to_json(g)) == g);
  CHECK(to_json(GameSpec::collaborative())["update"] == "collaborative");
}

TEST_CASE("game spec rejects bad documents") {
  auto j = to_json(GameSpec::adversarial());
  j["control"]["c1"] = {"d"};
  CHECK_THROWS_AS(game_from_json(j), ParseError);
  auto extra = to_json(GameSpec::adversarial());
  extra["colour"] = "red";
  CHECK(message_of([&] { game_from_json(extra); }).find("colour") != std::string::npos);
  auto shared = to_json(GameSpec::adversarial());
  shared["control"]["c1"] = {"a", "b"};
  CHECK_THROWS_AS(game_from_json(shared), ParseError);
}

TEST_CASE("templates parse connectors") {
  const auto g = GameSpec::collaborative();
  const auto t = template_from_json(Json::parse(R"({"branches":[[
      {"state":[false,false],"next":"F"},{"state":[true,false],"next":"X"},
      {"state":[true,true]}]]})"),
                                    g);
  CHECK(t == fixture_formulas(GameKind::collaborative).phi);
  CHECK(template_from_json(to_json(t), g) == t);
  CHECK_THROWS_AS(template_from_json(Json::parse(R"([[{"state":[false,false],"next":"U"},
      {"state":[true,true]}]])"),
                                     g),
                  ParseError);
  CHECK_THROWS_AS(template_from_json(Json::parse(R"([[{"state":[false],"next":"X"},
      {"state":[true,true]}]])"),
                                     g),
                  ParseError);
}

TEST_CASE("policies round trip") {
  const auto g = GameSpec::adversarial();
  for (const auto& m : kAllModes) {
    const auto p = adver_policy(Agent::c0, ModePair::same(m));
    CHECK(policy_from_json(to_json(p, g), g) == p);
  }
  auto bad = to_json(adver_policy(Agent::c1, ModePair::same(AgentMode::social_realistic)), g);
  bad["entries"].erase(0);
  CHECK_THROWS_AS(policy_from_json(bad, g), ParseError);
}

TEST_CASE("matrix CSV parsing reports the offending cell") {
  const auto t = parse_matrix_csv("# note\nc0,c1\n0,1\n1,0\n");
  CHECK(t.size() == 2);
  CHECK(t(1, 0) == 1.0);
  const auto msg = message_of([] { parse_matrix_csv("0,1\n1,x\n"); });
  CHECK(msg.find("row 1") != std::string::npos);
  CHECK(msg.find("column 1") != std::string::npos);
  CHECK_THROWS_AS(parse_matrix_csv("0,1,0\n1,0,0\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix_csv("# only comments\n"), ParseError);
}

TEST_CASE("matrix JSON parsing") {
  CHECK(parse_matrix("[[0,1],[1,0]]") == TransitionMatrix::from_rows({{0, 1}, {1, 0}}));
  CHECK(parse_matrix(R"({"size":2,"rows":[[0,1],[1,0]]})").size() == 2);
  const auto msg = message_of([] { parse_matrix("[[0,1],[1,\"a\"]]"); });
  CHECK(msg.find("row 1, column 1") != std::string::npos);
  CHECK_THROWS_AS(parse_matrix("[[0,1],[1,0]"), ParseError);
  const auto uo = fixture_matrix(FixtureConfig::unsocial_optimistic);
  CHECK(parse_matrix(matrix_to_csv(uo)) == uo);
  CHECK(matrix_from_json(to_json(uo)) == uo);
}

TEST_CASE("experiment config is strict") {
  const auto c = config_from_json(Json::parse(R"({"game":"adversarial",
      "modes":{"c0":"social-optimistic","c1":"unsocial-realistic"},
      "probs":{"c0_first":0.25,"c1_first":0.25,"simultaneous":0.5},
      "ticks":100,"seed":7,"ties":"expand","latency":{"l":2}})"));
  CHECK(c.game == GameKind::adversarial);
  CHECK(c.modes.c1 == AgentMode::unsocial_realistic);
  CHECK(c.ties == TieMode::expand);
  CHECK_NOTHROW(c.validate_for_run());
  CHECK(config_from_json(to_json(c)).modes == c.modes);

  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"iteration":10})")), ParseError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"seed":-1})")), ParseError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"iterations":1.5})")), ParseError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"modes":"friendly"})")), ParseError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"latency":{"jitter":1}})")), ParseError);

  auto no_iters = config_from_json(Json::parse(R"({"seed":1})"));
  CHECK_THROWS_AS(no_iters.validate_for_run(), ValidationError);
  auto no_seed = config_from_json(Json::parse(R"({"iterations":3})"));
  CHECK_THROWS_AS(no_seed.validate_for_run(), ValidationError);
  auto probs = config_from_json(Json::parse(R"({"iterations":3,"seed":1,
      "probs":{"c0_first":0.3,"c1_first":0.3,"simultaneous":0.4}})"));
  CHECK_THROWS_AS(probs.validate_for_run(), ValidationError);
}

TEST_CASE("provenance line carries version and config") {
  const auto line = provenance_line(Json{{"seed", 3}});
  CHECK(line.rfind("# cpg ", 0) == 0);
  CHECK(line.find(std::string(version())) != std::string::npos);
  CHECK(line.find(R"(config={"seed":3})") != std::string::npos);
  CHECK(line.back() == '\n');
}

TEST_CASE("decimals ignore the global locale") {
  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = old ? old : "C";
  std::setlocale(LC_NUMERIC, "de_DE.UTF-8");  // may not exist; harmless either way
  CHECK(format_decimal(0.5, 3) == "0.500");
  CHECK(format_decimal(1.0 / 3, 4) == "0.3333");
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST_CASE("CSV outputs start with provenance and use LF") {
  const auto run = run_collab(ModePair::same(AgentMode::unsocial_optimistic), 3, 1);
  const auto prov = provenance_line(Json::object());
  const auto csv = collab_iterations_csv(run.report, prov);
  CHECK(csv.rfind(prov, 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(csv.find("iteration,length,phi,psi,phi_cum,psi_cum,deadlock,cap_hits\n") ==
        prov.size());
  const auto trace = collab_trace_csv(run, prov);
  std::size_t lines = 0;
  for (char ch : trace) lines += ch == '\n';
  CHECK(lines == 2 + run.trace.states.size());
}

TEST_CASE("report JSON shapes") {
  const auto r = exhaustive_collab_rates(ModePair::same(AgentMode::unsocial_optimistic));
  const auto j = to_json(r);
  CHECK(j["phi_only"]["num"] == 1);
  CHECK(j["phi_only"]["den"] == 3);
  CHECK_FALSE(j.contains("leaves"));
  CHECK(to_json(r, true)["leaves"].size() == 24);
  const auto p = to_json(Payoff{std::nullopt, 2.0});
  CHECK(p["phi_steps"] == "undefined");
  CHECK(to_json(errata_report(r))["tag"] == "consistent");
  const auto paths = most_likely_paths(fixture_matrix(FixtureConfig::unsocial_optimistic));
  const auto g = GameSpec::adversarial();
  const auto pj = to_json(paths, &g);
  CHECK(pj["paths"][0]["states"].size() == 3);
  CHECK(pj["paths"][0]["labels"].size() == 3);
}
