#include <doctest.h>

#include <algorithm>
#include <set>

#include "cpg/interleave.hpp"
#include "cpg/strategies.hpp"

using namespace cpg;

namespace {
const GameSpec kCollab = GameSpec::collaborative();
constexpr VarId a{0}, b{1};

ScriptEntry w(Agent who, VarId v, bool value) { return {ActionMsg{who, v, value}, std::nullopt}; }
ScriptEntry s(Agent who, VarId v, bool expected, OnFail f, std::size_t cap = 16) {
  return {SenseStep{who, v, expected, f, cap}, std::nullopt};
}
}  // namespace

TEST_CASE("fisher_yates keeps the multiset and leaves its input alone") {
  Rng rng = make_rng(7);
  const std::vector<int> empty;
  CHECK(fisher_yates<int>(empty, rng).empty());
  const std::vector<int> one{42};
  CHECK(fisher_yates<int>(one, rng) == one);

  const std::vector<int> items{1, 2, 3, 4, 5};
  auto out = fisher_yates<int>(items, rng);
  CHECK(items == std::vector<int>{1, 2, 3, 4, 5});
  std::sort(out.begin(), out.end());
  CHECK(out == items);
}

TEST_CASE("fisher_yates is deterministic per seed and replication") {
  const std::vector<int> items{0, 1, 2, 3, 4, 5, 6, 7};
  Rng r1 = make_rng(99), r2 = make_rng(99), r3 = make_rng(99, 1);
  const auto x = fisher_yates<int>(items, r1);
  CHECK(x == fisher_yates<int>(items, r2));
  bool differs = false;
  for (int i = 0; i < 8 && !differs; ++i) differs = fisher_yates<int>(items, r3) != x;
  CHECK(differs);
}

TEST_CASE("enumerate_permutations yields n! distinct orders") {
  const std::vector<int> four{1, 2, 3, 4};
  CHECK(enumerate_permutations<int>(four).size() == 24);
  const std::vector<int> one{9};
  CHECK(enumerate_permutations<int>(one).size() == 1);
  const std::vector<int> three{1, 2, 3};
  const auto perms = enumerate_permutations<int>(three);
  CHECK(perms.size() == 6);
  CHECK(std::set<std::vector<int>>(perms.begin(), perms.end()).size() == 6);
  const std::vector<int> nine(9, 0);
  CHECK_THROWS_AS(enumerate_permutations<int>(nine), SizeLimitError);
}

TEST_CASE("ordering probabilities validate") {
  CHECK_NOTHROW(OrderingProbs{}.validate());
  CHECK_THROWS_AS(OrderingProbs::make(0.3, 0.3, 0.3), ValidationError);
  CHECK_THROWS_AS(OrderingProbs::make(-0.1, 0.6, 0.5), ValidationError);
}

TEST_CASE("degenerate ordering probabilities always pick one order") {
  Rng rng = make_rng(1);
  for (int i = 0; i < 100; ++i) {
    CHECK(sample_pair_order(OrderingProbs::make(1, 0, 0), rng) == PairOrder::c0_first);
    CHECK(sample_pair_order(OrderingProbs::make(0, 0, 1), rng) == PairOrder::simultaneous);
  }
}

TEST_CASE("sampled pair orders follow their probabilities") {
  Rng rng = make_rng(2024);
  std::array<int, 3> counts{};
  constexpr int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(sample_pair_order({}, rng))];
  CHECK(std::abs(counts[0] / double(n) - 0.25) <= 0.01);
  CHECK(std::abs(counts[1] / double(n) - 0.25) <= 0.01);
  CHECK(std::abs(counts[2] / double(n) - 0.5) <= 0.01);
}

TEST_CASE("staggered interleaving with empty scripts is empty") {
  Rng rng = make_rng(3);
  const auto run = staggered_interleave(kCollab, ScriptQueue({}, {}), kCollab.initial(), rng);
  CHECK(run.ticks() == 0);
  CHECK(run.states.size() == 1);
  CHECK_FALSE(run.deadlock);
}

TEST_CASE("a single agent script runs in order") {
  Rng rng = make_rng(3);
  const Script c0{w(Agent::c0, a, true), w(Agent::c0, b, true), w(Agent::c0, a, false)};
  const auto run = staggered_interleave(kCollab, ScriptQueue(c0, {}), kCollab.initial(), rng);
  REQUIRE(run.ticks() == 3);
  CHECK(run.writes[0].msg == std::get<ActionMsg>(c0[0].step));
  CHECK(run.writes[2].msg == std::get<ActionMsg>(c0[2].step));
  CHECK(run.states.back() == EnvState{false, true});
}

TEST_CASE("a sense barrier holds the agent until the predicate is true") {
  const Script c0{w(Agent::c0, a, true), w(Agent::c0, b, true)};
  const Script c1{w(Agent::c1, b, true), s(Agent::c1, b, true, OnFail::abort),
                  w(Agent::c1, a, true)};
  const auto leaves = enumerate_staggered(kCollab, ScriptQueue(c0, c1), kCollab.initial());
  Rational total(0);
  for (const auto& leaf : leaves) {
    total += leaf.probability;
    // c1's a<-T only ever follows a b<-T.
    bool seen_b = false;
    for (const auto& wr : leaf.run.writes) {
      if (wr.msg.var == b && wr.msg.value) seen_b = true;
      if (wr.msg.agent == Agent::c1 && wr.msg.var == a) CHECK(seen_b);
    }
  }
  CHECK(total == Rational(1));
}

TEST_CASE("an aborting sense drops the rest of the script") {
  Rng rng = make_rng(5);
  const Script c1{s(Agent::c1, a, true, OnFail::abort), w(Agent::c1, b, true)};
  const auto run = staggered_interleave(kCollab, ScriptQueue({}, c1), kCollab.initial(), rng);
  CHECK(run.ticks() == 0);
  CHECK(run.aborted[1]);
  CHECK_FALSE(run.deadlock);
}

TEST_CASE("a waiting sense with no one to unblock it deadlocks") {
  Rng rng = make_rng(5);
  const Script c1{s(Agent::c1, a, true, OnFail::wait), w(Agent::c1, b, true)};
  const auto run = staggered_interleave(kCollab, ScriptQueue({}, c1), kCollab.initial(), rng);
  CHECK(run.deadlock);
  CHECK(run.ticks() == 0);
}

TEST_CASE("a waiting sense gives up after its poll cap") {
  Rng rng = make_rng(5);
  const Script c0{w(Agent::c0, b, true), w(Agent::c0, b, true), w(Agent::c0, b, true)};
  const Script c1{s(Agent::c1, a, true, OnFail::wait, 2), w(Agent::c1, b, false)};
  const auto run = staggered_interleave(kCollab, ScriptQueue(c0, c1), kCollab.initial(), rng);
  CHECK(run.cap_hits == 1);
  CHECK(run.aborted[1]);
  CHECK(run.ticks() == 3);
}

TEST_CASE("scripts must be owned by their agent") {
  const Script wrong{w(Agent::c1, a, true)};
  CHECK_THROWS_AS(ScriptQueue(wrong, {}), ValidationError);
}

TEST_CASE("staggered enumeration respects its leaf cap") {
  const Script c0{w(Agent::c0, a, true), s(Agent::c0, a, true, OnFail::abort),
                  w(Agent::c0, b, true)};
  const Script c1{w(Agent::c1, b, true), w(Agent::c1, a, false)};
  CHECK_THROWS_AS(enumerate_staggered(kCollab, ScriptQueue(c0, c1), kCollab.initial(), 1),
                  SizeLimitError);
}
