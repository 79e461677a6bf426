#include "cfmm/arbitrage.hpp"
#include "cfmm/errors.hpp"
#include "cfmm/invariant.hpp"
#include "cfmm/suites.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace cfmm;
using namespace fixture;

namespace {

OraclePtr sys(const std::string& name, CatalogParams p = {}) { return make_system({name, p}); }

const std::vector<State> kChain = {{1.8, 1, 1}, {1, 4, 1}, {4, 16, 4}, {6.8, 4, 4}, {1.7, 1, 1}};

}  // namespace

TEST_CASE("finite search") {
  SUBCASE("four-state system is arbitrage-free") {
    CHECK_FALSE(find_arbitrage_finite(four_state_system(), DominanceOrder::pareto()));
  }
  SUBCASE("no transitions") {
    const auto s = build({{1, 1}, {2, 2}}, {});
    CHECK_FALSE(find_arbitrage_finite(s, DominanceOrder::pareto()));
  }
  SUBCASE("shortest witness") {
    // 0 -> 1 -> 2 with 2 dominated by 0, and a long detour 0 -> 3 -> 4 -> 2
    const auto s = build({{5, 5}, {6, 0}, {1, 1}, {9, 0}, {0, 9}},
                         {{0, 3}, {3, 4}, {4, 2}, {0, 1}, {1, 2}});
    const auto w = find_arbitrage_finite(s, DominanceOrder::pareto());
    REQUIRE(w);
    CHECK(w->path == std::vector<StateIndex>{0, 1, 2});
    CHECK(verify_witness(s, *w, DominanceOrder::pareto()));
  }
  SUBCASE("two-pool discretization") {
    const auto two = sys("two_pool_cpmm");
    Grid g;
    g.states = {{8, 2, 1, 9}, {4, 4, 3, 3}};
    const auto s = discretize(*two, g, 0, 0);
    CHECK(s.has_transition(0, 1));
    CHECK(s.has_transition(1, 0));
    const auto w = find_arbitrage_finite(s, DominanceOrder::sum_of_pairs());
    REQUIRE(w);
    CHECK(w->path == std::vector<StateIndex>{0, 1});
  }
}

TEST_CASE("finite search agrees with brute force") {
  for (std::uint64_t t = 0; t < 400; ++t) {
    Rng rng(derive_seed(31, t));
    const auto s = random_finite_system(rng, {.giftable = t % 2 == 0});
    const auto w = find_arbitrage_finite(s, DominanceOrder::pareto());
    CHECK(w.has_value() == oracle::has_pareto_arbitrage(s, oracle::reach(s)));
    if (w) CHECK(verify_witness(s, *w, DominanceOrder::pareto()));
  }
}

TEST_CASE("finite witness verification rejects bad paths") {
  const auto s = build({{2, 2}, {1, 1}, {3, 3}}, {{0, 1}, {1, 2}});
  const auto d = DominanceOrder::pareto();
  CHECK(verify_witness(s, FiniteWitness{{0, 1}}, d));
  CHECK_FALSE(verify_witness(s, FiniteWitness{{0, 2}}, d));      // no edge
  CHECK_FALSE(verify_witness(s, FiniteWitness{{0, 1, 2}}, d));   // end not dominated
  CHECK_FALSE(verify_witness(s, FiniteWitness{{}}, d));
  CHECK_FALSE(verify_witness(s, FiniteWitness{{0, 7}}, d));
}

TEST_CASE("oracle witness verification") {
  const auto naive = sys("naive_lift", {.fee = 0.2});
  const auto d = DominanceOrder::pareto_per_share();
  CHECK(verify_witness(*naive, ArbitrageWitness{kChain}, d));
  auto same = kChain;
  same.back() = {1.8, 1, 1};
  CHECK_FALSE(verify_witness(*naive, ArbitrageWitness{same}, d));
  CHECK_FALSE(verify_witness(*naive, ArbitrageWitness{{}}, d));
  CHECK_FALSE(verify_witness(*naive, ArbitrageWitness{{{1.8, 1, 1}, {1, 1}}}, d));

  const auto two = sys("two_pool_cpmm");
  CHECK(verify_witness(*two, ArbitrageWitness{{{8, 2, 1, 9}, {4, 4, 3, 3}}},
                       DominanceOrder::sum_of_pairs()));
}

TEST_CASE("fuzzing finds the known arbitrage") {
  FuzzConfig cfg;
  cfg.trials = 2000;
  cfg.seed = 7;
  SUBCASE("naive lift") {
    const auto o = sys("naive_lift", {.fee = 0.2});
    const auto rep = fuzz_trajectories(*o, DominanceOrder::pareto_per_share(), std::nullopt, cfg);
    CHECK(rep.event_count > 0);
    REQUIRE_FALSE(rep.events.empty());
    CHECK(rep.events[0].verified);
    CHECK(rep.invalid_transitions == 0);
  }
  SUBCASE("two pools") {
    const auto o = sys("two_pool_cpmm");
    const auto rep = fuzz_trajectories(*o, DominanceOrder::sum_of_pairs(), std::nullopt, cfg);
    CHECK(rep.event_count > 0);
    for (const auto& e : rep.events) {
      CHECK(e.verified);
      CHECK(verify_witness(*o, e.witness, DominanceOrder::sum_of_pairs()));
    }
  }
}

TEST_CASE("fuzzing shielded systems is quiet") {
  FuzzConfig cfg;
  cfg.trials = 500;
  for (const char* name : {"uniswap_v2_mprime", "sushi_admin_fee", "uniswap_v2_full", "stableswap",
                           "proper_lift", "cpmm_fee"}) {
    const auto o = sys(name);
    const auto rep =
        fuzz_trajectories(*o, o->default_dominance(), o->candidate_invariant(), cfg);
    CHECK_MESSAGE(rep.event_count == 0, name);
    CHECK_MESSAGE(rep.violation_count == 0, name);
    CHECK_MESSAGE(rep.invalid_transitions == 0, name);
    CHECK_MESSAGE(rep.transitions > 0, name);
  }
}

TEST_CASE("a wrong candidate invariant is reported") {
  const auto o = sys("cpmm_fee");
  CandidateInvariant bad{"x1", [](std::span<const double> x) { return x[0]; }};
  FuzzConfig cfg;
  cfg.trials = 50;
  const auto rep = fuzz_trajectories(*o, o->default_dominance(), bad, cfg);
  CHECK(rep.violation_count > 0);
  REQUIRE_FALSE(rep.violations.empty());
  CHECK(rep.violations[0].after < rep.violations[0].before);
}

TEST_CASE("fuzzing is reproducible and thread-independent") {
  const auto o = sys("naive_lift", {.fee = 0.2});
  FuzzConfig cfg;
  cfg.trials = 300;
  cfg.seed = 5;
  cfg.threads = 1;
  const auto a = fuzz_trajectories(*o, o->default_dominance(), std::nullopt, cfg);
  cfg.threads = 3;
  const auto b = fuzz_trajectories(*o, o->default_dominance(), std::nullopt, cfg);
  CHECK(a.transitions == b.transitions);
  CHECK(a.event_count == b.event_count);
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].trial == b.events[i].trial);
    CHECK(a.events[i].witness == b.events[i].witness);
  }
  if (!a.events.empty()) {
    const auto& e = a.events[0];
    const auto path = replay_trial(*o, cfg, e.trial);
    CHECK(path[e.from_step] == e.witness.start());
    CHECK(path[e.to_step] == e.witness.end());
  }
}

TEST_CASE("discretize") {
  const auto cpmm = sys("cpmm_fee");
  SUBCASE("quote pair gives one directed transition") {
    Grid g;
    g.states = {{100, 100}, cpmm_quote(State{100, 100}, 0, 10, FeeSchedule{0.003})};
    const auto s = discretize(*cpmm, g, 0, 0);
    CHECK(s.transitions() == std::vector<Transition>{{0, 1}});
  }
  SUBCASE("incomparable isolated states") {
    Grid g;
    g.axes = {{1, 2}, {1}};
    const auto s = discretize(*cpmm, g, 0, 0);
    CHECK(s.size() == 2);
    CHECK(s.transitions().empty());
    CHECK_FALSE(find_arbitrage_finite(s, DominanceOrder::pareto()));
  }
  SUBCASE("budget adds sampled states") {
    Grid g;
    g.states = {{100, 100}};
    const auto s = discretize(*cpmm, g, 5, 1);
    CHECK(s.size() > 1);
    CHECK(s.size() <= 6);
    CHECK_FALSE(find_arbitrage_finite(s, DominanceOrder::pareto()));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(discretize(*cpmm, Grid{}, 0, 0), GridError);
    Grid bad;
    bad.states = {{-1, 2}};
    CHECK_THROWS_AS(discretize(*cpmm, bad, 0, 0), DomainError);
  }
  SUBCASE("simplex discretization is a chain") {
    const auto simplex = sys("simplex");
    Grid g;
    g.states = {{0, 1}, {0.5, 0.5}, {1, 0}};
    const auto s = discretize(*simplex, g, 0, 0);
    const auto r = reachable_closure(s);
    CHECK(is_complete(r));
    CHECK(condense(r).class_count() == 3);
  }
  SUBCASE("two-pool grid refutes an increasing invariant") {
    const auto two = sys("two_pool_cpmm");
    Grid g;
    g.states = {{8, 2, 1, 9}, {4, 4, 3, 3}, {2, 8, 9, 1}};
    const auto s = discretize(*two, g, 0, 0);
    const auto r = reachable_closure(s);
    const auto res = find_increasing_invariant(s, condense(r), DominanceOrder::sum_of_pairs());
    CHECK(std::holds_alternative<CycleWitness>(res));
  }
}
