#include "cfmm/errors.hpp"
#include "cfmm/finite_system.hpp"
#include "cfmm/catalog.hpp"
#include "cfmm/dominance.hpp"
#include "cfmm/rng.hpp"
#include "cfmm/suites.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace cfmm;
using namespace fixture;

TEST_CASE("four-state system reach from (1,4)") {
  const auto s = four_state_system();
  const auto r = reachable_closure(s);
  CHECK(r(k14, k14));
  CHECK(r(k14, k21));
  CHECK_FALSE(r(k14, k13));
  CHECK_FALSE(r(k14, k22));
  CHECK(r(k22, k13));
  CHECK_FALSE(r(k21, k13));
}

TEST_CASE("empty transition set gives the identity") {
  const auto s = build({{1, 1}, {2, 2}, {3, 1}}, {});
  const auto r = reachable_closure(s);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(r(i, j) == (i == j));
}

TEST_CASE("two-step chain composes") {
  const auto r = reachable_closure(chain3());
  CHECK(r(0, 2));
  CHECK_FALSE(r(2, 0));
}

TEST_CASE("construction rejects bad input") {
  CHECK_THROWS_AS(build({{1, 1}, {1, 1}}, {}), SpecError);
  CHECK_THROWS_AS(build({{1, 1}, {1}}, {}), SpecError);
  CHECK_THROWS_AS(build({{1, 1}}, {{0, 1}}), SpecError);
}

TEST_CASE("condensation") {
  SUBCASE("symmetric pair is one class") {
    const auto c = condense(reachable_closure(build({{1}, {2}}, {{0, 1}, {1, 0}})));
    CHECK(c.class_count() == 1);
    CHECK(c.members[0] == std::vector<StateIndex>{0, 1});
  }
  SUBCASE("four-state system") {
    const auto c = condense(reachable_closure(four_state_system()));
    CHECK(c.class_count() == 4);
    CHECK(c.edge_count() == 2);
    CHECK(c.below(c.class_of[k14], c.class_of[k21]));
    CHECK(c.below(c.class_of[k22], c.class_of[k13]));
  }
  SUBCASE("simplex chain") {
    const auto c = condense(reachable_closure(simplex3()));
    CHECK(c.class_count() == 3);
    CHECK(c.below(0, 1));
    CHECK(c.below(1, 2));
    CHECK(c.below(0, 2));
  }
  SUBCASE("class ids follow lowest member") {
    const auto c = condense(reachable_closure(build({{1}, {2}, {3}, {4}}, {{3, 1}, {1, 3}})));
    CHECK(c.class_of == std::vector<ClassId>{0, 1, 2, 1});
  }
}

TEST_CASE("pair classification") {
  const auto r = reachable_closure(four_state_system());
  CHECK(classify_pair(r, k21, k21) == PairOrder::Equivalent);
  CHECK(classify_pair(r, k14, k21) == PairOrder::StrictlyBelow);
  CHECK(classify_pair(r, k21, k14) == PairOrder::StrictlyAbove);
  CHECK(classify_pair(r, k21, k13) == PairOrder::Incomparable);
}

TEST_CASE("completeness") {
  CHECK(is_complete(reachable_closure(simplex3())));
  CHECK_FALSE(is_complete(reachable_closure(four_state_system())));
  CHECK(is_complete(reachable_closure(build({{7, 7}}, {}))));
}

TEST_CASE("REMM") {
  CHECK(is_remm(reachable_closure(build({{1}, {2}}, {{0, 1}, {1, 0}}))));
  CHECK_FALSE(is_remm(reachable_closure(four_state_system())));
  CHECK(is_remm(reachable_closure(product_levels())));
}

TEST_CASE("giftability") {
  const auto pareto = DominanceOrder::pareto();
  const auto anti = build({{1, 3}, {2, 2}, {3, 1}}, {});
  CHECK(is_giftable(anti, reachable_closure(anti), pareto));
  const auto s = four_state_system();
  CHECK_FALSE(is_giftable(s, reachable_closure(s), pareto));
  const auto g = increase_grid();
  CHECK(is_giftable(g, reachable_closure(g), pareto));
}

TEST_CASE("shortest path breaks ties toward low indices") {
  const auto s = build({{0}, {1}, {2}, {3}}, {{0, 2}, {0, 1}, {1, 3}, {2, 3}});
  CHECK(shortest_path(s, 0, 3) == std::vector<StateIndex>{0, 1, 3});
  CHECK(shortest_path(s, 3, 0).empty());
  CHECK(shortest_path(s, 2, 2) == std::vector<StateIndex>{2});
}

TEST_CASE("closure agrees with path enumeration on random systems") {
  for (std::uint64_t t = 0; t < 300; ++t) {
    Rng rng(derive_seed(11, t));
    const auto s = random_finite_system(rng);
    const auto r = reachable_closure(s);
    const auto ref = oracle::reach(s);
    bool same = true;
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = 0; j < s.size(); ++j) same = same && (r(i, j) == ref[i][j]);
    CHECK(same);
    CHECK(is_complete(r) == oracle::complete(ref));
    CHECK(is_remm(r) == oracle::symmetric(ref));
  }
}
