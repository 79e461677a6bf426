#include "cfmm/catalog.hpp"
#include "cfmm/errors.hpp"
#include "cfmm/invariant.hpp"
#include "cfmm/suites.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace cfmm;
using namespace fixture;

namespace {

struct Analysed {
  FiniteMarketSystem system;
  ReachabilityClosure closure;
  Condensation cond;
  explicit Analysed(FiniteMarketSystem s)
      : system(std::move(s)), closure(reachable_closure(system)), cond(condense(closure)) {}
};

RationalVector ints(std::initializer_list<int> v) {
  RationalVector out;
  for (int x : v) out.emplace_back(x);
  return out;
}

}  // namespace

TEST_CASE("find_invariant") {
  SUBCASE("four-state system") {
    Analysed a(four_state_system());
    const auto cert = find_invariant(a.cond);
    CHECK(cert.values[k14] < cert.values[k21]);
    CHECK(cert.values[k22] < cert.values[k13]);
    CHECK(verify_invariant(a.system, a.closure, cert.values).valid);
    CHECK(cert.provenance == Provenance::TopologicalRank);
  }
  SUBCASE("one class is constant") {
    Analysed a(build({{1}, {2}, {3}}, {{0, 1}, {1, 2}, {2, 0}}));
    const auto cert = find_invariant(a.cond);
    CHECK(cert.values[0] == cert.values[1]);
    CHECK(cert.values[1] == cert.values[2]);
  }
  SUBCASE("chain ranks") {
    Analysed a(chain3());
    CHECK(find_invariant(a.cond).values == ints({0, 1, 2}));
  }
}

TEST_CASE("increasing invariant on the four-state system is refuted by a 4-cycle") {
  Analysed a(four_state_system());
  const auto pareto = DominanceOrder::pareto();
  const auto res = find_increasing_invariant(a.system, a.cond, pareto);
  REQUIRE(std::holds_alternative<CycleWitness>(res));
  const auto& cyc = std::get<CycleWitness>(res);
  REQUIRE(cyc.links.size() == 4);
  CHECK(validate_cycle(cyc, a.system, a.closure, pareto));

  // K(1,4) <= K(2,1) < K(2,2) <= K(1,3) < K(1,4), up to rotation
  const std::vector<CycleLink> expected = {{k14, ConstraintKind::Reach},
                                           {k21, ConstraintKind::Dominance},
                                           {k22, ConstraintKind::Reach},
                                           {k13, ConstraintKind::Dominance}};
  bool rotation = false;
  for (std::size_t r = 0; r < 4; ++r) {
    bool same = true;
    for (std::size_t i = 0; i < 4; ++i) same = same && cyc.links[(i + r) % 4] == expected[i];
    rotation = rotation || same;
  }
  CHECK(rotation);
}

TEST_CASE("increasing invariant without dominance pairs matches find_invariant") {
  Analysed a(build({{1, 3}, {2, 2}, {3, 1}}, {{0, 1}}));
  const auto res = find_increasing_invariant(a.system, a.cond, DominanceOrder::pareto());
  REQUIRE(std::holds_alternative<InvariantCertificate>(res));
  CHECK(std::get<InvariantCertificate>(res).values == find_invariant(a.cond).values);
}

TEST_CASE("two-pool states with pooled sums admit no increasing invariant") {
  // (8,2,1,9) <-> (4,4,3,3): both products preserved
  Analysed a(build({{8, 2, 1, 9}, {4, 4, 3, 3}, {2, 8, 9, 1}}, {{0, 1}, {1, 0}}));
  const auto res = find_increasing_invariant(a.system, a.cond, DominanceOrder::sum_of_pairs());
  REQUIRE(std::holds_alternative<CycleWitness>(res));
  CHECK(validate_cycle(std::get<CycleWitness>(res), a.system, a.closure,
                       DominanceOrder::sum_of_pairs()));
}

TEST_CASE("verify_invariant") {
  SUBCASE("x1 x2 on fee-swap transitions") {
    // (4,4) -> (5, 16/5.x) style moves taken from exact fee arithmetic:
    // (y1 - c (y1 - x1)) y2 = x1 x2 with c = 1/10
    std::vector<RationalVector> s = {{Rational(4), Rational(4)}};
    std::vector<Transition> e;
    for (int in = 1; in <= 4; ++in) {
      const Rational y1 = Rational(4 + in);
      const Rational y2 = Rational(16) / (y1 - Rational(in, 10));
      s.push_back({y1, y2});
      e.emplace_back(0, s.size() - 1);
    }
    const FiniteMarketSystem sys(s, e);
    RationalVector k;
    for (const auto& x : sys.states()) k.push_back(x[0] * x[1]);
    const auto rep = verify_invariant(sys, reachable_closure(sys), k);
    CHECK(rep.valid);
    CHECK(rep.one_step_valid);
  }
  SUBCASE("constant on a strict transition") {
    Analysed a(chain3());
    const auto rep = verify_invariant(a.system, a.closure, ints({1, 1, 1}));
    CHECK_FALSE(rep.valid);
    REQUIRE_FALSE(rep.violations.empty());
    CHECK(rep.violations[0].condition == InvariantViolation::Condition::StrictAlongOrder);
  }
  SUBCASE("unequal on a class") {
    Analysed a(build({{1}, {2}}, {{0, 1}, {1, 0}}));
    const auto rep = verify_invariant(a.system, a.closure, ints({0, 1}));
    CHECK_FALSE(rep.valid);
    CHECK(rep.violations[0].condition == InvariantViolation::Condition::EqualOnClass);
  }
  SUBCASE("increasing flag") {
    Analysed a(four_state_system());
    const auto pareto = DominanceOrder::pareto();
    const auto rep = verify_invariant(a.system, a.closure, find_invariant(a.cond).values, &pareto);
    REQUIRE(rep.increasing.has_value());
    CHECK_FALSE(*rep.increasing);
  }
}

TEST_CASE("one-step validity implies closure validity") {
  std::size_t applicable = 0;
  for (std::uint64_t t = 0; t < 500; ++t) {
    Rng rng(derive_seed(21, t));
    Analysed a(random_finite_system(rng));
    RationalVector k(a.system.size());
    for (auto& v : k) v = Rational(rng.uniform_int(0, 3));
    const auto rep = verify_invariant(a.system, a.closure, k);
    CHECK(rep.valid == oracle::is_invariant(oracle::reach(a.system), k));
    if (rep.one_step_valid) {
      ++applicable;
      CHECK(rep.valid);
    }
  }
  CHECK(applicable > 0);
}

TEST_CASE("weak invariants") {
  Analysed a(chain3());
  CHECK(is_weak_invariant(a.closure, ints({1, 1, 1})));
  CHECK(is_weak_invariant(a.closure, find_invariant(a.cond).values));
  CHECK_FALSE(is_weak_invariant(a.closure, ints({0, -1, -2})));
}

TEST_CASE("uniqueness") {
  CHECK(is_unique_invariant(Analysed(simplex3()).cond));
  CHECK_FALSE(is_unique_invariant(Analysed(four_state_system()).cond));
  CHECK(is_unique_invariant(Analysed(build({{1}}, {})).cond));
}

TEST_CASE("split_invariant") {
  SUBCASE("four-state system") {
    Analysed a(four_state_system());
    const auto k = find_invariant(a.cond);
    const auto k2 = split_invariant(a.closure, k, k21, k13);
    CHECK(verify_invariant(a.system, a.closure, k2.values).valid);
    CHECK_FALSE(order_equivalent(k.values, k2.values));
    CHECK(k2.provenance == Provenance::Split);
  }
  SUBCASE("comparable states are rejected") {
    Analysed a(simplex3());
    CHECK_THROWS_AS(split_invariant(a.closure, find_invariant(a.cond), 0, 2), PreconditionError);
  }
  SUBCASE("two isolated states with equal values") {
    Analysed a(build({{1}, {2}}, {}));
    const InvariantCertificate k{ints({5, 5}), Provenance::External};
    const auto k2 = split_invariant(a.closure, k, 0, 1);
    CHECK(verify_invariant(a.system, a.closure, k2.values).valid);
    CHECK(k2.values[1] == Rational(6));
    CHECK(k2.values[0] < k2.values[1]);
  }
}

TEST_CASE("order equivalence") {
  CHECK(order_equivalent(ints({0, 1, 1}), ints({-3, 7, 7})));
  CHECK_FALSE(order_equivalent(ints({0, 1, 2}), ints({0, 2, 1})));
  CHECK_FALSE(order_equivalent(ints({0, 1}), ints({0, 0})));
}

TEST_CASE("multi-invariant") {
  SUBCASE("two-state chain") {
    Analysed a(build({{0}, {1}}, {{0, 1}}));
    const auto m = multi_invariant(a.closure);
    // member z is the up-set of z; read per state
    CHECK(m.family[0] == std::vector<std::uint8_t>{1, 1});
    CHECK(m.family[1] == std::vector<std::uint8_t>{0, 1});
    CHECK(recovers(m, a.closure));
    CHECK(m.less(0, 1));
  }
  SUBCASE("four-state system, all pairs") {
    Analysed a(four_state_system());
    const auto m = multi_invariant(a.closure);
    const auto ref = oracle::reach(a.system);
    for (std::size_t x = 0; x < 4; ++x)
      for (std::size_t y = 0; y < 4; ++y) CHECK(m.leq(x, y) == ref[x][y]);
    CHECK(recovers(m, a.closure));
    CHECK_FALSE(is_increasing_multi_invariant(m, a.system, DominanceOrder::pareto()));
  }
  SUBCASE("two-cycle") {
    Analysed a(build({{0}, {1}}, {{0, 1}, {1, 0}}));
    const auto m = multi_invariant(a.closure);
    CHECK(m.leq(0, 1));
    CHECK(m.leq(1, 0));
    CHECK_FALSE(m.less(0, 1));
  }
  SUBCASE("increasing cases") {
    Analysed anti(build({{1, 3}, {2, 2}, {3, 1}}, {}));
    CHECK(is_increasing_multi_invariant(multi_invariant(anti.closure), anti.system,
                                        DominanceOrder::pareto()));
    Analysed g(increase_grid());
    CHECK(is_increasing_multi_invariant(multi_invariant(g.closure), g.system,
                                        DominanceOrder::pareto()));
  }
}

TEST_CASE("equal invariants") {
  SUBCASE("two disjoint two-cycles") {
    Analysed a(build({{0}, {1}, {2}, {3}}, {{0, 1}, {1, 0}, {2, 3}, {3, 2}}));
    const auto res = sequal_invariant(a.cond);
    REQUIRE(std::holds_alternative<InvariantCertificate>(res));
    CHECK(std::get<InvariantCertificate>(res).values == ints({0, 0, 1, 1}));
  }
  SUBCASE("four-state system is not reversible") {
    Analysed a(four_state_system());
    const auto res = sequal_invariant(a.cond);
    REQUIRE(std::holds_alternative<NotRemm>(res));
    CHECK(std::get<NotRemm>(res).from == k14);
    CHECK(std::get<NotRemm>(res).to == k21);
  }
  SUBCASE("fee-free product levels") {
    Analysed a(product_levels());
    const auto res = sequal_invariant(a.cond);
    REQUIRE(std::holds_alternative<InvariantCertificate>(res));
    const auto& k = std::get<InvariantCertificate>(res).values;
    for (std::size_t i = 0; i < a.system.size(); ++i)
      for (std::size_t j = 0; j < a.system.size(); ++j) {
        const auto& x = a.system.state(i);
        const auto& y = a.system.state(j);
        CHECK((k[i] == k[j]) == (x[0] * x[1] == y[0] * y[1]));
      }
    CHECK(remm_class_comparability(a.system, a.cond, DominanceOrder::pareto()));
  }
}

TEST_CASE("REMM class antichains") {
  const auto pareto = DominanceOrder::pareto();
  Analysed inc(build({{1, 2}, {2, 1}}, {{0, 1}, {1, 0}}));
  CHECK(remm_class_comparability(inc.system, inc.cond, pareto));
  Analysed cmp(build({{1, 1}, {2, 2}}, {{0, 1}, {1, 0}}));
  CHECK_FALSE(remm_class_comparability(cmp.system, cmp.cond, pareto));
  Analysed four(four_state_system());
  CHECK_THROWS_AS(remm_class_comparability(four.system, four.cond, pareto), PreconditionError);
}
