#include "cfmm/catalog.hpp"
#include "cfmm/errors.hpp"
#include "cfmm/stableswap.hpp"
#include "cfmm/v3.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace cfmm;

namespace {

OraclePtr sys(const std::string& name, CatalogParams p = {}) { return make_system({name, p}); }

bool member(const MarketOracle& o, State x, State y, double tol = kDefaultTolerance) {
  return o.contains(x, y, tol);
}

}  // namespace

// ---------------------------------------------------------------- stableswap

TEST_CASE("stableswap balanced pool") {
  const StableSwapParams p{10, 2};
  const State x = {100, 100};
  CHECK(stableswap_kappa(x, p) == doctest::Approx(200).epsilon(1e-12));
  const StableSwapParams p3{250, 3};
  const State t = {7.5, 7.5, 7.5};
  CHECK(oracle::rel_close(stableswap_kappa(t, p3), 22.5, 1e-12));
}

TEST_CASE("stableswap against high-precision reference values") {
  // 30-digit reference roots
  struct Case {
    State x;
    double a;
    long double d;
  };
  const Case cases[] = {
      {{50, 150}, 10, 198.4484956863152229201L},
      {{1, 2, 3}, 100, 5.999260445927821874L},
      {{10, 1000}, 1, 471.7537472450112202L},
  };
  for (const auto& c : cases) {
    const StableSwapParams p{c.a, c.x.size()};
    const auto root = stableswap_solve(c.x, p);
    CHECK(oracle::rel_close(root.value, c.d, 1e-13));
    CHECK(oracle::rel_close(oracle::stableswap_bisect(c.x, c.a), c.d, 1e-15));
    CHECK(std::fabs(root.residual) <= 1e-10 * root.scale);
  }
  // between the constant-product and constant-sum values
  const double d = stableswap_kappa(State{50, 150}, {10, 2});
  CHECK(d < 200);
  CHECK(d > 2 * std::sqrt(50.0 * 150.0));
}

TEST_CASE("stableswap bracket straddles the root") {
  const State x = {3, 4000, 0.02};
  const StableSwapParams p{700, 3};
  const auto root = stableswap_solve(x, p);
  CHECK(stableswap_residual(0.0, x, p) > 0);
  CHECK(root.bracket_lo <= root.value);
  CHECK(root.value <= root.bracket_hi);
  CHECK(stableswap_residual(root.bracket_lo, x, p) >= 0);
  CHECK(stableswap_residual(root.bracket_hi, x, p) <= 0);
}

TEST_CASE("stableswap errors") {
  CHECK_THROWS_AS(stableswap_kappa(State{1, 0}, {10, 2}), DomainError);
  CHECK_THROWS_AS(stableswap_kappa(State{1, -2}, {10, 2}), DomainError);
  CHECK_THROWS_AS(StableSwapParams({0.2, 2}).validate(), SpecError);
  CHECK_THROWS_AS(StableSwapParams({10, 1}).validate(), SpecError);
}

TEST_CASE("stableswap level-set balance") {
  const StableSwapParams p{10, 2};
  const State x = {50, 150};
  const double d = stableswap_kappa(x, p);
  const double y1 = stableswap_balance_for(State{0, 150}, 0, d, p);
  CHECK(oracle::rel_close(y1, 50, 1e-12));
  const State other = {80, 0};
  const double y2 = stableswap_balance_for(other, 1, d, p);
  CHECK(oracle::rel_close(stableswap_kappa(State{80, y2}, p), d, 1e-12));
}

TEST_CASE("stableswap oracle membership is the superlevel set") {
  const auto o = sys("stableswap", {.amplification = 10.0});
  CHECK(member(*o, {100, 100}, {101, 100}));
  CHECK_FALSE(member(*o, {101, 100}, {100, 100}));
  CHECK(member(*o, {100, 100}, {100, 100}));
}

// ---------------------------------------------------------------- cpmm, sushi

TEST_CASE("cpmm quote") {
  const State x = {100, 100};
  const State y = cpmm_quote(x, 0, 10, FeeSchedule{0.003});
  CHECK(y[0] == 110);
  CHECK(oracle::rel_close(y[1], 90.93389106119850868L, 1e-14));
  CHECK(oracle::rel_close((y[0] - 0.03) * y[1], 10000, 1e-14));
  CHECK(oracle::rel_close(y[0] * y[1], 10002.72801673183595L, 1e-14));
  CHECK(cpmm_quote(x, 1, 0, FeeSchedule{0}) == x);
  CHECK_THROWS_AS(cpmm_quote(x, 2, 1, FeeSchedule{0}), DomainError);
  CHECK_THROWS_AS(cpmm_quote(x, 0, -1, FeeSchedule{0}), DomainError);
  CHECK_THROWS_AS(FeeSchedule{1.0}.validate(), SpecError);

  const auto o = sys("cpmm_fee");
  CHECK(member(*o, x, y));
  CHECK_FALSE(member(*o, y, x));
}

TEST_CASE("sushi minting") {
  const State x = {100, 100}, y = {110, 110};
  const double yl = sushi_mint(x, 10, y);
  CHECK(oracle::rel_close(yl, 660.0L / 65.0L, 1e-14));
  CHECK(oracle::rel_close(110 / yl, 10.8333333333333333L, 1e-14));
  CHECK(110 / yl > 100 / 10.0);
  CHECK(sushi_mint(x, 10, x) == doctest::Approx(10).epsilon(1e-15));
}

// ---------------------------------------------------------------- v3

TEST_CASE("v3 balances") {
  const TickGrid t({1, 2, 3});
  const auto b = v3_balances(t, {{4, 5}, 1.5});
  CHECK(b.x[0] == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(b.x[1] == doctest::Approx(5.0 / 6).epsilon(1e-15));
  CHECK(b.y[0] == doctest::Approx(2).epsilon(1e-15));
  CHECK(b.y[1] == 0);

  const auto low = v3_balances(t, {{4, 5}, 1.0});
  CHECK(low.x[0] == doctest::Approx(4 * (1 - 0.5)));
  CHECK(low.x[1] == doctest::Approx(5 * (0.5 - 1.0 / 3)));
  CHECK(low.y[0] == 0);
  CHECK(low.y[1] == 0);

  const auto scaled = v3_balances(t, {{12, 5}, 1.5});
  CHECK(scaled.x[0] == doctest::Approx(3 * b.x[0]));
  CHECK(scaled.y[0] == doctest::Approx(3 * b.y[0]));
}

TEST_CASE("v3 weighted sums") {
  const TickGrid t({1, 2, 3});
  const std::vector<double> w = {1, 1};
  const auto [x, y] = weighted_lp_sums(w, std::vector<double>{4, 5}, 1.5, t);
  CHECK(x == doctest::Approx(1.0 / 3));
  CHECK(y == doctest::Approx(0.5));
  const auto [hx, hy] = weighted_holdings_from_balances(w, {{4, 5}, 1.5}, t);
  CHECK(hx == doctest::Approx(x).epsilon(1e-12));
  CHECK(hy == doctest::Approx(y).epsilon(1e-12));
  CHECK_THROWS_AS(weighted_lp_sums(w, std::vector<double>{4, 0}, 1.5, t), DomainError);
  CHECK_THROWS_AS(weighted_lp_sums(w, std::vector<double>{4, 5}, 3.5, t), DomainError);
}

TEST_CASE("v3 membership") {
  const TickGrid t({1, 2, 3});
  CHECK(v3_contains(t, {{4, 5}, 1.5}, {{4, 5}, 2.5}));
  CHECK(v3_contains(t, {{4, 5}, 1.5}, {{8, 1}, 1.5}));
  CHECK_FALSE(v3_contains(t, {{4, 5}, 1.5}, {{8, 1}, 2.5}));
  CHECK_THROWS_AS(v3_contains(t, {{4, 5}, 1.5}, {{4, 5, 6}, 1.5}), TickMismatchError);
  CHECK_THROWS_AS(TickGrid({1, 1}), SpecError);
  CHECK_THROWS_AS(TickGrid({2}), SpecError);
  CHECK_THROWS_AS(validate_v3_state(t, {{0, 0}, 1.5}), DomainError);
}

// ---------------------------------------------------------------- catalog

TEST_CASE("catalog builds every entry") {
  for (const auto& e : catalog_entries()) {
    const auto o = sys(e.name);
    CHECK(o->name() == e.name);
    if (e.name != "four_state_counterexample") {
      CHECK(o->in_domain(o->default_start()));
    }
  }
  CHECK_THROWS_AS(sys("nope"), SpecError);
  CHECK_THROWS_AS(sys("cpmm_fee", {.fee = 1.5}), SpecError);
  CHECK_THROWS_AS(sys("proper_lift", {.xi = 0.0}), SpecError);
  CHECK_THROWS_AS(sys("proper_lift", {.base = "two_pool_cpmm"}), SpecError);
}

TEST_CASE("candidate invariant formulas") {
  CHECK(sys("uniswap_v2_mprime")->candidate_invariant()->evaluate(State{100, 400, 10}) ==
        doctest::Approx(400));
  CHECK(sys("sushi_admin_fee")->candidate_invariant()->evaluate(State{100, 400, 10}) ==
        doctest::Approx(20));
  CHECK(sys("simplex")->candidate_invariant()->evaluate(State{0.3, 0.7}) == doctest::Approx(0.3));
  CHECK_FALSE(sys("two_pool_cpmm")->candidate_invariant().has_value());
  CHECK(sys("lexicographic")->note() ==
        "no invariant at continuum scale; finite discretizations admit invariants");
}

TEST_CASE("two-pool membership") {
  const auto o = sys("two_pool_cpmm");
  CHECK(member(*o, {8, 2, 1, 9}, {4, 4, 3, 3}));
  CHECK(member(*o, {4, 4, 3, 3}, {8, 2, 1, 9}));
  CHECK_FALSE(member(*o, {8, 2, 1, 9}, {4, 4, 3, 4}));
}

TEST_CASE("sqrt market transitions for both fee levels") {
  for (double c : {0.0, 0.2}) {
    const auto o = sys("sqrt_cfmm", {.fee = c});
    CHECK(member(*o, {4, 16}, {6.8, 4}));
    CHECK(member(*o, {1.7, 1}, {1, 4}));
  }
  // 6.24 + 2 = 8.24 >= 8 with c = 0.2; an extra 0.25 out breaks it
  const auto o = sys("sqrt_cfmm", {.fee = 0.2});
  CHECK_FALSE(member(*o, {4, 16}, {6.8, 3.0}));
}

TEST_CASE("naive lift chain") {
  const auto o = sys("naive_lift", {.fee = 0.2});
  const std::vector<State> chain = {{1.8, 1, 1}, {1, 4, 1}, {4, 16, 4}, {6.8, 4, 4}, {1.7, 1, 1}};
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) CHECK(member(*o, chain[i], chain[i + 1]));
  CHECK(o->default_dominance().dominates(std::span<const double>(chain.front()),
                                         std::span<const double>(chain.back())));
  CHECK_FALSE(o->guided_templates().empty());
}

TEST_CASE("exact lift") {
  const auto cpmm = sys("cpmm_fee");
  const auto lift = lift_with_liquidity(cpmm, 1.0, LiftMode::Exact);
  const auto& k = *lift->candidate_invariant();
  CHECK(k.evaluate(State{100, 100, 10}) == doctest::Approx(100));
  CHECK(k.evaluate(State{200, 200, 20}) == doctest::Approx(k.evaluate(State{100, 100, 10})));
  CHECK(member(*lift, {100, 100, 10}, {200, 200, 20}));
  // per-share swap on the base, supply fixed
  const State y = cpmm_quote(State{10, 10}, 0, 1, FeeSchedule{0.003});
  CHECK(member(*lift, {100, 100, 10}, {10 * y[0], 10 * y[1], 10}));
  CHECK_THROWS_AS(lift_with_liquidity(sys("two_pool_cpmm"), 1.0, LiftMode::Exact), SpecError);
  CHECK_THROWS_AS(lift_with_liquidity(cpmm, -1.0, LiftMode::Exact), SpecError);

  // every lifted move is also a move of the v2 combined system
  const auto v2 = sys("uniswap_v2_mprime");
  State at = {100, 100, 10};
  for (const auto& y : lift->sample_transitions(at, 23, 500)) CHECK(member(*v2, at, y));

  // same K as the v2 share value
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const State x = {rng.uniform(1, 100), rng.uniform(1, 100), rng.uniform(1, 10)};
    CHECK(oracle::rel_close(k.evaluate(x), v2->candidate_invariant()->evaluate(x), 1e-12));
  }
}

TEST_CASE("sushi transitions strictly raise per-share value") {
  const auto o = sys("sushi_admin_fee");
  const auto& k = *o->candidate_invariant();
  std::size_t swaps = 0;
  State x = o->default_start();
  for (const auto& y : o->sample_transitions(x, 17, 1000)) {
    REQUIRE(member(*o, x, y));
    const bool scaling = oracle::rel_close(y[0] / x[0], y[2] / x[2], 1e-12) &&
                         oracle::rel_close(y[1] / x[1], y[2] / x[2], 1e-12);
    if (scaling) continue;
    ++swaps;
    CHECK(k.evaluate(y) > k.evaluate(x));
  }
  CHECK(swaps > 500);
}

TEST_CASE("candidate invariants never decrease along sampled transitions") {
  for (const auto& e : catalog_entries()) {
    const auto o = sys(e.name);
    if (!o->candidate_invariant()) continue;
    const auto& k = *o->candidate_invariant();
    Rng rng(99);
    State x = o->default_start();
    std::size_t equal = 0;
    for (int i = 0; i < 400; ++i) {
      const auto y = o->sample(x, rng);
      if (!y) break;
      CHECK_MESSAGE(member(*o, x, *y), e.name);
      const double kx = k.evaluate(x), ky = k.evaluate(*y);
      CHECK_MESSAGE(ky >= kx - 1e-9 * std::fabs(kx), e.name);
      if (kx == ky) {
        ++equal;
        CHECK_MESSAGE(member(*o, *y, x, 1e-9), e.name);
      }
      x = *y;
    }
    (void)equal;
  }
}

TEST_CASE("four-state oracle matches the finite system") {
  const auto o = sys("four_state_counterexample");
  CHECK(member(*o, {1, 4}, {2, 1}));
  CHECK(member(*o, {2, 2}, {1, 3}));
  CHECK_FALSE(member(*o, {2, 1}, {1, 4}));
  CHECK_FALSE(member(*o, {1, 3}, {2, 2}));
  const auto s = four_state_system();
  CHECK(s.size() == 4);
  CHECK(s.transitions().size() == 2);
}
