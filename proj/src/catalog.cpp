#include "cfmm/catalog.hpp"

#include "cfmm/errors.hpp"
#include "cfmm/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace cfmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Domain = std::function<bool(std::span<const double>)>;
using Member = std::function<bool(std::span<const double>, std::span<const double>, double)>;
using Sampler = std::function<std::optional<State>(std::span<const double>, Rng&)>;

class FunctionalOracle final : public MarketOracle {
 public:
  FunctionalOracle(std::string name, std::size_t dimension, DominanceOrder dominance, State start)
      : MarketOracle(std::move(name), dimension, std::move(dominance), std::move(start)) {}

  Domain domain;
  Member member;
  Sampler sampler;

  void set_candidate(std::string formula, std::function<double(std::span<const double>)> f) {
    candidate_ = CandidateInvariant{std::move(formula), std::move(f)};
  }
  void add_template(std::vector<State> chain) { templates_.push_back(std::move(chain)); }
  void set_note(std::string note) { note_ = std::move(note); }

  bool in_domain(std::span<const double> x) const override {
    return x.size() == dimension_ && domain(x);
  }
  bool contains(std::span<const double> x, std::span<const double> y,
                double tolerance) const override {
    return in_domain(x) && in_domain(y) && member(x, y, tolerance);
  }
  std::optional<State> sample(std::span<const double> x, Rng& rng) const override {
    if (!in_domain(x)) throw DomainError(name_ + ": sampling from a state outside the domain");
    return sampler(x, rng);
  }
};

bool all_positive(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return v > 0.0 && v < kInf; });
}

bool geq_relative(double a, double b, double tolerance) {
  return a >= b - tolerance * std::max(std::fabs(a), std::fabs(b));
}

State to_state(std::span<const double> x) { return State(x.begin(), x.end()); }

/// y = alpha x for some alpha > 0, judged against the last coordinate.
bool is_scaling(std::span<const double> x, std::span<const double> y, double tolerance) {
  const double alpha = y.back() / x.back();
  if (!(alpha > 0.0)) return false;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (!close_relative(y[i], alpha * x[i], tolerance)) return false;
  }
  return true;
}

/// alpha (x, x_l) with each balance rounded up until y_i / y_l >= x_i / x_l
/// holds exactly, so roundoff never leaves a scaled state worse per share.
State scale_in_pool_favour(std::span<const double> x, double alpha) {
  State y(x.size());
  const std::size_t l = x.size() - 1;
  y[l] = alpha * x[l];
  const Rational xl = to_rational(x[l]);
  const Rational yl = to_rational(y[l]);
  for (std::size_t i = 0; i < l; ++i) {
    y[i] = alpha * x[i];
    const Rational target = to_rational(x[i]) * yl;
    while (to_rational(y[i]) * xl < target) y[i] = std::nextafter(y[i], kInf);
  }
  return y;
}

double draw_swap_fraction(Rng& rng) { return rng.log_uniform(1e-3, 1.0); }
double draw_gift_fraction(Rng& rng) { return rng.log_uniform(1e-3, 0.1); }
double draw_alpha(Rng& rng) { return rng.log_uniform(0.5, 2.0); }

void gift(State& y, std::size_t coordinate, Rng& rng) {
  y[coordinate] += draw_gift_fraction(rng) * y[coordinate];
}

/// Fee-adjusted product (y1 - phi1)(y2 - phi2) of the first two coordinates.
double fee_product(std::span<const double> x, std::span<const double> y, const FeeSchedule& fee) {
  return (y[0] - fee.phi(x[0], y[0])) * (y[1] - fee.phi(x[1], y[1]));
}

State cpmm_random_swap(std::span<const double> x, const FeeSchedule& fee, Rng& rng) {
  const std::size_t in = rng.index(2);
  State y = cpmm_quote(x.subspan(0, 2), in, draw_swap_fraction(rng) * x[in], fee);
  for (std::size_t i = 2; i < x.size(); ++i) y.push_back(x[i]);
  return y;
}

double sqrt_cfmm_value(std::span<const double> x) { return x[0] + std::sqrt(x[1]); }

double cpmm_product(std::span<const double> x) { return x[0] * x[1]; }

const std::vector<State> kNaiveChain = {
    {1.8, 1, 1}, {1, 4, 1}, {4, 16, 4}, {6.8, 4, 4}, {1.7, 1, 1}};

// ---------------------------------------------------------------------------

std::shared_ptr<FunctionalOracle> make_cpmm_fee(const FeeSchedule& fee) {
  auto o = std::make_shared<FunctionalOracle>("cpmm_fee", 2, DominanceOrder::pareto(),
                                              State{100, 100});
  o->domain = all_positive;
  o->member = [fee](auto x, auto y, double tol) {
    return close_relative(fee_product(x, y, fee), x[0] * x[1], tol);
  };
  o->sampler = [fee](auto x, Rng& rng) -> std::optional<State> {
    return cpmm_random_swap(x, fee, rng);
  };
  o->set_candidate("x1 * x2", cpmm_product);
  return o;
}

double v2_share_value(std::span<const double> x) { return x[0] * x[1] / (x[2] * x[2]); }

std::shared_ptr<FunctionalOracle> make_v2_full(const FeeSchedule& fee) {
  auto o = std::make_shared<FunctionalOracle>("uniswap_v2_full", 3,
                                              DominanceOrder::pareto_per_share(),
                                              State{100, 100, 10});
  o->domain = all_positive;
  o->member = [fee](auto x, auto y, double tol) {
    const bool same_supply = close_relative(x[2], y[2], tol);
    if (same_supply && close_relative(fee_product(x, y, fee), x[0] * x[1], tol)) return true;
    if (is_scaling(x, y, tol)) return true;
    if (same_supply && y[0] > x[0] && close_relative(y[1], x[1], tol)) return true;
    return same_supply && y[1] > x[1] && close_relative(y[0], x[0], tol);
  };
  o->sampler = [fee](auto x, Rng& rng) -> std::optional<State> {
    const std::size_t move = rng.index(4);
    if (move <= 1) return cpmm_random_swap(x, fee, rng);
    if (move == 2) return scale_in_pool_favour(x, draw_alpha(rng));
    State y = to_state(x);
    gift(y, rng.index(2), rng);
    return y;
  };
  o->set_candidate("x1 * x2 / x_l^2", v2_share_value);
  return o;
}

std::shared_ptr<FunctionalOracle> make_v2_mprime(const FeeSchedule& fee) {
  auto o = std::make_shared<FunctionalOracle>("uniswap_v2_mprime", 3,
                                              DominanceOrder::pareto_per_share(),
                                              State{100, 100, 10});
  o->domain = all_positive;
  o->member = [fee](auto x, auto y, double tol) {
    if (is_scaling(x, y, tol)) return true;
    return close_relative(x[2], y[2], tol) && geq_relative(fee_product(x, y, fee), x[0] * x[1], tol);
  };
  o->sampler = [fee](auto x, Rng& rng) -> std::optional<State> {
    const std::size_t move = rng.index(4);
    if (move == 0) return scale_in_pool_favour(x, draw_alpha(rng));
    State y = move == 3 ? to_state(x) : cpmm_random_swap(x, fee, rng);
    if (move >= 2) gift(y, rng.index(2), rng);
    return y;
  };
  o->set_candidate("x1 * x2 / x_l^2", v2_share_value);
  return o;
}

std::shared_ptr<FunctionalOracle> make_sushi(const FeeSchedule& fee) {
  auto o = std::make_shared<FunctionalOracle>("sushi_admin_fee", 3,
                                              DominanceOrder::pareto_per_share(),
                                              State{100, 100, 10});
  o->domain = all_positive;
  o->member = [fee](auto x, auto y, double tol) {
    if (is_scaling(x, y, tol)) return true;
    return geq_relative(fee_product(x, y, fee), x[0] * x[1], tol) &&
           close_relative(y[2], sushi_mint(x.subspan(0, 2), x[2], y.subspan(0, 2)), tol);
  };
  o->sampler = [fee](auto x, Rng& rng) -> std::optional<State> {
    const std::size_t move = rng.index(4);
    if (move == 0) return scale_in_pool_favour(x, draw_alpha(rng));
    State y = move == 3 ? to_state(x) : cpmm_random_swap(x, fee, rng);
    if (move >= 2) gift(y, rng.index(2), rng);
    y[2] = sushi_mint(x.subspan(0, 2), x[2], std::span<const double>(y).subspan(0, 2));
    return y;
  };
  o->set_candidate("sqrt(x1 * x2) / x_l",
                   [](std::span<const double> x) { return std::sqrt(x[0] * x[1]) / x[2]; });
  return o;
}

std::shared_ptr<FunctionalOracle> make_stableswap(const StableSwapParams& params) {
  auto o = std::make_shared<FunctionalOracle>("stableswap", params.coins, DominanceOrder::pareto(),
                                              State(params.coins, 100.0));
  o->domain = all_positive;
  o->member = [params](auto x, auto y, double tol) {
    return geq_relative(stableswap_kappa(y, params), stableswap_kappa(x, params), tol);
  };
  o->sampler = [params](auto x, Rng& rng) -> std::optional<State> {
    State y = to_state(x);
    if (rng.bernoulli(0.3)) {
      gift(y, rng.index(y.size()), rng);
      return y;
    }
    const std::size_t in = rng.index(y.size());
    std::size_t out = rng.index(y.size() - 1);
    if (out >= in) ++out;
    const double d = stableswap_kappa(x, params);
    y[in] += draw_swap_fraction(rng) * y[in];
    y[out] = stableswap_balance_for(y, out, d, params);
    return y;
  };
  o->set_candidate("StableSwap D(x)", [params](std::span<const double> x) {
    return stableswap_kappa(x, params);
  });
  return o;
}

void two_pool_swap(State& y, std::size_t first, Rng& rng) {
  const std::size_t in = first + rng.index(2);
  const std::size_t out = in == first ? first + 1 : first;
  const double product = y[first] * y[first + 1];
  y[in] += draw_swap_fraction(rng) * y[in];
  y[out] = product / y[in];
}

std::shared_ptr<FunctionalOracle> make_two_pool() {
  auto o = std::make_shared<FunctionalOracle>("two_pool_cpmm", 4, DominanceOrder::sum_of_pairs(),
                                              State{8, 2, 1, 9});
  o->domain = all_positive;
  o->member = [](auto x, auto y, double tol) {
    return close_relative(y[0] * y[1], x[0] * x[1], tol) &&
           close_relative(y[2] * y[3], x[2] * x[3], tol);
  };
  o->sampler = [](auto x, Rng& rng) -> std::optional<State> {
    State y = to_state(x);
    const std::size_t pools = rng.index(3);
    if (pools != 1) two_pool_swap(y, 0, rng);
    if (pools != 0) two_pool_swap(y, 2, rng);
    return y;
  };
  o->add_template({{8, 2, 1, 9}, {4, 4, 3, 3}});
  return o;
}

std::shared_ptr<FunctionalOracle> make_v3(const TickGrid& ticks, std::vector<double> weights) {
  const std::size_t j = ticks.range_count();
  State start(j, 1.0);
  start.push_back(std::sqrt(ticks.lower() * ticks.upper()));
  auto o = std::make_shared<FunctionalOracle>(
      "uniswap_v3", j + 1, DominanceOrder::weighted_lp(std::move(weights), ticks), start);
  o->domain = [ticks](std::span<const double> x) {
    try {
      validate_v3_state(ticks, unflatten(x));
      return true;
    } catch (const DomainError&) {
      return false;
    }
  };
  o->member = [ticks](auto x, auto y, double tol) {
    return v3_contains(ticks, unflatten(x), unflatten(y), tol);
  };
  o->sampler = [ticks](auto x, Rng& rng) -> std::optional<State> {
    State y = to_state(x);
    const std::size_t ranges = ticks.range_count();
    if (rng.bernoulli(0.5)) {
      const auto t = ticks.ticks();
      y[ranges] = rng.bernoulli(0.05) ? t[rng.index(t.size())]
                                      : std::min(rng.uniform(ticks.lower(), ticks.upper()),
                                                 ticks.upper());
      return y;
    }
    double mean = 0.0;
    std::size_t positive = 0;
    for (std::size_t i = 0; i < ranges; ++i) {
      if (y[i] > 0.0) {
        mean += y[i];
        ++positive;
      }
    }
    mean /= static_cast<double>(positive);
    const std::size_t forced = rng.index(ranges);
    for (std::size_t i = 0; i < ranges; ++i) {
      const bool touch = rng.bernoulli(0.5);
      if (!touch && i != forced) continue;
      if (y[i] > 0.0) {
        y[i] *= draw_alpha(rng);
      } else if (rng.bernoulli(0.5)) {
        y[i] = mean * draw_alpha(rng);
      }
    }
    return y;
  };
  return o;
}

std::shared_ptr<FunctionalOracle> make_sqrt_cfmm(const FeeSchedule& fee) {
  auto o = std::make_shared<FunctionalOracle>("sqrt_cfmm", 2, DominanceOrder::pareto(),
                                              State{1.8, 1});
  o->domain = all_positive;
  o->member = [fee](auto x, auto y, double tol) {
    const double lhs = y[0] - fee.phi(x[0], y[0]) + std::sqrt(y[1] - fee.phi(x[1], y[1]));
    return geq_relative(lhs, sqrt_cfmm_value(x), tol);
  };
  o->sampler = [fee](auto x, Rng& rng) -> std::optional<State> {
    State y = to_state(x);
    if (rng.bernoulli(0.3)) {
      gift(y, rng.index(2), rng);
      return y;
    }
    const double keep = 1.0 - rng.log_uniform(1e-3, 0.99);
    const double net = 1.0 - fee.rate;
    const double root = std::sqrt(x[1]);
    if (rng.bernoulli(0.5)) {
      // Asset 1 in, asset 2 out.
      y[1] = x[1] * keep;
      y[0] = x[0] + (root - std::sqrt(y[1])) / net;
    } else {
      // Asset 2 in, asset 1 out.
      y[0] = x[0] * keep;
      const double gain = x[0] - y[0];
      y[1] = x[1] + ((root + gain) * (root + gain) - x[1]) / net;
    }
    return y;
  };
  o->set_candidate("x1 + sqrt(x2)", sqrt_cfmm_value);
  return o;
}

std::shared_ptr<FunctionalOracle> make_lexicographic() {
  auto o = std::make_shared<FunctionalOracle>("lexicographic", 2, DominanceOrder::pareto(),
                                              State{0.5, 0.5});
  o->domain = [](std::span<const double> x) {
    return x[0] >= 0.0 && x[0] <= 1.0 && x[1] >= 0.0 && x[1] <= 1.0;
  };
  o->member = [](auto x, auto y, double) {
    return y[1] > x[1] || (y[1] == x[1] && y[0] > x[0]);
  };
  o->sampler = [](auto x, Rng& rng) -> std::optional<State> {
    if (x[1] < 1.0 && (x[0] >= 1.0 || rng.bernoulli(0.5))) {
      const double y1 = x[1] + (1.0 - x[1]) * (1.0 - rng.uniform());
      if (y1 > x[1] && y1 <= 1.0) return State{rng.uniform(), y1};
    }
    if (x[0] < 1.0) {
      const double y0 = x[0] + (1.0 - x[0]) * (1.0 - rng.uniform());
      if (y0 > x[0] && y0 <= 1.0) return State{y0, x[1]};
    }
    return std::nullopt;
  };
  o->set_note("no invariant at continuum scale; finite discretizations admit invariants");
  return o;
}

std::shared_ptr<FunctionalOracle> make_four_state() {
  auto o = std::make_shared<FunctionalOracle>("four_state_counterexample", 2,
                                              DominanceOrder::pareto(), State{1, 4});
  static const std::vector<State> states = {{1, 3}, {1, 4}, {2, 1}, {2, 2}};
  static const std::map<State, State> next = {{{1, 4}, {2, 1}}, {{2, 2}, {1, 3}}};
  o->domain = [](std::span<const double> x) {
    return std::find(states.begin(), states.end(), to_state(x)) != states.end();
  };
  o->member = [](auto x, auto y, double) {
    auto it = next.find(to_state(x));
    return it != next.end() && it->second == to_state(y);
  };
  o->sampler = [](auto x, Rng&) -> std::optional<State> {
    auto it = next.find(to_state(x));
    if (it == next.end()) return std::nullopt;
    return it->second;
  };
  o->set_note("finite system; see four_state_system() for the exact form");
  return o;
}

std::shared_ptr<FunctionalOracle> make_simplex() {
  auto o = std::make_shared<FunctionalOracle>("simplex", 2, DominanceOrder::pareto(),
                                              State{0.5, 0.5});
  o->domain = [](std::span<const double> x) {
    return x[0] >= 0.0 && x[1] >= 0.0 && std::fabs(x[0] + x[1] - 1.0) <= 1e-12;
  };
  o->member = [](auto x, auto y, double) { return y[0] > x[0]; };
  o->sampler = [](auto x, Rng& rng) -> std::optional<State> {
    if (x[0] >= 1.0) return std::nullopt;
    const double y0 = x[0] + (1.0 - x[0]) * (1.0 - rng.uniform());
    if (!(y0 > x[0]) || y0 > 1.0) return std::nullopt;
    return State{y0, 1.0 - y0};
  };
  o->set_candidate("x1", [](std::span<const double> x) { return x[0]; });
  return o;
}

// ---------------------------------------------------------------------------

State per_share(std::span<const double> x, double xi) {
  const std::size_t l = x.size() - 1;
  State z(l);
  for (std::size_t i = 0; i < l; ++i) z[i] = xi * x[i] / x[l];
  return z;
}

State lifted_scaling(std::span<const double> x, Rng& rng) {
  return scale_in_pool_favour(x, draw_alpha(rng));
}

double xi_param(const CatalogParams& params) {
  const double xi = params.xi.value_or(1.0);
  if (!(xi > 0.0) || !std::isfinite(xi)) throw SpecError("xi must be positive");
  return xi;
}

}  // namespace

bool close_relative(double a, double b, double tolerance) {
  if (a == b) return true;
  return std::fabs(a - b) <= tolerance * std::max(std::fabs(a), std::fabs(b));
}

void FeeSchedule::validate() const {
  if (!(rate >= 0.0 && rate < 1.0)) throw SpecError("fee must be in [0, 1)");
}

std::vector<State> MarketOracle::sample_transitions(std::span<const double> x, std::uint64_t seed,
                                                    std::size_t count) const {
  Rng rng(seed);
  std::vector<State> out;
  for (std::size_t i = 0; i < count; ++i) {
    auto y = sample(x, rng);
    if (!y) break;
    out.push_back(std::move(*y));
  }
  return out;
}

State cpmm_quote(std::span<const double> x, std::size_t asset_in, double amount_in,
                 const FeeSchedule& fee) {
  if (x.size() != 2) throw DomainError("cpmm_quote expects two balances");
  if (!all_positive(x)) throw DomainError("cpmm_quote: balances must be positive");
  if (asset_in > 1) throw DomainError("cpmm_quote: asset index must be 0 or 1");
  if (!(amount_in >= 0.0) || !std::isfinite(amount_in)) {
    throw DomainError("cpmm_quote: amount must be nonnegative");
  }
  fee.validate();
  const std::size_t out = 1 - asset_in;
  State y(2);
  y[asset_in] = x[asset_in] + amount_in;
  y[out] = x[0] * x[1] / (x[asset_in] + (1.0 - fee.rate) * amount_in);
  return y;
}

double sushi_mint(std::span<const double> x, double supply, std::span<const double> y) {
  if (x.size() != 2 || y.size() != 2) throw DomainError("sushi_mint expects two balances");
  if (!all_positive(x) || !all_positive(y) || !(supply > 0.0)) {
    throw DomainError("sushi_mint: inputs must be positive");
  }
  const double ky = std::sqrt(y[0] * y[1]);
  const double kx = std::sqrt(x[0] * x[1]);
  return 6.0 * ky / (5.0 * ky + kx) * supply;
}

const char* to_string(LiftMode mode) {
  return mode == LiftMode::Exact ? "exact" : "inequality";
}

OraclePtr lift_with_liquidity(OraclePtr base, double xi, LiftMode mode) {
  if (!(xi > 0.0) || !std::isfinite(xi)) throw SpecError("xi must be positive");
  if (!base->candidate_invariant()) {
    throw SpecError("lift requires a base system with a candidate invariant");
  }
  const auto kappa = base->candidate_invariant()->evaluate;
  State start = base->default_start();
  start.push_back(xi);
  auto o = std::make_shared<FunctionalOracle>("proper_lift", base->dimension() + 1,
                                              DominanceOrder::pareto_per_share(), start);
  o->domain = [base](std::span<const double> x) {
    return x.back() > 0.0 && x.back() < kInf && base->in_domain(per_share(x, 1.0));
  };
  if (mode == LiftMode::Exact) {
    o->member = [base, xi](auto x, auto y, double tol) {
      if (is_scaling(x, y, tol)) return true;
      return close_relative(x.back(), y.back(), tol) &&
             base->contains(per_share(x, xi), per_share(y, xi), tol);
    };
    o->sampler = [base, xi](auto x, Rng& rng) -> std::optional<State> {
      if (rng.bernoulli(0.3)) return lifted_scaling(x, rng);
      auto z = base->sample(per_share(x, xi), rng);
      if (!z) return lifted_scaling(x, rng);
      State y = *z;
      for (double& v : y) v = v * x.back() / xi;
      y.push_back(x.back());
      return y;
    };
  } else {
    o->member = [kappa, xi](auto x, auto y, double tol) {
      if (is_scaling(x, y, tol)) return true;
      return geq_relative(kappa(per_share(y, xi)), kappa(per_share(x, xi)), tol);
    };
    o->sampler = [base, xi](auto x, Rng& rng) -> std::optional<State> {
      if (rng.bernoulli(0.3)) return lifted_scaling(x, rng);
      auto z = base->sample(per_share(x, xi), rng);
      State y = z ? *z : per_share(x, xi);
      for (double& v : y) v = v * x.back() / xi;
      gift(y, rng.index(y.size()), rng);
      y.push_back(x.back());
      return y;
    };
  }
  o->set_candidate("kappa(xi * x / x_l), kappa = " + base->candidate_invariant()->formula,
                   [kappa, xi](std::span<const double> x) { return kappa(per_share(x, xi)); });
  return o;
}

OraclePtr naive_lift(OraclePtr base) {
  State start = base->default_start();
  start.push_back(1.0);
  auto o = std::make_shared<FunctionalOracle>("naive_lift", base->dimension() + 1,
                                              DominanceOrder::pareto_per_share(), start);
  const std::size_t m = base->dimension();
  o->domain = [base, m](std::span<const double> x) {
    return x.back() > 0.0 && x.back() < kInf && base->in_domain(x.subspan(0, m));
  };
  o->member = [base, m](auto x, auto y, double tol) {
    if (is_scaling(x, y, tol)) return true;
    return close_relative(x.back(), y.back(), tol) &&
           base->contains(x.subspan(0, m), y.subspan(0, m), tol);
  };
  o->sampler = [base, m](auto x, Rng& rng) -> std::optional<State> {
    if (rng.bernoulli(0.3)) return lifted_scaling(x, rng);
    auto z = base->sample(x.subspan(0, m), rng);
    if (!z) return lifted_scaling(x, rng);
    State y = *z;
    y.push_back(x.back());
    return y;
  };
  if (base->name() == "sqrt_cfmm") o->add_template(kNaiveChain);
  return o;
}

FiniteMarketSystem four_state_system() {
  std::vector<RationalVector> states = {
      {Rational(1), Rational(3)}, {Rational(1), Rational(4)},
      {Rational(2), Rational(1)}, {Rational(2), Rational(2)}};
  return FiniteMarketSystem(std::move(states), {{1, 2}, {3, 0}});
}

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"cpmm_fee", "constant product with a proportional input fee; K = x1 x2"},
      {"uniswap_v2_full", "constant product with fees, scaling LP operations and gifts; "
                          "K = x1 x2 / x_l^2"},
      {"uniswap_v2_mprime", "combined swap-and-gift form of uniswap_v2_full; K = x1 x2 / x_l^2"},
      {"sushi_admin_fee", "constant product whose admin fee is minted as LP shares; "
                          "K = sqrt(x1 x2) / x_l"},
      {"stableswap", "StableSwap pool M(x) = {y : D(y) >= D(x)}; K = D"},
      {"two_pool_cpmm", "two independent constant-product pools on the same assets; "
                        "arbitrage under pooled sums"},
      {"uniswap_v3", "concentrated liquidity over tick ranges; state (L_1..L_J, R)"},
      {"sqrt_cfmm", "x1 + sqrt(x2) market with fee c; K = x1 + sqrt(x2)"},
      {"naive_lift", "LP shares added to a base market without per-share rescaling"},
      {"proper_lift", "LP shares added to a base market by per-share rescaling"},
      {"lexicographic", "lexicographic order on [0,1]^2"},
      {"four_state_counterexample", "four states, arbitrage-free without an increasing "
                                    "invariant"},
      {"simplex", "x1 + x2 = 1 with M(x) = {y : y1 > x1}; K = x1"},
  };
  return entries;
}

OraclePtr make_system(const CatalogSpec& spec) {
  const CatalogParams& p = spec.params;
  auto fee_with_default = [&](double fallback) {
    FeeSchedule fee{p.fee.value_or(fallback)};
    fee.validate();
    return fee;
  };
  const std::string& name = spec.system;
  if (name == "cpmm_fee") return make_cpmm_fee(fee_with_default(0.003));
  if (name == "uniswap_v2_full") return make_v2_full(fee_with_default(0.003));
  if (name == "uniswap_v2_mprime") return make_v2_mprime(fee_with_default(0.003));
  if (name == "sushi_admin_fee") return make_sushi(fee_with_default(0.003));
  if (name == "stableswap") {
    StableSwapParams params{p.amplification.value_or(10.0), p.coins.value_or(2)};
    params.validate();
    return make_stableswap(params);
  }
  if (name == "two_pool_cpmm") return make_two_pool();
  if (name == "uniswap_v3") {
    TickGrid ticks(p.ticks.value_or(std::vector<double>{1, 2, 3}));
    std::vector<double> weights = p.weights.value_or(std::vector<double>(ticks.range_count(), 1.0));
    return make_v3(ticks, std::move(weights));
  }
  if (name == "sqrt_cfmm") return make_sqrt_cfmm(fee_with_default(0.2));
  if (name == "naive_lift" || name == "proper_lift") {
    CatalogSpec base_spec{p.base.value_or("sqrt_cfmm"), p};
    base_spec.params.base.reset();
    if (base_spec.system == "naive_lift" || base_spec.system == "proper_lift") {
      throw SpecError("lift base must not itself be a lift");
    }
    OraclePtr base = make_system(base_spec);
    if (name == "naive_lift") return naive_lift(base);
    const std::string mode = p.mode.value_or("exact");
    if (mode != "exact" && mode != "inequality") {
      throw SpecError("lift mode must be \"exact\" or \"inequality\"");
    }
    return lift_with_liquidity(base, xi_param(p),
                               mode == "exact" ? LiftMode::Exact : LiftMode::Inequality);
  }
  if (name == "lexicographic") return make_lexicographic();
  if (name == "four_state_counterexample") return make_four_state();
  if (name == "simplex") return make_simplex();
  throw SpecError("unknown system \"" + name + "\"");
}

}  // namespace cfmm
