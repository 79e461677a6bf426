#include "cfmm/v3.hpp"

#include <cmath>
#include <string>

namespace cfmm {

TickGrid::TickGrid(std::vector<double> ticks) : ticks_(std::move(ticks)) {
  if (ticks_.size() < 2) throw SpecError("tick grid needs at least two ticks");
  for (std::size_t i = 0; i < ticks_.size(); ++i) {
    if (!std::isfinite(ticks_[i]) || ticks_[i] <= 0.0) {
      throw SpecError("ticks must be finite and positive");
    }
    if (i > 0 && !(ticks_[i] > ticks_[i - 1])) {
      throw SpecError("ticks must be strictly increasing");
    }
  }
}

void validate_v3_state(const TickGrid& ticks, const V3State& state) {
  if (state.liquidity.size() != ticks.range_count()) {
    throw DomainError("liquidity vector has " + std::to_string(state.liquidity.size()) +
                      " ranges, ticks define " + std::to_string(ticks.range_count()));
  }
  bool any_positive = false;
  for (double l : state.liquidity) {
    if (!std::isfinite(l) || l < 0.0) throw DomainError("liquidity must be nonnegative");
    any_positive = any_positive || l > 0.0;
  }
  if (!any_positive) throw DomainError("liquidity vector must not be zero");
  if (!(state.root_price >= ticks.lower() && state.root_price <= ticks.upper())) {
    throw DomainError("root-price outside [r_0, r_J]");
  }
}

V3Balances v3_balances(const TickGrid& ticks, const V3State& state) {
  validate_v3_state(ticks, state);
  const std::span<const double> r = ticks.ticks();
  V3Balances out;
  const std::size_t n = ticks.range_count();
  out.x.resize(n);
  out.y.resize(n);
  for (std::size_t j = 1; j <= n; ++j) {
    const double l = state.liquidity[j - 1];
    out.x[j - 1] = range_balance_x(r, j, l, state.root_price);
    out.y[j - 1] = range_balance_y(r, j, l, state.root_price);
  }
  return out;
}

namespace {

void check_weights(std::span<const double> weights, std::span<const double> liquidity,
                   const TickGrid& ticks) {
  if (weights.size() != ticks.range_count() || liquidity.size() != ticks.range_count()) {
    throw DomainError("weights and liquidity must have one entry per range");
  }
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (weights[j] < 0.0) throw DomainError("weights must be nonnegative");
    if (weights[j] > 0.0 && !(liquidity[j] > 0.0)) {
      throw DomainError("positive weight on empty range " + std::to_string(j + 1));
    }
  }
}

}  // namespace

std::pair<double, double> weighted_lp_sums(std::span<const double> weights,
                                           std::span<const double> liquidity, double root_price,
                                           const TickGrid& ticks) {
  check_weights(weights, liquidity, ticks);
  if (!(root_price >= ticks.lower() && root_price <= ticks.upper())) {
    throw DomainError("root-price outside [r_0, r_J]");
  }
  return weighted_sums_by_price(ticks.ticks(), weights, root_price);
}

std::pair<double, double> weighted_holdings_from_balances(std::span<const double> weights,
                                                          const V3State& state,
                                                          const TickGrid& ticks) {
  check_weights(weights, state.liquidity, ticks);
  const V3Balances b = v3_balances(ticks, state);
  double sx = 0.0, sy = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!(weights[j] > 0.0)) continue;
    const double share = weights[j] / state.liquidity[j];
    sx += share * b.x[j];
    sy += share * b.y[j];
  }
  return {sx, sy};
}

namespace {

bool close(double a, double b, double tolerance) {
  return std::fabs(a - b) <= tolerance * std::max({std::fabs(a), std::fabs(b), 1e-300});
}

}  // namespace

bool v3_contains(const TickGrid& ticks, const V3State& from, const V3State& to,
                 double tolerance) {
  if (from.liquidity.size() != ticks.range_count() ||
      to.liquidity.size() != ticks.range_count()) {
    throw TickMismatchError("states do not match the tick grid's range count");
  }
  validate_v3_state(ticks, from);
  validate_v3_state(ticks, to);
  bool same_liquidity = true;
  for (std::size_t j = 0; j < from.liquidity.size(); ++j) {
    if (!close(from.liquidity[j], to.liquidity[j], tolerance)) {
      same_liquidity = false;
      break;
    }
  }
  return same_liquidity || close(from.root_price, to.root_price, tolerance);
}

std::vector<double> flatten(const V3State& state) {
  std::vector<double> out = state.liquidity;
  out.push_back(state.root_price);
  return out;
}

V3State unflatten(std::span<const double> flat) {
  if (flat.size() < 2) throw DomainError("v3 state needs at least one range and a price");
  V3State s;
  s.liquidity.assign(flat.begin(), flat.end() - 1);
  s.root_price = flat.back();
  return s;
}

}  // namespace cfmm
