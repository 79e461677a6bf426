#pragma once

// Stylized concentrated-liquidity (Uniswap v3 style) pool math.
//
// A state is a per-range liquidity vector L (length J) and a root-price R in
// [r_0, r_J]. Range j covers root-prices [r_{j-1}, r_j]. All formulas are
// templated so they can be evaluated both in double and in exact rationals.

#include "cfmm/errors.hpp"

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace cfmm {

/// Strictly increasing positive tick boundaries r_0 < r_1 < ... < r_J, J >= 1.
class TickGrid {
 public:
  /// Throws SpecError unless there are at least two strictly increasing
  /// positive ticks.
  explicit TickGrid(std::vector<double> ticks);

  std::size_t range_count() const { return ticks_.size() - 1; }
  std::span<const double> ticks() const { return ticks_; }
  double lower() const { return ticks_.front(); }
  double upper() const { return ticks_.back(); }

  friend bool operator==(const TickGrid&, const TickGrid&) = default;

 private:
  std::vector<double> ticks_;
};

struct V3State {
  std::vector<double> liquidity;
  double root_price = 0.0;
};

struct V3Balances {
  std::vector<double> x;
  std::vector<double> y;
};

/// Clamp of r onto [lo, hi].
template <class T>
T clamp_range(const T& r, const T& lo, const T& hi) {
  if (r < lo) return lo;
  if (r > hi) return hi;
  return r;
}

/// Asset-1 holding of range j (1-based) with liquidity l at root-price r.
template <class T>
T range_balance_x(std::span<const T> ticks, std::size_t j, const T& l, const T& r) {
  const T c = clamp_range(r, ticks[j - 1], ticks[j]);
  return l * (T(1) / c - T(1) / ticks[j]);
}

template <class T>
T range_balance_y(std::span<const T> ticks, std::size_t j, const T& l, const T& r) {
  const T c = clamp_range(r, ticks[j - 1], ticks[j]);
  return l * (c - ticks[j - 1]);
}

/// Weighted aggregate holdings with the per-range liquidity cancelled:
///   X = sum_j w_j (1/C_j(R) - 1/r_j),  Y = sum_j w_j (C_j(R) - r_{j-1})
/// over ranges with w_j > 0. Depends on R only.
template <class T>
std::pair<T, T> weighted_sums_by_price(std::span<const T> ticks, std::span<const T> weights,
                                       const T& r) {
  T sx(0), sy(0);
  for (std::size_t j = 1; j < ticks.size(); ++j) {
    const T& w = weights[j - 1];
    if (!(w > T(0))) continue;
    const T c = clamp_range(r, ticks[j - 1], ticks[j]);
    sx += w * (T(1) / c - T(1) / ticks[j]);
    sy += w * (c - ticks[j - 1]);
  }
  return {sx, sy};
}

/// Per-range balances x_j(L, R), y_j(L, R).
V3Balances v3_balances(const TickGrid& ticks, const V3State& state);

/// Aggregate holdings of an LP owning w_j of each range's liquidity, after the
/// w_j / L_j cancellation. Throws DomainError when w_j > 0 but L_j = 0, or on
/// mismatched lengths or R outside [r_0, r_J].
std::pair<double, double> weighted_lp_sums(std::span<const double> weights,
                                           std::span<const double> liquidity, double root_price,
                                           const TickGrid& ticks);

/// Same aggregates computed directly from pool balances:
///   sum_j (w_j / L_j) x_j(L, R),  sum_j (w_j / L_j) y_j(L, R).
std::pair<double, double> weighted_holdings_from_balances(std::span<const double> weights,
                                                          const V3State& state,
                                                          const TickGrid& ticks);

/// Throws DomainError unless the state is a valid point of the v3 state space
/// for these ticks (nonnegative, not all zero liquidity; R in range).
void validate_v3_state(const TickGrid& ticks, const V3State& state);

/// One-step membership: a single swap (same L) or a single liquidity
/// operation (same R), with relative tolerance. Throws TickMismatchError on
/// mismatched range counts.
bool v3_contains(const TickGrid& ticks, const V3State& from, const V3State& to,
                 double tolerance = 1e-9);

/// Flat encoding (L_1, ..., L_J, R) used by transition oracles.
std::vector<double> flatten(const V3State& state);
V3State unflatten(std::span<const double> flat);

}  // namespace cfmm
