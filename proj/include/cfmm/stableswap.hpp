#pragma once

// StableSwap invariant D(x): the unique positive root of
//
//   f(D, x) = A n^n sum(x) + D - A D n^n - D^(n+1) / (n^n prod(x))
//
// f(0, x) > 0 and f is strictly decreasing and concave in D whenever
// A > n^-n, so the root is unique and Newton from the right converges
// monotonically. A bisection fallback guards every iterate.

#include <cstddef>
#include <span>

namespace cfmm {

struct StableSwapParams {
  double amplification = 0.0;  // A
  std::size_t coins = 2;       // n

  /// Throws SpecError unless n >= 2 and A > n^-n.
  void validate() const;
};

struct StableSwapRoot {
  double value = 0.0;
  double residual = 0.0;  // f(value, x)
  double scale = 0.0;     // max(1, A n^n sum(x)); residual tolerance is 1e-10 * scale
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::size_t iterations = 0;
  bool used_bisection = false;
};

/// f(D, x). Throws DomainError unless every balance is positive.
double stableswap_residual(double d, std::span<const double> balances,
                           const StableSwapParams& params);

/// Solves for D. Throws DomainError on nonpositive balances and
/// ConvergenceError if the iteration cap (128) is reached.
StableSwapRoot stableswap_solve(std::span<const double> balances, const StableSwapParams& params);

double stableswap_kappa(std::span<const double> balances, const StableSwapParams& params);

/// Balance of coin `index` that puts the pool on the level set D given the
/// other balances (those entries of `balances` are used; `index` is ignored).
double stableswap_balance_for(std::span<const double> balances, std::size_t index, double d,
                              const StableSwapParams& params);

}  // namespace cfmm
