#include "cfmm/stableswap.hpp"

#include "cfmm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cfmm {

namespace {

constexpr std::size_t kMaxIterations = 128;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double pow_n(double base, std::size_t n) {
  double r = 1.0;
  for (std::size_t i = 0; i < n; ++i) r *= base;
  return r;
}

void check_balances(std::span<const double> balances, const StableSwapParams& params) {
  if (balances.size() != params.coins) {
    throw DomainError("expected " + std::to_string(params.coins) + " balances, got " +
                      std::to_string(balances.size()));
  }
  for (double x : balances) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("balances must be positive");
  }
}

struct Eval {
  double f;
  double df;
};

// D^(n+1) / (n^n prod x) is accumulated as D * prod(D / (n x_i)) to keep the
// intermediate values near the scale of D.
Eval evaluate(double d, std::span<const double> x, double ann, double sum) {
  const double n = static_cast<double>(x.size());
  double ratio = 1.0;
  for (double xi : x) ratio *= d / (n * xi);
  const double f = ann * sum + d - ann * d - d * ratio;
  const double df = 1.0 - ann - (n + 1.0) * ratio;
  return {f, df};
}

}  // namespace

void StableSwapParams::validate() const {
  if (coins < 2) throw SpecError("StableSwap needs at least two coins");
  const double floor = 1.0 / pow_n(static_cast<double>(coins), coins);
  if (!(amplification > floor) || !std::isfinite(amplification)) {
    throw SpecError("StableSwap amplification must exceed n^-n");
  }
}

double stableswap_residual(double d, std::span<const double> balances,
                           const StableSwapParams& params) {
  check_balances(balances, params);
  const double ann = params.amplification * pow_n(static_cast<double>(params.coins), params.coins);
  double sum = 0.0;
  for (double x : balances) sum += x;
  return evaluate(d, balances, ann, sum).f;
}

StableSwapRoot stableswap_solve(std::span<const double> balances, const StableSwapParams& params) {
  params.validate();
  check_balances(balances, params);
  const double ann = params.amplification * pow_n(static_cast<double>(params.coins), params.coins);
  double sum = 0.0;
  for (double x : balances) sum += x;

  StableSwapRoot out;
  out.scale = std::max(1.0, ann * sum);

  double lo = 0.0;  // f(0) = ann * sum > 0
  double hi = sum;
  std::size_t grow = 0;
  while (evaluate(hi, balances, ann, sum).f > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 2048 || !std::isfinite(hi)) throw ConvergenceError("failed to bracket D");
  }

  double d = hi;
  for (std::size_t it = 1; it <= kMaxIterations; ++it) {
    out.iterations = it;
    const Eval e = evaluate(d, balances, ann, sum);
    if (e.f == 0.0) {
      lo = hi = d;
      break;
    }
    if (e.f > 0.0) {
      lo = std::max(lo, d);
    } else {
      hi = std::min(hi, d);
    }
    double next = d - e.f / e.df;
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);
      out.used_bisection = true;
    }
    const bool converged = std::fabs(next - d) <= 4.0 * kEps * d || hi - lo <= 4.0 * kEps * hi;
    d = next;
    if (converged) break;
    if (it == kMaxIterations) {
      throw ConvergenceError("StableSwap D did not converge; bracket [" + std::to_string(lo) +
                             ", " + std::to_string(hi) + "]");
    }
  }

  out.value = d;
  out.residual = evaluate(d, balances, ann, sum).f;
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  return out;
}

double stableswap_kappa(std::span<const double> balances, const StableSwapParams& params) {
  return stableswap_solve(balances, params).value;
}

double stableswap_balance_for(std::span<const double> balances, std::size_t index, double d,
                              const StableSwapParams& params) {
  params.validate();
  if (balances.size() != params.coins || index >= params.coins) {
    throw DomainError("balance index out of range");
  }
  if (!(d > 0.0)) throw DomainError("target D must be positive");
  const double n = static_cast<double>(params.coins);
  const double ann = params.amplification * pow_n(n, params.coins);

  // With y the unknown balance, y * f(D, x) = 0 is the quadratic
  //   ann y^2 + b y - c = 0,  b = ann S' + D (1 - ann),  c = D^(n+1) / (n^n P').
  double others = 0.0;
  double c = d;
  for (std::size_t i = 0; i < balances.size(); ++i) {
    if (i == index) continue;
    if (!(balances[i] > 0.0)) throw DomainError("balances must be positive");
    others += balances[i];
    c *= d / (n * balances[i]);
  }
  c *= d / n;
  const double b = ann * others + d * (1.0 - ann);
  const double disc = std::sqrt(b * b + 4.0 * ann * c);
  double y = b >= 0.0 ? 2.0 * c / (b + disc) : (disc - b) / (2.0 * ann);

  // One Newton polish on g(y) = ann y^2 + b y - c.
  const double g = (ann * y + b) * y - c;
  const double dg = 2.0 * ann * y + b;
  if (dg > 0.0) {
    const double polished = y - g / dg;
    if (polished > 0.0) y = polished;
  }
  return y;
}

}  // namespace cfmm
