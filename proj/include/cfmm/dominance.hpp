#pragma once

// Dominance orders: strict partial orders on states saying when one state is
// "worse" than another. Reaching a dominated state is arbitrage.
//
// Every shipped order is the pullback of the strict Pareto order through an
// exact projection of the state (the state itself, per-share balances, pooled
// sums, ...). Projections are computed in exact rational arithmetic on the
// given coordinates, so doubles are compared without any epsilon.

#include "cfmm/rational.hpp"
#include "cfmm/v3.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cfmm {

enum class DominanceKind { Pareto, ParetoPerShare, SumOfPairs, ComponentPair, WeightedLP };

const char* to_string(DominanceKind kind);
DominanceKind dominance_kind_from_string(std::string_view name);

/// a >= b componentwise with at least one strict inequality.
bool pareto_strict(std::span<const Rational> a, std::span<const Rational> b);

class DominanceOrder {
 public:
  /// x D y iff x_i >= y_i for all i and x != y.
  static DominanceOrder pareto();
  /// Last coordinate is the LP supply; compares x_i / x_l. Requires x_l > 0.
  static DominanceOrder pareto_per_share();
  /// Compares sums of coordinates over each group; the default grouping is the
  /// two-pool layout {x1 + x3, x2 + x4}.
  static DominanceOrder sum_of_pairs(std::vector<std::vector<std::size_t>> groups = {{0, 2},
                                                                                     {1, 3}});
  /// Compares coordinates i and j only (0-based).
  static DominanceOrder component_pair(std::size_t i, std::size_t j);
  /// LP-weighted holdings across concentrated-liquidity ranges; states are
  /// flat (L_1, ..., L_J, R). Throws SpecError if w is zero, negative or of
  /// the wrong length.
  static DominanceOrder weighted_lp(std::vector<double> weights, TickGrid ticks);

  DominanceKind kind() const { return kind_; }
  const std::vector<std::vector<std::size_t>>& groups() const { return groups_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::optional<TickGrid>& ticks() const { return ticks_; }

  /// Exact key whose strict Pareto order is this order. Throws DomainError
  /// when the state is outside the order's domain.
  RationalVector project(std::span<const Rational> x) const;
  RationalVector project(std::span<const double> x) const;

  bool dominates(std::span<const Rational> x, std::span<const Rational> y) const;
  bool dominates(std::span<const double> x, std::span<const double> y) const;

  friend bool operator==(const DominanceOrder&, const DominanceOrder&) = default;

 private:
  explicit DominanceOrder(DominanceKind kind) : kind_(kind) {}

  DominanceKind kind_;
  std::vector<std::vector<std::size_t>> groups_;
  std::vector<double> weights_;
  std::optional<TickGrid> ticks_;
};

struct OrderViolation {
  enum class Kind { Irreflexivity, Asymmetry, Transitivity };
  Kind kind;
  std::size_t a = 0, b = 0, c = 0;
};

const char* to_string(OrderViolation::Kind kind);

struct PropertyReport {
  std::size_t samples = 0;
  std::size_t checks = 0;
  std::vector<OrderViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Exhaustive irreflexivity / asymmetry / transitivity check of `dominates`
/// over all singles, pairs and triples of the sample. Reports at most
/// `max_reports` violations, each with concrete sample indices.
template <class State, class Pred>
PropertyReport check_strict_partial_order(Pred&& dominates, std::span<const State> states,
                                          std::size_t max_reports = 16) {
  PropertyReport report;
  report.samples = states.size();
  const std::size_t n = states.size();
  std::vector<std::uint8_t> rel(n * n, 0);
  auto record = [&](OrderViolation v) {
    if (report.violations.size() < max_reports) report.violations.push_back(v);
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      rel[i * n + j] = dominates(states[i], states[j]) ? 1 : 0;
      ++report.checks;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (rel[i * n + i]) record({OrderViolation::Kind::Irreflexivity, i, i, i});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rel[i * n + j] && rel[j * n + i]) record({OrderViolation::Kind::Asymmetry, i, j, i});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!rel[i * n + j]) continue;
      for (std::size_t k = 0; k < n; ++k) {
        ++report.checks;
        if (rel[j * n + k] && !rel[i * n + k]) {
          record({OrderViolation::Kind::Transitivity, i, j, k});
        }
      }
    }
  }
  return report;
}

}  // namespace cfmm
