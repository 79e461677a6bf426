#include "cfmm/dominance.hpp"

#include "cfmm/errors.hpp"

#include <algorithm>
#include <string>

namespace cfmm {

const char* to_string(DominanceKind kind) {
  switch (kind) {
    case DominanceKind::Pareto: return "pareto";
    case DominanceKind::ParetoPerShare: return "pareto-per-share";
    case DominanceKind::SumOfPairs: return "sum-of-pairs";
    case DominanceKind::ComponentPair: return "component-pair";
    case DominanceKind::WeightedLP: return "weighted-lp";
  }
  return "?";
}

DominanceKind dominance_kind_from_string(std::string_view name) {
  for (auto k : {DominanceKind::Pareto, DominanceKind::ParetoPerShare, DominanceKind::SumOfPairs,
                 DominanceKind::ComponentPair, DominanceKind::WeightedLP}) {
    if (name == to_string(k)) return k;
  }
  throw SpecError("unknown dominance kind: " + std::string(name));
}

const char* to_string(OrderViolation::Kind kind) {
  switch (kind) {
    case OrderViolation::Kind::Irreflexivity: return "irreflexivity";
    case OrderViolation::Kind::Asymmetry: return "asymmetry";
    case OrderViolation::Kind::Transitivity: return "transitivity";
  }
  return "?";
}

bool pareto_strict(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw DomainError("dominance keys differ in length");
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strict = true;
  }
  return strict;
}

DominanceOrder DominanceOrder::pareto() { return DominanceOrder(DominanceKind::Pareto); }

DominanceOrder DominanceOrder::pareto_per_share() {
  return DominanceOrder(DominanceKind::ParetoPerShare);
}

DominanceOrder DominanceOrder::sum_of_pairs(std::vector<std::vector<std::size_t>> groups) {
  if (groups.empty()) throw SpecError("sum-of-pairs needs at least one group");
  for (const auto& g : groups) {
    if (g.empty()) throw SpecError("sum-of-pairs groups must be nonempty");
  }
  DominanceOrder d(DominanceKind::SumOfPairs);
  d.groups_ = std::move(groups);
  return d;
}

DominanceOrder DominanceOrder::component_pair(std::size_t i, std::size_t j) {
  if (i == j) throw SpecError("component-pair needs two distinct coordinates");
  DominanceOrder d(DominanceKind::ComponentPair);
  d.groups_ = {{i}, {j}};
  return d;
}

DominanceOrder DominanceOrder::weighted_lp(std::vector<double> weights, TickGrid ticks) {
  if (weights.size() != ticks.range_count()) {
    throw SpecError("weighted-lp needs one weight per tick range");
  }
  bool any_positive = false;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw SpecError("weights must be finite and >= 0");
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) throw SpecError("weighted-lp needs a nonzero weight vector");
  DominanceOrder d(DominanceKind::WeightedLP);
  d.weights_ = std::move(weights);
  d.ticks_ = std::move(ticks);
  return d;
}

RationalVector DominanceOrder::project(std::span<const double> x) const {
  const RationalVector exact = to_rational(x);
  return project(std::span<const Rational>(exact));
}

RationalVector DominanceOrder::project(std::span<const Rational> x) const {
  switch (kind_) {
    case DominanceKind::Pareto:
      return RationalVector(x.begin(), x.end());

    case DominanceKind::ParetoPerShare: {
      if (x.size() < 2) throw DomainError("per-share order needs an LP coordinate");
      const Rational& supply = x.back();
      if (!(supply > 0)) throw DomainError("per-share order needs a positive LP supply");
      RationalVector key;
      key.reserve(x.size() - 1);
      for (std::size_t i = 0; i + 1 < x.size(); ++i) key.push_back(x[i] / supply);
      return key;
    }

    case DominanceKind::SumOfPairs:
    case DominanceKind::ComponentPair: {
      RationalVector key;
      key.reserve(groups_.size());
      for (const auto& g : groups_) {
        Rational sum = 0;
        for (std::size_t i : g) {
          if (i >= x.size()) throw DomainError("dominance coordinate out of range");
          sum += x[i];
        }
        key.push_back(std::move(sum));
      }
      return key;
    }

    case DominanceKind::WeightedLP: {
      const TickGrid& grid = *ticks_;
      const std::size_t ranges = grid.range_count();
      if (x.size() != ranges + 1) throw DomainError("weighted-lp state must be (L_1..L_J, R)");
      const RationalVector r = to_rational(grid.ticks());
      const Rational& price = x.back();
      if (price < r.front() || price > r.back()) {
        throw DomainError("root-price outside [r_0, r_J]");
      }
      Rational hold_x = 0, hold_y = 0;
      for (std::size_t j = 1; j <= ranges; ++j) {
        const Rational& l = x[j - 1];
        if (l < 0) throw DomainError("liquidity must be nonnegative");
        if (!(weights_[j - 1] > 0.0)) continue;
        if (!(l > 0)) {
          throw DomainError("positive weight on empty range " + std::to_string(j));
        }
        // Holdings through the pool balances, scaled by the LP's share w_j / L_j.
        const Rational share = to_rational(weights_[j - 1]) / l;
        hold_x += share * range_balance_x<Rational>(r, j, l, price);
        hold_y += share * range_balance_y<Rational>(r, j, l, price);
      }
      return {hold_x, hold_y};
    }
  }
  return {};
}

bool DominanceOrder::dominates(std::span<const Rational> x, std::span<const Rational> y) const {
  if (x.size() != y.size()) throw DomainError("states differ in dimension");
  return pareto_strict(project(x), project(y));
}

bool DominanceOrder::dominates(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != y.size()) throw DomainError("states differ in dimension");
  return pareto_strict(project(x), project(y));
}

}  // namespace cfmm
