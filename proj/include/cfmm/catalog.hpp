#pragma once

// Concrete market systems as transition oracles over floating-point states.
//
// An oracle answers one-step membership y in M(x) with a relative tolerance,
// samples single transitions from a state, and carries the system's candidate
// invariant and natural dominance order. Samplers place points exactly on the
// defining curve by solving for a dependent coordinate, so the tolerance only
// absorbs roundoff.

#include "cfmm/dominance.hpp"
#include "cfmm/finite_system.hpp"
#include "cfmm/rng.hpp"
#include "cfmm/stableswap.hpp"
#include "cfmm/v3.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cfmm {

using State = std::vector<double>;

inline constexpr double kDefaultTolerance = 1e-9;

/// Proportional fee on the incoming side of each coordinate:
/// phi_j = rate * max(y_j - x_j, 0).
struct FeeSchedule {
  double rate = 0.003;

  /// Throws SpecError unless rate is in [0, 1).
  void validate() const;
  double phi(double from, double to) const { return to > from ? rate * (to - from) : 0.0; }
};

struct CandidateInvariant {
  std::string formula;
  std::function<double(std::span<const double>)> evaluate;
};

class MarketOracle {
 public:
  virtual ~MarketOracle() = default;

  const std::string& name() const { return name_; }
  std::size_t dimension() const { return dimension_; }
  const std::optional<CandidateInvariant>& candidate_invariant() const { return candidate_; }
  const DominanceOrder& default_dominance() const { return dominance_; }
  const State& default_start() const { return start_; }
  /// Known interesting chains (start state first). Fuzzers splice them into
  /// random walks whenever the walk sits on one of their states.
  const std::vector<std::vector<State>>& guided_templates() const { return templates_; }
  /// Documentation flag for systems whose behavior is easy to misread.
  const std::string& note() const { return note_; }

  virtual bool in_domain(std::span<const double> x) const = 0;
  /// One-step membership y in M(x) with relative tolerance on the defining
  /// equation or inequality. False when either state is outside the domain.
  virtual bool contains(std::span<const double> x, std::span<const double> y,
                        double tolerance = kDefaultTolerance) const = 0;
  /// One random transition from x, or nullopt when x has no successor.
  virtual std::optional<State> sample(std::span<const double> x, Rng& rng) const = 0;

  /// Up to `count` transitions from x drawn from a generator seeded by `seed`.
  std::vector<State> sample_transitions(std::span<const double> x, std::uint64_t seed,
                                        std::size_t count) const;

 protected:
  MarketOracle(std::string name, std::size_t dimension, DominanceOrder dominance, State start)
      : name_(std::move(name)), dimension_(dimension), dominance_(std::move(dominance)),
        start_(std::move(start)) {}

  std::string name_;
  std::size_t dimension_;
  DominanceOrder dominance_;
  State start_;
  std::optional<CandidateInvariant> candidate_;
  std::vector<std::vector<State>> templates_;
  std::string note_;
};

using OraclePtr = std::shared_ptr<const MarketOracle>;

/// Catalog parameters; unset fields take per-system defaults.
struct CatalogParams {
  std::optional<double> fee;
  std::optional<double> amplification;
  std::optional<std::size_t> coins;
  std::optional<std::vector<double>> ticks;
  std::optional<std::vector<double>> weights;
  std::optional<double> xi;
  std::optional<std::string> base;
  std::optional<std::string> mode;

  friend bool operator==(const CatalogParams&, const CatalogParams&) = default;
};

struct CatalogSpec {
  std::string system;
  CatalogParams params;

  friend bool operator==(const CatalogSpec&, const CatalogSpec&) = default;
};

struct CatalogEntry {
  std::string name;
  std::string description;
};

const std::vector<CatalogEntry>& catalog_entries();

/// Throws SpecError on unknown names or invalid parameters.
OraclePtr make_system(const CatalogSpec& spec);

/// Swap against a fee-charging constant-product pool: returns y with
/// y_in = x_in + amount and (y1 - phi1)(y2 - phi2) = x1 x2.
State cpmm_quote(std::span<const double> x, std::size_t asset_in, double amount_in,
                 const FeeSchedule& fee);

/// Diluted LP supply after a swap with a one-sixth admin fee minted as shares:
/// 6 sqrt(y1 y2) / (5 sqrt(y1 y2) + sqrt(x1 x2)) * x_l.
double sushi_mint(std::span<const double> x, double supply, std::span<const double> y);

enum class LiftMode { Inequality, Exact };

const char* to_string(LiftMode mode);

/// Adds an LP-share coordinate to a base system. Both modes allow scaling
/// transitions alpha (x, x_l). Exact mode swaps by (xi / x_l) y in
/// M((xi / x_l) x) with the supply fixed; inequality mode accepts any move
/// with kappa((xi / y_l) y) > kappa((xi / x_l) x). The lifted candidate
/// invariant is K(x, x_l) = kappa(xi x / x_l). Throws SpecError on xi <= 0
/// or when the base has no candidate invariant.
OraclePtr lift_with_liquidity(OraclePtr base, double xi, LiftMode mode);

/// Scaling transitions plus base swaps applied directly to the balances with
/// the supply fixed, ignoring the per-share rescaling.
OraclePtr naive_lift(OraclePtr base);

/// The four-state system with transitions (1,4) -> (2,1) and (2,2) -> (1,3).
/// States are listed as (1,3), (1,4), (2,1), (2,2).
FiniteMarketSystem four_state_system();

/// Relative closeness used for template matching and membership.
bool close_relative(double a, double b, double tolerance);

}  // namespace cfmm
