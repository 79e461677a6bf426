#pragma once

// Property suites over random finite market systems. Each suite draws its
// systems from a per-trial seed derived from the root seed, so a suite's
// result depends only on (trials, seed).

#include "cfmm/finite_system.hpp"
#include "cfmm/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cfmm {

struct RandomSystemOptions {
  std::size_t min_states = 1;
  std::size_t max_states = 8;
  int max_coordinate = 5;
  /// Add x -> y whenever y Pareto-dominates x.
  bool giftable = false;
  /// Add the reverse of every transition.
  bool symmetric = false;
};

/// Distinct states in Z^2_+ with transitions biased toward a larger
/// coordinate sum plus occasional transitions against it. A quarter of the
/// systems are built around a random chain and are therefore complete.
FiniteMarketSystem random_finite_system(Rng& rng, const RandomSystemOptions& options = {});

/// Adds x -> y for every pair with y Pareto-dominating x.
FiniteMarketSystem giftable_closure(const FiniteMarketSystem& system);

/// Adds the reverse of every transition.
FiniteMarketSystem symmetrize(const FiniteMarketSystem& system);

struct SuiteCheck {
  std::string name;
  std::string statement;
  std::size_t applicable = 0;
  std::size_t passed = 0;
  std::vector<std::size_t> failing_trials;  // first few

  bool ok() const { return passed == applicable; }
};

struct SuiteTally {
  std::string name;
  std::size_t count = 0;
};

struct SuiteResult {
  std::string suite;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<SuiteCheck> checks;
  std::vector<SuiteTally> tallies;
  std::optional<double> wall_clock_seconds;

  bool ok() const;
};

struct SuiteConfig {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0 picks the hardware concurrency
};

/// Suite names in run order.
const std::vector<std::string>& suite_names();

/// Throws SpecError on an unknown suite name.
SuiteResult run_suite(const std::string& name, const SuiteConfig& config);

std::vector<SuiteResult> run_all_suites(const SuiteConfig& config);

}  // namespace cfmm
