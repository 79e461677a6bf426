#pragma once

// Arbitrage search and refutation: exhaustive witness search on finite
// systems, seeded trajectory fuzzing on transition oracles, witness
// re-verification and discretization of oracles into finite systems.

#include "cfmm/catalog.hpp"
#include "cfmm/dominance.hpp"
#include "cfmm/finite_system.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cfmm {

/// A transaction path from `start` to a state `start` dominates. `path`
/// lists every state from start to end inclusive.
struct ArbitrageWitness {
  std::vector<State> path;

  const State& start() const { return path.front(); }
  const State& end() const { return path.back(); }
  friend bool operator==(const ArbitrageWitness&, const ArbitrageWitness&) = default;
};

/// Witness over a finite system, by state index.
struct FiniteWitness {
  std::vector<StateIndex> path;

  StateIndex start() const { return path.front(); }
  StateIndex end() const { return path.back(); }
  friend bool operator==(const FiniteWitness&, const FiniteWitness&) = default;
};

/// Exhaustive search over all pairs (i, j) with reach(i, j) and state i
/// dominating state j. Returns the witness with the shortest path, ties broken
/// by (i, j), or nullopt when the system is arbitrage-free.
std::optional<FiniteWitness> find_arbitrage_finite(const FiniteMarketSystem& system,
                                                   const DominanceOrder& dominance);

bool verify_witness(const FiniteMarketSystem& system, const FiniteWitness& witness,
                    const DominanceOrder& dominance);

/// Re-checks every step with `contains` and exact domination of the end by
/// the start. False (never an exception) on malformed or out-of-domain input.
bool verify_witness(const MarketOracle& oracle, const ArbitrageWitness& witness,
                    const DominanceOrder& dominance, double tolerance = kDefaultTolerance);

struct FuzzConfig {
  std::size_t trials = 1000;
  std::size_t steps = 20;
  std::uint64_t seed = 0;
  double tolerance = kDefaultTolerance;
  /// Probability per step of splicing in a guided template when the walk
  /// sits on one of its states.
  double guided_rate = 0.01;
  /// Stored examples per kind; all are counted.
  std::size_t max_recorded = 16;
  /// Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 0;
  std::optional<State> start;
};

struct MonotonicityViolation {
  std::size_t trial = 0;
  std::size_t step = 0;  // transition from path[step] to path[step + 1]
  State from;
  State to;
  double before = 0.0;
  double after = 0.0;
};

struct DominationEvent {
  std::size_t trial = 0;
  std::size_t from_step = 0;
  std::size_t to_step = 0;
  ArbitrageWitness witness;
  bool verified = false;
};

struct FuzzReport {
  FuzzConfig config;
  State start;
  std::size_t transitions = 0;
  std::size_t guided_transitions = 0;
  std::size_t dead_ends = 0;          // walks stopped early at a state without successors
  std::size_t invalid_transitions = 0;  // sampled steps failing `contains`
  std::size_t violation_count = 0;
  std::size_t event_count = 0;
  std::size_t trials_with_events = 0;
  std::vector<MonotonicityViolation> violations;
  std::vector<DominationEvent> events;
  std::optional<double> wall_clock_seconds;
};

/// Runs `config.trials` independent random walks of `config.steps` sampled
/// transitions. Along each walk the candidate invariant (if any) must not
/// decrease beyond the relative tolerance, and every visited state is
/// compared against all earlier states of the same walk; an earlier state
/// dominating a later one is a domination event.
FuzzReport fuzz_trajectories(const MarketOracle& oracle, const DominanceOrder& dominance,
                             const std::optional<CandidateInvariant>& invariant,
                             const FuzzConfig& config);

/// The states visited by one trial, reproduced from its seed.
std::vector<State> replay_trial(const MarketOracle& oracle, const FuzzConfig& config,
                                std::size_t trial);

struct Grid {
  /// Cartesian product of per-axis points, used when `states` is empty.
  std::vector<std::vector<double>> axes;
  std::vector<State> states;
};

/// Finite under-approximation of an oracle: the grid states, plus up to
/// `transition_budget` states sampled from random grid states, with a
/// transition for every ordered pair satisfying `contains`. Throws GridError
/// on an empty grid and DomainError on grid states outside the domain.
FiniteMarketSystem discretize(const MarketOracle& oracle, const Grid& grid,
                              std::size_t transition_budget, std::uint64_t seed,
                              double tolerance = kDefaultTolerance);

}  // namespace cfmm
