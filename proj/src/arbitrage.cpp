#include "cfmm/arbitrage.hpp"

#include "cfmm/errors.hpp"
#include "cfmm/rational.hpp"
#include "cfmm/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <deque>
#include <set>
#include <thread>

namespace cfmm {

namespace {

struct Walk {
  std::vector<State> states;
  std::size_t guided = 0;
  std::size_t invalid = 0;
  bool dead_end = false;
};

bool matches(std::span<const double> x, const State& t, double tolerance) {
  if (x.size() != t.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!close_relative(x[i], t[i], tolerance)) return false;
  }
  return true;
}

/// Remainder of the first template chain passing through x, if any.
std::deque<State> template_tail(const MarketOracle& oracle, std::span<const double> x,
                                double tolerance) {
  for (const auto& chain : oracle.guided_templates()) {
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      if (matches(x, chain[k], tolerance)) return {chain.begin() + k + 1, chain.end()};
    }
  }
  return {};
}

Walk run_walk(const MarketOracle& oracle, const FuzzConfig& config, const State& start,
              std::size_t trial) {
  Rng rng(derive_seed(config.seed, trial));
  Walk walk;
  walk.states.push_back(start);
  std::deque<State> pending;
  const bool guided = !oracle.guided_templates().empty();
  for (std::size_t step = 0; step < config.steps; ++step) {
    const State x = walk.states.back();
    std::optional<State> next;
    if (guided && pending.empty() && rng.bernoulli(config.guided_rate)) {
      pending = template_tail(oracle, x, config.tolerance);
    }
    if (!pending.empty()) {
      next = std::move(pending.front());
      pending.pop_front();
      if (oracle.contains(x, *next, config.tolerance)) {
        ++walk.guided;
        walk.states.push_back(std::move(*next));
        continue;
      }
      pending.clear();
      next.reset();
    }
    next = oracle.sample(x, rng);
    if (!next) {
      walk.dead_end = true;
      break;
    }
    if (!oracle.contains(x, *next, config.tolerance)) {
      ++walk.invalid;
      continue;
    }
    walk.states.push_back(std::move(*next));
  }
  return walk;
}

struct TrialResult {
  Walk walk;
  std::size_t violation_count = 0;
  std::size_t event_count = 0;
  std::vector<MonotonicityViolation> violations;
  std::vector<DominationEvent> events;
};

TrialResult run_trial(const MarketOracle& oracle, const DominanceOrder& dominance,
                      const std::optional<CandidateInvariant>& invariant, const FuzzConfig& config,
                      const State& start, std::size_t trial) {
  TrialResult r;
  r.walk = run_walk(oracle, config, start, trial);
  const auto& states = r.walk.states;

  if (invariant) {
    double before = invariant->evaluate(states.front());
    for (std::size_t t = 0; t + 1 < states.size(); ++t) {
      const double after = invariant->evaluate(states[t + 1]);
      const double slack = config.tolerance * std::max(std::fabs(before), std::fabs(after));
      if (!(after >= before - slack)) {
        ++r.violation_count;
        if (r.violations.size() < config.max_recorded) {
          r.violations.push_back({trial, t, states[t], states[t + 1], before, after});
        }
      }
      before = after;
    }
  }

  std::vector<RationalVector> keys;
  keys.reserve(states.size());
  for (const auto& s : states) keys.push_back(dominance.project(s));
  for (std::size_t t = 1; t < states.size(); ++t) {
    for (std::size_t j = 0; j < t; ++j) {
      if (!pareto_strict(keys[j], keys[t])) continue;
      ++r.event_count;
      if (r.events.size() < config.max_recorded) {
        DominationEvent e;
        e.trial = trial;
        e.from_step = j;
        e.to_step = t;
        e.witness.path.assign(states.begin() + j, states.begin() + t + 1);
        e.verified = verify_witness(oracle, e.witness, dominance, config.tolerance);
        r.events.push_back(std::move(e));
      }
    }
  }
  return r;
}

State resolve_start(const MarketOracle& oracle, const FuzzConfig& config) {
  State start = config.start.value_or(oracle.default_start());
  if (!oracle.in_domain(start)) throw DomainError(oracle.name() + ": start state outside domain");
  return start;
}

}  // namespace

std::optional<FiniteWitness> find_arbitrage_finite(const FiniteMarketSystem& system,
                                                   const DominanceOrder& dominance) {
  const ReachabilityClosure closure = reachable_closure(system);
  std::vector<RationalVector> keys;
  keys.reserve(system.size());
  for (const auto& s : system.states()) keys.push_back(dominance.project(s));
  std::optional<FiniteWitness> best;
  for (StateIndex i = 0; i < system.size(); ++i) {
    for (StateIndex j = 0; j < system.size(); ++j) {
      if (i == j || !closure(i, j) || !pareto_strict(keys[i], keys[j])) continue;
      auto path = shortest_path(system, i, j);
      if (!best || path.size() < best->path.size()) best = FiniteWitness{std::move(path)};
    }
  }
  return best;
}

bool verify_witness(const FiniteMarketSystem& system, const FiniteWitness& witness,
                    const DominanceOrder& dominance) {
  if (witness.path.size() < 2) return false;
  for (StateIndex i : witness.path) {
    if (i >= system.size()) return false;
  }
  for (std::size_t k = 0; k + 1 < witness.path.size(); ++k) {
    if (!system.has_transition(witness.path[k], witness.path[k + 1])) return false;
  }
  try {
    return dominance.dominates(system.state(witness.start()), system.state(witness.end()));
  } catch (const DomainError&) {
    return false;
  }
}

bool verify_witness(const MarketOracle& oracle, const ArbitrageWitness& witness,
                    const DominanceOrder& dominance, double tolerance) {
  if (witness.path.size() < 2) return false;
  for (const auto& s : witness.path) {
    if (!oracle.in_domain(s)) return false;
  }
  try {
    for (std::size_t k = 0; k + 1 < witness.path.size(); ++k) {
      if (!oracle.contains(witness.path[k], witness.path[k + 1], tolerance)) return false;
    }
    return dominance.dominates(std::span<const double>(witness.start()),
                               std::span<const double>(witness.end()));
  } catch (const std::exception&) {
    return false;
  }
}

FuzzReport fuzz_trajectories(const MarketOracle& oracle, const DominanceOrder& dominance,
                             const std::optional<CandidateInvariant>& invariant,
                             const FuzzConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  FuzzReport report;
  report.config = config;
  report.start = resolve_start(oracle, config);

  std::vector<TrialResult> results(config.trials);
  std::size_t workers = config.threads;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(config.trials, 1));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t t = next++; t < config.trials && !failed; t = next++) {
      try {
        results[t] = run_trial(oracle, dominance, invariant, config, report.start, t);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (auto& r : results) {
    report.transitions += r.walk.states.size() - 1;
    report.guided_transitions += r.walk.guided;
    report.invalid_transitions += r.walk.invalid;
    report.dead_ends += r.walk.dead_end ? 1 : 0;
    report.violation_count += r.violation_count;
    report.event_count += r.event_count;
    report.trials_with_events += r.event_count > 0 ? 1 : 0;
    for (auto& v : r.violations) {
      if (report.violations.size() < config.max_recorded) report.violations.push_back(std::move(v));
    }
    for (auto& e : r.events) {
      if (report.events.size() < config.max_recorded) report.events.push_back(std::move(e));
    }
  }
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

std::vector<State> replay_trial(const MarketOracle& oracle, const FuzzConfig& config,
                                std::size_t trial) {
  return run_walk(oracle, config, resolve_start(oracle, config), trial).states;
}

FiniteMarketSystem discretize(const MarketOracle& oracle, const Grid& grid,
                              std::size_t transition_budget, std::uint64_t seed,
                              double tolerance) {
  std::vector<State> states;
  if (!grid.states.empty()) {
    states = grid.states;
  } else if (!grid.axes.empty()) {
    states.push_back({});
    for (const auto& axis : grid.axes) {
      std::vector<State> next;
      for (const auto& prefix : states) {
        for (double v : axis) {
          State s = prefix;
          s.push_back(v);
          next.push_back(std::move(s));
        }
      }
      states = std::move(next);
    }
  }
  if (states.empty()) throw GridError("grid has no states");

  std::set<State> seen;
  std::vector<State> unique;
  for (auto& s : states) {
    if (!oracle.in_domain(s)) throw DomainError("grid state outside the oracle's domain");
    if (seen.insert(s).second) unique.push_back(std::move(s));
  }
  const std::size_t grid_count = unique.size();
  Rng rng(seed);
  for (std::size_t b = 0; b < transition_budget; ++b) {
    const State x = unique[rng.index(grid_count)];
    auto y = oracle.sample(x, rng);
    if (!y || !oracle.in_domain(*y)) continue;
    if (seen.insert(*y).second) unique.push_back(std::move(*y));
  }

  std::vector<Transition> transitions;
  for (StateIndex i = 0; i < unique.size(); ++i) {
    for (StateIndex j = 0; j < unique.size(); ++j) {
      if (i != j && oracle.contains(unique[i], unique[j], tolerance)) transitions.emplace_back(i, j);
    }
  }
  std::vector<RationalVector> exact;
  exact.reserve(unique.size());
  for (const auto& s : unique) exact.push_back(to_rational(std::span<const double>(s)));
  return FiniteMarketSystem(std::move(exact), std::move(transitions));
}

}  // namespace cfmm
