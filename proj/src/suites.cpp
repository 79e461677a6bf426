#include "cfmm/suites.hpp"

#include "cfmm/arbitrage.hpp"
#include "cfmm/dominance.hpp"
#include "cfmm/errors.hpp"
#include "cfmm/invariant.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <set>
#include <thread>
#include <utility>

namespace cfmm {

namespace {

constexpr std::size_t kRecordedFailures = 8;

struct Outcome {
  std::vector<std::optional<bool>> checks;
  std::vector<bool> tallies;
};

struct SuiteDef {
  std::string name;
  std::uint64_t salt;
  std::vector<std::pair<std::string, std::string>> checks;  // name, statement
  std::vector<std::string> tallies;
  std::function<Outcome(Rng&)> trial;
};

std::vector<Transition> transitions_of(const FiniteMarketSystem& s) { return s.transitions(); }

Rational coordinate_sum(const RationalVector& x) {
  Rational s = 0;
  for (const auto& v : x) s += v;
  return s;
}

std::optional<std::pair<StateIndex, StateIndex>> first_incomparable(
    const ReachabilityClosure& closure) {
  for (StateIndex u = 0; u < closure.size(); ++u) {
    for (StateIndex v = u + 1; v < closure.size(); ++v) {
      if (!closure(u, v) && !closure(v, u)) return std::pair{u, v};
    }
  }
  return std::nullopt;
}

/// Number of states reaching x: an invariant built independently of the
/// topological ranks.
RationalVector reach_count_invariant(const ReachabilityClosure& closure) {
  RationalVector out(closure.size());
  for (StateIndex x = 0; x < closure.size(); ++x) {
    std::size_t count = 0;
    for (StateIndex z = 0; z < closure.size(); ++z) count += closure(z, x) ? 1 : 0;
    out[x] = Rational(count);
  }
  return out;
}

bool recovers_order(const ReachabilityClosure& closure, std::span<const Rational> values) {
  for (StateIndex x = 0; x < closure.size(); ++x) {
    for (StateIndex y = 0; y < closure.size(); ++y) {
      if ((values[x] <= values[y]) != closure(x, y)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

Outcome existence_trial(Rng& rng) {
  const auto system = random_finite_system(rng);
  const auto closure = reachable_closure(system);
  const auto condensation = condense(closure);
  const auto cert = find_invariant(condensation);
  const auto report = verify_invariant(system, closure, cert.values);

  RationalVector random_values(system.size());
  for (auto& v : random_values) v = Rational(rng.uniform_int(0, 3));
  const auto random_report = verify_invariant(system, closure, random_values);

  Outcome o;
  o.checks.push_back(report.valid);
  o.checks.push_back(is_weak_invariant(closure, cert.values));
  o.checks.push_back(random_report.one_step_valid ? std::optional<bool>(random_report.valid)
                                                  : std::nullopt);
  o.tallies = {random_report.valid, random_report.one_step_valid};
  return o;
}

Outcome first_fundamental_trial(Rng& rng) {
  const auto system = giftable_closure(random_finite_system(rng));
  const auto dominance = DominanceOrder::pareto();
  const auto closure = reachable_closure(system);
  const auto condensation = condense(closure);
  const auto witness = find_arbitrage_finite(system, dominance);
  const auto result = find_increasing_invariant(system, condensation, dominance);
  const auto* cert = std::get_if<InvariantCertificate>(&result);
  const auto* cycle = std::get_if<CycleWitness>(&result);

  Outcome o;
  o.checks.push_back(is_giftable(system, closure, dominance));
  o.checks.push_back(!witness.has_value() == (cert != nullptr));
  o.checks.push_back(witness ? std::optional<bool>(verify_witness(system, *witness, dominance))
                             : std::nullopt);
  if (cert) {
    const auto report = verify_invariant(system, closure, cert->values, &dominance);
    o.checks.push_back(report.valid && report.increasing.value_or(false) &&
                       is_weak_invariant(closure, cert->values));
  } else {
    o.checks.push_back(std::nullopt);
  }
  o.checks.push_back(cycle ? std::optional<bool>(validate_cycle(*cycle, system, closure, dominance))
                           : std::nullopt);
  o.tallies = {!witness.has_value(), witness.has_value()};
  return o;
}

Outcome second_fundamental_trial(Rng& rng) {
  const auto system = random_finite_system(rng);
  const auto closure = reachable_closure(system);
  const auto condensation = condense(closure);
  const bool complete = is_complete(closure);
  const auto cert = find_invariant(condensation);

  Outcome o;
  o.checks.push_back(is_unique_invariant(condensation) == complete);
  if (!complete) {
    const auto pair = first_incomparable(closure);
    bool ok = pair.has_value();
    if (ok) {
      const auto second = split_invariant(closure, cert, pair->first, pair->second);
      ok = verify_invariant(system, closure, second.values).valid &&
           !order_equivalent(cert.values, second.values);
    }
    o.checks.push_back(ok);
    o.checks.push_back(std::nullopt);
    o.checks.push_back(std::nullopt);
  } else {
    const auto other = reach_count_invariant(closure);
    o.checks.push_back(std::nullopt);
    o.checks.push_back(verify_invariant(system, closure, other).valid &&
                       order_equivalent(cert.values, other));
    o.checks.push_back(recovers_order(closure, cert.values));
  }
  o.tallies = {complete, !complete};
  return o;
}

Outcome multi_invariant_trial(Rng& rng) {
  const auto system = random_finite_system(rng);
  const auto gifted = giftable_closure(system);
  const auto dominance = DominanceOrder::pareto();
  const auto closure = reachable_closure(system);
  const auto gifted_closure = reachable_closure(gifted);
  const auto multi = multi_invariant(closure);
  const auto gifted_multi = multi_invariant(gifted_closure);
  const bool arbitrage_free = !find_arbitrage_finite(gifted, dominance).has_value();

  Outcome o;
  o.checks.push_back(recovers(multi, closure) && recovers(gifted_multi, gifted_closure));
  o.checks.push_back(is_increasing_multi_invariant(gifted_multi, gifted, dominance) ==
                     arbitrage_free);
  o.tallies = {arbitrage_free, !arbitrage_free};
  return o;
}

bool check_sequal(const FiniteMarketSystem& system) {
  const auto closure = reachable_closure(system);
  const auto condensation = condense(closure);
  const auto result = sequal_invariant(condensation);
  const bool remm = is_remm(closure);
  if (const auto* cert = std::get_if<InvariantCertificate>(&result)) {
    if (!remm) return false;
    for (StateIndex x = 0; x < system.size(); ++x) {
      for (StateIndex y = 0; y < system.size(); ++y) {
        if ((cert->values[x] == cert->values[y]) != closure(x, y)) return false;
      }
    }
    for (const auto& [x, y] : system.transitions()) {
      if (cert->values[x] != cert->values[y]) return false;
    }
    return true;
  }
  const auto& edge = std::get<NotRemm>(result);
  return !remm && closure.strictly_below(edge.from, edge.to);
}

Outcome remm_trial(Rng& rng) {
  const auto system = random_finite_system(rng);
  const auto reversible = symmetrize(system);
  const auto dominance = DominanceOrder::pareto();
  const auto closure = reachable_closure(reversible);
  const auto condensation = condense(closure);
  const bool arbitrage_free = !find_arbitrage_finite(reversible, dominance).has_value();

  Outcome o;
  o.checks.push_back(check_sequal(system) && check_sequal(reversible));
  o.checks.push_back(remm_class_comparability(reversible, condensation, dominance) ==
                     arbitrage_free);
  o.tallies = {is_remm(reachable_closure(system)), arbitrage_free, !arbitrage_free};
  return o;
}

const std::vector<SuiteDef>& suites() {
  static const std::vector<SuiteDef> defs = {
      {"existence",
       1,
       {{"invariant-verifies", "find_invariant yields a verified invariant"},
        {"invariant-is-weak", "every invariant is a weak invariant"},
        {"one-step-implies-closure", "a function passing the one-step checks is an invariant"}},
       {"random-function-valid", "random-function-one-step-valid"},
       existence_trial},
      {"first-fundamental",
       2,
       {{"giftable", "giftable closure yields a giftable system"},
        {"arbitrage-free-iff-increasing",
         "no arbitrage witness iff an increasing invariant exists"},
        {"witness-verifies", "every arbitrage witness re-verifies"},
        {"certificate-verifies", "every increasing certificate is a strictly increasing invariant"},
        {"cycle-verifies", "every contradiction cycle re-verifies"}},
       {"arbitrage-free", "arbitrage"},
       first_fundamental_trial},
      {"second-fundamental",
       3,
       {{"unique-iff-complete", "the invariant is unique iff the system is complete"},
        {"split-yields-second", "incomplete systems admit a second, order-inequivalent invariant"},
        {"complete-invariants-agree", "independent invariants of complete systems agree"},
        {"complete-recovers", "on complete systems K(x) <= K(y) iff y is reachable from x"}},
       {"complete", "incomplete"},
       second_fundamental_trial},
      {"multi-invariant",
       4,
       {{"recovery", "up-set indicators recover reachability on every pair"},
        {"increasing-iff-arbitrage-free",
         "on giftable systems the multi-invariant is increasing iff no arbitrage exists"}},
       {"arbitrage-free", "arbitrage"},
       multi_invariant_trial},
      {"remm",
       5,
       {{"equal-invariant-iff-remm", "an equal invariant exists iff reachability is symmetric"},
        {"remm-arbitrage-free-iff-antichains",
         "a reversible system is arbitrage-free iff no class holds a dominated pair"}},
       {"input-remm", "arbitrage-free", "arbitrage"},
       remm_trial},
  };
  return defs;
}

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i = next++; i < count && !failed; i = next++) {
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

FiniteMarketSystem random_finite_system(Rng& rng, const RandomSystemOptions& options) {
  const std::size_t n =
      options.min_states + rng.index(options.max_states - options.min_states + 1);
  std::set<std::pair<int, int>> used;
  std::vector<RationalVector> states;
  while (states.size() < n) {
    const int a = static_cast<int>(rng.uniform_int(0, options.max_coordinate));
    const int b = static_cast<int>(rng.uniform_int(0, options.max_coordinate));
    if (used.emplace(a, b).second) states.push_back({Rational(a), Rational(b)});
  }

  std::vector<Transition> transitions;
  if (rng.bernoulli(0.25)) {
    std::vector<StateIndex> order(n);
    for (StateIndex i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    for (std::size_t k = 0; k + 1 < n; ++k) transitions.emplace_back(order[k], order[k + 1]);
  }
  const double density = rng.uniform(0.05, 0.45);
  for (StateIndex i = 0; i < n; ++i) {
    for (StateIndex j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool uphill = coordinate_sum(states[j]) >= coordinate_sum(states[i]);
      if (rng.bernoulli(uphill ? density : 0.15 * density)) transitions.emplace_back(i, j);
    }
  }
  FiniteMarketSystem system(std::move(states), std::move(transitions));
  if (options.giftable) system = giftable_closure(system);
  if (options.symmetric) system = symmetrize(system);
  return system;
}

FiniteMarketSystem giftable_closure(const FiniteMarketSystem& system) {
  auto transitions = transitions_of(system);
  for (StateIndex x = 0; x < system.size(); ++x) {
    for (StateIndex y = 0; y < system.size(); ++y) {
      if (pareto_strict(system.state(y), system.state(x))) transitions.emplace_back(x, y);
    }
  }
  return FiniteMarketSystem(system.states(), std::move(transitions));
}

FiniteMarketSystem symmetrize(const FiniteMarketSystem& system) {
  auto transitions = transitions_of(system);
  for (const auto& [x, y] : system.transitions()) transitions.emplace_back(y, x);
  return FiniteMarketSystem(system.states(), std::move(transitions));
}

bool SuiteResult::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.ok(); });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : suites()) out.push_back(s.name);
    return out;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name, const SuiteConfig& config) {
  const auto& defs = suites();
  auto it = std::find_if(defs.begin(), defs.end(), [&](const SuiteDef& d) { return d.name == name; });
  if (it == defs.end()) throw SpecError("unknown suite \"" + name + "\"");
  const SuiteDef& def = *it;

  const auto started = std::chrono::steady_clock::now();
  std::vector<Outcome> outcomes(config.trials);
  const std::uint64_t suite_seed = derive_seed(config.seed, def.salt);
  parallel_for(config.trials, config.threads, [&](std::size_t trial) {
    Rng rng(derive_seed(suite_seed, trial));
    outcomes[trial] = def.trial(rng);
  });

  SuiteResult result;
  result.suite = def.name;
  result.trials = config.trials;
  result.seed = config.seed;
  for (const auto& [check, statement] : def.checks) result.checks.push_back({check, statement, 0, 0, {}});
  for (const auto& tally : def.tallies) result.tallies.push_back({tally, 0});
  for (std::size_t trial = 0; trial < outcomes.size(); ++trial) {
    const Outcome& o = outcomes[trial];
    for (std::size_t c = 0; c < o.checks.size(); ++c) {
      if (!o.checks[c]) continue;
      SuiteCheck& check = result.checks[c];
      ++check.applicable;
      if (*o.checks[c]) {
        ++check.passed;
      } else if (check.failing_trials.size() < kRecordedFailures) {
        check.failing_trials.push_back(trial);
      }
    }
    for (std::size_t t = 0; t < o.tallies.size(); ++t) result.tallies[t].count += o.tallies[t];
  }
  result.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

std::vector<SuiteResult> run_all_suites(const SuiteConfig& config) {
  std::vector<SuiteResult> out;
  for (const auto& name : suite_names()) out.push_back(run_suite(name, config));
  return out;
}

}  // namespace cfmm
