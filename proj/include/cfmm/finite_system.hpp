#pragma once

#include "cfmm/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace cfmm {

class DominanceOrder;

using StateIndex = std::size_t;
using Transition = std::pair<StateIndex, StateIndex>;

/// Dense square boolean matrix over state indices.
class BoolMatrix {
 public:
  BoolMatrix() = default;
  explicit BoolMatrix(std::size_t n) : n_(n), bits_(n * n, 0) {}

  std::size_t size() const { return n_; }
  bool operator()(std::size_t i, std::size_t j) const { return bits_[i * n_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool v = true) { bits_[i * n_ + j] = v ? 1 : 0; }

  friend bool operator==(const BoolMatrix&, const BoolMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// A market system on a finite state space: explicit states and the one-step
/// transition relation, where (i, j) means state j is attainable from state i
/// in a single transaction.
///
/// States are exact rational vectors of a common dimension and pairwise
/// distinct. Self-loops are accepted; reflexive reachability is implicit.
class FiniteMarketSystem {
 public:
  /// Throws SpecError on duplicate states, mixed dimensions or out-of-range
  /// transition indices. Transitions are sorted and deduplicated.
  FiniteMarketSystem(std::vector<RationalVector> states, std::vector<Transition> transitions);

  std::size_t size() const { return states_.size(); }
  std::size_t dimension() const { return dimension_; }
  const std::vector<RationalVector>& states() const { return states_; }
  const RationalVector& state(StateIndex i) const { return states_[i]; }
  const std::vector<Transition>& transitions() const { return transitions_; }

  /// One-step successors of i in increasing index order.
  const std::vector<StateIndex>& successors(StateIndex i) const { return successors_[i]; }
  bool has_transition(StateIndex from, StateIndex to) const;

  std::optional<StateIndex> find_state(std::span<const Rational> coords) const;

  friend bool operator==(const FiniteMarketSystem& a, const FiniteMarketSystem& b) {
    return a.states_ == b.states_ && a.transitions_ == b.transitions_;
  }

 private:
  std::size_t dimension_ = 0;
  std::vector<RationalVector> states_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<StateIndex>> successors_;
};

/// reach(i, j) is true iff state j is reachable from state i in zero or more
/// transactions.
class ReachabilityClosure {
 public:
  explicit ReachabilityClosure(BoolMatrix reach) : reach_(std::move(reach)) {}

  std::size_t size() const { return reach_.size(); }
  bool operator()(StateIndex i, StateIndex j) const { return reach_(i, j); }
  bool equivalent(StateIndex i, StateIndex j) const { return reach_(i, j) && reach_(j, i); }
  bool strictly_below(StateIndex i, StateIndex j) const { return reach_(i, j) && !reach_(j, i); }
  const BoolMatrix& matrix() const { return reach_; }

  friend bool operator==(const ReachabilityClosure&, const ReachabilityClosure&) = default;

 private:
  BoolMatrix reach_;
};

using ClassId = std::size_t;

/// Mutual-reachability classes and the strict order between them.
///
/// Class ids are assigned in order of each class's lowest state index, so
/// class 0 always contains state 0. The class DAG is transitively closed.
struct Condensation {
  std::vector<ClassId> class_of;
  std::vector<std::vector<StateIndex>> members;
  /// below(a, b): every state of class a strictly reaches every state of b.
  BoolMatrix below;

  std::size_t class_count() const { return members.size(); }
  StateIndex representative(ClassId c) const { return members[c].front(); }
  /// Direct successors in the transitively closed DAG, ascending.
  std::vector<ClassId> successors(ClassId c) const;
  std::size_t edge_count() const;
};

enum class PairOrder { Equivalent, StrictlyBelow, StrictlyAbove, Incomparable };

const char* to_string(PairOrder order);

ReachabilityClosure reachable_closure(const FiniteMarketSystem& system);
Condensation condense(const ReachabilityClosure& closure);
PairOrder classify_pair(const ReachabilityClosure& closure, StateIndex i, StateIndex j);

bool is_complete(const ReachabilityClosure& closure);
bool is_remm(const ReachabilityClosure& closure);

/// True iff every dominated state can reach each state dominating it.
bool is_giftable(const FiniteMarketSystem& system, const ReachabilityClosure& closure,
                 const DominanceOrder& dominance);

/// Shortest one-step path from `from` to `to` (inclusive), empty when
/// unreachable. Ties are broken toward lower state indices.
std::vector<StateIndex> shortest_path(const FiniteMarketSystem& system, StateIndex from,
                                      StateIndex to);

}  // namespace cfmm
