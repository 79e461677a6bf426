#include "cfmm/finite_system.hpp"

#include "cfmm/dominance.hpp"
#include "cfmm/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <string>

namespace cfmm {

FiniteMarketSystem::FiniteMarketSystem(std::vector<RationalVector> states,
                                       std::vector<Transition> transitions)
    : states_(std::move(states)), transitions_(std::move(transitions)) {
  if (!states_.empty()) dimension_ = states_.front().size();
  if (!states_.empty() && dimension_ == 0) throw SpecError("states must have dimension >= 1");

  std::map<RationalVector, StateIndex> seen;
  for (StateIndex i = 0; i < states_.size(); ++i) {
    if (states_[i].size() != dimension_) {
      throw SpecError("state " + std::to_string(i) + " has dimension " +
                      std::to_string(states_[i].size()) + ", expected " +
                      std::to_string(dimension_));
    }
    auto [it, inserted] = seen.emplace(states_[i], i);
    if (!inserted) {
      throw SpecError("states " + std::to_string(it->second) + " and " + std::to_string(i) +
                      " are equal");
    }
  }

  for (const auto& [from, to] : transitions_) {
    if (from >= states_.size() || to >= states_.size()) {
      throw SpecError("transition (" + std::to_string(from) + ", " + std::to_string(to) +
                      ") out of range");
    }
  }
  std::sort(transitions_.begin(), transitions_.end());
  transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());

  successors_.resize(states_.size());
  for (const auto& [from, to] : transitions_) successors_[from].push_back(to);
}

bool FiniteMarketSystem::has_transition(StateIndex from, StateIndex to) const {
  return std::binary_search(transitions_.begin(), transitions_.end(), Transition{from, to});
}

std::optional<StateIndex> FiniteMarketSystem::find_state(std::span<const Rational> coords) const {
  for (StateIndex i = 0; i < states_.size(); ++i) {
    if (std::equal(states_[i].begin(), states_[i].end(), coords.begin(), coords.end())) return i;
  }
  return std::nullopt;
}

std::vector<ClassId> Condensation::successors(ClassId c) const {
  std::vector<ClassId> out;
  for (ClassId d = 0; d < class_count(); ++d) {
    if (below(c, d)) out.push_back(d);
  }
  return out;
}

std::size_t Condensation::edge_count() const {
  std::size_t count = 0;
  for (ClassId a = 0; a < class_count(); ++a) {
    for (ClassId b = 0; b < class_count(); ++b) count += below(a, b) ? 1 : 0;
  }
  return count;
}

const char* to_string(PairOrder order) {
  switch (order) {
    case PairOrder::Equivalent: return "equivalent";
    case PairOrder::StrictlyBelow: return "strictly-below";
    case PairOrder::StrictlyAbove: return "strictly-above";
    case PairOrder::Incomparable: return "incomparable";
  }
  return "?";
}

ReachabilityClosure reachable_closure(const FiniteMarketSystem& system) {
  const std::size_t n = system.size();
  BoolMatrix reach(n);
  std::vector<StateIndex> stack;
  for (StateIndex source = 0; source < n; ++source) {
    reach.set(source, source);
    stack.assign(1, source);
    while (!stack.empty()) {
      const StateIndex v = stack.back();
      stack.pop_back();
      for (StateIndex w : system.successors(v)) {
        if (!reach(source, w)) {
          reach.set(source, w);
          stack.push_back(w);
        }
      }
    }
  }
  return ReachabilityClosure(std::move(reach));
}

Condensation condense(const ReachabilityClosure& closure) {
  const std::size_t n = closure.size();
  constexpr ClassId unassigned = static_cast<ClassId>(-1);
  Condensation c;
  c.class_of.assign(n, unassigned);
  for (StateIndex i = 0; i < n; ++i) {
    if (c.class_of[i] != unassigned) continue;
    const ClassId id = c.members.size();
    c.members.emplace_back();
    for (StateIndex j = i; j < n; ++j) {
      if (closure.equivalent(i, j)) {
        c.class_of[j] = id;
        c.members[id].push_back(j);
      }
    }
  }
  c.below = BoolMatrix(c.class_count());
  for (ClassId a = 0; a < c.class_count(); ++a) {
    for (ClassId b = 0; b < c.class_count(); ++b) {
      if (a != b && closure(c.representative(a), c.representative(b))) c.below.set(a, b);
    }
  }
  return c;
}

PairOrder classify_pair(const ReachabilityClosure& closure, StateIndex i, StateIndex j) {
  const bool forward = closure(i, j);
  const bool backward = closure(j, i);
  if (forward && backward) return PairOrder::Equivalent;
  if (forward) return PairOrder::StrictlyBelow;
  if (backward) return PairOrder::StrictlyAbove;
  return PairOrder::Incomparable;
}

bool is_complete(const ReachabilityClosure& closure) {
  for (StateIndex i = 0; i < closure.size(); ++i) {
    for (StateIndex j = i + 1; j < closure.size(); ++j) {
      if (!closure(i, j) && !closure(j, i)) return false;
    }
  }
  return true;
}

bool is_remm(const ReachabilityClosure& closure) {
  for (StateIndex i = 0; i < closure.size(); ++i) {
    for (StateIndex j = i + 1; j < closure.size(); ++j) {
      if (closure(i, j) != closure(j, i)) return false;
    }
  }
  return true;
}

bool is_giftable(const FiniteMarketSystem& system, const ReachabilityClosure& closure,
                 const DominanceOrder& dominance) {
  std::vector<RationalVector> keys;
  keys.reserve(system.size());
  for (const auto& s : system.states()) keys.push_back(dominance.project(s));
  for (StateIndex x = 0; x < system.size(); ++x) {
    for (StateIndex y = 0; y < system.size(); ++y) {
      if (pareto_strict(keys[y], keys[x]) && !closure(x, y)) return false;
    }
  }
  return true;
}

std::vector<StateIndex> shortest_path(const FiniteMarketSystem& system, StateIndex from,
                                      StateIndex to) {
  const std::size_t n = system.size();
  constexpr StateIndex none = static_cast<StateIndex>(-1);
  std::vector<StateIndex> parent(n, none);
  std::vector<std::uint8_t> visited(n, 0);
  std::deque<StateIndex> queue{from};
  visited[from] = 1;
  while (!queue.empty()) {
    const StateIndex v = queue.front();
    queue.pop_front();
    if (v == to) break;
    for (StateIndex w : system.successors(v)) {
      if (!visited[w]) {
        visited[w] = 1;
        parent[w] = v;
        queue.push_back(w);
      }
    }
  }
  if (!visited[to]) return {};
  std::vector<StateIndex> path{to};
  while (path.back() != from) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace cfmm
