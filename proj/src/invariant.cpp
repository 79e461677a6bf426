#include "cfmm/invariant.hpp"

#include "cfmm/errors.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <queue>
#include <tuple>

namespace cfmm {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::TopologicalRank: return "topological-rank";
    case Provenance::IncreasingRank: return "increasing-rank";
    case Provenance::Split: return "split";
    case Provenance::ClassLabel: return "class-label";
    case Provenance::External: return "external";
  }
  return "?";
}

Provenance provenance_from_string(std::string_view name) {
  for (auto p : {Provenance::TopologicalRank, Provenance::IncreasingRank, Provenance::Split,
                 Provenance::ClassLabel, Provenance::External}) {
    if (name == to_string(p)) return p;
  }
  throw SpecError("unknown certificate provenance: " + std::string(name));
}

const char* to_string(ConstraintKind kind) {
  return kind == ConstraintKind::Reach ? "reach" : "dominance";
}

const char* to_string(InvariantViolation::Condition c) {
  using C = InvariantViolation::Condition;
  switch (c) {
    case C::StrictAlongOrder: return "strict-along-order";
    case C::EqualOnClass: return "equal-on-class";
    case C::OneStepStrict: return "one-step-strict";
    case C::OneStepEqual: return "one-step-equal";
    case C::StrictlyIncreasing: return "strictly-increasing";
    case C::WeakMonotone: return "weak-monotone";
  }
  return "?";
}

namespace {

std::vector<RationalVector> project_all(const FiniteMarketSystem& system,
                                        const DominanceOrder& dominance) {
  std::vector<RationalVector> keys;
  keys.reserve(system.size());
  for (const auto& s : system.states()) keys.push_back(dominance.project(s));
  return keys;
}

// Kahn's algorithm with a min-heap so ties resolve to the lowest class id.
// Returns the topological position of every node, or nullopt on a cycle.
std::optional<std::vector<std::size_t>> topological_ranks(
    const std::vector<std::vector<ClassId>>& adjacency) {
  const std::size_t n = adjacency.size();
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& out : adjacency) {
    for (ClassId w : out) ++indegree[w];
  }
  std::priority_queue<ClassId, std::vector<ClassId>, std::greater<>> ready;
  for (ClassId v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<std::size_t> rank(n, 0);
  std::size_t next = 0;
  while (!ready.empty()) {
    const ClassId v = ready.top();
    ready.pop();
    rank[v] = next++;
    for (ClassId w : adjacency[v]) {
      if (--indegree[w] == 0) ready.push(w);
    }
  }
  if (next != n) return std::nullopt;
  return rank;
}

InvariantCertificate certificate_from_ranks(const Condensation& condensation,
                                            const std::vector<std::size_t>& class_rank,
                                            Provenance provenance) {
  InvariantCertificate cert;
  cert.provenance = provenance;
  cert.values.reserve(condensation.class_of.size());
  for (ClassId c : condensation.class_of) cert.values.emplace_back(class_rank[c]);
  return cert;
}

struct ConstraintEdge {
  ClassId to;
  ConstraintKind kind;
  StateIndex from_state;  // fixed for dominance edges only
  StateIndex to_state;

  auto key() const { return std::tie(to, kind, from_state, to_state); }
};

CycleWitness build_witness(const Condensation& condensation,
                           const std::vector<ConstraintEdge>& edges) {
  // Dominance edges have fixed endpoints. Reach edges hold between whole
  // classes, so their endpoints are chosen to meet the neighbouring edges.
  const std::size_t len = edges.size();
  std::vector<StateIndex> from(len), to(len);
  for (std::size_t k = 0; k < len; ++k) {
    const ConstraintEdge& e = edges[k];
    const ConstraintEdge& prev = edges[(k + len - 1) % len];
    const ConstraintEdge& next = edges[(k + 1) % len];
    if (e.kind == ConstraintKind::Dominance) {
      from[k] = e.from_state;
      to[k] = e.to_state;
    } else {
      from[k] = prev.kind == ConstraintKind::Dominance ? prev.to_state
                                                       : condensation.representative(prev.to);
      to[k] = next.kind == ConstraintKind::Dominance ? next.from_state
                                                     : condensation.representative(e.to);
    }
  }
  CycleWitness witness;
  for (std::size_t k = 0; k < len; ++k) {
    witness.links.push_back({from[k], edges[k].kind});
    // Consecutive dominance edges may meet at different states of one class.
    if (to[k] != from[(k + 1) % len]) witness.links.push_back({to[k], ConstraintKind::Reach});
  }
  return witness;
}

}  // namespace

InvariantCertificate find_invariant(const Condensation& condensation) {
  std::vector<std::vector<ClassId>> adjacency(condensation.class_count());
  for (ClassId a = 0; a < condensation.class_count(); ++a) adjacency[a] = condensation.successors(a);
  auto ranks = topological_ranks(adjacency);
  // The reachability order between classes is acyclic by construction.
  return certificate_from_ranks(condensation, *ranks, Provenance::TopologicalRank);
}

IncreasingResult find_increasing_invariant(const FiniteMarketSystem& system,
                                           const Condensation& condensation,
                                           const DominanceOrder& dominance) {
  const std::size_t classes = condensation.class_count();
  const auto keys = project_all(system, dominance);

  std::vector<std::vector<ConstraintEdge>> edges(classes);
  for (ClassId a = 0; a < classes; ++a) {
    for (ClassId b = 0; b < classes; ++b) {
      if (condensation.below(a, b)) {
        edges[a].push_back({b, ConstraintKind::Reach, condensation.representative(a),
                            condensation.representative(b)});
      }
    }
  }
  for (StateIndex x = 0; x < system.size(); ++x) {
    for (StateIndex y = 0; y < system.size(); ++y) {
      if (x != y && pareto_strict(keys[x], keys[y])) {
        // x D y requires K(y) < K(x).
        edges[condensation.class_of[y]].push_back(
            {condensation.class_of[x], ConstraintKind::Dominance, y, x});
      }
    }
  }
  for (auto& out : edges) {
    std::sort(out.begin(), out.end(),
              [](const ConstraintEdge& l, const ConstraintEdge& r) { return l.key() < r.key(); });
  }

  std::vector<std::vector<ClassId>> adjacency(classes);
  for (ClassId a = 0; a < classes; ++a) {
    for (const auto& e : edges[a]) {
      if (adjacency[a].empty() || adjacency[a].back() != e.to) adjacency[a].push_back(e.to);
    }
  }
  bool self_loop = false;
  for (ClassId a = 0; a < classes; ++a) {
    self_loop = self_loop || std::find(adjacency[a].begin(), adjacency[a].end(), a) !=
                                 adjacency[a].end();
  }
  if (!self_loop) {
    if (auto ranks = topological_ranks(adjacency)) {
      return certificate_from_ranks(condensation, *ranks, Provenance::IncreasingRank);
    }
  }

  // Shortest cycle: BFS from each class in id order, first edges first.
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::size_t best_len = none;
  std::vector<ConstraintEdge> best_cycle;
  for (ClassId s = 0; s < classes && best_len != 1; ++s) {
    std::vector<std::size_t> dist(classes, none);
    std::vector<const ConstraintEdge*> parent(classes, nullptr);
    std::vector<ClassId> parent_class(classes, 0);
    std::deque<ClassId> queue{s};
    dist[s] = 0;
    const ConstraintEdge* closing = nullptr;
    ClassId closing_from = 0;
    while (!queue.empty() && closing == nullptr) {
      const ClassId v = queue.front();
      queue.pop_front();
      if (best_len != none && dist[v] + 1 >= best_len) break;
      for (const auto& e : edges[v]) {
        if (e.to == s) {
          closing = &e;
          closing_from = v;
          break;
        }
        if (dist[e.to] == none) {
          dist[e.to] = dist[v] + 1;
          parent[e.to] = &e;
          parent_class[e.to] = v;
          queue.push_back(e.to);
        }
      }
    }
    if (closing == nullptr) continue;
    const std::size_t len = dist[closing_from] + 1;
    if (best_len != none && len >= best_len) continue;
    std::vector<ConstraintEdge> cycle{*closing};
    for (ClassId v = closing_from; v != s; v = parent_class[v]) cycle.push_back(*parent[v]);
    std::reverse(cycle.begin(), cycle.end());
    best_len = len;
    best_cycle = std::move(cycle);
  }
  return build_witness(condensation, best_cycle);
}

bool validate_cycle(const CycleWitness& cycle, const FiniteMarketSystem& system,
                    const ReachabilityClosure& closure, const DominanceOrder& dominance) {
  if (cycle.links.empty()) return false;
  bool strict = false;
  for (std::size_t k = 0; k < cycle.links.size(); ++k) {
    const StateIndex s = cycle.links[k].state;
    const StateIndex next = cycle.links[(k + 1) % cycle.links.size()].state;
    if (s >= system.size() || next >= system.size()) return false;
    if (cycle.links[k].constraint == ConstraintKind::Reach) {
      if (!closure(s, next)) return false;
      strict = strict || closure.strictly_below(s, next);
    } else {
      if (!dominance.dominates(system.state(next), system.state(s))) return false;
      strict = true;
    }
  }
  return strict;
}

VerificationReport verify_invariant(const FiniteMarketSystem& system,
                                    const ReachabilityClosure& closure,
                                    std::span<const Rational> values,
                                    const DominanceOrder* dominance) {
  using C = InvariantViolation::Condition;
  if (values.size() != system.size()) {
    throw PreconditionError("state function must have one value per state");
  }
  VerificationReport report;
  for (StateIndex x = 0; x < system.size(); ++x) {
    for (StateIndex y = 0; y < system.size(); ++y) {
      if (closure.strictly_below(x, y) && !(values[x] < values[y])) {
        report.violations.push_back({C::StrictAlongOrder, x, y});
      } else if (x < y && closure.equivalent(x, y) && values[x] != values[y]) {
        report.violations.push_back({C::EqualOnClass, x, y});
      }
    }
  }
  for (const auto& [x, y] : system.transitions()) {
    if (system.has_transition(y, x)) {
      if (values[x] != values[y]) report.one_step_violations.push_back({C::OneStepEqual, x, y});
    } else if (!(values[x] < values[y])) {
      report.one_step_violations.push_back({C::OneStepStrict, x, y});
    }
  }
  report.valid = report.violations.empty();
  report.one_step_valid = report.one_step_violations.empty();

  if (dominance != nullptr) {
    const auto keys = project_all(system, *dominance);
    for (StateIndex x = 0; x < system.size(); ++x) {
      for (StateIndex y = 0; y < system.size(); ++y) {
        if (pareto_strict(keys[x], keys[y]) && !(values[x] > values[y])) {
          report.increasing_violations.push_back({C::StrictlyIncreasing, x, y});
        }
      }
    }
    report.increasing = report.increasing_violations.empty();
  }
  return report;
}

bool is_weak_invariant(const ReachabilityClosure& closure, std::span<const Rational> values) {
  if (values.size() != closure.size()) {
    throw PreconditionError("state function must have one value per state");
  }
  for (StateIndex x = 0; x < closure.size(); ++x) {
    for (StateIndex y = 0; y < closure.size(); ++y) {
      if (closure(x, y) && values[x] > values[y]) return false;
    }
  }
  return true;
}

bool is_unique_invariant(const Condensation& condensation) {
  for (ClassId a = 0; a < condensation.class_count(); ++a) {
    for (ClassId b = a + 1; b < condensation.class_count(); ++b) {
      if (!condensation.below(a, b) && !condensation.below(b, a)) return false;
    }
  }
  return true;
}

InvariantCertificate split_invariant(const ReachabilityClosure& closure,
                                     const InvariantCertificate& certificate, StateIndex u,
                                     StateIndex v) {
  if (u >= closure.size() || v >= closure.size()) throw PreconditionError("state out of range");
  if (closure(u, v) || closure(v, u)) {
    throw PreconditionError("split needs two mutually unreachable states");
  }
  if (certificate.values.size() != closure.size()) {
    throw PreconditionError("certificate must have one value per state");
  }
  const auto& k = certificate.values;
  if (k[u] < k[v]) std::swap(u, v);
  const Rational shift = k[u] - k[v] + 1;

  InvariantCertificate out;
  out.provenance = Provenance::Split;
  out.values.reserve(k.size());
  for (StateIndex x = 0; x < k.size(); ++x) {
    out.values.push_back(closure(x, u) ? k[x] : Rational(k[x] + shift));
  }
  return out;
}

bool order_equivalent(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) return false;
  std::vector<std::size_t> order(a.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return b[l] < b[r]; });
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const std::size_t i = order[k], j = order[k + 1];
    const bool b_equal = b[i] == b[j];
    if (b_equal ? a[i] != a[j] : !(a[i] < a[j])) return false;
  }
  return true;
}

bool MultiInvariant::leq(StateIndex x, StateIndex y) const {
  for (const auto& k : family) {
    if (k[x] > k[y]) return false;
  }
  return true;
}

bool MultiInvariant::less(StateIndex x, StateIndex y) const {
  bool strict = false;
  for (const auto& k : family) {
    if (k[x] > k[y]) return false;
    strict = strict || k[x] < k[y];
  }
  return strict;
}

MultiInvariant multi_invariant(const ReachabilityClosure& closure) {
  MultiInvariant multi;
  multi.family.assign(closure.size(), std::vector<std::uint8_t>(closure.size(), 0));
  for (StateIndex z = 0; z < closure.size(); ++z) {
    for (StateIndex x = 0; x < closure.size(); ++x) multi.family[z][x] = closure(z, x) ? 1 : 0;
  }
  return multi;
}

bool recovers(const MultiInvariant& multi, const ReachabilityClosure& closure) {
  for (StateIndex x = 0; x < closure.size(); ++x) {
    for (StateIndex y = 0; y < closure.size(); ++y) {
      if (closure(x, y) != multi.leq(x, y)) return false;
    }
  }
  return true;
}

bool is_increasing_multi_invariant(const MultiInvariant& multi, const FiniteMarketSystem& system,
                                   const DominanceOrder& dominance) {
  const auto keys = project_all(system, dominance);
  for (StateIndex x = 0; x < system.size(); ++x) {
    for (StateIndex y = 0; y < system.size(); ++y) {
      if (pareto_strict(keys[y], keys[x]) && !multi.less(x, y)) return false;
    }
  }
  return true;
}

SequalResult sequal_invariant(const Condensation& condensation) {
  const std::size_t n = condensation.class_of.size();
  for (StateIndex i = 0; i < n; ++i) {
    for (StateIndex j = 0; j < n; ++j) {
      if (condensation.below(condensation.class_of[i], condensation.class_of[j])) {
        return NotRemm{i, j};
      }
    }
  }
  InvariantCertificate cert;
  cert.provenance = Provenance::ClassLabel;
  for (ClassId c : condensation.class_of) cert.values.emplace_back(c);
  return cert;
}

bool remm_class_comparability(const FiniteMarketSystem& system, const Condensation& condensation,
                              const DominanceOrder& dominance) {
  if (condensation.edge_count() != 0) {
    throw PreconditionError("class comparability check requires a reversible system");
  }
  for (const auto& members : condensation.members) {
    std::vector<RationalVector> keys;
    for (StateIndex s : members) keys.push_back(dominance.project(system.state(s)));
    for (std::size_t a = 0; a < keys.size(); ++a) {
      for (std::size_t b = 0; b < keys.size(); ++b) {
        if (a != b && pareto_strict(keys[a], keys[b])) return false;
      }
    }
  }
  return true;
}

}  // namespace cfmm
