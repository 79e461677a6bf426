#pragma once

// Invariants on finite market systems.
//
// An invariant K is constant on mutual-reachability classes and strictly
// increases along irreversible reachability. This header constructs and
// checks invariants of every flavour: plain, strictly dominance-increasing,
// weak, multi-invariants and equal (class-label) invariants.

#include "cfmm/dominance.hpp"
#include "cfmm/finite_system.hpp"
#include "cfmm/rational.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cfmm {

enum class Provenance { TopologicalRank, IncreasingRank, Split, ClassLabel, External };

const char* to_string(Provenance p);
Provenance provenance_from_string(std::string_view name);

struct InvariantCertificate {
  RationalVector values;  // one value per state index
  Provenance provenance = Provenance::External;

  friend bool operator==(const InvariantCertificate&, const InvariantCertificate&) = default;
};

enum class ConstraintKind {
  Reach,      // K(s) <= K(next): next is reachable from s
  Dominance,  // K(s) <  K(next): next dominates s
};

const char* to_string(ConstraintKind kind);

struct CycleLink {
  StateIndex state;
  ConstraintKind constraint;  // relates `state` to the following link's state

  friend bool operator==(const CycleLink&, const CycleLink&) = default;
};

/// A closed chain of constraints that no strictly increasing invariant can
/// satisfy. The last link relates back to the first state.
struct CycleWitness {
  std::vector<CycleLink> links;

  friend bool operator==(const CycleWitness&, const CycleWitness&) = default;
};

/// Checks that every link holds in the given system and that the chain
/// contains a strict constraint, i.e. that it really is a contradiction.
bool validate_cycle(const CycleWitness& cycle, const FiniteMarketSystem& system,
                    const ReachabilityClosure& closure, const DominanceOrder& dominance);

struct InvariantViolation {
  enum class Condition {
    StrictAlongOrder,     // x strictly below y but K(x) >= K(y)
    EqualOnClass,         // x ~ y but K(x) != K(y)
    OneStepStrict,        // y in M(x), x not in M(y), K(x) >= K(y)
    OneStepEqual,         // y in M(x), x in M(y), K(x) != K(y)
    StrictlyIncreasing,   // x D y but K(x) <= K(y)
    WeakMonotone,         // reach(x, y) but W(x) > W(y)
  };
  Condition condition;
  StateIndex x;
  StateIndex y;
};

const char* to_string(InvariantViolation::Condition c);

struct VerificationReport {
  bool valid = true;            // closure conditions
  bool one_step_valid = true;   // one-step sufficient conditions
  std::optional<bool> increasing;
  std::vector<InvariantViolation> violations;
  std::vector<InvariantViolation> one_step_violations;
  std::vector<InvariantViolation> increasing_violations;
};

/// Deterministic topological rank of each class; always succeeds on a finite
/// system. Ties go to the class with the lowest state index.
InvariantCertificate find_invariant(const Condensation& condensation);

using IncreasingResult = std::variant<InvariantCertificate, CycleWitness>;

/// An invariant that is also strictly D-increasing, or the shortest cycle of
/// constraints proving none exists.
IncreasingResult find_increasing_invariant(const FiniteMarketSystem& system,
                                           const Condensation& condensation,
                                           const DominanceOrder& dominance);

VerificationReport verify_invariant(const FiniteMarketSystem& system,
                                    const ReachabilityClosure& closure,
                                    std::span<const Rational> values,
                                    const DominanceOrder* dominance = nullptr);

bool is_weak_invariant(const ReachabilityClosure& closure, std::span<const Rational> values);

/// True iff the classes are totally ordered, i.e. the invariant is unique up
/// to strictly increasing transformation.
bool is_unique_invariant(const Condensation& condensation);

/// Builds a second invariant that orders u below v, given an invariant K and
/// two mutually unreachable states. Inputs are swapped if K(u) < K(v).
/// Throws PreconditionError if u and v are comparable.
InvariantCertificate split_invariant(const ReachabilityClosure& closure,
                                     const InvariantCertificate& certificate, StateIndex u,
                                     StateIndex v);

/// True iff both functions induce the same total preorder on states.
bool order_equivalent(std::span<const Rational> a, std::span<const Rational> b);

/// Up-set indicators: family[z][x] = 1 iff x is reachable from z.
struct MultiInvariant {
  std::vector<std::vector<std::uint8_t>> family;

  std::size_t size() const { return family.size(); }
  /// Every member is <= at x than at y.
  bool leq(StateIndex x, StateIndex y) const;
  /// leq(x, y) with at least one member strictly smaller at x.
  bool less(StateIndex x, StateIndex y) const;
};

MultiInvariant multi_invariant(const ReachabilityClosure& closure);

/// Checks reach(x, y) <=> K(x) <= K(y) family-wise over all pairs.
bool recovers(const MultiInvariant& multi, const ReachabilityClosure& closure);

bool is_increasing_multi_invariant(const MultiInvariant& multi, const FiniteMarketSystem& system,
                                   const DominanceOrder& dominance);

/// Strict edge proving a system is not reversible.
struct NotRemm {
  StateIndex from;
  StateIndex to;
};

using SequalResult = std::variant<InvariantCertificate, NotRemm>;

/// Class labels forming an equal invariant (K(x) = K(y) iff reach(x, y)),
/// which exists exactly when reachability is symmetric.
SequalResult sequal_invariant(const Condensation& condensation);

/// For a reversible system: true iff no class contains a dominated pair.
/// Throws PreconditionError if the system is not reversible.
bool remm_class_comparability(const FiniteMarketSystem& system, const Condensation& condensation,
                              const DominanceOrder& dominance);

}  // namespace cfmm
