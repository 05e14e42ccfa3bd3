#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "omq/model.hpp"

namespace omq {

/// A tgd (by index into the set being chased) and a binding of its body
/// variables to terms of an instance.
struct Trigger {
  std::size_t tgd = 0;
  Substitution binding;

  friend bool operator==(const Trigger&, const Trigger&) = default;
};

struct ChaseResult {
  Instance instance;
  std::size_t steps = 0;
  /// True iff the result satisfies every tgd.
  bool complete = false;
  /// Derivation level of each atom: 0 for database atoms, otherwise one more
  /// than the highest level among the atoms of the trigger that created it.
  std::unordered_map<Atom, std::size_t> level;
};

/// Rewrites tgds into normal form: one head atom and at most one
/// existential variable, occurring once. Fresh predicates are named
/// `$aux<i>_<j>` and are outside the parser's namespace.
std::vector<TGD> normalize_tgds(std::span<const TGD> tgds);
bool is_normal(const TGD& t);

/// Every homomorphism from the body of `tgds[index]` into `instance`, in
/// search order. A fact tgd yields one trigger with the empty binding.
std::vector<Trigger> find_triggers(const Instance& instance,
                                   std::span<const TGD> tgds, std::size_t index);

/// True when some extension of the binding maps the head into `instance`.
bool is_satisfied(const Instance& instance, const TGD& tgd,
                  const Substitution& binding);

/// Adds the head atoms of the trigger with fresh nulls numbered after the
/// largest null of `instance`. Throws InactiveTrigger when the body image is
/// not contained in `instance`.
Instance chase_step(const Instance& instance, std::span<const TGD> tgds,
                    const Trigger& trigger);

/// Restricted chase of a non-recursive set, stratum by stratum, to a
/// fixpoint. Throws PreconditionViolated for a recursive set.
ChaseResult chase_nr(const Instance& start, std::span<const TGD> tgds);
ChaseResult chase_nr(const Database& db, std::span<const TGD> tgds);

/// Restricted chase keeping only atoms of level <= max_level.
ChaseResult chase_bounded(const Instance& start, std::span<const TGD> tgds,
                          std::size_t max_level);
ChaseResult chase_bounded(const Database& db, std::span<const TGD> tgds,
                          std::size_t max_level);

struct SatisfactionResult {
  bool holds = true;
  std::optional<Trigger> violation;
};

SatisfactionResult satisfies(const Instance& instance, std::span<const TGD> tgds);

}  // namespace omq
