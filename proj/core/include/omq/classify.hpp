#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "omq/model.hpp"

namespace omq {

struct ClassCheck {
  bool holds = true;
  /// Index of the first violating tgd, when there is one.
  std::optional<std::size_t> tgd;
  std::string witness;
};

/// Partition of a tgd set into strata Sigma_1..Sigma_n (strata[i] holds the
/// indices of Sigma_{i+1}) with a level function mu over sch(Sigma).
///
/// When `strict` is false the set has multi-atom heads whose head
/// predicates cannot share a stratum; each tgd then sits in the stratum of
/// its highest head predicate and only the level condition
/// mu(body) < mu(head) is guaranteed.
struct Stratification {
  std::vector<std::vector<std::size_t>> strata;
  std::map<Predicate, std::size_t> mu;
  bool strict = true;
};

struct StratifyResult {
  std::optional<Stratification> stratification;
  /// A directed cycle of the predicate graph when not stratifiable; the
  /// first predicate is repeated at the end.
  std::vector<Predicate> cycle;
  bool ok() const { return stratification.has_value(); }
};

/// Marked body variables, keyed by (tgd index, variable).
using MarkedVariables = std::set<std::pair<std::size_t, Term>>;

ClassCheck is_guarded(std::span<const TGD> tgds);
/// Every body has exactly one atom; fact tgds are not linear.
ClassCheck is_linear(std::span<const TGD> tgds);
/// Every body has at most one atom.
ClassCheck is_linear_with_facts(std::span<const TGD> tgds);
ClassCheck is_full(std::span<const TGD> tgds);

StratifyResult stratify(std::span<const TGD> tgds);
bool is_non_recursive(std::span<const TGD> tgds);

/// Least fixpoint of the marking rules.
MarkedVariables marked_variables(std::span<const TGD> tgds);
ClassCheck is_sticky(std::span<const TGD> tgds);

struct ClassReport {
  bool linear = true;
  bool guarded = true;
  bool non_recursive = true;
  bool sticky = true;
  bool full = true;
  bool fact_free = true;
  bool constant_free = true;
  bool linear_with_facts = true;
  /// Flag name -> description of a violation, for each false flag.
  std::map<std::string, std::string> witnesses;

  /// Member of one of the classes for which XRewrite terminates.
  bool ucq_rewritable() const {
    return linear_with_facts || non_recursive || sticky;
  }
};

ClassReport classify(std::span<const TGD> tgds);

}  // namespace omq
