#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "omq/model.hpp"
#include "omq/rewrite.hpp"

namespace omq {

/// The maximal connected parts of `atoms`, where two atoms are connected
/// when they share a term. Parts are ordered by their smallest atom and each
/// part is sorted. Throws ZeroAryAtom.
std::vector<std::vector<Atom>> components(std::span<const Atom> atoms);

struct CQComponent {
  std::vector<Atom> body;
  /// Every answer variable occurs in `body`.
  bool safe = true;
  /// The component with the full answer tuple of the query; present iff safe.
  std::optional<CQ> query;
};

/// Throws ZeroAryAtom and EmptyBody.
std::vector<CQComponent> cq_components(const CQ& q);

struct DistributionVerdict {
  bool distributes = false;
  /// "unsat", "empty database", the component query that is contained in Q,
  /// or a description of why none is.
  std::string witness;
  std::optional<CQ> component;
  /// One line per unsafe component skipped.
  std::vector<std::string> diagnostics;
};

/// Whether Q(D) is the union of Q over the components of D for every
/// S-database D. Q distributes when it is unsatisfiable; otherwise it must
/// have no answer on the empty database, and every disjunct that is
/// satisfiable on its own needs a safe component q̂ with (S, Sigma, q̂) ⊆ Q.
/// Throws UnsupportedClass outside linear, non-recursive and sticky tgds,
/// and ZeroAryAtom.
DistributionVerdict distributes(const OMQ& q, const RewriteOptions& options = {});

/// Q(D) == union of Q(D_i) over the components D_i of D.
bool distributes_on(const OMQ& q, const Database& db);

/// The first database over max_constants constants and at most max_atoms
/// atoms on which distributes_on fails.
std::optional<Database> distribution_counterexample(const OMQ& q, std::size_t max_constants,
                                                    std::size_t max_atoms,
                                                    std::size_t max_ground = 24);

}  // namespace omq
