#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>

#include "omq/eval.hpp"
#include "omq/model.hpp"
#include "omq/rewrite.hpp"
#include "omq/testkit.hpp"

namespace omq {

struct Counterexample {
  Database database;
  Tuple tuple;
};

struct ContainmentVerdict {
  bool contained = true;
  /// Present iff not contained: tuple is in Q1(database) but not in
  /// Q2(database).
  std::optional<Counterexample> counterexample;
  /// False for a bounded brute-force verdict that may miss a counterexample.
  bool exact = true;
  /// Rewriting disjuncts (contains) or databases (brute force) examined.
  std::size_t checked = 0;
};

/// Q1 ⊆ Q2 for OMQs whose tgds are linear (facts allowed), non-recursive or
/// sticky. Each disjunct of the rewriting of Q1 is frozen into a database
/// and checked against Q2; the first failure is the counterexample, with
/// frozen constants renamed to fresh constants c1, c2, ...
///
/// Throws SchemaMismatch when the data schemas or arities differ,
/// UnsupportedClass and BudgetExhausted.
ContainmentVerdict contains(const OMQ& q1, const OMQ& q2, const RewriteOptions& options = {});

bool equivalent(const OMQ& q1, const OMQ& q2, const RewriteOptions& options = {});

/// (Q1, Q2) with c̄ ∈ Q(D) iff Q1 ⊆ Q2. Q1 = (S', ∅, q_D) where q_D is D
/// with every constant c not occurring in Sigma or q replaced by a variable
/// X_c; Q2 = (S', Sigma, q); S' = S ∪ sch(Sigma).
std::pair<OMQ, OMQ> eval_to_containment(const OMQ& q, const Database& db,
                                        std::span<const Term> tuple);

/// (Q1, Q2) with c̄ ∈ Q(D) iff Q1 ⊄ Q2. Every predicate of Sigma, q and D is
/// renamed to a fresh starred copy, D becomes a set of fact tgds, the query
/// is q(c̄), and Q2 asks for a fresh predicate that nothing derives.
/// Throws ArityError when the tuple does not match the query arity.
std::pair<OMQ, OMQ> coeval_to_cocontainment(const OMQ& q, const Database& db,
                                            std::span<const Term> tuple);

/// An OMQ with a single-disjunct query equivalent to `q` over every
/// S-database. Disjuncts are joined by an or-gadget over the constants 0
/// and 1; every atom carries an extra truth position. Answer positions are
/// routed through a selector relation so that disjuncts that do not hold
/// cannot constrain the answer. An empty UCQ is returned unchanged.
OMQ ucq_to_cq(const OMQ& q);

struct BruteForceOptions {
  std::size_t max_constants = 2;
  std::size_t max_atoms = 2;
  std::size_t max_ground = kDefaultMaxGround;
  RewriteOptions rewrite;
};

/// Searches every S-database over fresh constants c1..ck plus the constants
/// of both OMQs with at most `max_atoms` atoms. Databases that use fresh
/// constants other than a prefix c1..cj are skipped. Q1 and Q2 are evaluated
/// by the chase when non-recursive, else by rewriting. The verdict is exact
/// when max_atoms reaches the witness bound of Q1 and max_constants reaches
/// max arity of S times that bound.
ContainmentVerdict brute_force_contains(const OMQ& q1, const OMQ& q2,
                                        const BruteForceOptions& options = {});

/// No S-database has an answer. Throws UnsupportedClass outside the
/// rewritable classes.
bool is_unsatisfiable(const OMQ& q, const RewriteOptions& options = {});

/// Constants of the tgds and the query, sorted.
std::vector<Term> constants_of(const OMQ& q);

}  // namespace omq
