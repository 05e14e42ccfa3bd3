#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "omq/errors.hpp"
#include "omq/model.hpp"

namespace omq {

inline constexpr std::size_t kDefaultBudget = 1'000'000;

/// Raised when XRewrite hits its step budget before reaching a fixpoint.
class BudgetExhausted : public Error {
 public:
  BudgetExhausted(std::size_t steps, UCQ partial)
      : Error("rewriting budget of " + std::to_string(steps) +
              " steps exhausted"),
        steps_(steps),
        partial_(std::move(partial)) {}

  std::size_t steps() const { return steps_; }
  /// The final-filtered rewriting collected so far.
  const UCQ& partial() const { return partial_; }

 private:
  std::size_t steps_;
  UCQ partial_;
};

/// Most general unifier of `atoms`. Variables of one class map to a constant
/// when the class has one, otherwise to the variable with the smallest name.
/// nullopt when the atoms do not unify (different predicates or a clash
/// between constants).
std::optional<Substitution> mgu(std::span<const Atom> atoms);

/// Renames every variable v of `t` to `~<i>_v`. The prefix sorts after all
/// parser-readable names, so query variables survive unification.
TGD rename_tgd(const TGD& t, std::size_t i);

/// Index of the existential variable in the head of a normal-form tgd.
std::optional<std::size_t> existential_position(const TGD& t);

/// A free variable of q, or one occurring more than once in its body.
bool is_shared(const Term& v, const CQ& q);

/// Applicability of a normal-form tgd to S ⊆ body(q).
bool is_applicable(const TGD& sigma, std::span<const Atom> s, const CQ& q);
/// Factorizability of S ⊆ body(q) with respect to a normal-form tgd.
bool is_factorizable(std::span<const Atom> s, const TGD& sigma, const CQ& q);

/// gamma(q[S / body(sigma^i)]) with gamma the MGU of S and head(sigma^i).
CQ rewrite_step(const CQ& q, std::span<const Atom> s, const TGD& sigma,
                std::size_t i);
/// gamma_S(q).
CQ factorize_step(const CQ& q, std::span<const Atom> s);

/// Equality modulo a bijective renaming of variables (answer tuples are
/// matched position by position).
bool isomorphic(const CQ& a, const CQ& b);
/// Hash invariant under variable renaming.
std::size_t renaming_invariant_hash(const CQ& q);

/// Renames variables introduced by rewriting to `V<k>` names.
CQ tidy_variables(const CQ& q);

/// Drops every atom that maps onto another atom of the query by moving only
/// variables that occur once in the query and not in the answer. The result
/// is equivalent to `q`. Rewriting steps condense their output, which bounds
/// the number of atoms for sticky sets.
CQ condense(const CQ& q);

struct RewriteEvent {
  enum class Kind { kRewrite, kFactorize };
  Kind kind;
  std::size_t step;
  CQ source;
  std::vector<Atom> subset;
  std::size_t tgd;  // index into the normalized tgds
  TGD tgd_used;
  CQ result;
  bool added;
};

struct RewriteOptions {
  std::size_t budget = kDefaultBudget;
  /// A new rewriting contained in a kept one is dropped, and kept rewritings
  /// contained in a new one are retired. Off, only isomorphic copies are
  /// dropped. Input disjuncts are never retired.
  bool prune_subsumed = true;
  std::function<void(const RewriteEvent&)> trace;
};

struct RewriteResult {
  UCQ ucq{0};
  std::size_t steps = 0;
  std::size_t generated = 0;  // queries kept in the working set
  /// Sigma lies in a class for which termination is guaranteed.
  bool terminating_class = true;
};

RewriteResult xrewrite_detailed(const OMQ& q, const RewriteOptions& options = {});
UCQ xrewrite(const OMQ& q, const RewriteOptions& options = {});

struct WitnessBound {
  std::uint64_t value = 1;
  std::string formula;  // "linear", "non-recursive" or "sticky"
};

/// Smallest applicable bound on the size of a database witnessing
/// non-containment with `q` on the left. Throws UnsupportedClass.
WitnessBound witness_bound(const OMQ& q);

}  // namespace omq
