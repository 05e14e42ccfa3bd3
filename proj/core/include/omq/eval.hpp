#pragma once

#include <set>
#include <span>
#include <vector>

#include "omq/model.hpp"
#include "omq/rewrite.hpp"

namespace omq {

using Tuple = std::vector<Term>;
using AnswerSet = std::set<Tuple>;

/// Images h(x) of the answer tuple over homomorphisms h from the body into
/// `instance` that send every answer term to a constant.
AnswerSet evaluate(const CQ& q, const Instance& instance);
AnswerSet evaluate(const UCQ& q, const Instance& instance);

/// Whether `tuple` is among the answers of q over `instance`.
bool holds(const CQ& q, const Instance& instance, std::span<const Term> tuple);
bool holds(const UCQ& q, const Instance& instance, std::span<const Term> tuple);

enum class Strategy { kAuto, kChase, kRewriting };

const char* to_string(Strategy s);

/// Q(D). kChase needs a non-recursive Sigma, kRewriting one that is linear,
/// non-recursive or sticky; kAuto prefers rewriting and falls back to the
/// chase. Throws UnsupportedClass or BudgetExhausted, and SchemaMismatch
/// when `db` has an atom outside the data schema.
AnswerSet certain_answers(const OMQ& q, const Database& db,
                          Strategy strategy = Strategy::kAuto,
                          const RewriteOptions& options = {});

bool eval_membership(const OMQ& q, const Database& db, std::span<const Term> tuple,
                     Strategy strategy = Strategy::kAuto,
                     const RewriteOptions& options = {});

/// An OMQ prepared for repeated evaluation: the rewriting (or the decision to
/// chase) is computed once.
class PreparedOMQ {
 public:
  explicit PreparedOMQ(OMQ q, Strategy strategy = Strategy::kAuto,
                       const RewriteOptions& options = {});

  const OMQ& omq() const { return omq_; }
  Strategy strategy() const { return strategy_; }
  /// The UCQ rewriting, when the rewriting strategy is in use.
  const UCQ* rewriting() const { return rewriting_ ? &*rewriting_ : nullptr; }

  AnswerSet answers(const Database& db) const;
  bool contains(const Database& db, std::span<const Term> tuple) const;

 private:
  OMQ omq_;
  Strategy strategy_;
  std::optional<UCQ> rewriting_;
};

}  // namespace omq
