#include "omq/eval.hpp"

#include <algorithm>

#include "omq/chase.hpp"
#include "omq/classify.hpp"
#include "omq/errors.hpp"
#include "omq/homomorphism.hpp"

namespace omq {
namespace {

// Seeds answer variables from `tuple`; false when the tuple is inconsistent
// with the answer terms.
bool seed_answer(const CQ& q, std::span<const Term> tuple, Substitution& seed) {
  if (tuple.size() != q.arity()) return false;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    const Term& t = q.answer()[i];
    if (!tuple[i].is_constant()) return false;
    if (!t.is_variable()) {
      if (t != tuple[i]) return false;
      continue;
    }
    if (auto bound = seed.lookup(t); bound && *bound != tuple[i]) return false;
    seed.bind(t, tuple[i]);
  }
  return true;
}

void check_schema(const Database& db, const Schema& s) {
  for (const auto& a : db.atoms()) {
    if (!s.contains(a.predicate())) {
      throw SchemaMismatch("database atom " + a.to_string() +
                           " is not over the data schema");
    }
  }
}

}  // namespace

AnswerSet evaluate(const CQ& q, const Instance& instance) {
  AnswerSet out;
  for_each_homomorphism(q.body(), instance, {}, [&](const Substitution& h) {
    Tuple t = h.apply(std::span<const Term>(q.answer()));
    if (std::all_of(t.begin(), t.end(), [](const Term& x) { return x.is_constant(); })) {
      out.insert(std::move(t));
    }
    return true;
  });
  return out;
}

AnswerSet evaluate(const UCQ& q, const Instance& instance) {
  AnswerSet out;
  for (const auto& d : q.disjuncts()) {
    if (d.is_true() && d.is_boolean()) return {Tuple{}};
    auto part = evaluate(d, instance);
    out.insert(part.begin(), part.end());
  }
  return out;
}

bool holds(const CQ& q, const Instance& instance, std::span<const Term> tuple) {
  Substitution seed;
  if (!seed_answer(q, tuple, seed)) return false;
  return has_homomorphism(q.body(), instance, seed);
}

bool holds(const UCQ& q, const Instance& instance, std::span<const Term> tuple) {
  return std::any_of(q.disjuncts().begin(), q.disjuncts().end(),
                     [&](const CQ& d) { return holds(d, instance, tuple); });
}

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::kAuto: return "auto";
    case Strategy::kChase: return "chase";
    case Strategy::kRewriting: return "rewriting";
  }
  return "auto";
}

PreparedOMQ::PreparedOMQ(OMQ q, Strategy strategy, const RewriteOptions& options)
    : omq_(std::move(q)), strategy_(strategy) {
  const auto report = classify(omq_.tgds());
  if (strategy_ == Strategy::kAuto) {
    if (report.ucq_rewritable()) {
      strategy_ = Strategy::kRewriting;
    } else if (report.non_recursive) {
      strategy_ = Strategy::kChase;
    } else {
      throw UnsupportedClass(
          "certain answers need linear, non-recursive or sticky tgds");
    }
  }
  if (strategy_ == Strategy::kChase && !report.non_recursive) {
    throw UnsupportedClass("the chase strategy needs non-recursive tgds");
  }
  if (strategy_ == Strategy::kRewriting) {
    if (!report.ucq_rewritable()) {
      throw UnsupportedClass(
          "the rewriting strategy needs linear, non-recursive or sticky tgds");
    }
    rewriting_ = xrewrite(omq_, options);
  }
}

AnswerSet PreparedOMQ::answers(const Database& db) const {
  check_schema(db, omq_.data_schema());
  if (rewriting_) return evaluate(*rewriting_, db.to_instance());
  return evaluate(omq_.query(), chase_nr(db, omq_.tgds()).instance);
}

bool PreparedOMQ::contains(const Database& db, std::span<const Term> tuple) const {
  check_schema(db, omq_.data_schema());
  if (rewriting_) return holds(*rewriting_, db.to_instance(), tuple);
  return holds(omq_.query(), chase_nr(db, omq_.tgds()).instance, tuple);
}

AnswerSet certain_answers(const OMQ& q, const Database& db, Strategy strategy,
                          const RewriteOptions& options) {
  return PreparedOMQ(q, strategy, options).answers(db);
}

bool eval_membership(const OMQ& q, const Database& db, std::span<const Term> tuple,
                     Strategy strategy, const RewriteOptions& options) {
  return PreparedOMQ(q, strategy, options).contains(db, tuple);
}

}  // namespace omq
