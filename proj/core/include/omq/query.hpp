#pragma once

#include <span>
#include <string>
#include <vector>

#include "omq/atom.hpp"
#include "omq/substitution.hpp"

namespace omq {

/// Conjunctive query: an answer tuple and a set of body atoms over constants
/// and variables. Body variables not in the answer tuple are existential.
///
/// Answer terms are usually distinct variables, but rewriting may identify
/// two answer variables or bind one to a constant, so repeated variables and
/// constants are admitted. Every answer variable must occur in the body. A
/// CQ with an empty body and an empty answer tuple is the Boolean TRUE query.
class CQ {
 public:
  /// Throws SafetyError when an answer variable is missing from the body or
  /// a null occurs anywhere.
  CQ(std::vector<Term> answer, std::vector<Atom> body);

  static CQ true_query() { return CQ({}, {}); }

  const std::vector<Term>& answer() const { return answer_; }
  const std::vector<Atom>& body() const { return body_; }
  std::size_t arity() const { return answer_.size(); }
  std::size_t size() const { return body_.size(); }
  bool is_boolean() const { return answer_.empty(); }
  bool is_true() const { return body_.empty(); }

  std::vector<Term> variables() const;
  /// Variables and constants of body and answer tuple.
  std::vector<Term> terms() const;
  std::vector<Predicate> predicates() const;

  CQ substitute(const Substitution& s) const;

  std::string to_string() const;

  friend bool operator==(const CQ&, const CQ&) = default;
  friend auto operator<=>(const CQ&, const CQ&) = default;

 private:
  std::vector<Term> answer_;
  std::vector<Atom> body_;  // canonical
};

/// Disjunction of CQs sharing one answer arity. An empty UCQ is the FALSE
/// query of that arity.
class UCQ {
 public:
  explicit UCQ(std::size_t arity) : arity_(arity) {}
  UCQ(CQ cq);  // NOLINT(google-explicit-constructor)
  /// Throws SafetyError on arity mismatch between disjuncts.
  UCQ(std::size_t arity, std::vector<CQ> disjuncts);

  std::size_t arity() const { return arity_; }
  const std::vector<CQ>& disjuncts() const { return disjuncts_; }
  bool empty() const { return disjuncts_.empty(); }
  std::size_t size() const { return disjuncts_.size(); }
  bool is_boolean() const { return arity_ == 0; }
  bool has_true_disjunct() const;
  /// Largest disjunct size.
  std::size_t max_atoms() const;

  void add(CQ cq);

  std::string to_string() const;

  friend bool operator==(const UCQ&, const UCQ&) = default;

 private:
  std::size_t arity_;
  std::vector<CQ> disjuncts_;
};

/// Tuple-generating dependency body -> exists z. head. A tgd with an empty
/// body is a fact tgd. Head variables absent from the body are existential.
class TGD {
 public:
  /// Throws SafetyError for an empty head or when a null occurs.
  TGD(std::vector<Atom> body, std::vector<Atom> head);

  const std::vector<Atom>& body() const { return body_; }
  const std::vector<Atom>& head() const { return head_; }
  /// Body variables that also occur in the head, in order of first body
  /// occurrence.
  const std::vector<Term>& frontier() const { return frontier_; }
  /// Head variables absent from the body, in order of first head occurrence.
  const std::vector<Term>& existentials() const { return existentials_; }

  bool is_fact() const { return body_.empty(); }
  bool is_full() const { return existentials_.empty(); }
  bool is_linear() const { return body_.size() == 1; }
  std::vector<Term> body_variables() const;
  std::vector<Term> variables() const;
  std::vector<Term> constants() const;

  TGD substitute(const Substitution& s) const;

  std::string to_string() const;

  friend bool operator==(const TGD&, const TGD&) = default;

 private:
  std::vector<Atom> body_;
  std::vector<Atom> head_;
  std::vector<Term> frontier_;
  std::vector<Term> existentials_;
};

/// Predicates occurring in the tgds, sorted by name (sch(Sigma)).
Schema schema_of(std::span<const TGD> tgds);
std::vector<Term> constants_of(std::span<const TGD> tgds);

/// Ontology-mediated query (S, Sigma, q).
class OMQ {
 public:
  /// Throws ArityError when a predicate is used with two arities.
  OMQ(Schema data_schema, std::vector<TGD> tgds, UCQ query);

  const Schema& data_schema() const { return data_schema_; }
  const std::vector<TGD>& tgds() const { return tgds_; }
  const UCQ& query() const { return query_; }
  std::size_t arity() const { return query_.arity(); }

  /// Every predicate of S, Sigma and q.
  Schema full_schema() const;

 private:
  Schema data_schema_;
  std::vector<TGD> tgds_;
  UCQ query_;
};

/// Renders a tuple as `(a,b)`.
std::string tuple_to_string(std::span<const Term> tuple);

}  // namespace omq
