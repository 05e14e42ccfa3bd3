#include "omq/query.hpp"

#include <algorithm>

#include "omq/errors.hpp"

namespace omq {
namespace {

void reject_nulls(std::span<const Atom> atoms, const char* what) {
  for (const auto& a : atoms) {
    for (const auto& t : a.args()) {
      if (t.is_null()) {
        throw SafetyError(std::string("null ") + t.to_string() + " in " + what);
      }
    }
  }
}

void push_unique(std::vector<Term>& out, const Term& t) {
  if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
}

std::string atoms_to_string(std::span<const Atom> atoms) {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i > 0) out += ", ";
    out += atoms[i].to_string();
  }
  return out;
}

}  // namespace

std::string tuple_to_string(std::span<const Term> tuple) {
  std::string out = "(";
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i > 0) out += ',';
    out += tuple[i].to_string();
  }
  return out + ")";
}

// CQ

CQ::CQ(std::vector<Term> answer, std::vector<Atom> body)
    : answer_(std::move(answer)), body_(std::move(body)) {
  canonicalize(body_);
  reject_nulls(body_, "query body");
  const auto vars = variables_of(body_);
  for (const auto& t : answer_) {
    if (t.is_null()) throw SafetyError("null in answer tuple");
    if (t.is_variable() &&
        std::find(vars.begin(), vars.end(), t) == vars.end()) {
      throw SafetyError("answer variable " + t.to_string() +
                        " does not occur in the query body");
    }
  }
}

std::vector<Term> CQ::variables() const {
  std::vector<Term> out;
  for (const auto& t : answer_) {
    if (t.is_variable()) push_unique(out, t);
  }
  for (const auto& t : variables_of(body_)) push_unique(out, t);
  return out;
}

std::vector<Term> CQ::terms() const {
  std::vector<Term> out;
  for (const auto& t : answer_) push_unique(out, t);
  for (const auto& a : body_) {
    for (const auto& t : a.args()) push_unique(out, t);
  }
  return out;
}

std::vector<Predicate> CQ::predicates() const {
  std::vector<Predicate> out;
  for (const auto& a : body_) {
    if (std::find(out.begin(), out.end(), a.predicate()) == out.end()) {
      out.push_back(a.predicate());
    }
  }
  return out;
}

CQ CQ::substitute(const Substitution& s) const {
  return CQ(s.apply(std::span<const Term>(answer_)),
            s.apply(std::span<const Atom>(body_)));
}

std::string CQ::to_string() const {
  std::string out = "q" + tuple_to_string(answer_) + " :- ";
  out += body_.empty() ? "true" : atoms_to_string(body_);
  return out;
}

// UCQ

UCQ::UCQ(CQ cq) : arity_(cq.arity()) { disjuncts_.push_back(std::move(cq)); }

UCQ::UCQ(std::size_t arity, std::vector<CQ> disjuncts) : arity_(arity) {
  for (auto& cq : disjuncts) add(std::move(cq));
}

void UCQ::add(CQ cq) {
  if (cq.arity() != arity_) {
    throw SafetyError("disjunct of arity " + std::to_string(cq.arity()) +
                      " in a union of arity " + std::to_string(arity_));
  }
  disjuncts_.push_back(std::move(cq));
}

bool UCQ::has_true_disjunct() const {
  return std::any_of(disjuncts_.begin(), disjuncts_.end(),
                     [](const CQ& q) { return q.is_true(); });
}

std::size_t UCQ::max_atoms() const {
  std::size_t m = 0;
  for (const auto& q : disjuncts_) m = std::max(m, q.size());
  return m;
}

std::string UCQ::to_string() const {
  if (disjuncts_.empty()) return "false/" + std::to_string(arity_);
  std::string out;
  for (std::size_t i = 0; i < disjuncts_.size(); ++i) {
    if (i > 0) out += " | ";
    out += disjuncts_[i].to_string();
  }
  return out;
}

// TGD

TGD::TGD(std::vector<Atom> body, std::vector<Atom> head)
    : body_(std::move(body)), head_(std::move(head)) {
  if (head_.empty()) throw SafetyError("tgd with empty head");
  canonicalize(body_);
  canonicalize(head_);
  reject_nulls(body_, "tgd body");
  reject_nulls(head_, "tgd head");
  const auto body_vars = variables_of(body_);
  const auto head_vars = variables_of(head_);
  for (const auto& v : body_vars) {
    if (std::find(head_vars.begin(), head_vars.end(), v) != head_vars.end()) {
      frontier_.push_back(v);
    }
  }
  for (const auto& v : head_vars) {
    if (std::find(body_vars.begin(), body_vars.end(), v) == body_vars.end()) {
      existentials_.push_back(v);
    }
  }
}

std::vector<Term> TGD::body_variables() const { return variables_of(body_); }

std::vector<Term> TGD::variables() const {
  auto out = variables_of(body_);
  for (const auto& v : existentials_) out.push_back(v);
  return out;
}

std::vector<Term> TGD::constants() const {
  auto out = constants_of(body_);
  for (const auto& c : constants_of(head_)) push_unique(out, c);
  return out;
}

TGD TGD::substitute(const Substitution& s) const {
  return TGD(s.apply(std::span<const Atom>(body_)),
             s.apply(std::span<const Atom>(head_)));
}

std::string TGD::to_string() const {
  std::string out = body_.empty() ? "true" : atoms_to_string(body_);
  out += " -> ";
  if (!existentials_.empty()) {
    out += "exists ";
    for (std::size_t i = 0; i < existentials_.size(); ++i) {
      if (i > 0) out += ',';
      out += existentials_[i].to_string();
    }
    out += " . ";
  }
  return out + atoms_to_string(head_);
}

Schema schema_of(std::span<const TGD> tgds) {
  Schema out;
  for (const auto& t : tgds) {
    for (const auto& a : t.body()) out.add(a.predicate());
    for (const auto& a : t.head()) out.add(a.predicate());
  }
  return out;
}

std::vector<Term> constants_of(std::span<const TGD> tgds) {
  std::vector<Term> out;
  for (const auto& t : tgds) {
    for (const auto& c : t.constants()) push_unique(out, c);
  }
  return out;
}

// OMQ

OMQ::OMQ(Schema data_schema, std::vector<TGD> tgds, UCQ query)
    : data_schema_(std::move(data_schema)),
      tgds_(std::move(tgds)),
      query_(std::move(query)) {
  (void)full_schema();
}

Schema OMQ::full_schema() const {
  Schema out = data_schema_;
  const Schema rules = schema_of(tgds_);
  for (const auto& p : rules.predicates()) out.add(p);
  for (const auto& q : query_.disjuncts()) {
    for (const auto& a : q.body()) out.add(a.predicate());
  }
  return out;
}

}  // namespace omq
