#include "omq/instance.hpp"

#include <algorithm>

#include "omq/errors.hpp"

namespace omq {

std::size_t Instance::PositionKeyHash::operator()(
    const PositionKey& k) const noexcept {
  std::size_t h = std::hash<Predicate>{}(k.predicate);
  h = h * 31u + k.position;
  return h * 1000003u ^ std::hash<Term>{}(k.term);
}

Instance::Instance(std::span<const Atom> atoms) {
  for (const auto& a : atoms) insert(a);
}

bool Instance::insert(const Atom& atom) {
  if (!atom.is_ground()) {
    throw SafetyError("variable in instance atom " + atom.to_string());
  }
  if (!set_.insert(atom).second) return false;
  const auto index = static_cast<std::uint32_t>(atoms_.size());
  atoms_.push_back(atom);
  by_predicate_[atom.predicate()].push_back(index);
  for (std::uint32_t i = 0; i < atom.arity(); ++i) {
    const Term& t = atom[i];
    by_position_[PositionKey{atom.predicate(), i, t}].push_back(index);
    if (t.is_null()) max_null_ = std::max(max_null_, t.null_id());
  }
  return true;
}

bool Instance::contains(const Atom& atom) const { return set_.count(atom) > 0; }

std::span<const std::uint32_t> Instance::with_predicate(
    const Predicate& p) const {
  auto it = by_predicate_.find(p);
  if (it == by_predicate_.end()) return {};
  return it->second;
}

std::span<const std::uint32_t> Instance::with_term(const Predicate& p,
                                                   std::uint32_t pos,
                                                   const Term& t) const {
  auto it = by_position_.find(PositionKey{p, pos, t});
  if (it == by_position_.end()) return {};
  return it->second;
}

std::vector<Atom> Instance::sorted_atoms() const {
  std::vector<Atom> out = atoms_;
  std::sort(out.begin(), out.end());
  return out;
}

Database::Database(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (const auto& a : atoms_) {
    if (!a.is_fact()) {
      throw SafetyError("database atom " + a.to_string() +
                        " is not a fact");
    }
  }
  canonicalize(atoms_);
}

std::string Database::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i > 0) out += ", ";
    out += atoms_[i].to_string();
  }
  return out + "}";
}

std::set<Term> active_domain(const Instance& instance) {
  return active_domain(std::span<const Atom>(instance.atoms()));
}

std::set<Term> active_domain(const Database& db) {
  return active_domain(std::span<const Atom>(db.atoms()));
}

FrozenQuery freeze(const CQ& q) {
  FrozenQuery out;
  std::size_t k = 0;
  for (const auto& v : q.variables()) {
    out.freezing.bind(
        v, Term::constant(std::string(kFrozenPrefix) + std::to_string(++k)));
  }
  out.database = Database(out.freezing.apply(std::span<const Atom>(q.body())));
  out.answer = out.freezing.apply(std::span<const Term>(q.answer()));
  return out;
}

}  // namespace omq
