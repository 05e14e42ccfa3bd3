#include "omq/atom.hpp"

#include <algorithm>

#include "omq/errors.hpp"

namespace omq {

std::string Predicate::to_string() const {
  return std::string(name()) + "/" + std::to_string(arity_);
}

Atom::Atom(Predicate predicate, std::vector<Term> args)
    : predicate_(predicate), args_(std::move(args)) {
  if (args_.size() != predicate_.arity()) {
    throw ArityError("predicate " + std::string(predicate_.name()) +
                     " has arity " + std::to_string(predicate_.arity()) +
                     " but is used with " + std::to_string(args_.size()) +
                     " arguments");
  }
}

bool Atom::is_ground() const {
  return std::none_of(args_.begin(), args_.end(),
                      [](const Term& t) { return t.is_variable(); });
}

bool Atom::is_fact() const {
  return std::all_of(args_.begin(), args_.end(),
                     [](const Term& t) { return t.is_constant(); });
}

std::string Atom::to_string() const {
  std::string out(predicate_.name());
  out += '(';
  for (std::size_t i = 0; i < args_.size(); ++i) {
    if (i > 0) out += ',';
    out += args_[i].to_string();
  }
  out += ')';
  return out;
}

void canonicalize(std::vector<Atom>& atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
}

std::set<Term> active_domain(std::span<const Atom> atoms) {
  std::set<Term> out;
  for (const auto& a : atoms) out.insert(a.args().begin(), a.args().end());
  return out;
}

namespace {

template <typename Pred>
std::vector<Term> collect(std::span<const Atom> atoms, Pred keep) {
  std::vector<Term> out;
  for (const auto& a : atoms) {
    for (const auto& t : a.args()) {
      if (keep(t) && std::find(out.begin(), out.end(), t) == out.end()) {
        out.push_back(t);
      }
    }
  }
  return out;
}

}  // namespace

std::vector<Term> variables_of(std::span<const Atom> atoms) {
  return collect(atoms, [](const Term& t) { return t.is_variable(); });
}

std::vector<Term> constants_of(std::span<const Atom> atoms) {
  return collect(atoms, [](const Term& t) { return t.is_constant(); });
}

Schema::Schema(std::initializer_list<Predicate> predicates) {
  for (const auto& p : predicates) add(p);
}

bool Schema::add(const Predicate& p) {
  auto it = std::lower_bound(
      predicates_.begin(), predicates_.end(), p,
      [](const Predicate& a, const Predicate& b) { return a.name() < b.name(); });
  if (it != predicates_.end() && it->name() == p.name()) {
    if (it->arity() != p.arity()) {
      throw ArityError("predicate " + std::string(p.name()) +
                       " declared with arities " +
                       std::to_string(it->arity()) + " and " +
                       std::to_string(p.arity()));
    }
    return false;
  }
  predicates_.insert(it, p);
  return true;
}

bool Schema::contains(const Predicate& p) const {
  auto found = find(p.name());
  return found && *found == p;
}

std::optional<Predicate> Schema::find(std::string_view name) const {
  auto it = std::lower_bound(
      predicates_.begin(), predicates_.end(), name,
      [](const Predicate& a, std::string_view n) { return a.name() < n; });
  if (it != predicates_.end() && it->name() == name) return *it;
  return std::nullopt;
}

std::uint32_t Schema::max_arity() const {
  std::uint32_t m = 0;
  for (const auto& p : predicates_) m = std::max(m, p.arity());
  return m;
}

}  // namespace omq
