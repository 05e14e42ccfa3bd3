#include "omq/substitution.hpp"

#include <algorithm>
#include <cassert>

namespace omq {
namespace {

auto find_binding(const std::vector<std::pair<Term, Term>>& v, const Term& k) {
  return std::lower_bound(
      v.begin(), v.end(), k,
      [](const std::pair<Term, Term>& b, const Term& key) { return b.first < key; });
}

}  // namespace

Substitution::Substitution(std::initializer_list<std::pair<Term, Term>> bindings) {
  for (const auto& [var, value] : bindings) bind(var, value);
}

void Substitution::bind(const Term& var, const Term& value) {
  assert(var.is_variable());
  auto it = find_binding(bindings_, var);
  if (it != bindings_.end() && it->first == var) {
    bindings_[it - bindings_.begin()].second = value;
    return;
  }
  bindings_.insert(it, {var, value});
}

void Substitution::erase(const Term& var) {
  auto it = find_binding(bindings_, var);
  if (it != bindings_.end() && it->first == var) bindings_.erase(it);
}

std::optional<Term> Substitution::lookup(const Term& var) const {
  auto it = find_binding(bindings_, var);
  if (it != bindings_.end() && it->first == var) return it->second;
  return std::nullopt;
}

void Substitution::push(const Term& var, const Term& value) { bind(var, value); }
void Substitution::pop(const Term& var) { erase(var); }

Term Substitution::apply(const Term& t) const {
  if (!t.is_variable()) return t;
  auto found = lookup(t);
  return found ? *found : t;
}

Atom Substitution::apply(const Atom& a) const {
  std::vector<Term> args;
  args.reserve(a.arity());
  for (const auto& t : a.args()) args.push_back(apply(t));
  return Atom(a.predicate(), std::move(args));
}

std::vector<Term> Substitution::apply(std::span<const Term> terms) const {
  std::vector<Term> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(apply(t));
  return out;
}

std::vector<Atom> Substitution::apply(std::span<const Atom> atoms) const {
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) out.push_back(apply(a));
  canonicalize(out);
  return out;
}

Substitution Substitution::normalized() const {
  Substitution out;
  for (const auto& [var, value] : bindings_) {
    std::vector<Term> path{var};
    Term current = value;
    while (current.is_variable()) {
      auto seen = std::find(path.begin(), path.end(), current);
      if (seen != path.end()) {
        current = *std::min_element(seen, path.end(), name_less);
        break;
      }
      auto next = lookup(current);
      if (!next) break;
      path.push_back(current);
      current = *next;
    }
    if (current != var) out.bind(var, current);
  }
  return out;
}

std::string Substitution::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < bindings_.size(); ++i) {
    if (i > 0) out += ", ";
    out += bindings_[i].first.to_string() + "->" + bindings_[i].second.to_string();
  }
  return out + "}";
}

Substitution compose(const Substitution& first, const Substitution& second) {
  Substitution out;
  for (const auto& [var, value] : first.bindings()) {
    Term image = second.apply(value);
    if (image != var) out.bind(var, image);
  }
  for (const auto& [var, value] : second.bindings()) {
    if (!first.binds(var) && value != var) out.bind(var, value);
  }
  return out;
}

}  // namespace omq
