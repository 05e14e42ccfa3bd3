#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "omq/atom.hpp"

namespace omq {

/// Finite map from variables to terms, stored as a sorted flat map.
///
/// `apply` performs a single lookup per variable; call `normalized()` first
/// when the map may contain chains such as {x->y, y->z}.
class Substitution {
 public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<Term, Term>> bindings);

  /// Binds `var` (which must be a variable) to `value`, replacing any
  /// previous binding.
  void bind(const Term& var, const Term& value);
  void erase(const Term& var);
  std::optional<Term> lookup(const Term& var) const;
  bool binds(const Term& var) const { return lookup(var).has_value(); }

  Term apply(const Term& t) const;
  Atom apply(const Atom& a) const;
  std::vector<Term> apply(std::span<const Term> terms) const;
  /// Result is canonicalized (sorted, duplicates collapsed).
  std::vector<Atom> apply(std::span<const Atom> atoms) const;

  /// Resolves chains so that no variable in the range is in the domain, and
  /// drops identity bindings. Cyclic chains among variables collapse onto
  /// the variable of the cycle with the smallest name.
  Substitution normalized() const;

  const std::vector<std::pair<Term, Term>>& bindings() const {
    return bindings_;
  }
  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }

  std::string to_string() const;

  friend bool operator==(const Substitution&, const Substitution&) = default;
  friend auto operator<=>(const Substitution&, const Substitution&) = default;

  // Stack-style helpers for backtracking search.
  void push(const Term& var, const Term& value);
  void pop(const Term& var);

 private:
  std::vector<std::pair<Term, Term>> bindings_;  // sorted by variable
};

/// Returns s such that apply(s, t) == apply(second, apply(first, t)) for all
/// terms t. Identity bindings are dropped.
Substitution compose(const Substitution& first, const Substitution& second);

}  // namespace omq
