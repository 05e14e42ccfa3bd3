#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "omq/term.hpp"

namespace omq {

class Predicate {
 public:
  Predicate(std::string_view name, std::uint32_t arity)
      : name_(SymbolTable::intern(name)), arity_(arity) {}

  std::string_view name() const { return SymbolTable::name(name_); }
  std::uint32_t arity() const { return arity_; }
  std::uint32_t name_id() const { return name_; }

  std::string to_string() const;

  friend auto operator<=>(const Predicate&, const Predicate&) = default;

 private:
  std::uint32_t name_;
  std::uint32_t arity_;
};

class Atom {
 public:
  /// Throws ArityError when `args.size()` differs from the predicate arity.
  Atom(Predicate predicate, std::vector<Term> args);

  const Predicate& predicate() const { return predicate_; }
  const std::vector<Term>& args() const { return args_; }
  std::size_t arity() const { return args_.size(); }
  const Term& operator[](std::size_t i) const { return args_[i]; }

  bool is_ground() const;   // no variables
  bool is_fact() const;     // constants only
  bool has_variables() const { return !is_ground(); }

  std::string to_string() const;

  friend auto operator<=>(const Atom&, const Atom&) = default;
  friend bool operator==(const Atom&, const Atom&) = default;

 private:
  Predicate predicate_;
  std::vector<Term> args_;
};

/// Sorts and removes duplicates: atom collections are sets.
void canonicalize(std::vector<Atom>& atoms);

/// Every term occurring as an argument.
std::set<Term> active_domain(std::span<const Atom> atoms);

/// Variables of `atoms` in order of first occurrence.
std::vector<Term> variables_of(std::span<const Atom> atoms);
std::vector<Term> constants_of(std::span<const Atom> atoms);

/// A set of predicates with pairwise distinct names.
class Schema {
 public:
  Schema() = default;
  Schema(std::initializer_list<Predicate> predicates);

  /// Adds `p`; throws ArityError if a predicate of the same name and another
  /// arity is present. Returns false if `p` was already present.
  bool add(const Predicate& p);
  bool contains(const Predicate& p) const;
  std::optional<Predicate> find(std::string_view name) const;

  const std::vector<Predicate>& predicates() const { return predicates_; }
  std::size_t size() const { return predicates_.size(); }
  bool empty() const { return predicates_.empty(); }
  std::uint32_t max_arity() const;

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::vector<Predicate> predicates_;  // sorted by name
};

}  // namespace omq

template <>
struct std::hash<omq::Predicate> {
  std::size_t operator()(const omq::Predicate& p) const noexcept {
    return (static_cast<std::size_t>(p.name_id()) << 8) ^ p.arity();
  }
};

template <>
struct std::hash<omq::Atom> {
  std::size_t operator()(const omq::Atom& a) const noexcept {
    std::size_t h = std::hash<omq::Predicate>{}(a.predicate());
    for (const auto& t : a.args()) {
      h = h * 1000003u ^ std::hash<omq::Term>{}(t);
    }
    return h;
  }
};
