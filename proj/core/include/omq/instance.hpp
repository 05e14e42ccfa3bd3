#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "omq/atom.hpp"
#include "omq/query.hpp"

namespace omq {

/// Finite set of variable-free atoms (constants and nulls), indexed by
/// predicate and by (predicate, position, term) for homomorphism search.
/// Atoms keep their insertion order.
class Instance {
 public:
  Instance() = default;
  explicit Instance(std::span<const Atom> atoms);

  /// Returns false if the atom was already present. Throws SafetyError if the
  /// atom contains a variable.
  bool insert(const Atom& atom);
  bool contains(const Atom& atom) const;

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  /// Indices into atoms() of the atoms over `p`.
  std::span<const std::uint32_t> with_predicate(const Predicate& p) const;
  /// Indices of atoms over `p` carrying `t` at position `pos`.
  std::span<const std::uint32_t> with_term(const Predicate& p,
                                           std::uint32_t pos,
                                           const Term& t) const;

  /// Largest null id occurring, 0 when there is none.
  std::uint32_t max_null_id() const { return max_null_; }

  /// Atoms in canonical (sorted) order.
  std::vector<Atom> sorted_atoms() const;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.set_ == b.set_;
  }

 private:
  struct PositionKey {
    Predicate predicate;
    std::uint32_t position;
    Term term;
    bool operator==(const PositionKey&) const = default;
  };
  struct PositionKeyHash {
    std::size_t operator()(const PositionKey& k) const noexcept;
  };

  std::vector<Atom> atoms_;
  std::unordered_set<Atom> set_;
  std::unordered_map<Predicate, std::vector<std::uint32_t>> by_predicate_;
  std::unordered_map<PositionKey, std::vector<std::uint32_t>, PositionKeyHash>
      by_position_;
  std::uint32_t max_null_ = 0;
};

/// Finite set of facts (constants only), kept in canonical order.
class Database {
 public:
  Database() = default;
  /// Throws SafetyError if an atom contains a variable or a null.
  explicit Database(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  Instance to_instance() const { return Instance(atoms_); }

  std::string to_string() const;

  friend bool operator==(const Database&, const Database&) = default;
  friend auto operator<=>(const Database&, const Database&) = default;

 private:
  std::vector<Atom> atoms_;
};

std::set<Term> active_domain(const Instance& instance);
std::set<Term> active_domain(const Database& db);

/// A CQ turned into a database by replacing every variable with a fresh
/// constant from the reserved `$frz` namespace.
struct FrozenQuery {
  Database database;
  std::vector<Term> answer;
  /// variable -> frozen constant
  Substitution freezing;
};

/// Prefix of constants created by freeze(); the parser rejects it.
inline constexpr std::string_view kFrozenPrefix = "$frz";

FrozenQuery freeze(const CQ& q);

}  // namespace omq
