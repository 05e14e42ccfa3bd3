#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace omq {

/// Process-wide string interner. Ids are stable for the lifetime of the
/// process and the table is safe for concurrent use.
class SymbolTable {
 public:
  static std::uint32_t intern(std::string_view name);
  static std::string_view name(std::uint32_t id);
};

/// A constant, a variable, or a labeled null. Constants and variables are
/// named; nulls carry a positive integer id. The three namespaces are
/// disjoint and equality is structural.
class Term {
 public:
  enum class Kind : std::uint8_t { kConstant = 0, kVariable = 1, kNull = 2 };

  static Term constant(std::string_view name) {
    return Term(Kind::kConstant, SymbolTable::intern(name));
  }
  static Term variable(std::string_view name) {
    return Term(Kind::kVariable, SymbolTable::intern(name));
  }
  static Term null(std::uint32_t id) { return Term(Kind::kNull, id); }

  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ == Kind::kConstant; }
  bool is_variable() const { return kind_ == Kind::kVariable; }
  bool is_null() const { return kind_ == Kind::kNull; }

  /// Name of a constant or variable. Must not be called on nulls.
  std::string_view name() const { return SymbolTable::name(id_); }
  std::uint32_t null_id() const { return id_; }
  std::uint32_t raw_id() const { return id_; }

  /// Constants and variables print as their name, nulls as `_:n`.
  std::string to_string() const;

  friend auto operator<=>(const Term&, const Term&) = default;

 private:
  Term(Kind kind, std::uint32_t id) : kind_(kind), id_(id) {}

  Kind kind_;
  std::uint32_t id_;
};

/// Orders terms by kind, then by name (nulls by id). Unlike `operator<`,
/// this order does not depend on interning history.
bool name_less(const Term& a, const Term& b);

}  // namespace omq

template <>
struct std::hash<omq::Term> {
  std::size_t operator()(const omq::Term& t) const noexcept {
    return (static_cast<std::size_t>(t.raw_id()) << 2) ^
           static_cast<std::size_t>(t.kind());
  }
};
