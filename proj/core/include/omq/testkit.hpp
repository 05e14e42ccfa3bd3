#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "omq/model.hpp"

namespace omq {

enum class TargetClass { kLinear, kNonRecursive, kSticky, kFull, kAny };

const char* to_string(TargetClass c);
/// Accepts "L", "NR", "S", "F", "any" and the long names.
TargetClass parse_target_class(std::string_view text);

struct GeneratorConfig {
  std::uint64_t seed = 1;
  std::size_t max_predicates = 3;
  std::size_t max_arity = 2;
  std::size_t max_tgds = 3;
  std::size_t max_body_atoms = 2;
  std::size_t max_query_atoms = 3;
  /// Upper bound on the answer arity of generated queries.
  std::size_t max_answer_arity = 1;
  /// Disjuncts per query; above 1 the query may be a proper UCQ.
  std::size_t max_disjuncts = 1;
  TargetClass target = TargetClass::kAny;
  /// Allow tgds with an empty body.
  bool fact_tgds = false;
  /// Every predicate belongs to the data schema (otherwise each does with
  /// probability 0.6).
  bool full_data_schema = false;
  std::size_t max_attempts = 10'000;
};

/// Deterministic in `cfg`: the same configuration gives the same OMQ on
/// every platform. Rule sets are regenerated until they belong to
/// `cfg.target`. Predicates have arity >= 1, tgds have a single head atom
/// sharing at least one frontier variable with the body when the body is
/// nonempty, and no constants occur.
OMQ random_omq(const GeneratorConfig& cfg);

/// The sticky family Q^n = ({S/n}, Sigma^n, Ans(0,1)) for n >= 1:
///
///     S(x1..xn) -> Pn(x1..xn,0,1)
///     Pi(.., z at i, .., z, o), Pi(.., o at i, .., z, o) -> Pi-1(.., z at i, .., z, o)
///     P0(z,..,z,z,o) -> Ans(z,o)
///
/// Each Pi has arity n+2 and every tgd is lossless.
OMQ sticky_family(std::size_t n);

/// `count` constants c1..ck, skipping names listed in `avoid`.
std::vector<Term> fresh_constants(std::size_t count, std::span<const Term> avoid = {});

/// Every atom over `schema` and `constants`, predicates by name and tuples in
/// lexicographic order of `constants`.
std::vector<Atom> ground_atoms(const Schema& schema, std::span<const Term> constants);

inline constexpr std::size_t kDefaultMaxGround = 24;

/// Calls `visit` once for every database over `constants` with at most
/// `max_atoms` atoms, by size and then lexicographically over
/// ground_atoms(). Returning false stops. Throws EnumerationTooLarge when
/// there are more than `max_ground` ground atoms.
void for_each_database(const Schema& schema, std::span<const Term> constants,
                       std::size_t max_atoms,
                       const std::function<bool(const Database&)>& visit,
                       std::size_t max_ground = kDefaultMaxGround);

std::vector<Database> enumerate_databases(const Schema& schema, std::size_t max_constants,
                                          std::size_t max_atoms,
                                          std::size_t max_ground = kDefaultMaxGround);

/// sum_{j <= max_atoms} C(ground, j), saturating.
std::uint64_t database_count(std::size_t ground, std::size_t max_atoms);

}  // namespace omq
