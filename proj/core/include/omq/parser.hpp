#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "omq/model.hpp"

namespace omq {

/// A parsed program: the data schema, named tgd blocks, named (U)CQs and
/// named databases.
///
/// Text format:
///
///     % comment
///     schema { P/1, T/1 }
///     tgds t {
///       P(x) -> exists y . R(x,y).
///       R(x,y) -> P(y).
///       true -> exists z . P(z).
///     }
///     query q(x) :- R(x,y), P(y).
///     query q(x) :- T(x).          % second disjunct of q
///     query none(x) :- false.      % the empty union
///     database d { P(a). R(a,b). }
///
/// An identifier is a variable when it starts with `?`, an uppercase letter
/// or one of the letters u..z; otherwise it is a constant. `schema` lists the
/// data schema only; other predicates are declared by their first use.
struct Program {
  Schema schema;
  /// Every predicate used or declared anywhere, for arity checking.
  Schema predicates;
  std::map<std::string, std::vector<TGD>, std::less<>> tgds;
  std::map<std::string, UCQ, std::less<>> queries;
  std::map<std::string, Database, std::less<>> databases;

  /// Throws NameError when the name is unknown.
  const std::vector<TGD>& tgd_block(std::string_view name) const;
  const UCQ& query(std::string_view name) const;
  const Database& database(std::string_view name) const;

  /// Every tgd of every block, blocks in name order.
  std::vector<TGD> all_tgds() const;

  /// (schema, tgds, query). An empty `tgds_name` selects all_tgds().
  OMQ omq(std::string_view query_name, std::string_view tgds_name = {}) const;
};

/// Throws SyntaxError, ArityError, SafetyError or ReservedNameError, each
/// carrying the source location of the offending token.
Program parse_program(std::string_view text);

std::string serialize_program(const Program& program);

/// Text of a single term as the parser reads it back. Variables whose name
/// would read as a constant get a `?` prefix.
std::string term_text(const Term& t);
std::string atom_text(const Atom& a);
std::string tgd_text(const TGD& t);
/// `query NAME(...) :- ... .` lines, one per disjunct.
std::string ucq_text(std::string_view name, const UCQ& q);
std::string database_text(std::string_view name, const Database& db);

/// True for identifiers that the parser reads as variables.
bool reads_as_variable(std::string_view name);

}  // namespace omq
