#pragma once

#include <string>
#include <string_view>

#include "omq/parser.hpp"

namespace omq::fixtures {

inline constexpr std::string_view kWorkedExample = R"(
schema { P/1, T/1 }
tgds t {
  P(x) -> exists y . R(x,y).
  R(x,y) -> P(y).
  T(x) -> P(x).
}
query q(x) :- R(x,y), P(y).
query rew(x) :- P(x).
query rew(x) :- T(x).
)";

inline Program program(std::string_view text) { return parse_program(text); }

/// The single query of a one-line program such as "query q(x) :- R(x,y).".
inline CQ cq(std::string_view clause) {
  const auto p = parse_program(clause);
  return p.queries.begin()->second.disjuncts().front();
}

inline Atom atom(std::string_view text) {
  return cq("query q() :- " + std::string(text) + ".").body().front();
}

inline TGD tgd(std::string_view text) {
  const auto p = parse_program("tgds t { " + std::string(text) + ". }");
  return p.tgds.begin()->second.front();
}

inline std::vector<TGD> tgds(std::string_view block) {
  const auto p = parse_program("tgds t { " + std::string(block) + " }");
  return p.tgds.begin()->second;
}

inline Database database(std::string_view facts) {
  const auto p = parse_program("database d { " + std::string(facts) + " }");
  return p.databases.begin()->second;
}

inline Term c(std::string_view name) { return Term::constant(name); }
inline Term v(std::string_view name) { return Term::variable(name); }

}  // namespace omq::fixtures
