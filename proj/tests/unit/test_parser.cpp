#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "omq/parser.hpp"
#include "omq/rewrite.hpp"
#include "omq/testkit.hpp"

using namespace omq;
using namespace omq::fixtures;

namespace {

void expect_same_program(const Program& a, const Program& b) {
  EXPECT_EQ(a.schema, b.schema);
  EXPECT_EQ(a.tgds, b.tgds);
  EXPECT_EQ(a.databases, b.databases);
  ASSERT_EQ(a.queries.size(), b.queries.size());
  for (const auto& [name, q] : a.queries) {
    const UCQ& other = b.query(name);
    ASSERT_EQ(q.size(), other.size()) << name;
    for (std::size_t i = 0; i < q.size(); ++i) {
      EXPECT_TRUE(isomorphic(q.disjuncts()[i], other.disjuncts()[i])) << name;
    }
  }
}

}  // namespace

TEST(Parser, WorkedExampleProgram) {
  const Program p = parse_program(
      "schema { P/1, T/1 } tgds t { P(x) -> exists y . R(x,y). R(x,y) -> P(y). "
      "T(x) -> P(x). } query q(x) :- R(x,y), P(y).");
  EXPECT_EQ(p.schema, (Schema{Predicate("P", 1), Predicate("T", 1)}));
  const auto& t = p.tgd_block("t");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].existentials(), std::vector<Term>{v("y")});
  EXPECT_TRUE(t[1].is_full());
  const UCQ& q = p.query("q");
  ASSERT_EQ(q.size(), 1u);
  EXPECT_EQ(q.disjuncts()[0].answer(), std::vector<Term>{v("x")});
  EXPECT_EQ(q.disjuncts()[0].size(), 2u);
}

TEST(Parser, BooleanQueryWithConstant) {
  const Program p = parse_program("schema { P/1 } query q() :- P(a).");
  const CQ& q = p.query("q").disjuncts()[0];
  EXPECT_TRUE(q.is_boolean());
  EXPECT_EQ(q.body()[0][0], c("a"));
}

TEST(Parser, ArityConflictIsReported) {
  try {
    parse_program("schema { P/1 } tgds t { P(x,y) -> P(x). }");
    FAIL() << "no error";
  } catch (const ArityError& e) {
    ASSERT_TRUE(e.location().has_value());
    EXPECT_EQ(e.location()->line, 1u);
  }
}

TEST(Parser, ErrorsCarryLocations) {
  const std::vector<std::string> bad{
      "schema { P/1 ",                      // syntax
      "query q(x) :- P(y).",                // safety
      "database d { P($frz1). }",           // reserved
      "schema { P/1 }\nquery q() :- P(x",  // syntax on line 2
  };
  for (const auto& text : bad) {
    try {
      parse_program(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_TRUE(e.location().has_value()) << text;
    }
  }
  EXPECT_THROW(parse_program("database d { P(_:1). }"), Error);
}

TEST(Parser, FactTgdAndUnion) {
  const Program p = parse_program(
      "tgds t { true -> exists z . P(z). } query q(x) :- P(x). query q(x) :- T(x).");
  EXPECT_TRUE(p.tgd_block("t")[0].is_fact());
  EXPECT_EQ(p.query("q").size(), 2u);
}

TEST(Parser, CommentsAreIgnored) {
  const Program p = parse_program("% header\nschema { P/1 } % trailing\n");
  EXPECT_EQ(p.schema.size(), 1u);
}

TEST(Parser, UnknownNamesThrow) {
  const Program p = parse_program("schema { P/1 }");
  EXPECT_THROW(p.query("nope"), NameError);
  EXPECT_THROW(p.tgd_block("nope"), NameError);
  EXPECT_THROW(p.database("nope"), NameError);
}

TEST(Serializer, EmptyTgdBlock) {
  const Program p = parse_program("tgds t { }");
  EXPECT_NE(serialize_program(p).find("tgds t { }"), std::string::npos);
}

TEST(Serializer, Database) {
  EXPECT_EQ(database_text("d", database("P(a).")), "database d { P(a). }");
}

TEST(Serializer, WorkedExampleRoundTrip) {
  const Program p = parse_program(kWorkedExample);
  expect_same_program(p, parse_program(serialize_program(p)));
}

TEST(Serializer, VariablesThatReadAsConstantsArePrefixed) {
  EXPECT_EQ(term_text(Term::variable("a")), "?a");
  EXPECT_EQ(term_text(Term::variable("X")), "X");
  EXPECT_EQ(term_text(Term::constant("0")), "0");
  EXPECT_TRUE(reads_as_variable("x1"));
  EXPECT_FALSE(reads_as_variable("c1"));
}

TEST(Serializer, RandomProgramsRoundTrip) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.max_disjuncts = 2;
    cfg.max_answer_arity = 2;
    cfg.fact_tgds = seed % 2 == 0;
    const OMQ q = random_omq(cfg);
    Program p;
    p.schema = q.data_schema();
    p.tgds.emplace("t", q.tgds());
    p.queries.emplace("q", q.query());
    p.databases.emplace("d", Database({Atom(q.data_schema().predicates()[0],
                                            std::vector<Term>(q.data_schema().predicates()[0].arity(), c("k")))}));
    expect_same_program(p, parse_program(serialize_program(p)));
  }
}
