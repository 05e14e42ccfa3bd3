#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "omq/classify.hpp"
#include "omq/eval.hpp"
#include "omq/testkit.hpp"
#include "oracles.hpp"

using namespace omq;
using namespace omq::fixtures;

TEST(StickyFamily, Shape) {
  const OMQ q = sticky_family(3);
  EXPECT_EQ(q.tgds().size(), 5u);
  EXPECT_EQ(q.data_schema(), Schema{Predicate("S", 3)});
  for (const auto& t : q.tgds()) {
    for (const auto& h : t.head()) {
      if (h.predicate().name() != "Ans") {
        EXPECT_EQ(h.arity(), 5u);
      }
    }
  }
  ASSERT_EQ(q.query().size(), 1u);
  EXPECT_EQ(q.query().disjuncts()[0].body(), std::vector<Atom>{atom("Ans(0,1)")});
  EXPECT_THROW(sticky_family(0), PreconditionViolated);
}

TEST(StickyFamily, IsStickyAndLossless) {
  for (std::size_t n = 2; n <= 6; ++n) {
    const OMQ q = sticky_family(n);
    EXPECT_TRUE(classify(q.tgds()).sticky);
    for (const auto& t : q.tgds()) {
      if (t.head()[0].predicate().name() == "Ans") continue;
      for (const auto& x : t.body_variables()) {
        const auto& f = t.frontier();
        EXPECT_NE(std::find(f.begin(), f.end(), x), f.end()) << n;
      }
    }
  }
}

TEST(StickyFamily, SmallestSatisfyingDatabase) {
  const OMQ q = sticky_family(2);
  const PreparedOMQ p(q);
  auto smallest = [&](std::span<const Term> constants) {
    std::size_t best = 0;
    for_each_database(q.data_schema(), constants, 4, [&](const Database& db) {
      if (p.answers(db).empty()) return true;
      best = db.size();
      return false;
    });
    return best;
  };
  // Fresh constants never reach Ans(0,1); over {0,1} every tuple is needed.
  EXPECT_EQ(smallest(fresh_constants(2)), 0u);
  const std::vector<Term> bits{c("0"), c("1")};
  EXPECT_EQ(smallest(bits), 4u);
}

TEST(RandomOMQ, Deterministic) {
  GeneratorConfig cfg;
  cfg.seed = 7;
  cfg.max_disjuncts = 2;
  const OMQ a = random_omq(cfg);
  const OMQ b = random_omq(cfg);
  EXPECT_EQ(a.tgds(), b.tgds());
  EXPECT_EQ(a.query(), b.query());
  EXPECT_EQ(a.data_schema(), b.data_schema());
}

TEST(RandomOMQ, TargetClassesHold) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.max_tgds = 4;
    cfg.max_arity = 3;
    cfg.target = TargetClass::kLinear;
    EXPECT_TRUE(classify(random_omq(cfg).tgds()).linear) << seed;
    cfg.target = TargetClass::kNonRecursive;
    EXPECT_TRUE(stratify(random_omq(cfg).tgds()).ok()) << seed;
    cfg.target = TargetClass::kSticky;
    EXPECT_TRUE(classify(random_omq(cfg).tgds()).sticky) << seed;
    cfg.target = TargetClass::kFull;
    EXPECT_TRUE(classify(random_omq(cfg).tgds()).full) << seed;
  }
}

TEST(RandomOMQ, RespectsBounds) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.max_predicates = 1 + seed % 4;
    cfg.max_arity = 1 + seed % 3;
    cfg.max_tgds = seed % 5;
    cfg.max_body_atoms = 1 + seed % 2;
    cfg.max_query_atoms = 1 + seed % 3;
    cfg.max_answer_arity = seed % 2;
    cfg.max_disjuncts = 1 + seed % 2;
    const OMQ q = random_omq(cfg);
    EXPECT_LE(q.full_schema().size(), cfg.max_predicates);
    EXPECT_LE(q.full_schema().max_arity(), cfg.max_arity);
    EXPECT_LE(q.tgds().size(), cfg.max_tgds);
    for (const auto& t : q.tgds()) {
      EXPECT_LE(t.body().size(), cfg.max_body_atoms);
      EXPECT_EQ(t.head().size(), 1u);
      if (!t.is_fact()) {
        EXPECT_FALSE(t.frontier().empty());
      }
      EXPECT_TRUE(t.constants().empty());
    }
    EXPECT_LE(q.query().size(), cfg.max_disjuncts);
    EXPECT_LE(q.query().max_atoms(), cfg.max_query_atoms);
    EXPECT_LE(q.arity(), cfg.max_answer_arity);
    EXPECT_FALSE(q.data_schema().empty());
  }
}

TEST(TargetClassNames, ParseBothForms) {
  EXPECT_EQ(parse_target_class("L"), TargetClass::kLinear);
  EXPECT_EQ(parse_target_class("sticky"), TargetClass::kSticky);
  EXPECT_EQ(parse_target_class(to_string(TargetClass::kNonRecursive)), TargetClass::kNonRecursive);
  EXPECT_THROW(parse_target_class("guarded"), NameError);
}

TEST(EnumerateDatabases, SmallCases) {
  const Schema p{Predicate("P", 1)};
  const auto one = enumerate_databases(p, 1, 1);
  ASSERT_EQ(one.size(), 2u);
  EXPECT_TRUE(one[0].empty());
  EXPECT_EQ(one[1], database("P(c1)."));
  EXPECT_EQ(enumerate_databases(p, 2, 2).size(), 4u);
  EXPECT_EQ(enumerate_databases(Schema{Predicate("R", 2)}, 2, 2).size(), 11u);
}

TEST(EnumerateDatabases, ClosedFormCount) {
  const Schema s{Predicate("P", 1), Predicate("R", 2)};
  for (std::size_t k = 1; k <= 3; ++k) {
    const std::size_t ground = k + k * k;
    for (std::size_t m = 0; m <= 3; ++m) {
      std::uint64_t expected = 0;
      for (std::size_t j = 0; j <= m; ++j) expected += oracle::binomial(ground, j);
      const auto dbs = enumerate_databases(s, k, m, 64);
      EXPECT_EQ(dbs.size(), expected);
      EXPECT_EQ(database_count(ground, m), expected);
      EXPECT_EQ(std::set<Database>(dbs.begin(), dbs.end()).size(), dbs.size());
    }
  }
}

TEST(EnumerateDatabases, GuardsAgainstBlowup) {
  EXPECT_THROW(enumerate_databases(Schema{Predicate("R", 3)}, 3, 2), EnumerationTooLarge);
}

TEST(FreshConstants, SkipsAvoided) {
  const std::vector<Term> avoid{c("c1")};
  EXPECT_EQ(fresh_constants(2, avoid), (std::vector<Term>{c("c2"), c("c3")}));
}
