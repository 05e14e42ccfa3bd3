// Acceptance suite. Usage: omq_acceptance [criterion...]; no argument runs all.
// Prints one PASS/FAIL line per criterion and exits 1 if any failed.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "omq/apps.hpp"
#include "omq/classify.hpp"
#include "omq/contain.hpp"
#include "omq/eval.hpp"
#include "omq/rewrite.hpp"
#include "omq/testkit.hpp"

using namespace omq;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

TargetClass rotate(std::uint64_t seed) {
  const TargetClass targets[] = {TargetClass::kLinear, TargetClass::kNonRecursive, TargetClass::kSticky};
  return targets[seed % 3];
}

std::string describe(const OMQ& q) {
  std::string s;
  for (const auto& t : q.tgds()) s += tgd_text(t) + " ";
  return s + "| " + q.query().to_string();
}

Database random_database(const Schema& s, std::size_t constants, std::size_t max_atoms,
                         std::mt19937_64& rng) {
  const auto ground = ground_atoms(s, fresh_constants(constants));
  std::vector<Atom> atoms;
  const std::size_t n = rng() % (max_atoms + 1);
  for (std::size_t i = 0; i < n; ++i) atoms.push_back(ground[rng() % ground.size()]);
  return Database(atoms);
}

bool has_join_outside(const CQ& d, const std::vector<Term>& original) {
  for (const auto& x : d.variables()) {
    const auto n = std::count_if(d.body().begin(), d.body().end(), [&](const Atom& a) {
      return std::find(a.args().begin(), a.args().end(), x) != a.args().end();
    });
    if (n >= 2 && std::find(original.begin(), original.end(), x) == original.end()) return true;
  }
  return false;
}

std::size_t largest_disjunct_terms(const UCQ& u) {
  std::size_t best = 0;
  for (const auto& d : u.disjuncts()) {
    std::set<Term> terms;
    for (const auto& a : d.body()) terms.insert(a.args().begin(), a.args().end());
    best = std::max(best, terms.size());
  }
  return best;
}

// 1. Exact rewriting of the worked example.
Outcome worked_example() {
  const Program p = parse_program(fixtures::kWorkedExample);
  const auto start = Clock::now();
  const UCQ r = xrewrite(p.omq("q"));
  const double t = seconds_since(start);
  const UCQ& expected = p.query("rew");
  bool match = r.size() == expected.size();
  for (const auto& e : expected.disjuncts()) {
    match = match && std::any_of(r.disjuncts().begin(), r.disjuncts().end(),
                                 [&](const CQ& d) { return isomorphic(d, e); });
  }
  return {match && t < 1.0, r.to_string()};
}

RewriteOptions full_rewriting() {
  RewriteOptions o;
  o.prune_subsumed = false;
  return o;
}

// 2. Rewriting disjuncts of linear OMQs have at most |q| atoms.
Outcome linear_bound() {
  std::size_t disjuncts = 0;
  std::size_t bad = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.target = TargetClass::kLinear;
    cfg.max_predicates = 3;
    cfg.max_arity = 3;
    cfg.max_tgds = 4;
    cfg.max_query_atoms = 3;
    cfg.max_answer_arity = 2;
    const OMQ q = random_omq(cfg);
    const std::size_t size = q.query().max_atoms();
    const UCQ rewriting = xrewrite(q, full_rewriting());
    for (const auto& d : rewriting.disjuncts()) {
      ++disjuncts;
      if (d.size() > size) {
        ++bad;
        std::cerr << "  seed " << seed << ": " << d.to_string() << " exceeds " << size << "\n";
      }
    }
  }
  return {bad == 0, std::to_string(disjuncts) + " disjuncts over 50 OMQs, " + std::to_string(bad) +
                        " too large"};
}

// 3. Join variables of sticky rewritings come from the query.
Outcome sticky_joins() {
  std::size_t disjuncts = 0;
  std::size_t bad = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.target = TargetClass::kSticky;
    cfg.max_predicates = 3;
    cfg.max_arity = 3;
    cfg.max_tgds = 3;
    cfg.max_body_atoms = 2;
    cfg.max_query_atoms = 3;
    cfg.max_answer_arity = 1;
    const OMQ q = random_omq(cfg);
    const auto original = q.query().disjuncts()[0].variables();
    const UCQ rewriting = xrewrite(q, full_rewriting());
    for (const auto& d : rewriting.disjuncts()) {
      ++disjuncts;
      if (has_join_outside(d, original)) {
        ++bad;
        std::cerr << "  seed " << seed << ": " << d.to_string() << "\n";
      }
    }
  }
  return {bad == 0, std::to_string(disjuncts) + " disjuncts over 50 OMQs, " + std::to_string(bad) +
                        " violations"};
}

// 4. contains() against exhaustive enumeration up to the witness bound.
Outcome containment_oracle() {
  std::size_t pairs = 0;
  std::size_t agree = 0;
  std::size_t positive = 0;
  std::size_t skipped = 0;
  constexpr std::size_t kMaxGround = 32;
  for (std::uint64_t seed = 1; pairs < 120 && seed < 5000; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.target = rotate(seed);
    cfg.max_predicates = 2;
    cfg.max_arity = 2;
    cfg.max_tgds = 2;
    cfg.max_query_atoms = 2;
    cfg.max_answer_arity = seed % 2;
    cfg.fact_tgds = seed % 5 == 0;
    cfg.full_data_schema = seed % 4 != 0;
    const OMQ q1 = random_omq(cfg);

    // The right-hand side shares S and the answer arity: a second rule set
    // for the same query, a query from another seed, or a relaxed query.
    std::optional<OMQ> q2;
    GeneratorConfig other = cfg;
    other.target = rotate(seed / 3);
    for (std::uint64_t s = seed * 7919; !q2 && s < seed * 7919 + 400; ++s) {
      other.seed = s;
      const OMQ r = random_omq(other);
      if (r.data_schema() != q1.data_schema() || r.arity() != q1.arity()) continue;
      try {
        switch (seed % 3) {
          case 0:
            q2 = OMQ(q1.data_schema(), r.tgds(), q1.query());
            break;
          case 1:
            q2 = r;
            break;
          default: {
            const CQ& d = q1.query().disjuncts()[0];
            std::vector<Atom> body(d.body().begin(), d.body().end() - (d.size() > 1 ? 1 : 0));
            q2 = OMQ(q1.data_schema(), r.tgds(), UCQ(CQ(d.answer(), body)));
          }
        }
      } catch (const Error&) {
        q2.reset();
      }
    }
    if (!q2) continue;

    const auto bound = witness_bound(q1).value;
    const std::size_t constants = std::max<std::size_t>(1, largest_disjunct_terms(xrewrite(q1)));
    const auto known = constants_of(q1).size() + constants_of(*q2).size();
    const auto ground = ground_atoms(q1.data_schema(), fresh_constants(constants + known)).size();
    if (bound > 4 || ground > kMaxGround) {
      ++skipped;
      continue;
    }
    BruteForceOptions o;
    o.max_atoms = bound;
    o.max_constants = constants;
    o.max_ground = kMaxGround;
    const auto brute = brute_force_contains(q1, *q2, o);
    const auto verdict = contains(q1, *q2);
    ++pairs;
    positive += verdict.contained;
    if (brute.contained == verdict.contained) {
      ++agree;
    } else {
      std::cerr << "  seed " << seed << ": contains=" << verdict.contained
                << " brute=" << brute.contained << "\n    " << describe(q1) << "\n    "
                << describe(*q2) << "\n";
    }
  }
  return {pairs >= 100 && agree == pairs,
          std::to_string(agree) + "/" + std::to_string(pairs) + " agree (" +
              std::to_string(positive) + " contained, " + std::to_string(skipped) +
              " pairs above the enumeration limit skipped)"};
}

// 5. Chase and rewriting agree on non-recursive OMQs.
Outcome nr_strategies() {
  std::size_t agree = 0;
  std::size_t nonempty = 0;
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.target = TargetClass::kNonRecursive;
    cfg.max_predicates = 3;
    cfg.max_arity = 2;
    cfg.max_tgds = 4;
    cfg.max_query_atoms = 3;
    cfg.max_answer_arity = 2;
    cfg.fact_tgds = seed % 4 == 0;
    cfg.full_data_schema = seed % 2 == 0;
    const OMQ q = random_omq(cfg);
    const Database db = random_database(q.data_schema(), 3, 4, rng);
    const auto chase = certain_answers(q, db, Strategy::kChase);
    const auto rewriting = certain_answers(q, db, Strategy::kRewriting);
    nonempty += !chase.empty();
    if (chase == rewriting) {
      ++agree;
    } else {
      std::cerr << "  seed " << seed << ": " << describe(q) << " on " << db.to_string() << "\n";
    }
  }
  return {agree == 100, std::to_string(agree) + "/100 agree (" + std::to_string(nonempty) +
                            " with answers)"};
}

// 6. Both reductions between evaluation and containment.
Outcome reductions() {
  std::size_t eval_ok = 0;
  std::size_t coeval_ok = 0;
  std::size_t members = 0;
  std::mt19937_64 rng(6);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.target = rotate(seed);
    cfg.max_predicates = 2;
    cfg.max_arity = 2;
    cfg.max_tgds = 3;
    cfg.max_query_atoms = 2;
    cfg.max_answer_arity = 1 + seed % 2;
    cfg.max_disjuncts = 1 + seed % 2;
    cfg.full_data_schema = true;
    const OMQ q = random_omq(cfg);
    const Database db = random_database(q.data_schema(), 3, 4, rng);
    // Half the tuples are certain answers, when there are any.
    const auto answers = certain_answers(q, db);
    std::vector<Term> tuple;
    if (seed % 2 == 0 && !answers.empty()) {
      auto it = answers.begin();
      std::advance(it, rng() % answers.size());
      tuple = *it;
    } else {
      const auto pool = fresh_constants(3);
      for (std::size_t i = 0; i < q.arity(); ++i) tuple.push_back(pool[rng() % pool.size()]);
    }
    const bool member = eval_membership(q, db, tuple);
    members += member;
    const auto [e1, e2] = eval_to_containment(q, db, tuple);
    if (contains(e1, e2).contained == member) {
      ++eval_ok;
    } else {
      std::cerr << "  eval seed " << seed << "\n";
    }
    const auto [c1, c2] = coeval_to_cocontainment(q, db, tuple);
    if (!contains(c1, c2).contained == member) {
      ++coeval_ok;
    } else {
      std::cerr << "  coeval seed " << seed << "\n";
    }
  }
  return {eval_ok == 100 && coeval_ok == 100,
          "eval " + std::to_string(eval_ok) + "/100, coeval " + std::to_string(coeval_ok) +
              "/100 (" + std::to_string(members) + " members)"};
}

// 7. The or-gadget OMQ is equivalent to the UCQ OMQ and keeps its classes.
Outcome or_gadget() {
  std::size_t equal = 0;
  std::size_t preserved = 0;
  std::size_t done = 0;
  for (std::uint64_t seed = 1; done < 20; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.target = rotate(seed);
    cfg.max_predicates = 2;
    cfg.max_arity = 2;
    cfg.max_tgds = 2;
    cfg.max_query_atoms = 2;
    cfg.max_disjuncts = 3;
    cfg.max_answer_arity = 1;
    cfg.full_data_schema = seed % 2 == 0;
    const OMQ q = random_omq(cfg);
    if (q.query().size() < 2) continue;
    ++done;
    const OMQ g = ucq_to_cq(q);
    const auto before = classify(q.tgds());
    const auto after = classify(g.tgds());
    const PreparedOMQ a(q);
    const PreparedOMQ b(g, after.non_recursive ? Strategy::kChase : Strategy::kRewriting);
    bool same = g.query().size() == 1;
    for (const auto& db : enumerate_databases(q.data_schema(), 2, 3)) {
      if (a.answers(db) != b.answers(db)) {
        same = false;
        std::cerr << "  seed " << seed << " differs on " << db.to_string() << "\n";
        break;
      }
    }
    equal += same;
    const bool keeps = (!before.linear || after.linear) && (!before.guarded || after.guarded) &&
                       (!before.non_recursive || after.non_recursive) &&
                       (!before.sticky || after.sticky);
    if (keeps) {
      ++preserved;
    } else {
      std::cerr << "  class discrepancy at seed " << seed << ": " << describe(q) << "\n";
    }
  }
  return {equal == 20 && preserved == 20,
          std::to_string(equal) + "/20 equivalent, " + std::to_string(preserved) +
              "/20 keep their classes"};
}

// 8. No database with at most one atom satisfies the sticky family for n = 3.
Outcome sticky_floor() {
  const OMQ q = sticky_family(3);
  const PreparedOMQ p(q);
  std::vector<Term> constants = constants_of(q);
  const auto fresh = fresh_constants(3, constants);
  constants.insert(constants.end(), fresh.begin(), fresh.end());
  bool small_satisfies = false;
  for_each_database(q.data_schema(), constants, 1, [&](const Database& db) {
    small_satisfies = !p.answers(db).empty();
    return !small_satisfies;
  }, 256);
  // Only 0 and 1 can reach Ans(0,1), so the search for the smallest
  // satisfying database runs over those two constants.
  const auto bits = constants_of(q);
  std::size_t smallest = 0;
  for_each_database(q.data_schema(), bits, 8, [&](const Database& db) {
    if (p.answers(db).empty()) return true;
    smallest = db.size();
    return false;
  });
  return {!small_satisfies && smallest >= 2,
          "no database with <= 1 atom over " + std::to_string(constants.size()) +
              " constants; smallest satisfying database has " + std::to_string(smallest) +
              " atoms"};
}

// 9. distributes() against the definition on every database with 3 constants
// and 4 atoms. Odd seeds conjoin two renamed-apart copies of a query body so
// that disconnected queries are well represented.
Outcome distribution() {
  std::size_t agree = 0;
  std::size_t positive = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.target = rotate(seed);
    cfg.max_predicates = 2;
    cfg.max_arity = 2;
    cfg.max_tgds = 2;
    cfg.max_query_atoms = seed % 2 ? 2 : 3;
    cfg.max_answer_arity = seed % 4 == 0 ? 1 : 0;
    cfg.full_data_schema = true;
    OMQ q = random_omq(cfg);
    if (seed % 2 == 1) {
      GeneratorConfig second = cfg;
      second.max_answer_arity = 0;
      // Prefer a second conjunct over other predicates than the first.
      const CQ& d = q.query().disjuncts()[0];
      const auto used = d.predicates();
      std::optional<CQ> other;
      for (second.seed = seed + 10'000; !other; ++second.seed) {
        const OMQ r = random_omq(second);
        if (r.full_schema() != q.full_schema()) continue;
        const CQ& e = r.query().disjuncts()[0];
        const bool disjoint = std::none_of(e.body().begin(), e.body().end(), [&](const Atom& a) {
          return std::find(used.begin(), used.end(), a.predicate()) != used.end();
        });
        if (disjoint || second.seed > seed + 10'200) other = e;
      }
      Substitution apart;
      for (const auto& x : other->variables()) apart.bind(x, Term::variable("Y" + std::string(x.name())));
      std::vector<Atom> body = d.body();
      const CQ renamed = other->substitute(apart);
      body.insert(body.end(), renamed.body().begin(), renamed.body().end());
      q = OMQ(q.data_schema(), q.tgds(), UCQ(CQ(d.answer(), body)));
    }
    const bool verdict = distributes(q).distributes;
    const auto counterexample = distribution_counterexample(q, 3, 4);
    if (std::getenv("OMQ_ACCEPTANCE_VERBOSE")) {
      std::cerr << "  seed " << seed << " " << verdict << " " << describe(q) << " S=";
      for (const auto& p : q.data_schema().predicates()) std::cerr << p.to_string() << " ";
      std::cerr << "\n";
    }
    positive += verdict;
    if (verdict == !counterexample.has_value()) {
      ++agree;
    } else {
      std::cerr << "  seed " << seed << ": " << describe(q) << "\n";
    }
  }
  return {agree == 50, std::to_string(agree) + "/50 agree (" + std::to_string(positive) +
                           " distribute)"};
}

// Random lossless rule sets: every body variable reappears in the head.
std::vector<TGD> random_lossless(std::mt19937_64& rng) {
  const std::vector<Predicate> preds{Predicate("A", 1), Predicate("B", 2), Predicate("C", 3),
                                     Predicate("D", 4)};
  const std::vector<Term> vars{Term::variable("u"), Term::variable("v"), Term::variable("w"),
                               Term::variable("x")};
  std::vector<TGD> out;
  const std::size_t count = 1 + rng() % 4;
  while (out.size() < count) {
    std::vector<Atom> body;
    const std::size_t atoms = 1 + rng() % 3;
    for (std::size_t i = 0; i < atoms; ++i) {
      const Predicate& p = preds[rng() % preds.size()];
      std::vector<Term> args;
      for (std::size_t k = 0; k < p.arity(); ++k) args.push_back(vars[rng() % vars.size()]);
      body.emplace_back(p, args);
    }
    const auto used = variables_of(body);
    std::vector<Predicate> fits;
    for (const auto& p : preds) {
      if (p.arity() >= used.size()) fits.push_back(p);
    }
    const Predicate& h = fits[rng() % fits.size()];
    std::vector<Term> args(used.begin(), used.end());
    std::shuffle(args.begin(), args.end(), rng);
    while (args.size() < h.arity()) {
      args.push_back(rng() % 2 ? used[rng() % used.size()] : Term::variable("z"));
    }
    out.emplace_back(body, std::vector<Atom>{Atom(h, args)});
  }
  return out;
}

// 10. Classifier fixtures.
Outcome classifier() {
  const auto r = classify(parse_program(fixtures::kWorkedExample).tgd_block("t"));
  const bool example = r.linear && r.guarded && r.sticky && !r.non_recursive;
  std::mt19937_64 rng(10);
  std::size_t lossless_sticky = 0;
  for (int i = 0; i < 200; ++i) lossless_sticky += classify(random_lossless(rng)).sticky;
  std::size_t linear = 0;
  std::size_t implication = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.max_predicates = 4;
    cfg.max_arity = 3;
    cfg.max_tgds = 4;
    cfg.max_body_atoms = 1 + seed % 3;
    cfg.fact_tgds = seed % 5 == 0;
    const auto c = classify(random_omq(cfg).tgds());
    linear += c.linear;
    implication += !c.linear || c.guarded;
  }
  return {example && lossless_sticky == 200 && implication == 200,
          std::string("worked example ") + (example ? "ok" : "wrong") + ", " +
              std::to_string(lossless_sticky) + "/200 lossless sets sticky, linear => guarded on " +
              std::to_string(implication) + "/200 (" + std::to_string(linear) + " linear)"};
}

struct Criterion {
  const char* name;
  double limit;  // seconds
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"worked example rewriting", 1, worked_example},
      {"linear witness bound", 30, linear_bound},
      {"sticky join variables", 60, sticky_joins},
      {"containment vs brute force", 600, containment_oracle},
      {"non-recursive strategy agreement", 120, nr_strategies},
      {"evaluation/containment reductions", 300, reductions},
      {"or-gadget equivalence", 300, or_gadget},
      {"sticky family floor", 60, sticky_floor},
      {"distribution agreement", 600, distribution},
      {"classifier fixtures", 30, classifier},
  };
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::stoul(argv[i]));
  if (selected.empty()) {
    for (std::size_t i = 1; i <= criteria.size(); ++i) selected.push_back(i);
  }
  bool all = true;
  for (std::size_t n : selected) {
    if (n < 1 || n > criteria.size()) {
      std::cerr << "no criterion " << n << "\n";
      return 2;
    }
    const Criterion& c = criteria[n - 1];
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double t = seconds_since(start);
    const bool pass = o.pass && t < c.limit;
    all = all && pass;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs of %.0fs", t, c.limit);
    std::cout << "criterion " << n << " " << (pass ? "PASS" : "FAIL") << " " << c.name << ": "
              << o.detail << " [" << timing << "]" << std::endl;
  }
  return all ? 0 : 1;
}
