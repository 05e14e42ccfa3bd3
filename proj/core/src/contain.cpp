#include "omq/contain.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "omq/classify.hpp"
#include "omq/errors.hpp"

namespace omq {
namespace {

void require_rewritable(const OMQ& q, const char* side) {
  const auto report = classify(q.tgds());
  if (!report.ucq_rewritable()) {
    throw UnsupportedClass(std::string(side) +
                           " needs linear, non-recursive or sticky tgds");
  }
}

void require_aligned(const OMQ& q1, const OMQ& q2) {
  if (!(q1.data_schema() == q2.data_schema())) {
    throw SchemaMismatch("the OMQs have different data schemas");
  }
  if (q1.arity() != q2.arity()) {
    throw SchemaMismatch("the queries have arities " + std::to_string(q1.arity()) + " and " +
                         std::to_string(q2.arity()));
  }
}

Term rename_term(const Term& t, const std::map<Term, Term>& renaming) {
  auto it = renaming.find(t);
  return it == renaming.end() ? t : it->second;
}

// Replaces frozen constants by fresh constants c<k> outside `avoid`.
Counterexample readable(const Database& db, const Tuple& tuple, std::vector<Term> avoid) {
  for (const auto& c : active_domain(db)) avoid.push_back(c);
  for (const auto& c : tuple) avoid.push_back(c);
  std::vector<Term> frozen;
  for (const auto& c : active_domain(db)) {
    if (c.name().starts_with(kFrozenPrefix)) frozen.push_back(c);
  }
  for (const auto& c : tuple) {
    if (c.name().starts_with(kFrozenPrefix) &&
        std::find(frozen.begin(), frozen.end(), c) == frozen.end()) {
      frozen.push_back(c);
    }
  }
  const auto fresh = fresh_constants(frozen.size(), avoid);
  std::map<Term, Term> renaming;
  for (std::size_t i = 0; i < frozen.size(); ++i) renaming.emplace(frozen[i], fresh[i]);
  std::vector<Atom> atoms;
  for (const auto& a : db.atoms()) {
    std::vector<Term> args;
    for (const auto& t : a.args()) args.push_back(rename_term(t, renaming));
    atoms.emplace_back(a.predicate(), std::move(args));
  }
  Tuple out;
  for (const auto& t : tuple) out.push_back(rename_term(t, renaming));
  return {Database(std::move(atoms)), std::move(out)};
}

std::vector<Term> merged_constants(const OMQ& a, const OMQ& b) {
  auto out = constants_of(a);
  for (const auto& c : constants_of(b)) out.push_back(c);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string fresh_name(std::string base, const Schema& taken, std::string_view suffix) {
  while (taken.find(base)) base += suffix;
  return base;
}

// Groups atoms that are connected through shared variables.
std::vector<std::vector<Atom>> linked_by_variables(const std::vector<Atom>& atoms) {
  std::vector<std::vector<Atom>> groups;
  std::vector<std::vector<Term>> vars;
  for (const auto& a : atoms) {
    std::vector<Atom> group{a};
    std::vector<Term> group_vars = variables_of(std::span<const Atom>(&a, 1));
    for (std::size_t g = groups.size(); g-- > 0;) {
      const bool shares = std::any_of(vars[g].begin(), vars[g].end(), [&](const Term& v) {
        return std::find(group_vars.begin(), group_vars.end(), v) != group_vars.end();
      });
      if (!shares) continue;
      group.insert(group.end(), groups[g].begin(), groups[g].end());
      group_vars.insert(group_vars.end(), vars[g].begin(), vars[g].end());
      groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(g));
      vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(g));
    }
    groups.push_back(std::move(group));
    vars.push_back(std::move(group_vars));
  }
  return groups;
}

void add_all(Schema& into, const Schema& from) {
  for (const auto& p : from.predicates()) into.add(p);
}

}  // namespace

std::vector<Term> constants_of(const OMQ& q) {
  std::set<Term> out;
  for (const auto& c : constants_of(q.tgds())) out.insert(c);
  for (const auto& d : q.query().disjuncts()) {
    for (const auto& t : d.terms()) {
      if (t.is_constant()) out.insert(t);
    }
  }
  return {out.begin(), out.end()};
}

ContainmentVerdict contains(const OMQ& q1, const OMQ& q2, const RewriteOptions& options) {
  require_aligned(q1, q2);
  require_rewritable(q1, "the left OMQ");
  require_rewritable(q2, "the right OMQ");
  const UCQ rewriting = xrewrite(q1, options);
  const PreparedOMQ right(q2, Strategy::kAuto, options);
  ContainmentVerdict verdict;
  for (const auto& disjunct : rewriting.disjuncts()) {
    ++verdict.checked;
    Database db;
    Tuple tuple = disjunct.answer();
    if (!disjunct.is_true()) {
      auto frozen = freeze(disjunct);
      db = std::move(frozen.database);
      tuple = std::move(frozen.answer);
    }
    if (!right.contains(db, tuple)) {
      verdict.contained = false;
      verdict.counterexample = readable(db, tuple, merged_constants(q1, q2));
      return verdict;
    }
  }
  return verdict;
}

bool equivalent(const OMQ& q1, const OMQ& q2, const RewriteOptions& options) {
  return contains(q1, q2, options).contained && contains(q2, q1, options).contained;
}

std::pair<OMQ, OMQ> eval_to_containment(const OMQ& q, const Database& db,
                                        std::span<const Term> tuple) {
  if (tuple.size() != q.arity()) {
    throw ArityError("tuple of length " + std::to_string(tuple.size()) + " for a query of arity " +
                     std::to_string(q.arity()));
  }
  const auto kept = constants_of(q);
  auto lift = [&](const Term& c) {
    if (std::binary_search(kept.begin(), kept.end(), c)) return c;
    return Term::variable("X_" + std::string(c.name()));
  };
  const auto adom = active_domain(db);
  std::vector<Atom> body;
  for (const auto& a : db.atoms()) {
    std::vector<Term> args;
    for (const auto& t : a.args()) args.push_back(lift(t));
    body.emplace_back(a.predicate(), std::move(args));
  }
  std::vector<Term> answer;
  for (const auto& c : tuple) {
    // A constant outside D stays a constant: it can only be an answer when
    // the tgds or the query produce it.
    answer.push_back(adom.count(c) ? lift(c) : c);
  }
  Schema schema = q.data_schema();
  add_all(schema, schema_of(q.tgds()));
  OMQ left(schema, {}, UCQ(CQ(std::move(answer), std::move(body))));
  OMQ right(std::move(schema), q.tgds(), q.query());
  return {std::move(left), std::move(right)};
}

std::pair<OMQ, OMQ> coeval_to_cocontainment(const OMQ& q, const Database& db,
                                            std::span<const Term> tuple) {
  if (tuple.size() != q.arity()) {
    throw ArityError("tuple of length " + std::to_string(tuple.size()) + " for a query of arity " +
                     std::to_string(q.arity()));
  }
  Schema taken = q.full_schema();
  for (const auto& a : db.atoms()) taken.add(a.predicate());
  std::map<Predicate, Predicate> star;
  auto starred = [&](const Predicate& p) {
    auto it = star.find(p);
    if (it != star.end()) return it->second;
    Predicate s(fresh_name(std::string(p.name()) + "_s", taken, "_s"), p.arity());
    taken.add(s);
    star.emplace(p, s);
    return s;
  };
  auto star_atoms = [&](const std::vector<Atom>& atoms) {
    std::vector<Atom> out;
    for (const auto& a : atoms) out.emplace_back(starred(a.predicate()), a.args());
    return out;
  };

  std::vector<TGD> tgds;
  for (const auto& t : q.tgds()) tgds.emplace_back(star_atoms(t.body()), star_atoms(t.head()));
  for (const auto& a : db.atoms()) {
    tgds.emplace_back(std::vector<Atom>{}, std::vector<Atom>{Atom(starred(a.predicate()), a.args())});
  }

  UCQ query(0);
  for (const auto& d : q.query().disjuncts()) {
    Substitution s;
    bool consistent = true;
    for (std::size_t i = 0; i < tuple.size() && consistent; ++i) {
      const Term& t = d.answer()[i];
      if (t.is_variable()) {
        auto bound = s.lookup(t);
        if (bound && *bound != tuple[i]) consistent = false;
        if (!bound) s.bind(t, tuple[i]);
      } else if (t != tuple[i]) {
        consistent = false;
      }
    }
    if (!consistent) continue;
    query.add(CQ({}, star_atoms(d.substitute(s).body())));
  }

  const Predicate never(fresh_name("Never", taken, "_"), 1);
  OMQ left(q.data_schema(), std::move(tgds), std::move(query));
  OMQ right(q.data_schema(), {}, UCQ(CQ({}, {Atom(never, {Term::variable("X")})})));
  return {std::move(left), std::move(right)};
}

OMQ ucq_to_cq(const OMQ& q) {
  const UCQ& ucq = q.query();
  if (ucq.empty()) return q;

  Schema taken = q.full_schema();
  std::map<Predicate, Predicate> prime;
  auto primed = [&](const Predicate& p) {
    auto it = prime.find(p);
    if (it != prime.end()) return it->second;
    Predicate s(fresh_name(std::string(p.name()) + "'", taken, "'"), p.arity() + 1);
    taken.add(s);
    prime.emplace(p, s);
    return s;
  };
  auto fresh_pred = [&](const char* name, std::uint32_t arity) {
    Predicate p(fresh_name(name, taken, "_"), arity);
    taken.add(p);
    return p;
  };
  const Predicate true_p = fresh_pred("True", 1);
  const Predicate false_p = fresh_pred("False", 1);
  const Predicate or_p = fresh_pred("Or", 3);
  const Predicate sel_p = fresh_pred("Sel", 3);
  const Term zero = Term::constant("0");
  const Term one = Term::constant("1");

  auto annotate = [&](const std::vector<Atom>& atoms, const Term& w) {
    std::vector<Atom> out;
    for (const auto& a : atoms) {
      auto args = a.args();
      args.push_back(w);
      out.emplace_back(primed(a.predicate()), std::move(args));
    }
    return out;
  };

  // Constants an answer term can take besides those of the database.
  std::set<Term> answer_constants;
  for (const auto& d : ucq.disjuncts()) {
    for (const auto& t : d.answer()) {
      if (t.is_constant()) answer_constants.insert(t);
    }
  }
  const auto omq_constants = constants_of(q);

  std::vector<TGD> tgds;
  for (const auto& r : q.data_schema().predicates()) {
    std::vector<Term> xs;
    for (std::uint32_t i = 0; i < r.arity(); ++i) {
      xs.push_back(Term::variable("X" + std::to_string(i + 1)));
    }
    const Atom body(r, xs);
    tgds.emplace_back(std::vector<Atom>{body},
                      std::vector<Atom>{annotate({body}, one).front(), Atom(true_p, {one})});
    if (ucq.arity() == 0 || r.arity() == 0) continue;
    std::vector<Atom> sel;
    for (const auto& x : xs) {
      sel.emplace_back(sel_p, std::vector<Term>{one, x, x});
      sel.emplace_back(sel_p, std::vector<Term>{zero, zero, x});
      for (const auto& c : answer_constants) sel.emplace_back(sel_p, std::vector<Term>{zero, c, x});
    }
    tgds.emplace_back(std::vector<Atom>{body}, std::move(sel));
  }

  {
    const Term t = Term::variable("T");
    const Atom trigger(true_p, {t});
    std::vector<Atom> full{
        Atom(or_p, {t, t, t}), Atom(or_p, {t, zero, t}), Atom(or_p, {zero, t, t}),
        Atom(or_p, {zero, zero, zero}), Atom(false_p, {zero})};
    if (ucq.arity() > 0) {
      for (const auto& c : omq_constants) {
        full.emplace_back(sel_p, std::vector<Term>{one, c, c});
        full.emplace_back(sel_p, std::vector<Term>{zero, zero, c});
        for (const auto& a : answer_constants) full.emplace_back(sel_p, std::vector<Term>{zero, a, c});
      }
    }
    tgds.emplace_back(std::vector<Atom>{trigger}, std::move(full));
    // The false copy of each disjunct: answer variables become 0, the other
    // variables are existential. Atoms linked by existentials stay in one tgd.
    for (std::size_t j = 0; j < ucq.size(); ++j) {
      const CQ& d = ucq.disjuncts()[j];
      Substitution s;
      for (const auto& v : d.variables()) {
        const bool is_answer = std::find(d.answer().begin(), d.answer().end(), v) != d.answer().end();
        s.bind(v, is_answer ? zero : Term::variable("Z" + std::to_string(j + 1) + "_" +
                                                    std::string(v.name())));
      }
      const auto copy = annotate(s.apply(std::span<const Atom>(d.body())), zero);
      std::vector<Atom> ground;
      std::vector<Atom> linked;
      for (const auto& a : copy) (a.is_fact() ? ground : linked).push_back(a);
      if (!ground.empty()) tgds.emplace_back(std::vector<Atom>{trigger}, std::move(ground));
      for (auto& group : linked_by_variables(linked)) {
        tgds.emplace_back(std::vector<Atom>{trigger}, std::move(group));
      }
    }
  }

  const Term w = Term::variable("W");
  for (const auto& sigma : q.tgds()) {
    if (sigma.is_fact()) {
      auto head = annotate(sigma.head(), one);
      head.emplace_back(true_p, std::vector<Term>{one});
      tgds.emplace_back(std::vector<Atom>{}, std::move(head));
    } else {
      tgds.emplace_back(annotate(sigma.body(), w), annotate(sigma.head(), w));
    }
  }
  if (ucq.has_true_disjunct()) {
    tgds.emplace_back(std::vector<Atom>{}, std::vector<Atom>{Atom(true_p, {one})});
  }

  std::vector<Term> answer;
  for (std::size_t k = 0; k < ucq.arity(); ++k) {
    answer.push_back(Term::variable("A" + std::to_string(k + 1)));
  }
  auto y = [](std::size_t j) { return Term::variable("Y" + std::to_string(j)); };
  std::vector<Atom> body{Atom(false_p, {y(1)}), Atom(true_p, {y(ucq.size() + 1)})};
  for (std::size_t j = 0; j < ucq.size(); ++j) {
    const CQ& d = ucq.disjuncts()[j];
    const Term x = Term::variable("B" + std::to_string(j + 1));
    Substitution s;
    for (const auto& v : d.variables()) {
      s.bind(v, Term::variable("D" + std::to_string(j + 1) + "_" + std::string(v.name())));
    }
    for (auto& a : annotate(s.apply(std::span<const Atom>(d.body())), x)) body.push_back(a);
    body.emplace_back(or_p, std::vector<Term>{y(j + 1), x, y(j + 2)});
    for (std::size_t k = 0; k < d.arity(); ++k) {
      body.emplace_back(sel_p, std::vector<Term>{x, s.apply(d.answer()[k]), answer[k]});
    }
  }
  return OMQ(q.data_schema(), std::move(tgds), UCQ(CQ(std::move(answer), std::move(body))));
}

ContainmentVerdict brute_force_contains(const OMQ& q1, const OMQ& q2,
                                        const BruteForceOptions& options) {
  require_aligned(q1, q2);
  auto prepare = [&](const OMQ& q) {
    const auto strategy =
        classify(q.tgds()).non_recursive ? Strategy::kChase : Strategy::kRewriting;
    return PreparedOMQ(q, strategy, options.rewrite);
  };
  const PreparedOMQ left = prepare(q1);
  const PreparedOMQ right = prepare(q2);

  const auto known = merged_constants(q1, q2);
  const auto fresh = fresh_constants(options.max_constants, known);
  std::vector<Term> domain = fresh;
  domain.insert(domain.end(), known.begin(), known.end());

  ContainmentVerdict verdict;
  try {
    const auto bound = witness_bound(q1).value;
    const auto arity = std::max<std::uint64_t>(1, q1.data_schema().max_arity());
    verdict.exact = options.max_atoms >= bound && options.max_constants / arity >= bound;
  } catch (const UnsupportedClass&) {
    verdict.exact = false;
  }

  for_each_database(
      q1.data_schema(), domain, options.max_atoms,
      [&](const Database& db) {
        // Only the lowest fresh constants: the others give isomorphic copies.
        std::size_t used = 0;
        std::size_t distinct = 0;
        for (const auto& c : active_domain(db)) {
          auto it = std::find(fresh.begin(), fresh.end(), c);
          if (it == fresh.end()) continue;
          ++distinct;
          used = std::max<std::size_t>(used, static_cast<std::size_t>(it - fresh.begin()) + 1);
        }
        if (distinct != used) return true;
        ++verdict.checked;
        for (const auto& tuple : left.answers(db)) {
          if (!right.contains(db, tuple)) {
            verdict.contained = false;
            verdict.counterexample = Counterexample{db, tuple};
            return false;
          }
        }
        return true;
      },
      options.max_ground);
  if (!verdict.contained) verdict.exact = true;
  return verdict;
}

bool is_unsatisfiable(const OMQ& q, const RewriteOptions& options) {
  require_rewritable(q, "unsatisfiability");
  return xrewrite(q, options).empty();
}

}  // namespace omq
