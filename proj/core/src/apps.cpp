#include "omq/apps.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "omq/classify.hpp"
#include "omq/contain.hpp"
#include "omq/errors.hpp"
#include "omq/eval.hpp"
#include "omq/testkit.hpp"

namespace omq {
namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<std::vector<Atom>> components(std::span<const Atom> input) {
  std::vector<Atom> atoms(input.begin(), input.end());
  canonicalize(atoms);
  for (const auto& a : atoms) {
    if (a.arity() == 0) throw ZeroAryAtom("components are undefined for " + a.to_string());
  }
  UnionFind uf(atoms.size());
  std::map<Term, std::size_t> first;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (const auto& t : atoms[i].args()) {
      auto [it, fresh] = first.emplace(t, i);
      if (!fresh) uf.unite(it->second, i);
    }
  }
  std::vector<std::vector<Atom>> parts;
  std::map<std::size_t, std::size_t> index;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    auto [it, fresh] = index.emplace(uf.find(i), parts.size());
    if (fresh) parts.emplace_back();
    parts[it->second].push_back(atoms[i]);
  }
  return parts;
}

std::vector<CQComponent> cq_components(const CQ& q) {
  if (q.body().empty()) throw EmptyBody("the query " + q.to_string() + " has an empty body");
  std::vector<CQComponent> out;
  for (auto& part : components(q.body())) {
    CQComponent c;
    const auto vars = variables_of(part);
    for (const auto& t : q.answer()) {
      if (t.is_variable() && std::find(vars.begin(), vars.end(), t) == vars.end()) {
        c.safe = false;
      }
    }
    if (c.safe) c.query = CQ(q.answer(), part);
    c.body = std::move(part);
    out.push_back(std::move(c));
  }
  return out;
}

DistributionVerdict distributes(const OMQ& q, const RewriteOptions& options) {
  if (!classify(q.tgds()).ucq_rewritable()) {
    throw UnsupportedClass("distribution needs linear, non-recursive or sticky tgds");
  }
  for (const auto& d : q.query().disjuncts()) {
    for (const auto& a : d.body()) {
      if (a.arity() == 0) throw ZeroAryAtom("components are undefined for " + a.to_string());
    }
  }
  DistributionVerdict verdict;
  if (is_unsatisfiable(q, options)) {
    verdict.distributes = true;
    verdict.witness = "unsat";
    return verdict;
  }
  if (!certain_answers(q, Database(), Strategy::kAuto, options).empty()) {
    verdict.witness = "empty database";
    return verdict;
  }
  for (const auto& d : q.query().disjuncts()) {
    const OMQ alone(q.data_schema(), q.tgds(), UCQ(d));
    if (is_unsatisfiable(alone, options)) continue;
    bool found = false;
    for (const auto& c : cq_components(d)) {
      if (!c.safe) {
        CQ boolean({}, c.body);
        verdict.diagnostics.push_back("skipped unsafe component " + boolean.to_string());
        continue;
      }
      const OMQ part(q.data_schema(), q.tgds(), UCQ(*c.query));
      if (contains(part, q, options).contained) {
        if (!verdict.component) verdict.component = *c.query;
        found = true;
        break;
      }
    }
    if (!found) {
      verdict.distributes = false;
      verdict.component.reset();
      verdict.witness = "no component of " + d.to_string() + " is contained in the query";
      return verdict;
    }
  }
  verdict.distributes = true;
  verdict.witness = verdict.component->to_string();
  return verdict;
}

bool distributes_on(const OMQ& q, const Database& db) {
  const PreparedOMQ prepared(q);
  const auto whole = prepared.answers(db);
  AnswerSet parts;
  for (auto& part : components(db.atoms())) {
    const auto answers = prepared.answers(Database(std::move(part)));
    parts.insert(answers.begin(), answers.end());
  }
  return whole == parts;
}

std::optional<Database> distribution_counterexample(const OMQ& q, std::size_t max_constants,
                                                    std::size_t max_atoms,
                                                    std::size_t max_ground) {
  const PreparedOMQ prepared(q);
  std::optional<Database> found;
  const auto constants = fresh_constants(max_constants, constants_of(q));
  for_each_database(
      q.data_schema(), constants, max_atoms,
      [&](const Database& db) {
        const auto whole = prepared.answers(db);
        AnswerSet parts;
        for (auto& part : components(db.atoms())) {
          const auto answers = prepared.answers(Database(std::move(part)));
          parts.insert(answers.begin(), answers.end());
        }
        if (whole != parts) {
          found = db;
          return false;
        }
        return true;
      },
      max_ground);
  return found;
}

}  // namespace omq
