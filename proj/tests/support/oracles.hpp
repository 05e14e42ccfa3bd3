#pragma once

// Deliberately naive reference implementations. They share no code with the
// library beyond the data model, so agreement is evidence of correctness.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "omq/model.hpp"

namespace omq::oracle {

using Assignment = std::map<Term, Term>;

inline Term image(const Term& t, const Assignment& h) {
  if (!t.is_variable()) return t;
  auto it = h.find(t);
  return it == h.end() ? t : it->second;
}

inline Atom image(const Atom& a, const Assignment& h) {
  std::vector<Term> args;
  for (const auto& t : a.args()) args.push_back(image(t, h));
  return Atom(a.predicate(), std::move(args));
}

inline std::set<Term> terms_of(const std::set<Atom>& atoms) {
  std::set<Term> out;
  for (const auto& a : atoms) out.insert(a.args().begin(), a.args().end());
  return out;
}

/// Every assignment of `vars` to `domain`, visiting each full assignment.
inline void assignments(const std::vector<Term>& vars, const std::vector<Term>& domain,
                        const std::function<void(const Assignment&)>& visit) {
  Assignment h;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == vars.size()) {
      visit(h);
      return;
    }
    for (const auto& d : domain) {
      h.insert_or_assign(vars[i], d);
      go(i + 1);
    }
    h.erase(vars[i]);
  };
  go(0);
}

/// Homomorphisms from `body` to `atoms` by brute force over all assignments.
inline std::vector<Assignment> homomorphisms(const std::vector<Atom>& body,
                                             const std::set<Atom>& atoms) {
  std::vector<Term> vars;
  for (const auto& a : body) {
    for (const auto& t : a.args()) {
      if (t.is_variable() && std::find(vars.begin(), vars.end(), t) == vars.end()) {
        vars.push_back(t);
      }
    }
  }
  const auto dom = terms_of(atoms);
  const std::vector<Term> domain(dom.begin(), dom.end());
  std::vector<Assignment> out;
  assignments(vars, domain, [&](const Assignment& h) {
    for (const auto& a : body) {
      if (!atoms.count(image(a, h))) return;
    }
    out.push_back(h);
  });
  return out;
}

inline std::set<std::vector<Term>> evaluate(const CQ& q, const std::set<Atom>& atoms) {
  std::set<std::vector<Term>> out;
  for (const auto& h : homomorphisms(q.body(), atoms)) {
    std::vector<Term> tuple;
    bool constants = true;
    for (const auto& t : q.answer()) {
      tuple.push_back(image(t, h));
      constants = constants && tuple.back().is_constant();
    }
    if (constants) out.insert(std::move(tuple));
  }
  return out;
}

inline std::set<std::vector<Term>> evaluate(const UCQ& q, const std::set<Atom>& atoms) {
  std::set<std::vector<Term>> out;
  for (const auto& d : q.disjuncts()) {
    auto part = evaluate(d, atoms);
    out.insert(part.begin(), part.end());
  }
  return out;
}

/// Oblivious chase: every trigger fires exactly once, whether or not its head
/// is already satisfied. Terminates for non-recursive tgds.
inline std::set<Atom> oblivious_chase(const std::vector<Atom>& db, const std::vector<TGD>& tgds) {
  std::set<Atom> atoms(db.begin(), db.end());
  std::set<std::pair<std::size_t, Assignment>> fired;
  std::uint32_t next_null = 1000;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < tgds.size(); ++i) {
      const auto& t = tgds[i];
      for (auto h : homomorphisms(t.body(), atoms)) {
        if (!fired.emplace(i, h).second) continue;
        for (const auto& z : t.existentials()) h.insert_or_assign(z, Term::null(next_null++));
        for (const auto& a : t.head()) changed |= atoms.insert(image(a, h)).second;
      }
    }
  }
  return atoms;
}

/// Certain answers for non-recursive tgds.
inline std::set<std::vector<Term>> certain_answers(const OMQ& q, const Database& db) {
  return evaluate(q.query(), oblivious_chase(db.atoms(), q.tgds()));
}

/// Connected parts by breadth-first search over shared terms.
inline std::vector<std::set<Atom>> components(const std::vector<Atom>& atoms) {
  std::vector<std::set<Atom>> out;
  std::set<Atom> left(atoms.begin(), atoms.end());
  while (!left.empty()) {
    std::set<Atom> part{*left.begin()};
    left.erase(left.begin());
    for (bool grew = true; grew;) {
      grew = false;
      const auto terms = terms_of(part);
      for (auto it = left.begin(); it != left.end();) {
        const bool touches = std::any_of(it->args().begin(), it->args().end(),
                                         [&](const Term& t) { return terms.count(t) > 0; });
        if (touches) {
          part.insert(*it);
          it = left.erase(it);
          grew = true;
        } else {
          ++it;
        }
      }
    }
    out.push_back(std::move(part));
  }
  return out;
}

/// Directed cycle in the predicate graph, by repeated removal of sinks.
inline bool has_predicate_cycle(const std::vector<TGD>& tgds) {
  std::set<std::pair<Predicate, Predicate>> edges;
  std::set<Predicate> nodes;
  for (const auto& t : tgds) {
    for (const auto& b : t.body()) {
      for (const auto& h : t.head()) {
        edges.emplace(b.predicate(), h.predicate());
        nodes.insert(b.predicate());
        nodes.insert(h.predicate());
      }
    }
  }
  for (bool removed = true; removed;) {
    removed = false;
    for (auto it = nodes.begin(); it != nodes.end();) {
      const bool has_out = std::any_of(edges.begin(), edges.end(), [&](const auto& e) {
        return e.first == *it && nodes.count(e.second);
      });
      if (!has_out) {
        it = nodes.erase(it);
        removed = true;
      } else {
        ++it;
      }
    }
  }
  return !nodes.empty();
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace omq::oracle
