#include "omq/rewrite.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "omq/chase.hpp"
#include "omq/classify.hpp"
#include "omq/homomorphism.hpp"
#include "omq/instance.hpp"

namespace omq {
namespace {

class UnionFind {
 public:
  std::size_t node(const Term& t) {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (terms_[i] == t) return i;
    }
    terms_.push_back(t);
    parent_.push_back(parent_.size());
    return terms_.size() - 1;
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  void unite(const Term& a, const Term& b) {
    std::size_t ra = find(node(a));
    std::size_t rb = find(node(b));
    if (ra != rb) parent_[rb] = ra;
  }

  const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
  std::vector<std::size_t> parent_;
};

bool contains(std::span<const Atom> atoms, const Atom& a) {
  return std::find(atoms.begin(), atoms.end(), a) != atoms.end();
}

std::size_t occurrences(const Term& v, std::span<const Atom> atoms) {
  std::size_t n = 0;
  for (const auto& a : atoms) {
    n += static_cast<std::size_t>(std::count(a.args().begin(), a.args().end(), v));
  }
  return n;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) out = saturating_mul(out, base);
  return out;
}

// Nonempty subsets of `items` with at most `max_size` elements, by size and
// then lexicographically by position.
template <typename F>
void for_each_subset(std::size_t n, std::size_t min_size, F&& f) {
  std::vector<std::size_t> idx;
  for (std::size_t k = std::max<std::size_t>(min_size, 1); k <= n; ++k) {
    idx.resize(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
      if (!f(idx)) return;
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
}

class Isomorphism {
 public:
  Isomorphism(const CQ& a, const CQ& b) : a_(a), b_(b) {}

  bool run() {
    if (a_.arity() != b_.arity() || a_.size() != b_.size()) return false;
    for (std::size_t i = 0; i < a_.arity(); ++i) {
      if (!bind(a_.answer()[i], b_.answer()[i])) return false;
    }
    return match(0);
  }

 private:
  bool bind(const Term& x, const Term& y) {
    if (x.is_variable() != y.is_variable()) return false;
    if (!x.is_variable()) return x == y;
    auto fx = forward_.find(x);
    auto by = backward_.find(y);
    if (fx != forward_.end() || by != backward_.end()) {
      return fx != forward_.end() && by != backward_.end() && fx->second == y &&
             by->second == x;
    }
    forward_.emplace(x, y);
    backward_.emplace(y, x);
    trail_.push_back(x);
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      Term x = trail_.back();
      trail_.pop_back();
      backward_.erase(forward_.at(x));
      forward_.erase(x);
    }
  }

  bool match(std::size_t i) {
    if (i == a_.size()) return true;
    const Atom& x = a_.body()[i];
    for (std::size_t j = 0; j < b_.size(); ++j) {
      const Atom& y = b_.body()[j];
      if (x.predicate() != y.predicate() || used_.count(j)) continue;
      const std::size_t mark = trail_.size();
      bool ok = true;
      for (std::size_t p = 0; p < x.arity() && ok; ++p) ok = bind(x[p], y[p]);
      if (ok) {
        used_.insert(j);
        if (match(i + 1)) return true;
        used_.erase(j);
      }
      undo(mark);
    }
    return false;
  }

  const CQ& a_;
  const CQ& b_;
  std::unordered_map<Term, Term> forward_;
  std::unordered_map<Term, Term> backward_;
  std::vector<Term> trail_;
  std::set<std::size_t> used_;
};

struct Entry {
  CQ cq;
  bool from_rewriting;  // label r, otherwise f
  std::size_t hash;
  std::vector<Predicate> predicates;  // sorted, distinct
  // Frozen body and answer, kept when subsumption pruning is on.
  std::optional<Instance> body;
  std::vector<Term> answer;
  bool retired = false;
};

std::vector<Predicate> sorted_predicates(const CQ& q) {
  std::vector<Predicate> out = q.predicates();
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// p maps into q with the answer tuples aligned, so q is contained in p.
bool subsumes(const CQ& p, std::span<const Term> answer, const Instance& body) {
  Substitution seed;
  for (std::size_t i = 0; i < p.arity(); ++i) {
    const Term& t = p.answer()[i];
    const Term& image = answer[i];
    if (!t.is_variable()) {
      if (t != image) return false;
      continue;
    }
    if (auto bound = seed.lookup(t)) {
      if (*bound != image) return false;
    } else {
      seed.bind(t, image);
    }
  }
  return has_homomorphism(std::span<const Atom>(p.body()), body, seed);
}

bool in_schema(const CQ& q, const Schema& s) {
  return std::all_of(q.body().begin(), q.body().end(),
                     [&](const Atom& a) { return s.contains(a.predicate()); });
}

}  // namespace

std::optional<Substitution> mgu(std::span<const Atom> atoms) {
  if (atoms.empty()) return Substitution{};
  const Predicate& p = atoms.front().predicate();
  UnionFind uf;
  for (const auto& a : atoms) {
    if (a.predicate() != p) return std::nullopt;
    for (std::size_t i = 0; i < a.arity(); ++i) uf.unite(atoms.front()[i], a[i]);
  }
  const auto& terms = uf.terms();
  std::vector<std::optional<Term>> rep(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    auto& r = rep[uf.find(i)];
    const Term& t = terms[i];
    if (!r) {
      r = t;
    } else if (!t.is_variable()) {
      if (!r->is_variable() && *r != t) return std::nullopt;
      r = t;
    } else if (r->is_variable() && name_less(t, *r)) {
      r = t;
    }
  }
  Substitution out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const Term& r = *rep[uf.find(i)];
    if (terms[i].is_variable() && terms[i] != r) out.bind(terms[i], r);
  }
  return out;
}

TGD rename_tgd(const TGD& t, std::size_t i) {
  Substitution s;
  const std::string prefix = "~" + std::to_string(i) + "_";
  for (const auto& v : t.variables()) {
    s.bind(v, Term::variable(prefix + std::string(v.name())));
  }
  return t.substitute(s);
}

std::optional<std::size_t> existential_position(const TGD& t) {
  if (t.existentials().empty() || t.head().size() != 1) return std::nullopt;
  const auto& args = t.head().front().args();
  auto it = std::find(args.begin(), args.end(), t.existentials().front());
  return static_cast<std::size_t>(it - args.begin());
}

bool is_shared(const Term& v, const CQ& q) {
  if (!v.is_variable()) return false;
  if (std::find(q.answer().begin(), q.answer().end(), v) != q.answer().end()) {
    return true;
  }
  return occurrences(v, q.body()) > 1;
}

bool is_applicable(const TGD& raw, std::span<const Atom> s, const CQ& q) {
  if (s.empty()) return false;
  const TGD sigma = rename_tgd(raw, 0);
  std::vector<Atom> unify(s.begin(), s.end());
  unify.push_back(sigma.head().front());
  if (!mgu(unify)) return false;
  if (auto e = existential_position(sigma)) {
    for (const auto& a : s) {
      const Term& t = a[*e];
      if (t.is_constant() || is_shared(t, q)) return false;
    }
  }
  return true;
}

bool is_factorizable(std::span<const Atom> s, const TGD& sigma, const CQ& q) {
  if (s.size() < 2) return false;
  if (!mgu(s)) return false;
  auto e = existential_position(sigma);
  if (!e) return false;
  const Predicate& p = sigma.head().front().predicate();
  for (const auto& a : s) {
    if (a.predicate() != p) return false;
  }
  std::vector<Atom> rest;
  for (const auto& a : q.body()) {
    if (!contains(s, a)) rest.push_back(a);
  }
  const auto outside = variables_of(rest);
  for (const auto& x : variables_of(s)) {
    if (std::find(outside.begin(), outside.end(), x) != outside.end()) continue;
    bool confined = std::all_of(s.begin(), s.end(), [&](const Atom& a) {
      for (std::size_t i = 0; i < a.arity(); ++i) {
        if ((a[i] == x) != (i == *e)) return false;
      }
      return true;
    });
    if (confined) return true;
  }
  return false;
}

CQ rewrite_step(const CQ& q, std::span<const Atom> s, const TGD& raw, std::size_t i) {
  const TGD sigma = rename_tgd(raw, i);
  std::vector<Atom> unify(s.begin(), s.end());
  unify.push_back(sigma.head().front());
  const auto gamma = mgu(unify);
  if (!gamma) throw PreconditionViolated("rewriting step on a non-unifiable subset");
  std::vector<Atom> body;
  for (const auto& a : q.body()) {
    if (!contains(s, a)) body.push_back(a);
  }
  body.insert(body.end(), sigma.body().begin(), sigma.body().end());
  return CQ(gamma->apply(std::span<const Term>(q.answer())),
            gamma->apply(std::span<const Atom>(body)));
}

CQ factorize_step(const CQ& q, std::span<const Atom> s) {
  const auto gamma = mgu(s);
  if (!gamma) throw PreconditionViolated("factorization of a non-unifiable subset");
  return q.substitute(*gamma);
}

bool isomorphic(const CQ& a, const CQ& b) { return Isomorphism(a, b).run(); }

std::size_t renaming_invariant_hash(const CQ& q) {
  std::vector<std::size_t> sigs;
  sigs.reserve(q.size());
  for (const auto& a : q.body()) {
    std::size_t h = std::hash<Predicate>{}(a.predicate());
    for (std::size_t i = 0; i < a.arity(); ++i) {
      const Term& t = a[i];
      std::size_t th;
      if (t.is_variable()) {
        const bool free =
            std::find(q.answer().begin(), q.answer().end(), t) != q.answer().end();
        const auto first = static_cast<std::size_t>(
            std::find(a.args().begin(), a.args().end(), t) - a.args().begin());
        th = (occurrences(t, q.body()) << 8) ^ (first << 1) ^ (free ? 1u : 0u);
      } else {
        th = std::hash<Term>{}(t) * 7919u;
      }
      h = h * 1000003u ^ th;
    }
    sigs.push_back(h);
  }
  std::sort(sigs.begin(), sigs.end());
  std::size_t h = q.arity() * 31u + q.size();
  for (std::size_t s : sigs) h = h * 1000003u ^ s;
  for (const auto& t : q.answer()) {
    h = h * 31u ^ (t.is_variable() ? occurrences(t, q.body()) : std::hash<Term>{}(t));
  }
  return h;
}

CQ tidy_variables(const CQ& q) {
  std::set<std::string, std::less<>> used;
  for (const auto& v : q.variables()) used.emplace(v.name());
  Substitution s;
  std::size_t k = 0;
  for (const auto& v : q.variables()) {
    if (v.name().empty() || v.name().front() != '~') continue;
    std::string fresh;
    do {
      fresh = "V" + std::to_string(++k);
    } while (used.count(fresh));
    used.insert(fresh);
    s.bind(v, Term::variable(fresh));
  }
  return s.empty() ? q : q.substitute(s);
}

CQ condense(const CQ& q) {
  std::vector<Atom> body = q.body();
  for (bool changed = true; changed;) {
    changed = false;
    std::map<Term, std::size_t> count;
    for (const auto& a : body) {
      for (const auto& t : a.args()) {
        if (t.is_variable()) ++count[t];
      }
    }
    for (const auto& t : q.answer()) {
      if (t.is_variable()) count[t] += 2;
    }
    // beta is covered by alpha when it maps onto alpha by moving only
    // variables that occur once.
    auto covered = [&](const Atom& beta, const Atom& alpha) {
      if (beta.predicate() != alpha.predicate()) return false;
      for (std::size_t i = 0; i < beta.arity(); ++i) {
        const Term& t = beta[i];
        if (!(t.is_variable() && count[t] == 1) && t != alpha[i]) return false;
      }
      return true;
    };
    for (std::size_t i = 0; i < body.size() && !changed; ++i) {
      for (std::size_t j = 0; j < body.size(); ++j) {
        if (i != j && covered(body[i], body[j])) {
          body.erase(body.begin() + static_cast<std::ptrdiff_t>(i));
          changed = true;
          break;
        }
      }
    }
  }
  if (body.size() == q.body().size()) return q;
  return CQ(q.answer(), std::move(body));
}

RewriteResult xrewrite_detailed(const OMQ& omq, const RewriteOptions& options) {
  const std::vector<TGD> tgds = normalize_tgds(omq.tgds());
  RewriteResult result;
  result.terminating_class = classify(omq.tgds()).ucq_rewritable();

  std::vector<Entry> entries;
  std::unordered_multimap<std::size_t, std::size_t> by_hash;
  std::deque<std::size_t> queue;

  auto known = [&](const CQ& q, std::size_t h, bool rewriting_only) {
    auto [lo, hi] = by_hash.equal_range(h);
    for (auto it = lo; it != hi; ++it) {
      const Entry& e = entries[it->second];
      if (rewriting_only && !e.from_rewriting) continue;
      if (isomorphic(q, e.cq)) return true;
    }
    return false;
  };
  auto add = [&](CQ q, bool from_rewriting, std::size_t h) {
    by_hash.emplace(h, entries.size());
    queue.push_back(entries.size());
    auto preds = sorted_predicates(q);
    entries.push_back({std::move(q), from_rewriting, h, std::move(preds), std::nullopt, {}});
  };
  // Adds q unless a live rewriting contains it, and retires the live
  // rewritings it contains.
  auto add_unless_subsumed = [&](CQ q, std::size_t h) {
    auto preds = sorted_predicates(q);
    FrozenQuery frozen = freeze(q);
    Instance target = frozen.database.to_instance();
    for (const auto& e : entries) {
      if (e.retired || !e.from_rewriting) continue;
      if (!std::includes(preds.begin(), preds.end(), e.predicates.begin(), e.predicates.end())) {
        continue;
      }
      if (subsumes(e.cq, frozen.answer, target)) return false;
    }
    for (auto& e : entries) {
      if (e.retired || !e.from_rewriting || !e.body) continue;
      if (!std::includes(e.predicates.begin(), e.predicates.end(), preds.begin(), preds.end())) {
        continue;
      }
      if (subsumes(q, e.answer, *e.body)) e.retired = true;
    }
    by_hash.emplace(h, entries.size());
    queue.push_back(entries.size());
    entries.push_back({std::move(q), true, h, std::move(preds), std::move(target),
                       std::move(frozen.answer)});
    return true;
  };
  auto finish = [&]() {
    UCQ out(omq.arity());
    for (const auto& e : entries) {
      if (e.from_rewriting && !e.retired && in_schema(e.cq, omq.data_schema())) {
        out.add(tidy_variables(e.cq));
      }
    }
    return out;
  };
  auto true_result = [&]() {
    result.ucq = UCQ(CQ::true_query());
    result.generated = entries.size();
    return result;
  };

  for (const auto& q : omq.query().disjuncts()) {
    if (q.is_true() && q.is_boolean()) return true_result();
    const std::size_t h = renaming_invariant_hash(q);
    if (!known(q, h, true)) add(q, true, h);
  }

  std::size_t step = 0;
  while (!queue.empty()) {
    const std::size_t current = queue.front();
    queue.pop_front();
    if (entries[current].retired) continue;
    const CQ q = entries[current].cq;
    for (std::size_t t = 0; t < tgds.size(); ++t) {
      const TGD& sigma = tgds[t];
      const Predicate& head = sigma.head().front().predicate();
      std::vector<Atom> candidates;
      for (const auto& a : q.body()) {
        if (a.predicate() == head) candidates.push_back(a);
      }
      std::vector<Atom> subset;
      auto pick = [&](const std::vector<std::size_t>& idx) {
        subset.clear();
        for (std::size_t i : idx) subset.push_back(candidates[i]);
      };
      auto emit = [&](RewriteEvent::Kind kind, const CQ& produced, bool added) {
        if (options.trace) {
          options.trace({kind, step, q, subset, t, sigma, produced, added});
        }
      };
      auto charge = [&]() {
        if (++step > options.budget) throw BudgetExhausted(options.budget, finish());
      };

      bool short_circuit = false;
      for_each_subset(candidates.size(), 1, [&](const std::vector<std::size_t>& idx) {
        pick(idx);
        if (!is_applicable(sigma, subset, q)) return true;
        charge();
        CQ produced = condense(rewrite_step(q, subset, sigma, step));
        if (produced.is_true() && produced.is_boolean()) {
          emit(RewriteEvent::Kind::kRewrite, produced, true);
          short_circuit = true;
          return false;
        }
        const std::size_t h = renaming_invariant_hash(produced);
        bool added = false;
        if (options.prune_subsumed) {
          added = add_unless_subsumed(produced, h);
          emit(RewriteEvent::Kind::kRewrite, produced, added);
        } else {
          added = !known(produced, h, true);
          emit(RewriteEvent::Kind::kRewrite, produced, added);
          if (added) add(std::move(produced), true, h);
        }
        return true;
      });
      if (short_circuit) {
        result.steps = step;
        return true_result();
      }
      for_each_subset(candidates.size(), 2, [&](const std::vector<std::size_t>& idx) {
        pick(idx);
        if (!is_factorizable(subset, sigma, q)) return true;
        charge();
        CQ produced = factorize_step(q, subset);
        const std::size_t h = renaming_invariant_hash(produced);
        const bool added = !known(produced, h, false);
        emit(RewriteEvent::Kind::kFactorize, produced, added);
        if (added) add(std::move(produced), false, h);
        return true;
      });
    }
  }
  result.steps = step;
  result.generated = entries.size();
  result.ucq = finish();
  return result;
}

UCQ xrewrite(const OMQ& q, const RewriteOptions& options) {
  return xrewrite_detailed(q, options).ucq;
}

WitnessBound witness_bound(const OMQ& q) {
  const auto report = classify(q.tgds());
  const std::uint64_t size = q.query().max_atoms();
  std::optional<WitnessBound> best;
  auto offer = [&](std::uint64_t value, const char* formula) {
    value = std::max<std::uint64_t>(value, 1);
    if (!best || value < best->value) best = WitnessBound{value, formula};
  };
  if (report.linear_with_facts) offer(size, "linear");
  if (report.non_recursive) {
    std::uint64_t max_body = 1;
    for (const auto& t : q.tgds()) max_body = std::max<std::uint64_t>(max_body, t.body().size());
    offer(saturating_mul(size, saturating_pow(max_body, schema_of(q.tgds()).size())),
          "non-recursive");
  }
  if (report.sticky) {
    std::set<Term> terms;
    for (const auto& d : q.query().disjuncts()) {
      for (const auto& t : d.terms()) terms.insert(t);
    }
    const std::uint64_t base = terms.size() + constants_of(q.tgds()).size() + 1;
    offer(saturating_mul(q.data_schema().size(),
                         saturating_pow(base, q.data_schema().max_arity())),
          "sticky");
  }
  if (!best) {
    throw UnsupportedClass("the tgds are neither linear, non-recursive nor sticky");
  }
  return *best;
}

}  // namespace omq
