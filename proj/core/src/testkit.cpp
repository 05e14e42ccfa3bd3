#include "omq/testkit.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "omq/classify.hpp"
#include "omq/errors.hpp"

namespace omq {
namespace {

// Portable draws: std::uniform_int_distribution is implementation defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) { return n == 0 ? 0 : engine_() % n; }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(unsigned percent) { return below(100) < percent; }

 private:
  std::mt19937_64 engine_;
};

Term var(const char* prefix, std::size_t i) {
  return Term::variable(std::string(prefix) + std::to_string(i));
}

struct Draft {
  std::vector<Predicate> preds;
  Schema data;
  std::vector<TGD> tgds;
};

Atom random_atom(Rng& rng, const Predicate& p, const char* prefix, std::size_t pool) {
  std::vector<Term> args;
  for (std::size_t i = 0; i < p.arity(); ++i) args.push_back(var(prefix, rng.below(pool)));
  return Atom(p, std::move(args));
}

TGD random_tgd(Rng& rng, const GeneratorConfig& cfg, const std::vector<Predicate>& preds) {
  const bool fact = cfg.fact_tgds && rng.chance(10);
  const std::size_t body_size =
      fact ? 0
           : (cfg.target == TargetClass::kLinear ? 1 : rng.between(1, cfg.max_body_atoms));
  const std::size_t pool = std::max<std::size_t>(1, body_size + rng.below(3));
  std::vector<Atom> body;
  for (std::size_t i = 0; i < body_size; ++i) {
    body.push_back(random_atom(rng, preds[rng.below(preds.size())], "u", pool));
  }
  const auto frontier_pool = variables_of(body);
  const Predicate& hp = preds[rng.below(preds.size())];
  // Keep one head position for a frontier variable.
  const bool existential = cfg.target != TargetClass::kFull && hp.arity() > 1 && rng.chance(40);
  std::vector<Term> args(hp.arity(), Term::variable("z"));
  std::size_t z_at = existential || frontier_pool.empty() ? rng.below(hp.arity()) : hp.arity();
  for (std::size_t i = 0; i < hp.arity(); ++i) {
    if (i == z_at) continue;
    if (frontier_pool.empty()) {
      args[i] = Term::variable("z");
    } else {
      args[i] = frontier_pool[rng.below(frontier_pool.size())];
    }
  }
  // A fact tgd head is all-existential; keep it to one occurrence.
  if (frontier_pool.empty()) {
    for (std::size_t i = 0; i < hp.arity(); ++i) {
      args[i] = Term::variable("z" + std::to_string(i));
    }
  }
  return TGD(std::move(body), {Atom(hp, std::move(args))});
}

bool in_class(const std::vector<TGD>& tgds, TargetClass target) {
  const auto r = classify(tgds);
  switch (target) {
    case TargetClass::kLinear: return r.linear;
    case TargetClass::kNonRecursive: return r.non_recursive;
    case TargetClass::kSticky: return r.sticky;
    case TargetClass::kFull: return r.full;
    case TargetClass::kAny: return true;
  }
  return false;
}

CQ random_cq(Rng& rng, const GeneratorConfig& cfg, const std::vector<Predicate>& preds,
             std::size_t arity) {
  const std::size_t size = rng.between(1, cfg.max_query_atoms);
  const std::size_t pool = std::max<std::size_t>(arity, 1) + rng.below(size + 1);
  std::vector<Atom> body;
  for (std::size_t i = 0; i < size; ++i) {
    body.push_back(random_atom(rng, preds[rng.below(preds.size())], "x", pool));
  }
  auto vars = variables_of(body);
  // Shuffle deterministically, then take the first `arity` variables.
  for (std::size_t i = vars.size(); i > 1; --i) std::swap(vars[i - 1], vars[rng.below(i)]);
  vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(std::min(arity, vars.size())), vars.end());
  return CQ(vars, std::move(body));
}

}  // namespace

const char* to_string(TargetClass c) {
  switch (c) {
    case TargetClass::kLinear: return "L";
    case TargetClass::kNonRecursive: return "NR";
    case TargetClass::kSticky: return "S";
    case TargetClass::kFull: return "F";
    case TargetClass::kAny: return "any";
  }
  return "any";
}

TargetClass parse_target_class(std::string_view t) {
  if (t == "L" || t == "linear") return TargetClass::kLinear;
  if (t == "NR" || t == "non-recursive") return TargetClass::kNonRecursive;
  if (t == "S" || t == "sticky") return TargetClass::kSticky;
  if (t == "F" || t == "full") return TargetClass::kFull;
  if (t == "any") return TargetClass::kAny;
  throw NameError("unknown class '" + std::string(t) + "'");
}

OMQ random_omq(const GeneratorConfig& cfg) {
  Rng rng(cfg.seed);
  const std::size_t npreds = rng.between(1, std::max<std::size_t>(1, cfg.max_predicates));
  std::vector<Predicate> preds;
  for (std::size_t i = 0; i < npreds; ++i) {
    preds.emplace_back("R" + std::to_string(i + 1),
                       static_cast<std::uint32_t>(rng.between(1, std::max<std::size_t>(1, cfg.max_arity))));
  }
  Schema data;
  for (const auto& p : preds) {
    if (rng.chance(60) || cfg.full_data_schema) data.add(p);
  }
  if (data.empty()) data.add(preds[rng.below(preds.size())]);

  std::vector<TGD> tgds;
  for (std::size_t attempt = 0;; ++attempt) {
    if (attempt == cfg.max_attempts) {
      throw PreconditionViolated(std::string("no rule set of class ") + to_string(cfg.target) +
                                 " found within the attempt limit");
    }
    tgds.clear();
    const std::size_t n = rng.between(0, cfg.max_tgds);
    for (std::size_t i = 0; i < n; ++i) {
      // Redraw tautologies, whose head atom already occurs in the body.
      TGD t = random_tgd(rng, cfg, preds);
      for (int retry = 0; retry < 8; ++retry) {
        const auto& b = t.body();
        if (std::find(b.begin(), b.end(), t.head().front()) == b.end()) break;
        t = random_tgd(rng, cfg, preds);
      }
      tgds.push_back(std::move(t));
    }
    if (in_class(tgds, cfg.target)) break;
  }

  const std::size_t arity = rng.between(0, cfg.max_answer_arity);
  const std::size_t disjuncts = rng.between(1, std::max<std::size_t>(1, cfg.max_disjuncts));
  UCQ query(arity);
  while (query.size() < disjuncts) {
    CQ cq = random_cq(rng, cfg, preds, arity);
    if (cq.arity() == arity) query.add(std::move(cq));
  }
  return OMQ(std::move(data), std::move(tgds), std::move(query));
}

OMQ sticky_family(std::size_t n) {
  if (n == 0) throw PreconditionViolated("the sticky family needs n >= 1");
  const auto arity = static_cast<std::uint32_t>(n + 2);
  auto p = [&](std::size_t i) { return Predicate("P" + std::to_string(i), arity); };
  const Term zero = Term::constant("0");
  const Term one = Term::constant("1");
  const Term z = Term::variable("z");
  const Term o = Term::variable("o");
  std::vector<Term> xs;
  for (std::size_t i = 1; i <= n; ++i) xs.push_back(var("x", i));

  std::vector<TGD> tgds;
  {
    auto head = xs;
    head.push_back(zero);
    head.push_back(one);
    tgds.emplace_back(std::vector<Atom>{Atom(Predicate("S", static_cast<std::uint32_t>(n)), xs)},
                      std::vector<Atom>{Atom(p(n), head)});
  }
  for (std::size_t i = n; i >= 1; --i) {
    auto with = [&](const Term& at_i) {
      auto args = xs;
      args[i - 1] = at_i;
      args.push_back(z);
      args.push_back(o);
      return args;
    };
    tgds.emplace_back(std::vector<Atom>{Atom(p(i), with(z)), Atom(p(i), with(o))},
                      std::vector<Atom>{Atom(p(i - 1), with(z))});
  }
  {
    std::vector<Term> args(n + 1, z);
    args.push_back(o);
    tgds.emplace_back(std::vector<Atom>{Atom(p(0), args)},
                      std::vector<Atom>{Atom(Predicate("Ans", 2), {z, o})});
  }
  Schema data{Predicate("S", static_cast<std::uint32_t>(n))};
  CQ q({}, {Atom(Predicate("Ans", 2), {zero, one})});
  return OMQ(std::move(data), std::move(tgds), UCQ(std::move(q)));
}

std::vector<Term> fresh_constants(std::size_t count, std::span<const Term> avoid) {
  std::vector<Term> out;
  for (std::size_t k = 1; out.size() < count; ++k) {
    Term c = Term::constant("c" + std::to_string(k));
    if (std::find(avoid.begin(), avoid.end(), c) == avoid.end()) out.push_back(c);
  }
  return out;
}

std::vector<Atom> ground_atoms(const Schema& schema, std::span<const Term> constants) {
  std::vector<Atom> out;
  for (const auto& p : schema.predicates()) {
    if (p.arity() > 0 && constants.empty()) continue;
    std::vector<std::size_t> idx(p.arity(), 0);
    for (;;) {
      std::vector<Term> args;
      for (std::size_t i : idx) args.push_back(constants[i]);
      out.emplace_back(p, std::move(args));
      std::size_t pos = idx.size();
      while (pos > 0 && idx[pos - 1] + 1 == constants.size()) idx[--pos] = 0;
      if (pos == 0) break;
      ++idx[pos - 1];
    }
  }
  return out;
}

std::uint64_t database_count(std::size_t ground, std::size_t max_atoms) {
  std::uint64_t total = 0;
  std::uint64_t binom = 1;
  for (std::size_t j = 0; j <= std::min(ground, max_atoms); ++j) {
    if (j > 0) {
      // binom = C(ground, j), exact since C(g, j-1) * (g-j+1) is divisible by j.
      if (binom > std::numeric_limits<std::uint64_t>::max() / (ground - j + 1)) {
        return std::numeric_limits<std::uint64_t>::max();
      }
      binom = binom * (ground - j + 1) / j;
    }
    if (total > std::numeric_limits<std::uint64_t>::max() - binom) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total += binom;
  }
  return total;
}

void for_each_database(const Schema& schema, std::span<const Term> constants,
                       std::size_t max_atoms,
                       const std::function<bool(const Database&)>& visit,
                       std::size_t max_ground) {
  const auto ground = ground_atoms(schema, constants);
  if (ground.size() > max_ground) {
    throw EnumerationTooLarge(std::to_string(ground.size()) +
                              " ground atoms exceed the limit of " +
                              std::to_string(max_ground));
  }
  const std::size_t n = ground.size();
  for (std::size_t k = 0; k <= std::min(n, max_atoms); ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
      std::vector<Atom> atoms;
      atoms.reserve(k);
      for (std::size_t i : idx) atoms.push_back(ground[i]);
      if (!visit(Database(std::move(atoms)))) return;
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
}

std::vector<Database> enumerate_databases(const Schema& schema, std::size_t max_constants,
                                          std::size_t max_atoms, std::size_t max_ground) {
  std::vector<Database> out;
  const auto constants = fresh_constants(max_constants);
  for_each_database(
      schema, constants, max_atoms,
      [&](const Database& db) {
        out.push_back(db);
        return true;
      },
      max_ground);
  return out;
}

}  // namespace omq
