#include "omq/chase.hpp"

#include <algorithm>
#include <limits>

#include "omq/classify.hpp"
#include "omq/errors.hpp"
#include "omq/homomorphism.hpp"

namespace omq {
namespace {

Substitution restrict_to(const Substitution& s, const std::vector<Term>& vars) {
  Substitution out;
  for (const auto& v : vars) {
    if (auto t = s.lookup(v)) out.bind(v, *t);
  }
  return out;
}

class Engine {
 public:
  Engine(const Instance& start, std::span<const TGD> tgds)
      : tgds_(tgds) {
    result_.instance = start;
    for (const auto& a : start.atoms()) result_.level.emplace(a, 0);
  }

  std::size_t image_level(const TGD& t, const Substitution& h) const {
    std::size_t m = 0;
    for (const auto& b : t.body()) m = std::max(m, result_.level.at(h.apply(b)));
    return m + 1;
  }

  // Applies every active trigger of tgds_[index] found in `source`; returns
  // whether an atom was added. Triggers above `max_level` are skipped.
  bool fire(std::size_t index, const Instance& source, std::size_t max_level) {
    const TGD& t = tgds_[index];
    std::vector<Substitution> found;
    for_each_homomorphism(t.body(), source, {}, [&](const Substitution& h) {
      found.push_back(h);
      return true;
    });
    std::sort(found.begin(), found.end());
    bool changed = false;
    for (const auto& h : found) {
      const std::size_t lvl = image_level(t, h);
      if (lvl > max_level) continue;
      if (is_satisfied(result_.instance, t, h)) continue;
      Substitution full = h;
      std::uint32_t next = result_.instance.max_null_id();
      for (const auto& z : t.existentials()) full.bind(z, Term::null(++next));
      for (const auto& a : t.head()) {
        Atom fact = full.apply(a);
        if (result_.instance.insert(fact)) result_.level.emplace(fact, lvl);
      }
      ++result_.steps;
      changed = true;
    }
    return changed;
  }

  ChaseResult finish() {
    result_.complete = satisfies(result_.instance, tgds_).holds;
    return std::move(result_);
  }

  const Instance& instance() const { return result_.instance; }

 private:
  std::span<const TGD> tgds_;
  ChaseResult result_;
};

}  // namespace

bool is_normal(const TGD& t) {
  if (t.head().size() != 1) return false;
  if (t.existentials().empty()) return true;
  if (t.existentials().size() > 1) return false;
  const auto& args = t.head().front().args();
  return std::count(args.begin(), args.end(), t.existentials().front()) == 1;
}

std::vector<TGD> normalize_tgds(std::span<const TGD> tgds) {
  std::vector<TGD> out;
  for (std::size_t i = 0; i < tgds.size(); ++i) {
    const TGD& t = tgds[i];
    if (is_normal(t)) {
      out.push_back(t);
      continue;
    }
    if (t.is_full()) {
      for (const auto& h : t.head()) out.emplace_back(t.body(), std::vector<Atom>{h});
      continue;
    }
    std::vector<Term> carried = t.frontier();
    std::vector<Atom> body = t.body();
    const auto& zs = t.existentials();
    for (std::size_t j = 0; j < zs.size(); ++j) {
      carried.push_back(zs[j]);
      Predicate aux("$aux" + std::to_string(i) + "_" + std::to_string(j + 1),
                    static_cast<std::uint32_t>(carried.size()));
      Atom link(aux, carried);
      out.emplace_back(body, std::vector<Atom>{link});
      body = {link};
    }
    for (const auto& h : t.head()) out.emplace_back(body, std::vector<Atom>{h});
  }
  return out;
}

std::vector<Trigger> find_triggers(const Instance& instance,
                                   std::span<const TGD> tgds, std::size_t index) {
  std::vector<Trigger> out;
  for_each_homomorphism(tgds[index].body(), instance, {}, [&](const Substitution& h) {
    out.push_back({index, h});
    return true;
  });
  return out;
}

bool is_satisfied(const Instance& instance, const TGD& tgd,
                  const Substitution& binding) {
  return has_homomorphism(tgd.head(), instance, restrict_to(binding, tgd.frontier()));
}

Instance chase_step(const Instance& instance, std::span<const TGD> tgds,
                    const Trigger& trigger) {
  const TGD& t = tgds[trigger.tgd];
  for (const auto& b : t.body()) {
    Atom image = trigger.binding.apply(b);
    if (!image.is_ground() || !instance.contains(image)) {
      throw InactiveTrigger("body atom " + image.to_string() +
                            " is not in the instance");
    }
  }
  Instance out = instance;
  Substitution full = trigger.binding;
  std::uint32_t next = instance.max_null_id();
  for (const auto& z : t.existentials()) full.bind(z, Term::null(++next));
  for (const auto& a : t.head()) out.insert(full.apply(a));
  return out;
}

ChaseResult chase_nr(const Instance& start, std::span<const TGD> tgds) {
  auto strat = stratify(tgds);
  if (!strat.ok()) {
    throw PreconditionViolated("chase_nr requires a non-recursive tgd set");
  }
  Engine engine(start, tgds);
  const std::size_t unbounded = std::numeric_limits<std::size_t>::max();
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& stratum : strat.stratification->strata) {
      for (bool again = true; again;) {
        again = false;
        for (std::size_t index : stratum) {
          again |= engine.fire(index, engine.instance(), unbounded);
        }
        changed |= again;
      }
    }
  }
  return engine.finish();
}

ChaseResult chase_nr(const Database& db, std::span<const TGD> tgds) {
  return chase_nr(db.to_instance(), tgds);
}

ChaseResult chase_bounded(const Instance& start, std::span<const TGD> tgds,
                          std::size_t max_level) {
  Engine engine(start, tgds);
  for (bool changed = true; changed;) {
    changed = false;
    const Instance snapshot = engine.instance();
    for (std::size_t i = 0; i < tgds.size(); ++i) {
      changed |= engine.fire(i, snapshot, max_level);
    }
  }
  return engine.finish();
}

ChaseResult chase_bounded(const Database& db, std::span<const TGD> tgds,
                          std::size_t max_level) {
  return chase_bounded(db.to_instance(), tgds, max_level);
}

SatisfactionResult satisfies(const Instance& instance, std::span<const TGD> tgds) {
  for (std::size_t i = 0; i < tgds.size(); ++i) {
    std::optional<Trigger> bad;
    for_each_homomorphism(tgds[i].body(), instance, {}, [&](const Substitution& h) {
      if (is_satisfied(instance, tgds[i], h)) return true;
      bad = Trigger{i, h};
      return false;
    });
    if (bad) return {false, std::move(bad)};
  }
  return {};
}

}  // namespace omq
