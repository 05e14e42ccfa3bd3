#include "omq/homomorphism.hpp"

#include <algorithm>
#include <limits>

namespace omq {
namespace {

class Search {
 public:
  Search(std::span<const Atom> atoms, const Instance& target,
         const Substitution& seed, const HomomorphismVisitor& visit)
      : atoms_(atoms), target_(target), visit_(visit), done_(atoms.size(), false) {
    vars_ = variables_of(atoms);
    value_.assign(vars_.size(), std::nullopt);
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (auto v = seed.lookup(vars_[i])) value_[i] = *v;
    }
    // Seed bindings outside the atoms are passed through unchanged.
    for (const auto& [var, value] : seed.bindings()) {
      if (std::find(vars_.begin(), vars_.end(), var) == vars_.end()) {
        extra_.emplace_back(var, value);
      }
    }
    slots_.reserve(atoms.size());
    for (const auto& a : atoms) {
      std::vector<int> s;
      for (const auto& t : a.args()) {
        if (t.is_variable()) {
          s.push_back(static_cast<int>(
              std::find(vars_.begin(), vars_.end(), t) - vars_.begin()));
        } else {
          s.push_back(-1);
        }
      }
      slots_.push_back(std::move(s));
    }
  }

  void run() { step(0); }

 private:
  std::optional<Term> image(std::size_t atom, std::size_t pos) const {
    int slot = slots_[atom][pos];
    if (slot < 0) return atoms_[atom][pos];
    return value_[static_cast<std::size_t>(slot)];
  }

  std::span<const std::uint32_t> candidates(std::size_t atom) const {
    const Atom& a = atoms_[atom];
    std::span<const std::uint32_t> best = target_.with_predicate(a.predicate());
    for (std::size_t p = 0; p < a.arity() && !best.empty(); ++p) {
      if (auto t = image(atom, p)) {
        auto c = target_.with_term(a.predicate(), static_cast<std::uint32_t>(p), *t);
        if (c.size() < best.size()) best = c;
      }
    }
    return best;
  }

  // Returns false when the search should stop.
  bool step(std::size_t matched) {
    if (matched == atoms_.size()) return emit();
    std::size_t pick = atoms_.size();
    std::span<const std::uint32_t> pick_cands;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (done_[i]) continue;
      auto c = candidates(i);
      if (c.size() < best) {
        best = c.size();
        pick = i;
        pick_cands = c;
        if (best == 0) return true;
      }
    }
    done_[pick] = true;
    const Atom& a = atoms_[pick];
    std::vector<std::size_t> bound;
    for (std::uint32_t idx : pick_cands) {
      const Atom& fact = target_.atoms()[idx];
      bool ok = true;
      for (std::size_t p = 0; p < a.arity() && ok; ++p) {
        int slot = slots_[pick][p];
        if (slot < 0) {
          ok = a[p] == fact[p];
        } else if (value_[static_cast<std::size_t>(slot)]) {
          ok = *value_[static_cast<std::size_t>(slot)] == fact[p];
        } else {
          value_[static_cast<std::size_t>(slot)] = fact[p];
          bound.push_back(static_cast<std::size_t>(slot));
        }
      }
      bool keep_going = !ok || step(matched + 1);
      for (std::size_t s : bound) value_[s].reset();
      bound.clear();
      if (!keep_going) {
        done_[pick] = false;
        return false;
      }
    }
    done_[pick] = false;
    return true;
  }

  bool emit() {
    Substitution h;
    for (std::size_t i = 0; i < vars_.size(); ++i) h.bind(vars_[i], *value_[i]);
    for (const auto& [var, value] : extra_) h.bind(var, value);
    return visit_(h);
  }

  std::span<const Atom> atoms_;
  const Instance& target_;
  const HomomorphismVisitor& visit_;
  std::vector<Term> vars_;
  std::vector<std::optional<Term>> value_;
  std::vector<std::pair<Term, Term>> extra_;
  std::vector<std::vector<int>> slots_;
  std::vector<bool> done_;
};

}  // namespace

void for_each_homomorphism(std::span<const Atom> atoms, const Instance& target,
                           const Substitution& seed,
                           const HomomorphismVisitor& visit) {
  Search(atoms, target, seed, visit).run();
}

std::optional<Substitution> find_homomorphism(std::span<const Atom> atoms,
                                              const Instance& target,
                                              const Substitution& seed) {
  std::optional<Substitution> out;
  for_each_homomorphism(atoms, target, seed, [&](const Substitution& h) {
    out = h;
    return false;
  });
  return out;
}

bool has_homomorphism(std::span<const Atom> atoms, const Instance& target,
                      const Substitution& seed) {
  return find_homomorphism(atoms, target, seed).has_value();
}

}  // namespace omq
