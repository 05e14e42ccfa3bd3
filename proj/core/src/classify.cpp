#include "omq/classify.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace omq {
namespace {

ClassCheck violation(std::size_t index, const TGD& t, const std::string& why) {
  return {false, index, "tgd " + std::to_string(index) + " (" + t.to_string() +
                            "): " + why};
}

// Edges R -> P of the predicate graph, over the indices of `preds`.
struct PredicateGraph {
  std::vector<Predicate> preds;
  std::vector<std::set<std::size_t>> succ;

  explicit PredicateGraph(std::span<const TGD> tgds) {
    Schema s = schema_of(tgds);
    preds = s.predicates();
    succ.resize(preds.size());
    for (const auto& t : tgds) {
      for (const auto& b : t.body()) {
        for (const auto& h : t.head()) {
          succ[index(b.predicate())].insert(index(h.predicate()));
        }
      }
    }
  }

  std::size_t index(const Predicate& p) const {
    return static_cast<std::size_t>(
        std::lower_bound(preds.begin(), preds.end(), p,
                         [](const Predicate& a, const Predicate& b) {
                           return a.name() < b.name();
                         }) -
        preds.begin());
  }

  // Returns a cycle (first node repeated at the end) or an empty vector.
  std::vector<std::size_t> find_cycle() const {
    enum Color { kWhite, kGrey, kBlack };
    std::vector<Color> color(preds.size(), kWhite);
    std::vector<std::size_t> stack;
    std::vector<std::size_t> cycle;
    std::function<bool(std::size_t)> visit = [&](std::size_t u) {
      color[u] = kGrey;
      stack.push_back(u);
      for (std::size_t v : succ[u]) {
        if (color[v] == kGrey) {
          auto it = std::find(stack.begin(), stack.end(), v);
          cycle.assign(it, stack.end());
          cycle.push_back(v);
          return true;
        }
        if (color[v] == kWhite && visit(v)) return true;
      }
      stack.pop_back();
      color[u] = kBlack;
      return false;
    };
    for (std::size_t u = 0; u < preds.size(); ++u) {
      if (color[u] == kWhite && visit(u)) return cycle;
    }
    return {};
  }
};

// Longest-path levels over an acyclic graph given by `succ`, starting from
// `base`. Empty when the graph has a cycle.
std::vector<std::size_t> levels(const std::vector<std::set<std::size_t>>& succ,
                                std::vector<std::size_t> level) {
  const std::size_t n = succ.size();
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& s : succ) {
    for (std::size_t v : s) ++indegree[v];
  }
  std::vector<std::size_t> order;
  for (std::size_t u = 0; u < n; ++u) {
    if (indegree[u] == 0) order.push_back(u);
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::size_t u = order[i];
    for (std::size_t v : succ[u]) {
      level[v] = std::max(level[v], level[u] + 1);
      if (--indegree[v] == 0) order.push_back(v);
    }
  }
  return order.size() == n ? level : std::vector<std::size_t>{};
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

ClassCheck is_guarded(std::span<const TGD> tgds) {
  for (std::size_t i = 0; i < tgds.size(); ++i) {
    const auto& t = tgds[i];
    if (t.is_fact()) continue;
    const auto vars = t.body_variables();
    bool guarded = std::any_of(t.body().begin(), t.body().end(), [&](const Atom& a) {
      return std::all_of(vars.begin(), vars.end(), [&](const Term& v) {
        return std::find(a.args().begin(), a.args().end(), v) != a.args().end();
      });
    });
    if (!guarded) return violation(i, t, "no body atom contains every body variable");
  }
  return {};
}

ClassCheck is_linear(std::span<const TGD> tgds) {
  for (std::size_t i = 0; i < tgds.size(); ++i) {
    if (tgds[i].body().size() != 1) {
      return violation(i, tgds[i],
                       "body has " + std::to_string(tgds[i].body().size()) + " atoms");
    }
  }
  return {};
}

ClassCheck is_linear_with_facts(std::span<const TGD> tgds) {
  for (std::size_t i = 0; i < tgds.size(); ++i) {
    if (tgds[i].body().size() > 1) {
      return violation(i, tgds[i],
                       "body has " + std::to_string(tgds[i].body().size()) + " atoms");
    }
  }
  return {};
}

ClassCheck is_full(std::span<const TGD> tgds) {
  for (std::size_t i = 0; i < tgds.size(); ++i) {
    if (!tgds[i].is_full()) {
      return violation(i, tgds[i], "existential variable " +
                                       tgds[i].existentials().front().to_string());
    }
  }
  return {};
}

StratifyResult stratify(std::span<const TGD> tgds) {
  PredicateGraph g(tgds);
  StratifyResult out;
  if (auto cycle = g.find_cycle(); !cycle.empty()) {
    for (std::size_t u : cycle) out.cycle.push_back(g.preds[u]);
    return out;
  }

  // Head predicates of one tgd must share a stratum: merge them and layer
  // the quotient graph.
  const std::size_t n = g.preds.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& t : tgds) {
    std::size_t first = g.index(t.head().front().predicate());
    for (const auto& h : t.head()) {
      parent[find_root(parent, g.index(h.predicate()))] = find_root(parent, first);
    }
  }
  std::vector<std::set<std::size_t>> merged(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v : g.succ[u]) {
      merged[find_root(parent, u)].insert(find_root(parent, v));
    }
  }
  bool self_loop = false;
  for (std::size_t u = 0; u < n; ++u) self_loop |= merged[u].count(u) > 0;

  // Predicates never in a head sit at level 0; head predicates at >= 1.
  std::vector<std::size_t> base(n, 0);
  for (const auto& t : tgds) {
    for (const auto& h : t.head()) base[g.index(h.predicate())] = 1;
  }
  std::vector<std::size_t> merged_base(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    merged_base[find_root(parent, u)] |= base[u];
  }

  Stratification s;
  std::vector<std::size_t> level_of(n);
  std::vector<std::size_t> level;
  if (!self_loop && !(level = levels(merged, merged_base)).empty()) {
    for (std::size_t u = 0; u < n; ++u) level_of[u] = level[find_root(parent, u)];
  } else {
    s.strict = false;
    level_of = levels(g.succ, base);
  }
  for (std::size_t u = 0; u < n; ++u) s.mu.emplace(g.preds[u], level_of[u]);

  std::size_t top = 1;
  std::vector<std::size_t> stratum(tgds.size());
  for (std::size_t i = 0; i < tgds.size(); ++i) {
    std::size_t m = 1;
    for (const auto& h : tgds[i].head()) m = std::max(m, level_of[g.index(h.predicate())]);
    stratum[i] = m;
    top = std::max(top, m);
  }
  s.strata.resize(top);
  for (std::size_t i = 0; i < tgds.size(); ++i) s.strata[stratum[i] - 1].push_back(i);
  out.stratification = std::move(s);
  return out;
}

bool is_non_recursive(std::span<const TGD> tgds) { return stratify(tgds).ok(); }

MarkedVariables marked_variables(std::span<const TGD> tgds) {
  MarkedVariables marked;
  for (std::size_t i = 0; i < tgds.size(); ++i) {
    for (const auto& x : tgds[i].body_variables()) {
      for (const auto& alpha : tgds[i].head()) {
        if (std::find(alpha.args().begin(), alpha.args().end(), x) == alpha.args().end()) {
          marked.emplace(i, x);
          break;
        }
      }
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < tgds.size(); ++i) {
      for (const auto& x : tgds[i].body_variables()) {
        if (marked.count({i, x})) continue;
        bool mark = false;
        for (const auto& alpha : tgds[i].head()) {
          std::vector<std::size_t> positions;
          for (std::size_t p = 0; p < alpha.arity(); ++p) {
            if (alpha[p] == x) positions.push_back(p);
          }
          if (positions.empty()) continue;
          for (std::size_t j = 0; j < tgds.size() && !mark; ++j) {
            for (const auto& beta : tgds[j].body()) {
              if (beta.predicate() != alpha.predicate()) continue;
              bool all_marked = std::all_of(
                  positions.begin(), positions.end(), [&](std::size_t p) {
                    return !beta[p].is_variable() || marked.count({j, beta[p]});
                  });
              if (all_marked) {
                mark = true;
                break;
              }
            }
          }
          if (mark) break;
        }
        if (mark) {
          marked.emplace(i, x);
          changed = true;
        }
      }
    }
  }
  return marked;
}

ClassCheck is_sticky(std::span<const TGD> tgds) {
  const auto marked = marked_variables(tgds);
  for (const auto& [i, x] : marked) {
    std::size_t occurrences = 0;
    for (const auto& a : tgds[i].body()) {
      occurrences += static_cast<std::size_t>(std::count(a.args().begin(), a.args().end(), x));
    }
    if (occurrences > 1) {
      return violation(i, tgds[i], "marked variable " + x.to_string() + " occurs " +
                                       std::to_string(occurrences) + " times in the body");
    }
  }
  return {};
}

ClassReport classify(std::span<const TGD> tgds) {
  ClassReport r;
  auto record = [&r](const char* flag, bool& slot, const ClassCheck& c) {
    slot = c.holds;
    if (!c.holds) r.witnesses[flag] = c.witness;
  };
  record("linear", r.linear, is_linear(tgds));
  record("guarded", r.guarded, is_guarded(tgds));
  record("sticky", r.sticky, is_sticky(tgds));
  record("full", r.full, is_full(tgds));
  record("linear_with_facts", r.linear_with_facts, is_linear_with_facts(tgds));

  auto strat = stratify(tgds);
  r.non_recursive = strat.ok();
  if (!strat.ok()) {
    std::string cycle;
    for (std::size_t i = 0; i < strat.cycle.size(); ++i) {
      if (i > 0) cycle += " -> ";
      cycle += std::string(strat.cycle[i].name());
    }
    r.witnesses["non_recursive"] = "predicate cycle " + cycle;
  }
  for (std::size_t i = 0; i < tgds.size(); ++i) {
    if (r.fact_free && tgds[i].is_fact()) {
      r.fact_free = false;
      r.witnesses["fact_free"] = violation(i, tgds[i], "empty body").witness;
    }
    if (r.constant_free && !tgds[i].constants().empty()) {
      r.constant_free = false;
      r.witnesses["constant_free"] =
          violation(i, tgds[i], "constant " + tgds[i].constants().front().to_string())
              .witness;
    }
  }
  return r;
}

}  // namespace omq
