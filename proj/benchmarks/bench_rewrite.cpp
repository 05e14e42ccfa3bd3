#include <benchmark/benchmark.h>

#include "omq/contain.hpp"
#include "omq/parser.hpp"
#include "omq/rewrite.hpp"
#include "omq/testkit.hpp"

namespace {

omq::OMQ chain(std::size_t n) {
  std::string text = "schema { P0/1 }\ntgds t {\n";
  for (std::size_t i = 0; i < n; ++i) {
    text += "  P" + std::to_string(i + 1) + "(x) -> exists y . R(x,y), P" + std::to_string(i) +
            "(y).\n";
  }
  text += "}\nquery q(x) :- P" + std::to_string(n) + "(x).\n";
  return omq::parse_program(text).omq("q");
}

}  // namespace

static void BM_XRewriteStickyFamily(benchmark::State& state) {
  const auto q = omq::sticky_family(static_cast<std::size_t>(state.range(0)));
  std::size_t size = 0;
  for (auto _ : state) {
    const auto r = omq::xrewrite(q);
    size = r.size();
    benchmark::DoNotOptimize(size);
  }
  state.counters["disjuncts"] = static_cast<double>(size);
}
BENCHMARK(BM_XRewriteStickyFamily)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_XRewriteRandom(benchmark::State& state) {
  omq::GeneratorConfig cfg;
  cfg.seed = 7;
  cfg.target = static_cast<omq::TargetClass>(state.range(0));
  cfg.max_predicates = 3;
  cfg.max_tgds = 3;
  const auto q = omq::random_omq(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(omq::xrewrite(q));
}
BENCHMARK(BM_XRewriteRandom)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

static void BM_Containment(benchmark::State& state) {
  const auto q = chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(omq::contains(q, q).contained);
}
BENCHMARK(BM_Containment)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMicrosecond);

static void BM_OrGadget(benchmark::State& state) {
  const auto q = omq::parse_program(
                     "schema { P/1, T/1 }\n"
                     "query q(x) :- P(x).\nquery q(x) :- T(x).\n")
                     .omq("q");
  for (auto _ : state) benchmark::DoNotOptimize(omq::ucq_to_cq(q));
}
BENCHMARK(BM_OrGadget);
