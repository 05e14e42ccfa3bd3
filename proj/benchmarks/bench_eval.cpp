#include <benchmark/benchmark.h>

#include <string>

#include "omq/chase.hpp"
#include "omq/eval.hpp"
#include "omq/parser.hpp"

namespace {

omq::Database path(std::size_t n) {
  std::vector<omq::Atom> atoms;
  const omq::Predicate e("E", 2);
  for (std::size_t i = 0; i < n; ++i) {
    atoms.emplace_back(e, std::vector<omq::Term>{omq::Term::constant("c" + std::to_string(i)),
                                                 omq::Term::constant("c" + std::to_string(i + 1))});
  }
  return omq::Database(std::move(atoms));
}

const char* kProgram = R"(
schema { E/2 }
tgds t {
  E(x,y) -> exists z . F(y,z).
  F(x,y) -> G(x).
  E(x,y), G(y) -> H(x,y).
}
query q(x) :- H(x,y), E(y,z).
)";

}  // namespace

static void BM_ChaseNonRecursive(benchmark::State& state) {
  const auto prog = omq::parse_program(kProgram);
  const auto& tgds = prog.tgd_block("t");
  const auto db = path(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(omq::chase_nr(db, tgds).instance.size());
}
BENCHMARK(BM_ChaseNonRecursive)->RangeMultiplier(4)->Range(4, 256)->Unit(benchmark::kMicrosecond);

static void BM_CertainAnswers(benchmark::State& state) {
  const auto q = omq::parse_program(kProgram).omq("q");
  const auto strategy = static_cast<omq::Strategy>(state.range(1));
  const omq::PreparedOMQ prepared(q, strategy);
  const auto db = path(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(prepared.answers(db).size());
  state.SetLabel(omq::to_string(strategy));
}
BENCHMARK(BM_CertainAnswers)
    ->ArgsProduct({{16, 256}, {1, 2}})
    ->Unit(benchmark::kMicrosecond);

static void BM_Homomorphism(benchmark::State& state) {
  const auto q = omq::parse_program("schema { E/2 }\nquery q(x,w) :- E(x,y), E(y,z), E(z,w).\n")
                     .query("q");
  const auto instance = path(static_cast<std::size_t>(state.range(0))).to_instance();
  for (auto _ : state) benchmark::DoNotOptimize(omq::evaluate(q, instance).size());
}
BENCHMARK(BM_Homomorphism)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMicrosecond);
