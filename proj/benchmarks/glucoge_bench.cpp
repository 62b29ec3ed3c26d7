#include <benchmark/benchmark.h>

#include "glucoge/dataset.hpp"
#include "glucoge/evolver.hpp"

using namespace glucoge;

namespace {

const PatientSeries& joy() {
  static const PatientSeries s = load_patient(GLUCOGE_BENCH_DATA);
  return s;
}

std::vector<Chromosome> population(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Chromosome> pop(n);
  for (auto& c : pop) {
    c.codons.resize(100);
    for (auto& x : c.codons) x = static_cast<Codon>(rng.below(256));
  }
  return pop;
}

void BM_ParseGrammar(benchmark::State& state) {
  auto src = *bundled_grammar_source("G10");
  for (auto _ : state) benchmark::DoNotOptimize(parse_grammar(src));
}
BENCHMARK(BM_ParseGrammar);

void BM_Map(benchmark::State& state) {
  auto g = bundled_grammar("G11");
  auto pop = population(256, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(map_genotype(g, pop[i++ % pop.size()], 3));
  }
}
BENCHMARK(BM_Map);

void BM_Simulate(benchmark::State& state) {
  auto model = parse_expression(
      "GL[k_00] + CH[k_01] - cos(IL[k_01]) + tan(exp(IL[k_01] + cos(tan(exp(exp(cos(K)))))))");
  const bool compiled = state.range(0) != 0;
  Program program(model);
  for (auto _ : state) {
    if (compiled) {
      benchmark::DoNotOptimize(simulate(program, joy()));
    } else {
      benchmark::DoNotOptimize(simulate(model, joy()));
    }
  }
  state.SetLabel(compiled ? "program" : "tree");
}
BENCHMARK(BM_Simulate)->Arg(0)->Arg(1);

void BM_EvaluateIndividual(benchmark::State& state) {
  auto g = bundled_grammar("G11");
  auto pop = population(256, 2);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_individual(g, pop[i++ % pop.size()], 3, Objective::mad, joy()));
  }
}
BENCHMARK(BM_EvaluateIndividual);

void BM_ShortRun(benchmark::State& state) {
  auto g = bundled_grammar("G11");
  GaConfig c;
  c.generations = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run(c, g, Objective::mad, joy()));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}
BENCHMARK(BM_ShortRun)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
