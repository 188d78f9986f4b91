#include <benchmark/benchmark.h>

#include "socs/compose.hpp"
#include "socs/oracle.hpp"
#include "socs/rng.hpp"
#include "socs/tensorized.hpp"
#include "socs/training.hpp"

namespace {

using namespace socs;

Model make_model(ModelClass cls, int d, int k, std::uint64_t seed) {
  LayerSpec spec;
  spec.model_class = cls;
  spec.input_family = cls == ModelClass::Monotone ? InputFamily::Categorical
                                                  : InputFamily::EmbeddingComplex;
  spec.sum_units = k;
  spec.input_units = k;
  spec.seed = seed;
  auto rg = std::make_shared<RegionGraph>(RegionGraph::random_binary_tree(d, seed));
  return build(rg, boolean_variables(d), spec);
}

void BM_LogSumExpComplex(benchmark::State& state) {
  Rng rng(1);
  std::vector<std::pair<Cplx, LogComplex>> terms;
  for (int i = 0; i < state.range(0); ++i) {
    terms.push_back({Cplx(rng.normal(), rng.normal()),
                     LogComplex{rng.uniform(-300.0, 300.0), rng.uniform(-3.14, 3.14)}});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(logsumexp_complex(terms));
  }
}
BENCHMARK(BM_LogSumExpComplex)->Arg(16)->Arg(256)->Arg(4096);

void BM_ForwardLogComplex(benchmark::State& state) {
  const Model m = make_model(ModelClass::SquaredComplex, int(state.range(0)), 4, 3);
  const Assignment x(m.vars->size(), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_log(m.components[0], x, m.theta()));
  }
  state.SetLabel(std::to_string(m.components[0].num_edges()) + " edges");
}
BENCHMARK(BM_ForwardLogComplex)->Arg(8)->Arg(32)->Arg(128);

void BM_Multiply(benchmark::State& state) {
  const int d = int(state.range(0));
  auto rg = std::make_shared<RegionGraph>(RegionGraph::random_binary_tree(d, 5));
  LayerSpec spec;
  spec.model_class = ModelClass::SquaredComplex;
  spec.input_family = InputFamily::EmbeddingComplex;
  spec.sum_units = 2;
  spec.input_units = 2;
  spec.seed = 5;
  auto vars = boolean_variables(d);
  const Circuit c = build(rg, vars, spec).components[0];
  const Circuit cc = conjugate(c);
  for (auto _ : state) {
    benchmark::DoNotOptimize(multiply(cc, c));
  }
}
BENCHMARK(BM_Multiply)->Arg(8)->Arg(16)->Arg(32);

void BM_PartitionFunction(benchmark::State& state) {
  const Model m = make_model(ModelClass::SquaredComplex, int(state.range(0)), 4, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_partition(m.normalizer, m.theta()));
  }
  state.SetLabel(std::to_string(m.normalizer.num_edges()) + " edges");
}
BENCHMARK(BM_PartitionFunction)->Arg(8)->Arg(32);

void BM_TrainStep(benchmark::State& state) {
  Model m = make_model(ModelClass::SquaredComplex, 16, 4, 9);
  Rng rng(13);
  std::vector<Assignment> rows;
  for (int i = 0; i < 64; ++i) {
    Assignment x(16);
    for (auto& v : x) v = double(rng.uniform_int(2));
    rows.push_back(std::move(x));
  }
  std::vector<const Assignment*> batch;
  for (const auto& r : rows) batch.push_back(&r);
  std::vector<double> grad(m.params.size(), 0.0);
  for (auto _ : state) {
    std::fill(grad.begin(), grad.end(), 0.0);
    benchmark::DoNotOptimize(nll_batch_grad(m, batch, grad));
  }
  state.SetLabel(std::to_string(m.num_params()) + " parameters");
}
BENCHMARK(BM_TrainStep);

}  // namespace

BENCHMARK_MAIN();
