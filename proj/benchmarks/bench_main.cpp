#include <benchmark/benchmark.h>

#include <memory>

#include "symext/reduction.hpp"
#include "symext/sdp.hpp"
#include "symext/states.hpp"

using namespace symext;

static void BM_Catalog(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(catalog(k, 4));
}
BENCHMARK(BM_Catalog)->Arg(8)->Arg(32)->Arg(64);

static void BM_Compile(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(compile(d, d, k));
}
BENCHMARK(BM_Compile)->Args({2, 8})->Args({2, 16})->Args({3, 4})->Unit(benchmark::kMillisecond);

static void BM_Marginal(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const auto problem = compile(d, d, k);
  Blocks x;
  for (auto n : problem.block_sizes()) x.push_back(Eigen::MatrixXcd::Identity(n, n));
  for (auto _ : state) benchmark::DoNotOptimize(problem.apply_marginal(x));
}
BENCHMARK(BM_Marginal)->Args({2, 8})->Args({3, 4});

static void BM_WernerBoundary(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  auto problem = std::make_shared<const ReducedProblem>(compile(d, d, k));
  const DensityMatrix mixed = maximally_mixed({d, d});
  const auto shape = extension_problem(problem, mixed);
  for (auto _ : state) {
    const auto r = maximize_interpolation(shape, {mixed.data()}, {werner(d, 1.0).data()}, 5e-4);
    state.counters["alpha"] = boundary_from_c(r.c_star, d);
  }
}
BENCHMARK(BM_WernerBoundary)->Args({2, 8})->Args({3, 3})->Args({3, 4})->Unit(benchmark::kSecond)->Iterations(1);

static void BM_PsdProjection(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Blocks x{Eigen::MatrixXcd::Random(n, n)};
  const Blocks h{0.5 * (x[0] + x[0].adjoint())};
  for (auto _ : state) benchmark::DoNotOptimize(project_psd(h));
}
BENCHMARK(BM_PsdProjection)->Arg(16)->Arg(64);
BENCHMARK_MAIN();
