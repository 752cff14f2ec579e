#include <benchmark/benchmark.h>

#include "bundlekit/bundle.hpp"
#include "bundlekit/problems.hpp"
#include "bundlekit/simplex_qp.hpp"
#include "bundlekit/solvers.hpp"

using namespace bundlekit;

namespace {

// Bundle of m cuts of the default quadratic at Gaussian points.
Bundle quadratic_bundle(const Problem& p, Index m) {
  Rng rng(11);
  Bundle b(p.x0.size());
  for (Index i = 0; i < m; ++i) {
    const Vector y = rng.normal_vector(p.x0.size());
    b.add_cut(y, p.smooth->eval(y));
  }
  return b;
}

void BM_SimplexQP(benchmark::State& state) {
  const Index m = state.range(0);
  Rng rng(5);
  const SimplexQP qp = SimplexQP::factored(rng.normal_matrix(20, m), 1.0, rng.normal_vector(m));
  for (auto _ : state) benchmark::DoNotOptimize(solve(qp).objective);
}
BENCHMARK(BM_SimplexQP)->RangeMultiplier(4)->Range(4, 256);

void BM_SmoothModel(benchmark::State& state) {
  const Problem p = make_problem(ProblemDescriptor{});
  const Bundle b = quadratic_bundle(p, state.range(0));
  const Vector y = Vector::Ones(p.x0.size());
  for (auto _ : state) benchmark::DoNotOptimize(eval_smooth_model(b, p.L, y).value);
}
BENCHMARK(BM_SmoothModel)->RangeMultiplier(4)->Range(4, 256);

void BM_ApbmRun(benchmark::State& state) {
  ProblemDescriptor d;
  d.n = state.range(0);
  const Problem p = make_problem(d);
  SolverConfig cfg;
  cfg.rho = p.L;
  cfg.target_gap = 1e-6;
  cfg.max_iter = 100000;
  long iterations = 0;
  for (auto _ : state) iterations = apbm_run(*p.smooth, p.x0, cfg).iterations;
  state.counters["iterations"] = static_cast<double>(iterations);
}
BENCHMARK(BM_ApbmRun)->Arg(5)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
