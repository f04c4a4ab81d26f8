#include <benchmark/benchmark.h>

#include "stratmc/allocation.hpp"
#include "stratmc/directions.hpp"
#include "stratmc/estimators.hpp"
#include "stratmc/models.hpp"
#include "stratmc/payoffs.hpp"
#include "stratmc/sampling.hpp"

namespace {

using namespace stratmc;

BsModel asian_model(std::size_t steps) { return BsModel(BsParams::single_asset(50.0, 0.3, 0.05, 1.0, steps)); }

PayoffSpec asian_spec(const BsModel& m, double strike) {
  PayoffSpec s;
  s.strike = strike;
  s.weights = m.params().weights;
  s.discount = m.discount();
  return s;
}

CirParams cir_params(std::size_t steps) {
  CirParams p;
  p.steps = steps;
  p.monitoring = CirMonitoring::StepStart;
  return p;
}

void BM_OneDirectionDraw(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const Vector v = la_direction_bs(asian_model(d));
  OrthogonalSampler sampler(DirectionSet::orthogonal({v}), StratumSpec({100}));
  RandomStream s(1, 0);
  Vector z(d);
  const std::vector<int> k{37};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.sample(k, s, z));
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_OneDirectionDraw)->Arg(16)->Arg(64)->Arg(256);

void BM_NonOrthogonalDraw(benchmark::State& state) {
  const CirParams p = cir_params(64);
  NonOrthogonalSampler sampler(la_directions_multi(
                                   [&](std::span<const double> z) { return cir_average_gradient(z, p); },
                                   64, 2),
                               StratumSpec({32, 32}));
  RandomStream s(1, 0);
  Vector z(64);
  const std::vector<int> k{12, 20};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.sample(k, s, z));
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_NonOrthogonalDraw);

void BM_BsAsianPayoff(benchmark::State& state) {
  const BsModel m = asian_model(static_cast<std::size_t>(state.range(0)));
  const BsPayoff g(m, asian_spec(m, 50.0));
  RandomStream s(2, 0);
  Vector z(m.dim()), scratch(g.scratch_size());
  s.fill_normal(z);
  for (auto _ : state) benchmark::DoNotOptimize(g(z, scratch));
}
BENCHMARK(BM_BsAsianPayoff)->Arg(16)->Arg(64)->Arg(256);

void BM_CirAsianPayoff(benchmark::State& state) {
  const CirParams p = cir_params(static_cast<std::size_t>(state.range(0)));
  PayoffSpec spec;
  spec.strike = 100.0;
  spec.weights = equal_weights(p.steps);
  const CirPayoff g(p, spec);
  RandomStream s(3, 0);
  Vector z(p.steps), scratch(g.scratch_size());
  s.fill_normal(z);
  for (auto _ : state) benchmark::DoNotOptimize(g(z, scratch));
}
BENCHMARK(BM_CirAsianPayoff)->Arg(64)->Arg(256);

void BM_LtDirectionsBs(benchmark::State& state) {
  const BsModel m = asian_model(64);
  const auto p = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lt_directions_bs(m, p));
}
BENCHMARK(BM_LtDirectionsBs)->Arg(1)->Arg(8)->Arg(64);

void BM_LtDirectionsCir(benchmark::State& state) {
  const CirParams p = cir_params(64);
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lt_directions_cir(p, count));
}
BENCHMARK(BM_LtDirectionsCir)->Arg(1)->Arg(8)->Arg(64);

void BM_PcaBs(benchmark::State& state) {
  const BsModel m = asian_model(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pca_directions(m.covariance(), 1));
}
BENCHMARK(BM_PcaBs)->Arg(16)->Arg(64);

void BM_OptimalAllocation(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  RandomStream s(4, 0);
  Vector p(k, 1.0 / static_cast<double>(k)), sigma(k);
  for (double& x : sigma) x = s.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(optimal_allocation(p, sigma, 100000));
}
BENCHMARK(BM_OptimalAllocation)->Arg(100)->Arg(1024);

void BM_StratifiedRun(benchmark::State& state) {
  const BsModel m = asian_model(64);
  const BsPayoff g(m, asian_spec(m, 50.0));
  OrthogonalSampler sampler(DirectionSet::orthogonal({la_direction_bs(m)}), StratumSpec({100}));
  StratifiedRunOptions o;
  o.total = 20000;
  o.exec.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_stratified(g, sampler, o).price);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(o.total));
}
BENCHMARK(BM_StratifiedRun)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
