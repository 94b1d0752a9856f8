#include <benchmark/benchmark.h>

#include <random>

#include <pcgraph/baselines.hpp>
#include <pcgraph/ground_truth.hpp>
#include <pcgraph/solver.hpp>
#include <pcgraph/suff_stats.hpp>

namespace {

using pcgraph::Index;
using pcgraph::Matrix;
using pcgraph::Vector;

// Correlated Gaussian rows: iid draws times (I + 0.3 A).
Matrix correlated(Index n, Index p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix x(n, p);
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < n; ++i) x(i, j) = normal(rng);
  }
  Matrix mix = Matrix::Identity(p, p);
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < p; ++i) mix(i, j) += 0.3 * normal(rng);
  }
  return x * mix;
}

void BM_SuffStats(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  const auto p = static_cast<Index>(state.range(1));
  const pcgraph::Dataset data(correlated(n, p, 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pcgraph::SuffStats::from_dataset(data));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SuffStats)->Args({1000, 10})->Args({10000, 10})->Args({10000, 64});

void BM_SpiceLearn(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  const auto p = static_cast<Index>(state.range(1));
  const auto stats = pcgraph::SuffStats::from_dataset(pcgraph::Dataset(correlated(n, p, 2)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pcgraph::spice_learn(stats, pcgraph::SolverConfig{}));
  }
}
BENCHMARK(BM_SpiceLearn)
    ->Args({100, 10})
    ->Args({1000, 10})
    ->Args({10000, 10})
    ->Args({1000, 32})
    ->Args({1000, 64})
    ->Unit(benchmark::kMicrosecond);

void BM_LsLearn(benchmark::State& state) {
  const auto p = static_cast<Index>(state.range(0));
  const auto stats = pcgraph::SuffStats::from_dataset(pcgraph::Dataset(correlated(1000, p, 3)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pcgraph::ls_learn(stats));
  }
}
BENCHMARK(BM_LsLearn)->Arg(10)->Arg(64)->Unit(benchmark::kMicrosecond);

// Steady-state cost of one streaming update after a warm-up of N snapshots.
void BM_OnlineUpdate(benchmark::State& state) {
  const auto warm = static_cast<Index>(state.range(0));
  const auto p = static_cast<Index>(state.range(1));
  const Matrix x = correlated(warm + 256, p, 4);
  pcgraph::OnlineSpice learner(p, pcgraph::SolverConfig{});
  for (Index i = 0; i < warm; ++i) learner.update(x.row(i).transpose());
  Index next = warm;
  for (auto _ : state) {
    learner.update(x.row(next).transpose());
    if (++next == x.rows()) next = warm;
  }
}
BENCHMARK(BM_OnlineUpdate)
    ->Args({1000, 10})
    ->Args({10000, 10})
    ->Args({1000, 32})
    ->Unit(benchmark::kMicrosecond);

void BM_CommunityModel(benchmark::State& state) {
  for (auto _ : state) {
    const auto g = pcgraph::make_community_graph(pcgraph::CommunitySpec{});
    const auto noise = pcgraph::make_noise(pcgraph::CommunitySpec{});
    benchmark::DoNotOptimize(pcgraph::weights_from_precision(
        pcgraph::population_covariance(g, noise)));
  }
}
BENCHMARK(BM_CommunityModel)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
