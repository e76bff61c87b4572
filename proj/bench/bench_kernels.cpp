// Serial vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <vector>

#include "dsel/corpus.hpp"
#include "dsel/kernels.hpp"
#include "dsel/random.hpp"
#include "dsel/representations.hpp"
#include "dsel/scoring.hpp"

namespace {

using dsel::kernels::Backend;

Backend backend(const benchmark::State& state) { return state.range(0) == 0 ? Backend::serial : Backend::parallel; }

std::vector<double> random_vector(std::size_t n, dsel::Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

void BM_AffineRows(benchmark::State& state) {
  dsel::Rng rng(1);
  const std::size_t B = 64, h = 256, d = 2000;
  const auto H = random_vector(B * h, rng), W = random_vector(d * h, rng), b = random_vector(d, rng);
  std::vector<double> Z(B * d);
  for (auto _ : state) {
    dsel::kernels::affine_rows(backend(state), H, B, h, W, b, d, Z);
    benchmark::DoNotOptimize(Z.data());
  }
}
BENCHMARK(BM_AffineRows)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BackpropRows(benchmark::State& state) {
  dsel::Rng rng(2);
  const std::size_t B = 64, h = 256, d = 2000;
  const auto dZ = random_vector(B * d, rng), W = random_vector(d * h, rng);
  std::vector<double> dH(B * h);
  for (auto _ : state) {
    dsel::kernels::backprop_rows(backend(state), dZ, W, B, d, h, dH);
    benchmark::DoNotOptimize(dH.data());
  }
}
BENCHMARK(BM_BackpropRows)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

struct Pool {
  std::vector<dsel::SparseCounts> counts;
  dsel::TermDistribution target;
};

Pool make_pool(std::size_t docs, std::size_t vocab) {
  dsel::Rng rng(3);
  Pool p;
  std::vector<std::uint64_t> target_counts(vocab, 1);
  for (std::size_t i = 0; i < docs; ++i) {
    std::vector<std::uint32_t> c(vocab, 0);
    for (int t = 0; t < 20; ++t) ++c[rng.index(vocab)];
    dsel::SparseCounts sc;
    for (std::uint32_t k = 0; k < vocab; ++k)
      if (c[k]) {
        sc.entries.emplace_back(k, c[k]);
        target_counts[k] += c[k];
      }
    sc.total = 20;
    p.counts.push_back(std::move(sc));
  }
  dsel::SparseCounts all;
  std::uint64_t total = 0;
  for (std::uint32_t k = 0; k < vocab; ++k) {
    all.entries.emplace_back(k, static_cast<std::uint32_t>(target_counts[k]));
    total += target_counts[k];
  }
  all.total = total;
  p.target = dsel::term_distribution(all, vocab);
  return p;
}

void BM_ScoreSubsets(benchmark::State& state) {
  const Pool pool = make_pool(5000, 5000);
  const dsel::TermDistributionScorer scorer(pool.counts, pool.target);
  dsel::Rng rng(4);
  const std::size_t m = 2000, s = 20;
  std::vector<std::size_t> members, offsets{0};
  for (std::size_t g = 0; g < m; ++g) {
    for (std::size_t k : rng.sample_without_replacement(pool.counts.size(), s)) members.push_back(k);
    offsets.push_back(members.size());
  }
  for (auto _ : state) benchmark::DoNotOptimize(dsel::kernels::score_groups(backend(state), scorer, members, offsets));
}
BENCHMARK(BM_ScoreSubsets)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ScoreItems(benchmark::State& state) {
  const Pool pool = make_pool(20000, 5000);
  const dsel::TermDistributionScorer scorer(pool.counts, pool.target);
  std::vector<std::size_t> items(pool.counts.size());
  for (std::size_t i = 0; i < items.size(); ++i) items[i] = i;
  for (auto _ : state) benchmark::DoNotOptimize(dsel::kernels::score_items(backend(state), scorer, items));
}
BENCHMARK(BM_ScoreItems)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
