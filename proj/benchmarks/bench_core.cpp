// Copyright 2026 The qbenders Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "qbenders/benders.hpp"
#include "qbenders/lp.hpp"
#include "qbenders/mes.hpp"
#include "qbenders/mip.hpp"
#include "qbenders/qubo.hpp"
#include "qbenders/samplers.hpp"

using namespace qbenders;

namespace {

StandardMilp mes(int steps) { return normalize(build_instance(default_dataset(0, steps)).model); }

Qubo dense_qubo(int n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  Vec linear(static_cast<std::size_t>(n));
  for (auto &v : linear) v = w(rng);
  std::vector<QuadTerm> terms;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) terms.push_back({i, j, w(rng)});
  }
  return Qubo::from_terms(n, 0.0, std::move(linear), std::move(terms));
}

void BM_LpRelaxation(benchmark::State &state) {
  const LpProblem lp = lp_relaxation(mes(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(lp).objective);
}
BENCHMARK(BM_LpRelaxation)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_BranchAndBound(benchmark::State &state) {
  const StandardMilp m = mes(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(branch_and_bound(m).objective);
}
BENCHMARK(BM_BranchAndBound)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_CompileMaster(benchmark::State &state) {
  BendersState s = initialize(mes(static_cast<int>(state.range(0))), BendersConfig{});
  // The loop sizes the ceiling each iteration; a fixed one is enough here.
  s.master.zeta_hi = s.master.zeta_lo + 1e4;
  for (auto _ : state) benchmark::DoNotOptimize(compile_master(s.master, {}, 0.1).num_bits);
}
BENCHMARK(BM_CompileMaster)->DenseRange(2, 5);

void BM_Energy(benchmark::State &state) {
  const Qubo q = dense_qubo(static_cast<int>(state.range(0)));
  Bits bits(static_cast<std::size_t>(q.num_bits), 1);
  for (auto _ : state) benchmark::DoNotOptimize(energy(q, bits));
}
BENCHMARK(BM_Energy)->Arg(64)->Arg(256);

void BM_SimulatedAnnealing(benchmark::State &state) {
  const Qubo q = dense_qubo(static_cast<int>(state.range(0)));
  SamplerParams p;
  p.reads = 10;
  for (auto _ : state) benchmark::DoNotOptimize(sample_sa(q, p).best().energy);
}
BENCHMARK(BM_SimulatedAnnealing)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_BendersExact(benchmark::State &state) {
  const StandardMilp m = mes(2);
  BendersConfig cfg;
  cfg.gap_tol = 1e-6;
  for (auto _ : state) {
    auto backend = make_exact_backend();
    benchmark::DoNotOptimize(run(m, *backend, cfg).objective());
  }
}
BENCHMARK(BM_BendersExact)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
