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

#include <random>

#include "doctest.h"
#include "qbenders/samplers.hpp"

using namespace qbenders;

namespace {

Qubo random_qubo(std::uint64_t seed, int n, double density = 0.5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  std::bernoulli_distribution edge(density);
  Vec linear(static_cast<std::size_t>(n));
  for (auto &v : linear) v = w(rng);
  std::vector<QuadTerm> terms;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (edge(rng)) terms.push_back({i, j, w(rng)});
    }
  }
  return Qubo::from_terms(n, 0.0, std::move(linear), std::move(terms));
}

/// Disjoint random blocks of the given size; no coupling across blocks.
Qubo block_qubo(std::uint64_t seed, int blocks, int size) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  const int n = blocks * size;
  Vec linear(static_cast<std::size_t>(n));
  for (auto &v : linear) v = w(rng);
  std::vector<QuadTerm> terms;
  for (int b = 0; b < blocks; ++b) {
    for (int i = 0; i < size; ++i) {
      for (int j = i + 1; j < size; ++j) terms.push_back({b * size + i, b * size + j, w(rng)});
    }
  }
  return Qubo::from_terms(n, 0.0, std::move(linear), std::move(terms));
}

double brute_force_min(const Qubo &q) {
  double best = kInf;
  Bits x(static_cast<std::size_t>(q.num_bits));
  for (std::uint64_t m = 0; m < (1ULL << q.num_bits); ++m) {
    for (int i = 0; i < q.num_bits; ++i) x[i] = (m >> i) & 1U;
    best = std::min(best, energy(q, x));
  }
  return best;
}

}  // namespace

TEST_CASE("exact sampler agrees with brute force and returns all ties") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Qubo q = random_qubo(seed, 12);
    const SampleSet s = sample_exact(q);
    CHECK(s.best().energy == doctest::Approx(brute_force_min(q)).epsilon(1e-12));
  }
  // x0 + x1 - 2 x0 x1: minima 00 and 11.
  const Qubo ties = Qubo::from_terms(2, 0.0, {1.0, 1.0}, {{0, 1, -2.0}});
  const SampleSet s = sample_exact(ties);
  REQUIRE(s.samples.size() == 2);
  CHECK(s.samples[0].bits == Bits{0, 0});
  CHECK(s.samples[1].bits == Bits{1, 1});
  CHECK_THROWS_AS(sample_exact(random_qubo(1, 25, 0.1)), Error);
}

TEST_CASE("simulated annealing is deterministic and thread-count independent") {
  const Qubo q = random_qubo(42, 40, 0.2);
  SamplerParams p;
  p.reads = 16;
  p.seed = 9;
  const SampleSet a = sample_sa(q, p);
  const SampleSet b = sample_sa(q, p);
  p.workers = 3;
  const SampleSet c = sample_sa(q, p);
  REQUIRE(a.samples.size() == b.samples.size());
  REQUIRE(a.samples.size() == c.samples.size());
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    CHECK(a.samples[k].bits == b.samples[k].bits);
    CHECK(a.samples[k].bits == c.samples[k].bits);
    CHECK(a.samples[k].occurrences == c.samples[k].occurrences);
  }
  int total = 0;
  for (const auto &s : a.samples) total += s.occurrences;
  CHECK(total == 16);
  CHECK(a.meta.reads == 16);
}

TEST_CASE("samples are sorted and carry exact energies") {
  const Qubo q = random_qubo(5, 30, 0.3);
  SamplerParams p;
  p.reads = 20;
  const SampleSet s = sample_sa(q, p);
  for (std::size_t k = 0; k < s.samples.size(); ++k) {
    CHECK(s.samples[k].energy == energy(q, s.samples[k].bits));
    if (k > 0) CHECK(s.samples[k - 1].energy <= s.samples[k].energy);
  }
}

TEST_CASE("simulated annealing finds the minimum of small QUBOs") {
  int hits = 0;
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const Qubo q = random_qubo(seed, 14);
    SamplerParams p;
    p.reads = 50;
    p.seed = seed;
    if (sample_sa(q, p).best().energy <= sample_exact(q).best().energy + 1e-9) ++hits;
  }
  CHECK(hits >= 19);
}

TEST_CASE("decomposed sampler solves block-separable QUBOs in one pass") {
  const Qubo q = block_qubo(3, 6, 10);
  double exact = 0.0;
  for (int b = 0; b < 6; ++b) {
    // Each block is an independent 10-bit QUBO.
    Vec lin(q.linear.begin() + b * 10, q.linear.begin() + (b + 1) * 10);
    std::vector<QuadTerm> terms;
    for (const auto &t : q.quadratic) {
      if (t.i / 10 == b) terms.push_back({t.i - b * 10, t.j - b * 10, t.w});
    }
    exact += sample_exact(Qubo::from_terms(10, 0.0, lin, terms)).best().energy;
  }
  SamplerParams p;
  p.sub_qubo_limit = 20;
  p.max_passes = 1;
  const SampleSet s = sample_decomposed(q, p, [](const Qubo &sub, const SamplerParams &) { return sample_exact(sub); });
  CHECK(s.meta.passes == 1);
  CHECK(s.meta.sub_qubos == 3);
  CHECK(s.best().energy == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("decomposed sampler stops when the callback asks") {
  const Qubo q = random_qubo(8, 60, 0.1);
  SamplerParams p;
  p.reads = 5;
  p.sub_qubo_limit = 20;
  p.repeats = 50;
  int calls = 0;
  const SampleSet s = sample_decomposed(q, p, sample_sa, [&](const Bits &bits, double e) {
    ++calls;
    CHECK(energy(q, bits) == doctest::Approx(e));
    return true;
  });
  CHECK(calls == 1);
  CHECK(s.meta.passes == 1);
  CHECK(s.meta.stopped_early);
}

TEST_CASE("mock annealer accounts tasks and device time") {
  MockAnnealerParams m;
  m.device_time_per_task = 0.5;
  m.queue_latency = 2.0;
  m.capacity_bits = 20;
  SamplerParams p;
  p.reads = 5;
  p.repeats = 1;
  const SampleSet small = sample_mock_annealer(random_qubo(1, 16), p, m);
  CHECK(small.meta.tasks == 1);
  CHECK(small.meta.device_seconds == 0.5);
  CHECK(small.meta.queue_seconds == 2.0);
  const SampleSet large = sample_mock_annealer(random_qubo(2, 50, 0.1), p, m);
  CHECK(large.meta.tasks == large.meta.sub_qubos);
  CHECK(large.meta.tasks >= 3);
  CHECK(large.meta.device_seconds == doctest::Approx(0.5 * large.meta.tasks));
}

TEST_CASE("parameter validation and seed derivation") {
  SamplerParams p;
  p.reads = 0;
  CHECK_THROWS_AS(p.validate(), Error);
  p.reads = 1;
  p.sub_qubo_limit = 4;
  CHECK_THROWS_AS(p.validate(), Error);
  CHECK(derive_seed(0, 0) != derive_seed(0, 1));
  CHECK(derive_seed(1, 0) != derive_seed(0, 0));
  CHECK(derive_seed(5, 3) == derive_seed(5, 3));
}
