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
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qbenders/qubo.hpp"

namespace qbenders {

struct Sample {
  Bits bits;
  double energy = 0.0;
  int occurrences = 1;
};

struct SamplerMeta {
  int reads = 0;
  int passes = 0;   // decomposed sampler: full passes over all blocks
  int repeats = 0;  // improvement-free passes
  int sub_qubos = 0;
  int tasks = 0;    // mock annealer submissions
  double wall_seconds = 0.0;
  double device_seconds = 0.0;
  double queue_seconds = 0.0;
  bool stopped_early = false;
};

/// Samples sorted by energy, ties broken by lexicographic bits; duplicates merged.
struct SampleSet {
  std::vector<Sample> samples;
  SamplerMeta meta;

  bool empty() const { return samples.empty(); }
  const Sample &best() const;
};

/// Geometric cooling from t_hot to t_cold. Automatic values: t_hot is the
/// largest single-flip energy change at a random probe state, t_cold is
/// 1e-3 x mean |linear|.
struct AnnealSchedule {
  double t_hot = 0.0;  // <= 0: automatic
  double t_cold = 0.0;  // <= 0: automatic
  int sweeps = 0;       // <= 0: sweeps_per_bit * num_bits
  int sweeps_per_bit = 10;
  bool greedy_polish = true;
};

struct SamplerParams {
  int reads = 100;
  int repeats = 10;
  int sub_qubo_limit = 160;
  AnnealSchedule schedule;
  std::uint64_t seed = 0;
  int workers = 1;
  int max_passes = 1000;
  /// Decomposed sampler start: 0 = random bits plus greedy descent, n > 0 =
  /// best of n classical annealing reads on the full problem.
  int init_reads = 0;
  /// Decomposed sampler: candidate start state, used when it has lower
  /// energy than the start chosen by init_reads. Empty = none.
  Bits initial_state;

  void validate() const;
};

struct MockAnnealerParams {
  double queue_latency = 0.0;         // seconds per task
  double device_time_per_task = 0.02;  // synthetic seconds per task
  int capacity_bits = 160;
  bool sleep = false;                  // actually wait queue_latency
};

using InnerSampler = std::function<SampleSet(const Qubo &, const SamplerParams &)>;
/// Evaluated between decomposed passes with the current best bits; true stops.
using StopCallback = std::function<bool(const Bits &, double energy)>;

/// Single-flip Metropolis annealing with a geometric inverse-temperature
/// schedule. Reads use seeds derived from p.seed and may run on p.workers
/// threads; results do not depend on the thread count.
SampleSet sample_sa(const Qubo &q, const SamplerParams &p);

/// Large-neighbourhood search over sub-QUBOs of at most p.sub_qubo_limit bits
/// solved by inner. Small problems go straight to inner.
SampleSet sample_decomposed(const Qubo &q, const SamplerParams &p, const InnerSampler &inner,
                            const StopCallback &stop = {});

/// Exhaustive Gray-code enumeration (at most 24 bits); returns every minimiser.
SampleSet sample_exact(const Qubo &q, int max_ties = 1024);

/// Stand-in for a remote annealer: sample_sa plus queue and device-time
/// accounting. Problems above capacity are split with sample_decomposed.
SampleSet sample_mock_annealer(const Qubo &q, const SamplerParams &p, const MockAnnealerParams &m,
                               const StopCallback &stop = {});

/// Seed for stream k of a run seeded with base.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k);

}  // namespace qbenders
