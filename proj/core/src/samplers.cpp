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
#include "qbenders/samplers.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

namespace qbenders {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Symmetric neighbour lists of the quadratic part.
struct Adjacency {
  std::vector<int> start;
  std::vector<int> nbr;
  Vec w;

  explicit Adjacency(const Qubo &q) : start(static_cast<std::size_t>(q.num_bits) + 1, 0) {
    for (const auto &t : q.quadratic) {
      ++start[t.i + 1];
      ++start[t.j + 1];
    }
    std::partial_sum(start.begin(), start.end(), start.begin());
    nbr.resize(start.back());
    w.resize(start.back());
    std::vector<int> fill(start.begin(), start.end() - 1);
    for (const auto &t : q.quadratic) {
      nbr[fill[t.i]] = t.j;
      w[fill[t.i]++] = t.w;
      nbr[fill[t.j]] = t.i;
      w[fill[t.j]++] = t.w;
    }
  }
};

double unit_uniform(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

Bits random_bits(int n, std::mt19937_64 &rng) {
  Bits x(static_cast<std::size_t>(n));
  for (auto &b : x) b = static_cast<std::uint8_t>(rng() >> 63);
  return x;
}

Vec local_fields(const Qubo &q, const Adjacency &adj, const Bits &x) {
  Vec h(q.linear);
  for (int i = 0; i < q.num_bits; ++i) {
    for (int k = adj.start[i]; k < adj.start[i + 1]; ++k) {
      if (x[adj.nbr[k]]) h[i] += adj.w[k];
    }
  }
  return h;
}

void flip(int i, Bits &x, Vec &h, const Adjacency &adj) {
  x[i] ^= 1;
  const double sign = x[i] ? 1.0 : -1.0;
  for (int k = adj.start[i]; k < adj.start[i + 1]; ++k) h[adj.nbr[k]] += sign * adj.w[k];
}

/// Flip single bits while that strictly lowers the energy.
void greedy_descent(const Qubo &q, const Adjacency &adj, Bits &x) {
  Vec h = local_fields(q, adj, x);
  const int n = q.num_bits;
  for (int round = 0; round < 100 * std::max(n, 1); ++round) {
    bool moved = false;
    for (int i = 0; i < n; ++i) {
      const double delta = x[i] ? -h[i] : h[i];
      if (delta < 0.0) {
        flip(i, x, h, adj);
        moved = true;
      }
    }
    if (!moved) break;
    if (round % 16 == 15) h = local_fields(q, adj, x);
  }
}

Vec beta_schedule(const Qubo &q, const Adjacency &adj, const AnnealSchedule &s, std::uint64_t seed) {
  const int n = q.num_bits;
  const int sweeps = std::max(1, s.sweeps > 0 ? s.sweeps : s.sweeps_per_bit * n);
  double t_hot = s.t_hot;
  if (t_hot <= 0.0) {
    std::mt19937_64 rng(seed);
    const Bits probe = random_bits(n, rng);
    const Vec h = local_fields(q, adj, probe);
    t_hot = 0.0;
    for (double v : h) t_hot = std::max(t_hot, std::abs(v));
  }
  double t_cold = s.t_cold;
  if (t_cold <= 0.0) {
    double mean = 0.0;
    for (double v : q.linear) mean += std::abs(v);
    t_cold = n > 0 ? 1e-3 * mean / n : 0.0;
  }
  if (!(t_hot > 0.0)) t_hot = 1.0;
  if (!(t_cold > 0.0)) t_cold = 1e-3 * t_hot;
  t_cold = std::min(t_cold, t_hot);
  Vec betas(static_cast<std::size_t>(sweeps));
  for (int k = 0; k < sweeps; ++k) {
    const double t = sweeps == 1 ? 1.0 : static_cast<double>(k) / (sweeps - 1);
    betas[k] = 1.0 / (t_hot * std::pow(t_cold / t_hot, t));
  }
  return betas;
}

Bits anneal_read(const Qubo &q, const Adjacency &adj, const Vec &betas, std::uint64_t seed, bool polish) {
  std::mt19937_64 rng(seed);
  Bits x = random_bits(q.num_bits, rng);
  Vec h = local_fields(q, adj, x);
  for (double beta : betas) {
    for (int i = 0; i < q.num_bits; ++i) {
      const double delta = x[i] ? -h[i] : h[i];
      if (delta <= 0.0) {
        flip(i, x, h, adj);
      } else {
        const double arg = beta * delta;
        if (arg < 40.0 && unit_uniform(rng) < std::exp(-arg)) flip(i, x, h, adj);
      }
    }
  }
  if (polish) greedy_descent(q, adj, x);
  return x;
}

bool sample_less(const Sample &a, const Sample &b) {
  return a.energy != b.energy ? a.energy < b.energy : a.bits < b.bits;
}

/// Merge duplicate bit vectors and order by energy then bits.
std::vector<Sample> canonical(std::vector<Sample> samples) {
  std::sort(samples.begin(), samples.end(), [](const Sample &a, const Sample &b) { return a.bits < b.bits; });
  std::vector<Sample> out;
  for (auto &s : samples) {
    if (!out.empty() && out.back().bits == s.bits) {
      out.back().occurrences += s.occurrences;
    } else {
      out.push_back(std::move(s));
    }
  }
  std::sort(out.begin(), out.end(), sample_less);
  return out;
}

void add_accounting(SamplerMeta &into, const SamplerMeta &from) {
  into.reads += from.reads;
  into.tasks += from.tasks;
  into.device_seconds += from.device_seconds;
  into.queue_seconds += from.queue_seconds;
}

/// Blocks of at most limit bits. Connected components that fit stay whole;
/// larger ones are cut in descending impact order. Pieces are packed in order
/// of their highest impact.
std::vector<std::vector<int>> make_blocks(const Qubo &q, const Adjacency &adj, int limit) {
  const int n = q.num_bits;
  Vec impact(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    impact[i] = std::abs(q.linear[i]);
    for (int k = adj.start[i]; k < adj.start[i + 1]; ++k) impact[i] += std::abs(adj.w[k]);
  }
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const auto &t : q.quadratic) parent[find(t.i)] = find(t.j);

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return impact[a] > impact[b]; });

  std::vector<std::vector<int>> by_root(static_cast<std::size_t>(n));
  std::vector<int> roots;
  for (int i : order) {
    const int r = find(i);
    if (by_root[r].empty()) roots.push_back(r);
    by_root[r].push_back(i);
  }
  std::vector<std::vector<int>> pieces;
  for (int r : roots) {
    const auto &members = by_root[r];
    for (std::size_t s = 0; s < members.size(); s += static_cast<std::size_t>(limit)) {
      const auto e = std::min(members.size(), s + static_cast<std::size_t>(limit));
      pieces.emplace_back(members.begin() + static_cast<std::ptrdiff_t>(s), members.begin() + static_cast<std::ptrdiff_t>(e));
    }
  }
  std::vector<std::vector<int>> blocks;
  for (auto &piece : pieces) {
    if (blocks.empty() || blocks.back().size() + piece.size() > static_cast<std::size_t>(limit)) blocks.emplace_back();
    blocks.back().insert(blocks.back().end(), piece.begin(), piece.end());
  }
  for (auto &b : blocks) std::sort(b.begin(), b.end());
  return blocks;
}

/// Sub-QUBO over block with every other bit clamped to x.
Qubo clamp_to_block(const Qubo &q, const Adjacency &adj, const std::vector<int> &block, const Bits &x,
                    std::vector<int> &local) {
  std::fill(local.begin(), local.end(), -1);
  for (std::size_t a = 0; a < block.size(); ++a) local[block[a]] = static_cast<int>(a);
  Vec linear(block.size());
  std::vector<QuadTerm> terms;
  for (std::size_t a = 0; a < block.size(); ++a) {
    const int i = block[a];
    linear[a] = q.linear[i];
    for (int k = adj.start[i]; k < adj.start[i + 1]; ++k) {
      const int j = adj.nbr[k];
      if (local[j] < 0) {
        if (x[j]) linear[a] += adj.w[k];
      } else if (local[j] > static_cast<int>(a)) {
        terms.push_back({static_cast<int>(a), local[j], adj.w[k]});
      }
    }
  }
  return Qubo::from_terms(static_cast<int>(block.size()), 0.0, std::move(linear), std::move(terms));
}

}  // namespace

const Sample &SampleSet::best() const {
  if (samples.empty()) throw Error("SampleSet::best: no samples");
  return samples.front();
}

void SamplerParams::validate() const {
  if (reads < 1) throw Error("sampler: reads must be >= 1");
  if (repeats < 1) throw Error("sampler: repeats must be >= 1");
  if (sub_qubo_limit < 8) throw Error("sampler: sub_qubo_limit must be >= 8");
  if (workers < 1) throw Error("sampler: workers must be >= 1");
  if (max_passes < 1) throw Error("sampler: max_passes must be >= 1");
  if (init_reads < 0) throw Error("sampler: init_reads must be >= 0");
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SampleSet sample_sa(const Qubo &q, const SamplerParams &p) {
  p.validate();
  const auto t0 = Clock::now();
  const Adjacency adj(q);
  const Vec betas = beta_schedule(q, adj, p.schedule, derive_seed(p.seed, ~0ULL));
  std::vector<Bits> results(static_cast<std::size_t>(p.reads));
  auto run = [&](int worker) {
    for (int r = worker; r < p.reads; r += p.workers) {
      results[r] = anneal_read(q, adj, betas, derive_seed(p.seed, static_cast<std::uint64_t>(r)), p.schedule.greedy_polish);
    }
  };
  if (p.workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < p.workers; ++w) pool.emplace_back(run, w);
  }
  std::vector<Sample> samples;
  samples.reserve(results.size());
  for (auto &bits : results) {
    const double e = energy(q, bits);
    samples.push_back({std::move(bits), e, 1});
  }
  SampleSet out;
  out.samples = canonical(std::move(samples));
  out.meta.reads = p.reads;
  out.meta.wall_seconds = seconds_since(t0);
  return out;
}

SampleSet sample_decomposed(const Qubo &q, const SamplerParams &p, const InnerSampler &inner, const StopCallback &stop) {
  p.validate();
  const auto t0 = Clock::now();
  if (q.num_bits <= p.sub_qubo_limit) {
    SampleSet s = inner(q, p);
    s.meta.passes = 1;
    s.meta.sub_qubos = 1;
    s.meta.wall_seconds = seconds_since(t0);
    return s;
  }
  const Adjacency adj(q);
  const auto blocks = make_blocks(q, adj, p.sub_qubo_limit);

  Bits x;
  std::vector<Sample> archive;
  if (p.init_reads > 0) {
    SamplerParams ip = p;
    ip.reads = p.init_reads;
    ip.seed = derive_seed(p.seed, 0);
    archive = sample_sa(q, ip).samples;
    x = archive.front().bits;
  } else {
    std::mt19937_64 rng(derive_seed(p.seed, 0));
    x = random_bits(q.num_bits, rng);
    greedy_descent(q, adj, x);
  }
  double best = energy(q, x);
  if (!p.initial_state.empty()) {
    if (static_cast<int>(p.initial_state.size()) != q.num_bits) throw Error("sampler: initial_state length mismatch");
    const double e = energy(q, p.initial_state);
    if (e < best) {
      x = p.initial_state;
      best = e;
    }
  }

  SampleSet out;
  archive.push_back({x, best, 1});
  std::vector<int> local(static_cast<std::size_t>(q.num_bits), -1);
  constexpr std::size_t kPerBlock = 4;
  int since_improvement = 0;
  std::uint64_t stream = 1;
  while (true) {
    bool improved = false;
    for (const auto &block : blocks) {
      const Qubo sub = clamp_to_block(q, adj, block, x, local);
      SamplerParams sp = p;
      sp.seed = derive_seed(p.seed, stream++);
      const SampleSet ss = inner(sub, sp);
      add_accounting(out.meta, ss.meta);
      ++out.meta.sub_qubos;
      Bits chosen;
      for (std::size_t s = 0; s < std::min(kPerBlock, ss.samples.size()); ++s) {
        Bits cand = x;
        for (std::size_t a = 0; a < block.size(); ++a) cand[block[a]] = ss.samples[s].bits[a];
        const double e = energy(q, cand);
        // Ignore rounding-level gains so equal-energy reshuffles do not count as progress.
        if (e < best - 1e-9 * std::max(1.0, std::abs(best))) {
          best = e;
          chosen = cand;
        }
        archive.push_back({std::move(cand), e, 1});
      }
      if (!chosen.empty()) {
        x = std::move(chosen);
        improved = true;
      }
    }
    ++out.meta.passes;
    if (improved) {
      since_improvement = 0;
    } else {
      ++out.meta.repeats;
      ++since_improvement;
    }
    if (since_improvement >= p.repeats) break;
    if (stop && stop(x, best)) {
      out.meta.stopped_early = true;
      break;
    }
    if (out.meta.passes >= p.max_passes) break;
  }
  out.samples = canonical(std::move(archive));
  constexpr std::size_t kKeep = 256;
  if (out.samples.size() > kKeep) out.samples.resize(kKeep);
  out.meta.wall_seconds = seconds_since(t0);
  return out;
}

SampleSet sample_exact(const Qubo &q, int max_ties) {
  const int n = q.num_bits;
  if (n > 24) throw Error("sample_exact: at most 24 bits, got " + std::to_string(n));
  const auto t0 = Clock::now();
  const Adjacency adj(q);
  Bits x(static_cast<std::size_t>(n), 0);
  Vec h(q.linear);
  long double e = q.constant;
  long double best = e;
  std::vector<Bits> ties{x};
  auto tol = [](long double v) { return 1e-9L * std::max(1.0L, std::abs(v)); };
  const std::uint64_t total = 1ULL << n;
  for (std::uint64_t t = 1; t < total; ++t) {
    const int i = std::countr_zero(t);
    e += x[i] ? -h[i] : h[i];
    flip(i, x, h, adj);
    if (e < best - tol(best)) {
      best = e;
      ties.assign(1, x);
    } else if (e <= best + tol(best) && static_cast<int>(ties.size()) < 4 * max_ties) {
      ties.push_back(x);
    }
  }
  std::vector<Sample> samples;
  double exact_best = kInf;
  for (auto &bits : ties) {
    const double v = energy(q, bits);
    exact_best = std::min(exact_best, v);
    samples.push_back({std::move(bits), v, 1});
  }
  const double keep_tol = 1e-12 * std::max(1.0, std::abs(exact_best));
  std::erase_if(samples, [&](const Sample &s) { return s.energy > exact_best + keep_tol; });
  SampleSet out;
  out.samples = canonical(std::move(samples));
  if (static_cast<int>(out.samples.size()) > max_ties) out.samples.resize(static_cast<std::size_t>(max_ties));
  out.meta.reads = 1;
  out.meta.wall_seconds = seconds_since(t0);
  return out;
}

SampleSet sample_mock_annealer(const Qubo &q, const SamplerParams &p, const MockAnnealerParams &m,
                               const StopCallback &stop) {
  if (m.capacity_bits < 8) throw Error("mock annealer: capacity must be >= 8 bits");
  auto device = [&m](const Qubo &sub, const SamplerParams &sp) {
    if (m.sleep && m.queue_latency > 0.0) std::this_thread::sleep_for(std::chrono::duration<double>(m.queue_latency));
    SampleSet s = sample_sa(sub, sp);
    s.meta.tasks += 1;
    s.meta.device_seconds += m.device_time_per_task;
    s.meta.queue_seconds += m.queue_latency;
    return s;
  };
  if (q.num_bits <= m.capacity_bits) return device(q, p);
  SamplerParams dp = p;
  dp.sub_qubo_limit = std::min(p.sub_qubo_limit, m.capacity_bits);
  return sample_decomposed(q, dp, device, stop);
}

}  // namespace qbenders
