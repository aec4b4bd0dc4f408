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
#include "qbenders/backends.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

namespace qbenders {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool in_list(const std::vector<Vec> &list, const Vec &y) {
  return std::find(list.begin(), list.end(), y) != list.end();
}

Vec rounded(Vec y) {
  for (double &v : y) v = std::round(v);
  return y;
}

class ExactBackend final : public MasterBackend {
public:
  explicit ExactBackend(const MipOptions &options) : options_(options) {}

  std::string name() const override { return "exact"; }
  bool exact() const override { return true; }

  MasterSolve solve(const MasterProblem &master, int k, const std::vector<Vec> &tabu, const CandidateStop &) override {
    const auto t0 = Clock::now();
    MasterSolve out;
    const StandardMilp milp = master.to_milp();
    MipOptions opt = options_;
    opt.excluded = tabu;
    for (int found = 0; found < k; ++found) {
      const MipOutcome r = branch_and_bound(milp, opt);
      if (r.status == MipStatus::Unbounded) throw Error("exact master: relaxation unbounded");
      if (r.status == MipStatus::Infeasible) {
        if (found == 0) out.infeasible = true;
        break;
      }
      if (found == 0) out.bound = r.bound;
      if (r.y.empty()) break;
      const Vec y = rounded(r.y);
      out.candidates.push_back({y, master.zeta_required(y), master.repaired_objective(y)});
      opt.excluded.push_back(y);
    }
    out.solve_seconds = seconds_since(t0);
    return out;
  }

private:
  MipOptions options_;
};

class QuboBackend final : public MasterBackend {
public:
  static constexpr double kColdSteps = 10.0;

  explicit QuboBackend(const QuboBackendConfig &config) : config_(config) { config_.params.validate(); }

  std::string name() const override { return to_string(config_.sampler); }
  bool exact() const override { return false; }

  void set_incumbent(const Vec &y) override { incumbent_ = y; }

  bool escalate() override {
    if (effort_ >= config_.max_effort_escalations) return false;
    ++effort_;
    config_.params.reads *= 2;
    return true;
  }

  MasterSolve solve(const MasterProblem &master_in, int k, const std::vector<Vec> &tabu,
                    const CandidateStop &stop) override {
    MasterSolve out;
    MasterProblem master = master_in;
    Qubo q = compile_widening(master);
    out.qubo_bits = q.num_bits;
    out.skipped_rows = q.skipped_rows;

    std::vector<MasterCandidate> found;
    std::set<Vec> seen;
    for (int attempt = 0;; ++attempt) {
      SamplerParams p = config_.params;
      p.seed = derive_seed(config_.params.seed, calls_++);
      // Penalty terms dominate the mean linear weight, so the generic cold
      // temperature would freeze far above the surrogate resolution.
      if (p.schedule.t_cold <= 0.0) p.schedule.t_cold = kColdSteps * config_.zeta_step;
      if (!incumbent_.empty() && master.y_feasible(incumbent_)) {
        p.initial_state = encode_assignment(q, incumbent_, master.zeta_required(incumbent_));
      }
      StopCallback bit_stop;
      if (stop) {
        bit_stop = [&](const Bits &bits, double) {
          const QuboSolution s = extract_solution(q, bits);
          const Vec y = rounded(s.y);
          if (in_list(tabu, y) || !master.y_feasible(y)) return false;
          return stop(y);
        };
      }
      const auto t0 = Clock::now();
      const SampleSet ss = sample(q, p, bit_stop);
      out.solve_seconds += seconds_since(t0);
      accumulate(out.sampler, ss.meta);

      for (const auto &smp : ss.samples) {
        const Vec y = rounded(extract_solution(q, smp.bits).y);
        if (seen.count(y) || in_list(tabu, y) || !master.y_feasible(y)) continue;
        seen.insert(y);
        found.push_back({y, master.zeta_required(y), master.repaired_objective(y)});
      }
      if (!found.empty() || ss.empty()) break;
      const QuboSolution best = extract_solution(q, ss.best().bits);
      auto next = escalate_penalties(q, best.violations, config_.penalty);
      if (!next) break;
      q = std::move(*next);
      ++out.escalations;
    }
    std::sort(found.begin(), found.end(), [](const MasterCandidate &a, const MasterCandidate &b) {
      return a.objective != b.objective ? a.objective < b.objective : a.y < b.y;
    });
    const std::size_t keep = std::min(found.size(), static_cast<std::size_t>(k));
    const std::size_t extra = std::min(found.size() - keep, static_cast<std::size_t>(config_.max_alternatives));
    out.alternatives.assign(found.begin() + static_cast<std::ptrdiff_t>(keep),
                            found.begin() + static_cast<std::ptrdiff_t>(keep + extra));
    found.resize(keep);
    out.candidates = std::move(found);
    return out;
  }

private:
  /// Compile, widening the zeta range when a cut cannot be met inside it.
  Qubo compile_widening(MasterProblem &master) const {
    for (int tries = 0;; ++tries) {
      try {
        return compile_master(master, config_.penalty, config_.zeta_step);
      } catch (const Error &) {
        if (tries >= 8) throw;
        const double width = std::max(master.zeta_hi - master.zeta_lo, 1.0);
        master.zeta_hi = master.zeta_lo + 4.0 * width;
      }
    }
  }

  SampleSet sample(const Qubo &q, const SamplerParams &p, const StopCallback &stop) const {
    switch (config_.sampler) {
      case SamplerKind::SimulatedAnnealing: return sample_sa(q, p);
      case SamplerKind::Decomposed: return sample_decomposed(q, p, sample_sa, stop);
      case SamplerKind::Exact: return sample_exact(q);
      case SamplerKind::MockAnnealer: return sample_mock_annealer(q, p, config_.mock, stop);
    }
    throw Error("unknown sampler");
  }

  static void accumulate(SamplerMeta &into, const SamplerMeta &from) {
    into.reads += from.reads;
    into.passes += from.passes;
    into.repeats += from.repeats;
    into.sub_qubos += from.sub_qubos;
    into.tasks += from.tasks;
    into.wall_seconds += from.wall_seconds;
    into.device_seconds += from.device_seconds;
    into.queue_seconds += from.queue_seconds;
    into.stopped_early = into.stopped_early || from.stopped_early;
  }

  QuboBackendConfig config_;
  Vec incumbent_;
  std::uint64_t calls_ = 0;
  int effort_ = 0;
};

}  // namespace

const char *to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::SimulatedAnnealing: return "sa";
    case SamplerKind::Decomposed: return "decomposed";
    case SamplerKind::Exact: return "exact-enum";
    case SamplerKind::MockAnnealer: return "mock-annealer";
  }
  return "?";
}

SamplerKind sampler_kind_from_string(const std::string &name) {
  for (auto k : {SamplerKind::SimulatedAnnealing, SamplerKind::Decomposed, SamplerKind::Exact, SamplerKind::MockAnnealer}) {
    if (name == to_string(k)) return k;
  }
  throw Error("unknown sampler '" + name + "' (expected sa, decomposed, exact-enum or mock-annealer)");
}

std::unique_ptr<MasterBackend> make_exact_backend(const MipOptions &options) {
  return std::make_unique<ExactBackend>(options);
}

std::unique_ptr<MasterBackend> make_qubo_backend(const QuboBackendConfig &config) {
  return std::make_unique<QuboBackend>(config);
}

std::vector<MasterCandidate> master_backend_candidates(MasterBackend &backend, const MasterProblem &master, int k) {
  if (k < 1) throw Error("master_backend_candidates: k must be >= 1");
  return backend.solve(master, k, {}, {}).candidates;
}

}  // namespace qbenders
