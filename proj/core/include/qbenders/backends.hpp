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

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qbenders/master.hpp"
#include "qbenders/mip.hpp"
#include "qbenders/qubo.hpp"
#include "qbenders/samplers.hpp"

namespace qbenders {

struct MasterCandidate {
  Vec y;
  double zeta = 0.0;
  double objective = 0.0;  // master objective with zeta = zeta_required(y)
};

struct MasterSolve {
  std::vector<MasterCandidate> candidates;
  /// Further master-feasible points from the same sample set, best first.
  /// They may improve the incumbent but do not generate cuts.
  std::vector<MasterCandidate> alternatives;
  /// Proven lower bound of the master over non-tabu points (exact backends only).
  std::optional<double> bound;
  bool infeasible = false;  // proven, exact backends only
  SamplerMeta sampler;
  int qubo_bits = 0;
  int escalations = 0;
  int skipped_rows = 0;
  double solve_seconds = 0.0;  // time inside the solver or sampler
};

/// Called by sampling backends between decomposed passes with a master-feasible
/// y; returning true ends the sampling call.
using CandidateStop = std::function<bool(const Vec &y)>;

class MasterBackend {
public:
  virtual ~MasterBackend() = default;
  virtual std::string name() const = 0;
  /// True when solve() reports proven bounds.
  virtual bool exact() const = 0;
  /// Up to k distinct master-feasible points, best first, none of them in tabu.
  virtual MasterSolve solve(const MasterProblem &master, int k, const std::vector<Vec> &tabu,
                            const CandidateStop &stop) = 0;
  /// Spend more effort on the next solve; false when nothing is left to raise.
  virtual bool escalate() { return false; }
  /// Best design found so far; sampling backends may start their search there.
  virtual void set_incumbent(const Vec &y) { (void)y; }
};

enum class SamplerKind { SimulatedAnnealing, Decomposed, Exact, MockAnnealer };
const char *to_string(SamplerKind kind);
SamplerKind sampler_kind_from_string(const std::string &name);

struct QuboBackendConfig {
  SamplerKind sampler = SamplerKind::MockAnnealer;
  SamplerParams params;
  MockAnnealerParams mock;
  PenaltyPolicy penalty;
  double zeta_step = 0.1;
  int max_effort_escalations = 3;  // reads x2 per failed iteration
  int max_alternatives = 64;
};

std::unique_ptr<MasterBackend> make_exact_backend(const MipOptions &options = {});
std::unique_ptr<MasterBackend> make_qubo_backend(const QuboBackendConfig &config);

/// Convenience wrapper: candidates of one solve with an empty tabu list.
std::vector<MasterCandidate> master_backend_candidates(MasterBackend &backend, const MasterProblem &master, int k);

}  // namespace qbenders
