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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qbenders/backends.hpp"
#include "qbenders/lp.hpp"
#include "qbenders/master.hpp"
#include "qbenders/model.hpp"

namespace qbenders {

/// Rows whose name starts with this prefix are redundant tightening rows.
inline constexpr const char *kValidInequalityPrefix = "vi:";

struct BendersConfig {
  double gap_tol = 0.05;
  int multi_cut = 1;
  bool use_valid_inequalities = true;
  bool relaxed_master_first_iteration = false;
  int max_iterations = 100;
  double time_limit = 0.0;  // seconds, 0 = none
  /// Exact backends also stop when the incumbent meets the master bound.
  bool use_master_bound = true;
  /// Per iteration, price this many unit-step neighbours of the incumbent
  /// (ranked by the current master objective) for the upper bound only.
  int neighbourhood_evaluations = 0;
  LpOptions lp;

  void validate() const;
};

/// Everything of the original problem except the pure-integer rows.
struct SubproblemTemplate {
  std::vector<int> rows;  // standard-form row indices
  int n_cont = 0;
  int n_int = 0;
  Vec c;
  SparseMatrix A;
  SparseMatrix B;
  Vec b;

  /// The LP over x once y is fixed: A x >= b - B y, x >= 0.
  LpProblem at(const Vec &y) const;
};

std::pair<MasterProblem, SubproblemTemplate> decompose(const StandardMilp &m);

Cut make_optimality_cut(const Vec &duals, const SubproblemTemplate &sub);
/// Ray scaled so its largest cut coefficient has magnitude 1.
Cut make_feasibility_cut(const Vec &ray, const SubproblemTemplate &sub);

enum class Termination { Continue, OptimalWithinGap, IterationLimit, TimeLimit, Infeasible, Unbounded };
const char *to_string(Termination t);

struct Timings {
  double master = 0.0;
  double subproblem = 0.0;
  double data_processing = 0.0;
  double total = 0.0;
};

struct SubproblemEval {
  LpStatus status = LpStatus::NumericalFailure;
  double value = kInf;      // c.x
  double objective = kInf;  // full original objective
  Vec x;
  std::optional<Cut> cut;
  bool cut_rejected = false;
};

struct IterationRecord {
  int iteration = 0;
  double ub = kInf;
  double lb_static = -kInf;
  double master_bound = -kInf;
  double gap = kInf;
  int candidates = 0;
  int optimality_cuts = 0;
  int feasibility_cuts = 0;
  int duplicate_cuts = 0;
  int qubo_bits = 0;
  int escalations = 0;
  bool stopped_early = false;
  SamplerMeta sampler;
  Timings timings;
};

struct BendersState {
  BendersConfig config;
  StandardMilp milp;
  MasterProblem master;
  SubproblemTemplate sub;
  int iteration = 0;
  double ub = kInf;
  double lb_static = -kInf;
  double master_bound = -kInf;
  double probe_objective = kInf;  // rounded-up relaxation, sizes the zeta range
  bool has_incumbent = false;
  Vec x;
  Vec y;
  bool infeasible = false;
  bool unbounded = false;
  std::vector<Vec> tabu;
  std::map<Vec, SubproblemEval> evaluated;
  Vec searched_incumbent;  // centre of the last neighbourhood search
  Timings timings;
  SamplerMeta sampler;
  std::vector<IterationRecord> history;
  int duplicate_cuts = 0;
  int rejected_cuts = 0;
  int failed_iterations = 0;
  int early_stops = 0;

  /// (UB - LB_static) / |LB_static|, absolute when LB_static is 0.
  double gap() const;
  int cut_count(CutKind kind) const;
};

using IterationLogger = std::function<void(const IterationRecord &)>;

/// Decompose, solve the LP relaxation for LB_static, tighten zeta_lo, add the
/// relaxation cut, and price the rounded-up relaxation point to size zeta_hi.
BendersState initialize(const StandardMilp &m, const BendersConfig &config);

/// Solve the relaxation and update master + LB_static. Returns the relaxation's
/// integer part, or nullopt when the relaxation is infeasible or unbounded.
std::optional<Vec> seed_from_lp_relaxation(BendersState &state);

/// Rounded (ties toward 0) LP relaxation of the current master, nullopt when infeasible.
std::optional<Vec> relaxed_master_candidate(const MasterProblem &master, const LpOptions &lp = {});

/// Solve the subproblem at y (memoised), update the incumbent and build a checked cut.
const SubproblemEval &evaluate_candidate(BendersState &state, const Vec &y, CutSource source);

void iterate(BendersState &state, MasterBackend &backend, const IterationLogger &logger = {});

Termination check_termination(const BendersState &state, bool exact_backend, double elapsed_seconds = 0.0);

struct BendersResult {
  Termination status = Termination::Continue;
  BendersState state;
  double objective() const { return state.ub; }
};

BendersResult run(const StandardMilp &m, MasterBackend &backend, const BendersConfig &config,
                  const IterationLogger &logger = {});

}  // namespace qbenders
