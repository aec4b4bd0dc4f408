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

#include <limits>

#include "qbenders/model.hpp"

namespace qbenders {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };

const char *to_string(LpStatus status);

struct LpOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-7;
  /// Consecutive degenerate pivots before pricing falls back to Bland's rule.
  int degenerate_stall = 100;
  /// Pivots between fresh factorizations of the basis inverse.
  int refactor_interval = 50;
  long max_iterations = 200000;
  int verbosity = 0;
};

/// Result of solve_lp. Row multipliers follow the Lagrangian sign convention:
/// >= rows carry values >= 0, <= rows values <= 0, = rows are free.
struct LpOutcome {
  LpStatus status = LpStatus::NumericalFailure;
  Vec x;                       // Optimal: primal point
  double objective = std::numeric_limits<double>::quiet_NaN();
  Vec duals;                   // Optimal: one multiplier per row
  Vec reduced_costs;           // Optimal: cost - A^T duals
  /// Infeasible: Farkas multipliers u per row (sup over the box of u.Ax < u.b).
  /// Unbounded: primal direction over the columns.
  Vec ray;
  long iterations = 0;
  long bland_pivots = 0;
};

/// Dense revised simplex with bounded variables. Phase 1 minimizes the sum of
/// artificials and its final multipliers double as the infeasibility ray.
LpOutcome solve_lp(const LpProblem &lp, const LpOptions &options = {});

/// u.b - sup_{lower <= x <= upper} (A^T u).x, or -inf when u has the wrong
/// sign for some row. A strictly positive value certifies infeasibility.
double farkas_margin(const LpProblem &lp, const Vec &u);

/// Largest violation of the dual constraints (sign conditions on the
/// multipliers and on reduced costs at the optimal bounds).
double dual_infeasibility(const LpProblem &lp, const LpOutcome &outcome);

/// Largest violation of rows and bounds at x.
double primal_infeasibility(const LpProblem &lp, const Vec &x);

}  // namespace qbenders
