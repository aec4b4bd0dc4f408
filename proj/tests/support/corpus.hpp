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
#include <string>
#include <vector>

#include "qbenders/master.hpp"
#include "qbenders/model.hpp"

namespace qbenders::testing {

/// Small MILP whose integer box is enumerable: at most 10 integers with a
/// box of at most 1024 points and at most 15 continuous variables. Linking
/// rows (x_j <= U_j y_k) and demand rows make some integer points leave the
/// subproblem infeasible.
Model random_milp(std::uint64_t seed);

/// Every integer point of a standard model, first coordinate fastest.
std::vector<Vec> integer_points(const StandardMilp &m);

struct Enumeration {
  double objective = kInf;  // +inf when no integer point is feasible
  Vec y;
  /// One entry per integer_points() element: subproblem value
  /// (c.x over the fixed LP, +inf when infeasible). Excludes d.y.
  std::vector<double> value;
  int feasible_points = 0;
  int infeasible_points = 0;
};

/// Exhaustive oracle: solve the fixed LP at every integer point.
Enumeration enumerate(const StandardMilp &m);

/// Seeds of the standard 50-instance corpus.
inline constexpr int kCorpusSize = 50;

/// Random master problem for encoder tests. In the integer regime every
/// datum is an integer and zeta_step is 1; otherwise costs and cut data are
/// multiples of 0.1 and zeta_step is 0.1, so lattice rounding is exact.
struct RandomMaster {
  MasterProblem master;
  double zeta_step = 1.0;
};
RandomMaster random_master(std::uint64_t seed, bool integer_data, int max_int = 3);

/// Brute-force master optimum over the integer box with zeta on its grid;
/// +inf when no point is feasible inside [zeta_lo, zeta_hi].
struct MasterOptimum {
  double objective = kInf;
  std::vector<Vec> argmin;
};
MasterOptimum brute_force_master(const MasterProblem &master);

/// Frozen optimal objectives of the corpus from an external MILP solver,
/// indexed by seed; +inf marks an infeasible instance.
std::vector<double> corpus_reference();

/// Frozen optimal objectives (external solver) of the default MES instances.
struct MesReference {
  int steps;
  double lp_relaxation;
  double optimum;
};
inline constexpr MesReference kMesReference[] = {
    {2, 78783.3212755074, 79498.21162010796},
    {3, 85830.05593464265, 87353.79574306306},
    {4, 87249.9143361611, 89501.71725868796},
    {5, 88882.68145795459, 91925.43361276494},
};

}  // namespace qbenders::testing
