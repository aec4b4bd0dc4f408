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
#include <vector>

#include "qbenders/lp.hpp"
#include "qbenders/model.hpp"

namespace qbenders {

enum class MipStatus { Optimal, Infeasible, Unbounded, NodeLimit };

const char *to_string(MipStatus status);

struct MipOptions {
  /// Relative gap (inc - bound) / max(|inc|, 1) at which the search stops.
  double gap_tol = 1e-9;
  double integrality_tol = 1e-6;
  long node_limit = 500000;
  LpOptions lp;
  /// Integer points (standard space) that may not be returned as incumbent.
  std::vector<Vec> excluded;
};

struct MipOutcome {
  MipStatus status = MipStatus::Infeasible;
  Vec x;
  Vec y;
  double objective = std::numeric_limits<double>::infinity();
  double bound = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  long nodes = 0;
  long lp_failures = 0;
  double wall_seconds = 0.0;
};

double relative_gap(double incumbent, double bound);

/// Best-first branch and bound over LP relaxations. Branches on the most
/// fractional integer (lowest index on ties). Excluded points are cut off by
/// splitting the domain of the first unfixed coordinate around them.
MipOutcome branch_and_bound(const StandardMilp &m, const MipOptions &options = {});

}  // namespace qbenders
