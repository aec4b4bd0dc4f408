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

#include <string>
#include <vector>

#include "qbenders/common.hpp"
#include "qbenders/model.hpp"

namespace qbenders {

enum class CutKind { Optimality, Feasibility };
enum class CutSource { SubproblemDual, SubproblemRay, LpRelaxationSeed, RelaxedMaster };

const char *to_string(CutKind kind);
const char *to_string(CutSource source);

/// A Benders cut in master space. value(y) = rhs + coeff_y.y and the stored
/// row reads  coeff_zeta * zeta >= value(y):
///   optimality  (coeff_zeta = 1):  zeta >= b.v - (B^T v).y
///   feasibility (coeff_zeta = 0):  0    >= b.u - (B^T u).y
struct Cut {
  CutKind kind = CutKind::Optimality;
  Vec coeff_y;
  int coeff_zeta = 1;
  double rhs = 0.0;
  int iteration = 0;
  CutSource source = CutSource::SubproblemDual;
  Vec origin_y;  // integer point the cut was generated at

  double value(const Vec &y) const;
  /// How far (y, zeta) is from satisfying the cut; <= 0 when satisfied.
  double violation(const Vec &y, double zeta) const;
  bool same_as(const Cut &other, double tol = 1e-9) const;
};

/// Pure-integer master row  coeff.y (sense) rhs, sense is >= or =.
struct MasterRow {
  std::string name;
  Vec coeff;
  double rhs = 0.0;
  Sense sense = Sense::GreaterEqual;
  bool valid_inequality = false;

  double violation(const Vec &y) const;
};

/// min zeta + d.y + constant over integer y in [0, int_upper] and
/// zeta in [zeta_lo, zeta_hi], subject to pure-integer rows and cuts.
struct MasterProblem {
  int n_int = 0;
  Vec d_cost;
  Vec int_upper;
  double objective_constant = 0.0;
  std::vector<std::string> int_names;
  std::vector<MasterRow> rows;
  double zeta_lo = -kInf;
  double zeta_hi = kInf;
  std::vector<Cut> cuts;

  double objective(const Vec &y, double zeta) const;
  /// Smallest zeta that satisfies every optimality cut and zeta_lo at y.
  double zeta_required(const Vec &y) const;
  /// Largest violation of bounds, pure-integer rows and feasibility cuts at y.
  double y_violation(const Vec &y) const;
  bool y_feasible(const Vec &y, double tol = 1e-9) const;
  /// Objective at y with zeta set to zeta_required(y).
  double repaired_objective(const Vec &y) const;

  /// Exact MILP form: x = (zeta - zeta_lo), requires finite zeta_lo.
  StandardMilp to_milp() const;
};

}  // namespace qbenders
