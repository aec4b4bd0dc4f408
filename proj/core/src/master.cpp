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
#include "qbenders/master.hpp"

#include <algorithm>
#include <cmath>

namespace qbenders {

const char *to_string(CutKind kind) {
  return kind == CutKind::Optimality ? "optimality" : "feasibility";
}

const char *to_string(CutSource source) {
  switch (source) {
    case CutSource::SubproblemDual: return "subproblem-dual";
    case CutSource::SubproblemRay: return "subproblem-ray";
    case CutSource::LpRelaxationSeed: return "lp-relaxation-seed";
    case CutSource::RelaxedMaster: return "relaxed-master";
  }
  return "?";
}

double Cut::value(const Vec &y) const { return rhs + dot(coeff_y, y); }

double Cut::violation(const Vec &y, double zeta) const {
  return value(y) - (coeff_zeta != 0 ? zeta : 0.0);
}

bool Cut::same_as(const Cut &other, double tol) const {
  if (kind != other.kind || coeff_zeta != other.coeff_zeta || coeff_y.size() != other.coeff_y.size()) return false;
  if (std::abs(rhs - other.rhs) > tol) return false;
  for (std::size_t j = 0; j < coeff_y.size(); ++j) {
    if (std::abs(coeff_y[j] - other.coeff_y[j]) > tol) return false;
  }
  return true;
}

double MasterRow::violation(const Vec &y) const {
  const double lhs = dot(coeff, y);
  return sense == Sense::Equal ? std::abs(lhs - rhs) : rhs - lhs;
}

double MasterProblem::objective(const Vec &y, double zeta) const {
  return zeta + dot(d_cost, y) + objective_constant;
}

double MasterProblem::zeta_required(const Vec &y) const {
  double z = zeta_lo;
  for (const auto &cut : cuts) {
    if (cut.kind == CutKind::Optimality) z = std::max(z, cut.value(y));
  }
  return z;
}

double MasterProblem::y_violation(const Vec &y) const {
  double worst = 0.0;
  for (int j = 0; j < n_int; ++j) {
    worst = std::max({worst, -y[j], y[j] - int_upper[j], std::abs(y[j] - std::round(y[j]))});
  }
  for (const auto &row : rows) worst = std::max(worst, row.violation(y));
  for (const auto &cut : cuts) {
    if (cut.kind == CutKind::Feasibility) worst = std::max(worst, cut.value(y));
  }
  return worst;
}

bool MasterProblem::y_feasible(const Vec &y, double tol) const { return y_violation(y) <= tol; }

double MasterProblem::repaired_objective(const Vec &y) const { return objective(y, zeta_required(y)); }

StandardMilp MasterProblem::to_milp() const {
  if (!std::isfinite(zeta_lo)) throw Error("MasterProblem::to_milp: zeta_lo must be finite");
  StandardMilp m;
  m.n_cont = 1;
  m.n_int = n_int;
  m.c = {1.0};
  m.d_cost = d_cost;
  m.int_upper = int_upper;
  m.objective_constant = zeta_lo + objective_constant;
  m.cont_names = {"zeta"};
  m.int_names = int_names;
  if (m.int_names.size() != static_cast<std::size_t>(n_int)) {
    m.int_names.clear();
    for (int j = 0; j < n_int; ++j) m.int_names.push_back("y" + std::to_string(j));
  }

  std::vector<Triplet> a, bm;
  auto add_row = [&](const Vec &coeff, double sign, double rhs, double zeta_coeff, std::string name) {
    const int r = m.rows();
    for (int j = 0; j < n_int; ++j) {
      if (coeff[j] != 0.0) bm.push_back({r, j, sign * coeff[j]});
    }
    if (zeta_coeff != 0.0) a.push_back({r, 0, zeta_coeff});
    m.b.push_back(rhs);
    m.row_names.push_back(std::move(name));
  };
  for (const auto &row : rows) {
    add_row(row.coeff, 1.0, row.rhs, 0.0, row.name);
    if (row.sense == Sense::Equal) add_row(row.coeff, -1.0, -row.rhs, 0.0, row.name + "#le");
  }
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    const auto &cut = cuts[k];
    // zeta' + zeta_lo >= rhs + coeff.y   ->   zeta' - coeff.y >= rhs - zeta_lo
    if (cut.kind == CutKind::Optimality) {
      add_row(cut.coeff_y, -1.0, cut.rhs - zeta_lo, 1.0, "cut" + std::to_string(k));
    } else {
      add_row(cut.coeff_y, -1.0, cut.rhs, 0.0, "cut" + std::to_string(k));
    }
  }
  m.A = SparseMatrix::from_triplets(m.rows(), 1, std::move(a));
  m.B = SparseMatrix::from_triplets(m.rows(), n_int, std::move(bm));
  m.shift.row_origin.assign(static_cast<std::size_t>(m.rows()), -1);
  m.validate();
  return m;
}

}  // namespace qbenders
