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
#include "qbenders/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

namespace qbenders {

const char *to_string(Sense sense) {
  switch (sense) {
    case Sense::GreaterEqual: return ">=";
    case Sense::LessEqual: return "<=";
    case Sense::Equal: return "=";
  }
  return "?";
}

const char *to_string(VarKind kind) {
  switch (kind) {
    case VarKind::Continuous: return "continuous";
    case VarKind::Integer: return "integer";
    case VarKind::Binary: return "binary";
  }
  return "?";
}

const char *to_string(ConstraintClass cls) {
  switch (cls) {
    case ConstraintClass::PureInteger: return "pure-integer";
    case ConstraintClass::Mixed: return "mixed";
    case ConstraintClass::PureContinuous: return "pure-continuous";
  }
  return "?";
}

double dot(const Vec &a, const Vec &b) {
  if (a.size() != b.size()) throw Error("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

int Model::add_variable(std::string var_name, VarKind kind, double lower, double upper, double cost) {
  variables.push_back({std::move(var_name), kind, lower, upper, cost});
  return static_cast<int>(variables.size()) - 1;
}

int Model::add_constraint(std::string row_name, Sense sense, double rhs,
                          std::vector<std::pair<int, double>> terms) {
  constraints.push_back({std::move(row_name), sense, rhs, std::move(terms)});
  return static_cast<int>(constraints.size()) - 1;
}

double Model::objective(const Vec &values) const {
  if (values.size() != variables.size()) throw Error("Model::objective: dimension mismatch");
  double s = objective_offset;
  for (std::size_t j = 0; j < variables.size(); ++j) s += variables[j].cost * values[j];
  return s;
}

double Model::max_violation(const Vec &values) const {
  if (values.size() != variables.size()) throw Error("Model::max_violation: dimension mismatch");
  double worst = 0.0;
  for (std::size_t j = 0; j < variables.size(); ++j) {
    const auto &v = variables[j];
    double lo = v.kind == VarKind::Binary ? std::max(0.0, v.lower) : v.lower;
    double hi = v.kind == VarKind::Binary ? std::min(1.0, v.upper) : v.upper;
    worst = std::max({worst, lo - values[j], values[j] - hi});
    if (v.is_integer()) worst = std::max(worst, std::abs(values[j] - std::round(values[j])));
  }
  for (const auto &row : constraints) {
    double lhs = 0.0;
    for (auto [j, a] : row.terms) lhs += a * values[static_cast<std::size_t>(j)];
    switch (row.sense) {
      case Sense::GreaterEqual: worst = std::max(worst, row.rhs - lhs); break;
      case Sense::LessEqual: worst = std::max(worst, lhs - row.rhs); break;
      case Sense::Equal: worst = std::max(worst, std::abs(lhs - row.rhs)); break;
    }
  }
  return worst;
}

double StandardMilp::objective(const Vec &x, const Vec &y) const {
  return dot(c, x) + dot(d_cost, y) + objective_constant;
}

double StandardMilp::max_violation(const Vec &x, const Vec &y) const {
  if (static_cast<int>(x.size()) != n_cont || static_cast<int>(y.size()) != n_int) {
    throw Error("StandardMilp::max_violation: dimension mismatch");
  }
  double worst = 0.0;
  for (double v : x) worst = std::max(worst, -v);
  for (int j = 0; j < n_int; ++j) {
    worst = std::max({worst, -y[j], y[j] - int_upper[j], std::abs(y[j] - std::round(y[j]))});
  }
  Vec ax = A.multiply(x);
  Vec by = B.multiply(y);
  for (int i = 0; i < rows(); ++i) worst = std::max(worst, b[i] - ax[i] - by[i]);
  return worst;
}

void StandardMilp::validate() const {
  if (static_cast<int>(c.size()) != n_cont) throw Error("StandardMilp: |c| != n_cont");
  if (static_cast<int>(d_cost.size()) != n_int) throw Error("StandardMilp: |d| != n_int");
  if (static_cast<int>(int_upper.size()) != n_int) throw Error("StandardMilp: |int_upper| != n_int");
  if (A.rows() != rows() || B.rows() != rows()) throw Error("StandardMilp: A, B and b row counts differ");
  if (A.cols() != n_cont || B.cols() != n_int) throw Error("StandardMilp: A or B column count mismatch");
  for (int j = 0; j < n_int; ++j) {
    if (!std::isfinite(int_upper[j]) || int_upper[j] < 0) {
      throw Error("StandardMilp: integer variable " + std::to_string(j) + " has no finite upper bound");
    }
  }
}

void LpProblem::validate() const {
  const auto n = cost.size();
  if (matrix.cols() != static_cast<int>(n) || lower.size() != n || upper.size() != n) {
    throw Error("LpProblem: column dimension mismatch");
  }
  if (matrix.rows() != rows() || senses.size() != rhs.size()) throw Error("LpProblem: row dimension mismatch");
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lower[j])) throw Error("LpProblem: lower bound must be finite");
    if (upper[j] < lower[j]) throw Error("LpProblem: upper bound below lower bound");
    if (!std::isfinite(cost[j])) throw Error("LpProblem: non-finite cost");
  }
  for (double r : rhs) {
    if (!std::isfinite(r)) throw Error("LpProblem: non-finite rhs");
  }
}

StandardMilp normalize(const Model &raw) {
  StandardMilp m;
  const auto nv = raw.variables.size();
  m.shift.slots.resize(nv);
  m.shift.shift.assign(nv, 0.0);
  m.shift.raw_constraints = raw.constraints.size();
  m.objective_constant = raw.objective_offset;

  Vec cont_upper;
  for (std::size_t j = 0; j < nv; ++j) {
    const auto &v = raw.variables[j];
    if (!std::isfinite(v.lower)) {
      throw Error("variable '" + v.name + "' has no finite lower bound");
    }
    if (v.is_integer()) {
      double lo = std::ceil(v.lower - 1e-9);
      double hi = std::floor(v.upper + 1e-9);
      if (v.kind == VarKind::Binary) {
        lo = std::max(lo, 0.0);
        hi = std::min(hi, 1.0);
      }
      if (!std::isfinite(hi)) {
        throw Error("integer variable '" + v.name + "' is unbounded above; a finite upper bound is required");
      }
      if (hi < lo) throw Error("integer variable '" + v.name + "' has an empty domain");
      m.shift.slots[j] = {true, m.n_int++};
      m.shift.shift[j] = lo;
      m.d_cost.push_back(v.cost);
      m.int_upper.push_back(hi - lo);
      m.int_names.push_back(v.name);
    } else {
      if (v.upper < v.lower) throw Error("variable '" + v.name + "' has an empty domain");
      m.shift.slots[j] = {false, m.n_cont++};
      m.shift.shift[j] = v.lower;
      m.c.push_back(v.cost);
      cont_upper.push_back(v.upper - v.lower);
      m.cont_names.push_back(v.name);
    }
    m.objective_constant += v.cost * m.shift.shift[j];
  }

  std::vector<Triplet> a_entries;
  std::vector<Triplet> b_entries;
  auto emit_row = [&](const std::map<int, double> &terms, double rhs, double sign, std::string name, int origin) {
    const int r = static_cast<int>(m.b.size());
    for (auto [j, a] : terms) {
      const auto &slot = m.shift.slots[static_cast<std::size_t>(j)];
      (slot.integer ? b_entries : a_entries).push_back({r, slot.index, sign * a});
    }
    m.b.push_back(sign * rhs);
    m.row_names.push_back(std::move(name));
    m.shift.row_origin.push_back(origin);
  };

  for (std::size_t i = 0; i < raw.constraints.size(); ++i) {
    const auto &row = raw.constraints[i];
    if (!std::isfinite(row.rhs)) throw Error("constraint '" + row.name + "' has a non-finite right-hand side");
    std::map<int, double> terms;
    double rhs = row.rhs;
    for (auto [j, a] : row.terms) {
      if (j < 0 || static_cast<std::size_t>(j) >= nv) {
        throw Error("constraint '" + row.name + "' references unknown variable " + std::to_string(j));
      }
      if (!std::isfinite(a)) throw Error("constraint '" + row.name + "' has a non-finite coefficient");
      terms[j] += a;
      rhs -= a * m.shift.shift[static_cast<std::size_t>(j)];
    }
    std::erase_if(terms, [](const auto &kv) { return kv.second == 0.0; });
    if (terms.empty()) {
      bool ok = (row.sense == Sense::GreaterEqual && rhs <= 0.0) || (row.sense == Sense::LessEqual && rhs >= 0.0) ||
                (row.sense == Sense::Equal && rhs == 0.0);
      if (!ok) throw Error("constraint '" + row.name + "' has no terms and cannot be satisfied");
      continue;
    }
    const int origin = static_cast<int>(i);
    switch (row.sense) {
      case Sense::GreaterEqual: emit_row(terms, rhs, 1.0, row.name, origin); break;
      case Sense::LessEqual: emit_row(terms, rhs, -1.0, row.name, origin); break;
      case Sense::Equal:
        emit_row(terms, rhs, 1.0, row.name + "#ge", origin);
        emit_row(terms, rhs, -1.0, row.name + "#le", origin);
        break;
    }
  }

  for (int k = 0; k < m.n_cont; ++k) {
    if (std::isfinite(cont_upper[k])) {
      const int r = static_cast<int>(m.b.size());
      a_entries.push_back({r, k, -1.0});
      m.b.push_back(-cont_upper[k]);
      m.row_names.push_back("ub:" + m.cont_names[k]);
      m.shift.row_origin.push_back(-1);
    }
  }

  m.A = SparseMatrix::from_triplets(m.rows(), m.n_cont, std::move(a_entries));
  m.B = SparseMatrix::from_triplets(m.rows(), m.n_int, std::move(b_entries));
  m.validate();
  return m;
}

Vec denormalize(const StandardMilp &m, const Vec &x, const Vec &y) {
  if (static_cast<int>(x.size()) != m.n_cont || static_cast<int>(y.size()) != m.n_int) {
    throw Error("denormalize: dimension mismatch");
  }
  Vec raw(m.shift.slots.size());
  for (std::size_t j = 0; j < raw.size(); ++j) {
    const auto &slot = m.shift.slots[j];
    raw[j] = (slot.integer ? y : x)[static_cast<std::size_t>(slot.index)] + m.shift.shift[j];
  }
  return raw;
}

std::pair<Vec, Vec> to_standard(const StandardMilp &m, const Vec &raw_values) {
  if (raw_values.size() != m.shift.slots.size()) throw Error("to_standard: dimension mismatch");
  Vec x(static_cast<std::size_t>(m.n_cont)), y(static_cast<std::size_t>(m.n_int));
  for (std::size_t j = 0; j < raw_values.size(); ++j) {
    const auto &slot = m.shift.slots[j];
    (slot.integer ? y : x)[static_cast<std::size_t>(slot.index)] = raw_values[j] - m.shift.shift[j];
  }
  return {std::move(x), std::move(y)};
}

std::vector<ConstraintClass> classify_constraints(const StandardMilp &m) {
  std::vector<ConstraintClass> out(static_cast<std::size_t>(m.rows()));
  for (int i = 0; i < m.rows(); ++i) {
    const bool has_cont = !m.A.row_empty(i);
    const bool has_int = !m.B.row_empty(i);
    if (has_int && !has_cont) {
      out[i] = ConstraintClass::PureInteger;
    } else if (has_int) {
      out[i] = ConstraintClass::Mixed;
    } else {
      out[i] = ConstraintClass::PureContinuous;
    }
  }
  return out;
}

LpProblem lp_relaxation(const StandardMilp &m) {
  LpProblem lp;
  lp.cost = m.c;
  lp.cost.insert(lp.cost.end(), m.d_cost.begin(), m.d_cost.end());
  lp.matrix = SparseMatrix::hstack(m.A, m.B);
  lp.senses.assign(m.b.size(), Sense::GreaterEqual);
  lp.rhs = m.b;
  lp.lower.assign(lp.cost.size(), 0.0);
  lp.upper.assign(static_cast<std::size_t>(m.n_cont), kInf);
  lp.upper.insert(lp.upper.end(), m.int_upper.begin(), m.int_upper.end());
  return lp;
}

FixedSubproblem fix_integers(const StandardMilp &m, const Vec &y_bar) {
  if (static_cast<int>(y_bar.size()) != m.n_int) {
    throw Error("fix_integers: expected " + std::to_string(m.n_int) + " integer values, got " +
                std::to_string(y_bar.size()));
  }
  FixedSubproblem sub;
  sub.lp.cost = m.c;
  sub.lp.matrix = m.A;
  sub.lp.senses.assign(m.b.size(), Sense::GreaterEqual);
  Vec by = m.B.multiply(y_bar);
  sub.lp.rhs.resize(m.b.size());
  for (std::size_t i = 0; i < m.b.size(); ++i) sub.lp.rhs[i] = m.b[i] - by[i];
  sub.lp.lower.assign(static_cast<std::size_t>(m.n_cont), 0.0);
  sub.lp.upper.assign(static_cast<std::size_t>(m.n_cont), kInf);
  sub.constant = dot(m.d_cost, y_bar) + m.objective_constant;
  return sub;
}

int bits_for_integer(double upper) {
  if (upper < 1.0) return 0;
  return std::bit_width(static_cast<unsigned long long>(std::floor(upper)));
}

ModelStats model_stats(const StandardMilp &m) {
  ModelStats s;
  s.constraints = static_cast<std::size_t>(m.rows());
  s.continuous = static_cast<std::size_t>(m.n_cont);
  s.integer = static_cast<std::size_t>(m.n_int);
  s.variables = s.continuous + s.integer;
  for (double u : m.int_upper) s.binary_after_encoding += static_cast<std::size_t>(bits_for_integer(u));
  for (auto cls : classify_constraints(m)) {
    switch (cls) {
      case ConstraintClass::PureInteger: ++s.pure_integer_rows; break;
      case ConstraintClass::Mixed: ++s.mixed_rows; break;
      case ConstraintClass::PureContinuous: ++s.pure_continuous_rows; break;
    }
  }
  return s;
}

ModelStats model_stats(const Model &raw) {
  ModelStats s;
  s.constraints = raw.constraints.size();
  s.variables = raw.variables.size();
  for (const auto &v : raw.variables) {
    if (v.is_integer()) {
      ++s.integer;
      double lo = std::ceil(v.lower), hi = std::floor(v.upper);
      if (v.kind == VarKind::Binary) {
        lo = std::max(lo, 0.0);
        hi = std::min(hi, 1.0);
      }
      s.binary_after_encoding += static_cast<std::size_t>(bits_for_integer(hi - lo));
    } else {
      ++s.continuous;
    }
  }
  for (const auto &row : raw.constraints) {
    bool has_cont = false, has_int = false;
    for (auto [j, a] : row.terms) {
      if (a == 0.0) continue;
      (raw.variables[static_cast<std::size_t>(j)].is_integer() ? has_int : has_cont) = true;
    }
    if (has_int && !has_cont) {
      ++s.pure_integer_rows;
    } else if (has_int) {
      ++s.mixed_rows;
    } else {
      ++s.pure_continuous_rows;
    }
  }
  return s;
}

}  // namespace qbenders
