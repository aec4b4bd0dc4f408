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

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qbenders/common.hpp"
#include "qbenders/sparse.hpp"

namespace qbenders {

enum class VarKind { Continuous, Integer, Binary };

const char *to_string(VarKind kind);

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = kInf;
  double cost = 0.0;

  bool is_integer() const { return kind != VarKind::Continuous; }
  bool operator==(const Variable &) const = default;
};

struct Constraint {
  std::string name;
  Sense sense = Sense::GreaterEqual;
  double rhs = 0.0;
  std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)

  bool operator==(const Constraint &) const = default;
};

/// A mixed-sense MILP as a modeller writes it: arbitrary bounds, any of
/// >=, <=, = per row. This is what the problem file stores.
struct Model {
  std::string name;
  std::map<std::string, std::string> metadata;
  double objective_offset = 0.0;
  std::vector<Variable> variables;
  std::vector<Constraint> constraints;

  int add_variable(std::string var_name, VarKind kind, double lower, double upper, double cost);
  int add_constraint(std::string row_name, Sense sense, double rhs,
                     std::vector<std::pair<int, double>> terms);

  double objective(const Vec &values) const;
  /// Largest bound or row violation of a raw point (0 when feasible).
  double max_violation(const Vec &values) const;

  bool operator==(const Model &) const = default;
};

/// Book-keeping needed to map points between a Model and its StandardMilp.
struct ShiftRecord {
  struct Slot {
    bool integer = false;
    int index = 0;  // position inside x (continuous) or y (integer)
    bool operator==(const Slot &) const = default;
  };
  std::vector<Slot> slots;            // one per raw variable
  Vec shift;                          // raw lower bound subtracted from each raw variable
  std::vector<int> row_origin;        // raw row behind each standard row, -1 for bound rows
  std::size_t raw_constraints = 0;

  bool operator==(const ShiftRecord &) const = default;
};

/// min c.x + d.y + constant  s.t.  A x + B y >= b,  x >= 0,  0 <= y <= int_upper, y integer.
struct StandardMilp {
  int n_cont = 0;
  int n_int = 0;
  Vec c;
  Vec d_cost;
  SparseMatrix A;
  SparseMatrix B;
  Vec b;
  Vec int_upper;
  double objective_constant = 0.0;

  std::vector<std::string> cont_names;
  std::vector<std::string> int_names;
  std::vector<std::string> row_names;
  ShiftRecord shift;

  int rows() const { return static_cast<int>(b.size()); }
  double objective(const Vec &x, const Vec &y) const;
  /// Largest violation of A x + B y >= b, x >= 0, 0 <= y <= int_upper and integrality.
  double max_violation(const Vec &x, const Vec &y) const;
  /// Throws Error when the structural invariants do not hold.
  void validate() const;

  bool operator==(const StandardMilp &) const = default;
};

enum class ConstraintClass { PureInteger, Mixed, PureContinuous };

const char *to_string(ConstraintClass cls);

/// LP in general form: min cost.x  s.t. rows (sense) rhs, lower <= x <= upper.
/// Lower bounds must be finite; upper bounds may be +inf.
struct LpProblem {
  Vec cost;
  SparseMatrix matrix;
  std::vector<Sense> senses;
  Vec rhs;
  Vec lower;
  Vec upper;

  int rows() const { return static_cast<int>(rhs.size()); }
  int cols() const { return static_cast<int>(cost.size()); }
  void validate() const;
};

/// The LP over x that remains once y is fixed, plus the constant d.y + offset.
struct FixedSubproblem {
  LpProblem lp;
  double constant = 0.0;
};

struct ModelStats {
  std::size_t constraints = 0;
  std::size_t variables = 0;
  std::size_t continuous = 0;
  std::size_t integer = 0;
  std::size_t binary_after_encoding = 0;
  std::size_t pure_integer_rows = 0;
  std::size_t mixed_rows = 0;
  std::size_t pure_continuous_rows = 0;
};

StandardMilp normalize(const Model &raw);

/// Map a standard-space point back to raw variable values.
Vec denormalize(const StandardMilp &m, const Vec &x, const Vec &y);
/// Map a raw point into standard space; inverse of denormalize.
std::pair<Vec, Vec> to_standard(const StandardMilp &m, const Vec &raw_values);

std::vector<ConstraintClass> classify_constraints(const StandardMilp &m);

LpProblem lp_relaxation(const StandardMilp &m);
FixedSubproblem fix_integers(const StandardMilp &m, const Vec &y_bar);

/// Bits needed for an integer in [0, upper] with unit step.
int bits_for_integer(double upper);

ModelStats model_stats(const StandardMilp &m);
/// Counts for a raw model; constraints are raw rows, not split equalities.
ModelStats model_stats(const Model &raw);

}  // namespace qbenders
