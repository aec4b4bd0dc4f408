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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qbenders/master.hpp"

namespace qbenders {

using Bits = std::vector<std::uint8_t>;

/// value = offset + step * sum_k 2^k f_k  for k = 0..k_max.
struct BinaryEncoding {
  double step = 1.0;
  int k_max = -1;  // -1: zero bits, the value is the constant offset
  double offset = 0.0;
  int first_bit = 0;

  int bits() const { return k_max + 1; }
  double max_value() const;
  /// Decode from the full QUBO bit vector (reads this encoding's slice).
  double decode_from(std::span<const std::uint8_t> all_bits) const;

  bool operator==(const BinaryEncoding &) const = default;
};

/// Smallest encoding of [lo, hi] with the given step.
BinaryEncoding encode_value(double lo, double hi, double step);
/// Decode a bit vector of length bits() (bit k has weight step * 2^k).
double decode(const BinaryEncoding &enc, std::span<const std::uint8_t> bits);
/// Codeword for the largest representable value <= value (clamped to range).
Bits quantize(const BinaryEncoding &enc, double value);

struct QuadTerm {
  int i = 0;
  int j = 0;  // i < j
  double w = 0.0;

  bool operator==(const QuadTerm &) const = default;
};

enum class BitOwner : std::uint8_t { Zeta, Integer, Slack };

struct BitInfo {
  BitOwner owner = BitOwner::Integer;
  int index = 0;  // y index or penalty-row index
  int bit = 0;
};

enum class RowOrigin : std::uint8_t { Structural, ValidInequality, OptimalityCut, FeasibilityCut };

/// One constraint folded into the QUBO, stored in scaled units
/// (scale x original units) so that integer-coefficient rows stay exact.
struct PenaltyRow {
  std::string name;
  RowOrigin origin = RowOrigin::Structural;
  std::vector<std::pair<int, double>> y_terms;
  double zeta_coeff = 0.0;
  double rhs = 0.0;
  bool equality = false;
  double scale = 1.0;
  double rho = 1.0;
  int escalations = 0;
  bool integer_regime = false;
  BinaryEncoding slack;  // scaled units; zero bits for equalities
};

/// Quadratic form over bits:  constant + sum linear_i f_i + sum_{i<j} w_ij f_i f_j.
/// When produced by compile_master it also carries the variable map and the
/// penalty rows needed to decode solutions and to re-weight penalties.
struct Qubo {
  int num_bits = 0;
  double constant = 0.0;
  Vec linear;
  std::vector<QuadTerm> quadratic;

  std::vector<BitInfo> bit_map;
  std::vector<BinaryEncoding> y_encoding;
  BinaryEncoding zeta_encoding;
  Vec d_cost;
  double objective_constant = 0.0;
  double zeta_step = 0.1;
  std::vector<PenaltyRow> rows;
  bool integer_regime = false;
  int skipped_rows = 0;

  /// Pairwise coefficient lookup (0 when absent).
  double coupling(int i, int j) const;
  /// Plain QUBO with sorted, merged, nonzero quadratic terms.
  static Qubo from_terms(int num_bits, double constant, Vec linear, std::vector<QuadTerm> terms);
};

struct PenaltyPolicy {
  /// <= 0 selects the default: 2 x (upper bound of |master objective| over the box).
  double initial_rho = 0.0;
  double escalation_factor = 10.0;
  int max_escalations = 3;
};

Qubo compile_master(const MasterProblem &master, const PenaltyPolicy &policy, double zeta_step);

/// Exact evaluation (long double accumulation) of the quadratic form.
double energy(const Qubo &q, std::span<const std::uint8_t> bits);

struct QuboSolution {
  Vec y;
  double zeta = 0.0;
  Vec violations;  // |residual| per penalty row, original units
  Vec residuals;   // signed residual per row, scaled units
  double master_objective = 0.0;
  double penalty = 0.0;  // sum rho_i residual_i^2
  bool feasible = false;
};

QuboSolution extract_solution(const Qubo &q, std::span<const std::uint8_t> bits);

/// Bits for a master point: zeta rounded up onto its grid and every slack set
/// to the largest value that keeps its residual >= 0. Zero penalty whenever
/// (y, zeta) satisfies every encoded row.
Bits encode_assignment(const Qubo &q, const Vec &y, double zeta);

/// Multiply rho of every row whose violation exceeds tol by the escalation
/// factor and rebuild. nullopt when a violated row has no budget left.
std::optional<Qubo> escalate_penalties(const Qubo &q, const Vec &violations, const PenaltyPolicy &policy,
                                       double tol = 1e-9);

/// Only the penalty contribution of one row, as a standalone QUBO.
Qubo row_penalty(const Qubo &q, int row);

}  // namespace qbenders
