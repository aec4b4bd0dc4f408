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

#include <span>
#include <vector>

#include "qbenders/common.hpp"

namespace qbenders {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;

  bool operator==(const Triplet &) const = default;
};

/// Row-major triplet storage. Entries are sorted by (row, col), duplicates
/// summed and explicit zeros dropped, so the triplet list doubles as CSR.
class SparseMatrix {
public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols);

  static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nonzeros() const { return entries_.size(); }
  const std::vector<Triplet> &entries() const { return entries_; }

  /// Entries of row r (sorted by column).
  std::span<const Triplet> row(int r) const;
  bool row_empty(int r) const { return row(r).empty(); }

  Vec multiply(const Vec &x) const;            // M x
  Vec transpose_multiply(const Vec &v) const;  // M^T v
  double row_dot(int r, const Vec &x) const;

  /// Subset of rows, in the given order.
  SparseMatrix select_rows(std::span<const int> rows) const;
  /// Columns [0, left.cols()) from left followed by right's columns.
  static SparseMatrix hstack(const SparseMatrix &left, const SparseMatrix &right);

  std::vector<Vec> to_dense() const;

  bool operator==(const SparseMatrix &other) const;

private:
  void rebuild_index();

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Triplet> entries_;
  std::vector<std::size_t> row_start_;
};

}  // namespace qbenders
