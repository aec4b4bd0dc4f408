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
#include "qbenders/sparse.hpp"

#include <algorithm>
#include <string>

namespace qbenders {

SparseMatrix::SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw Error("negative matrix dimension");
  rebuild_index();
}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> entries) {
  SparseMatrix m(rows, cols);
  for (const auto &t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw Error("triplet (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                  ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Triplet &a, const Triplet &b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Triplet> merged;
  merged.reserve(entries.size());
  for (const auto &t : entries) {
    if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col) {
      merged.back().value += t.value;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Triplet &t) { return t.value == 0.0; });
  m.entries_ = std::move(merged);
  m.rebuild_index();
  return m;
}

void SparseMatrix::rebuild_index() {
  row_start_.assign(static_cast<std::size_t>(rows_) + 1, 0);
  for (const auto &t : entries_) ++row_start_[static_cast<std::size_t>(t.row) + 1];
  for (int r = 0; r < rows_; ++r) row_start_[r + 1] += row_start_[r];
}

std::span<const Triplet> SparseMatrix::row(int r) const {
  return std::span<const Triplet>(entries_).subspan(row_start_[r], row_start_[r + 1] - row_start_[r]);
}

Vec SparseMatrix::multiply(const Vec &x) const {
  if (static_cast<int>(x.size()) != cols_) throw Error("multiply: dimension mismatch");
  Vec out(static_cast<std::size_t>(rows_), 0.0);
  for (const auto &t : entries_) out[t.row] += t.value * x[t.col];
  return out;
}

Vec SparseMatrix::transpose_multiply(const Vec &v) const {
  if (static_cast<int>(v.size()) != rows_) throw Error("transpose_multiply: dimension mismatch");
  Vec out(static_cast<std::size_t>(cols_), 0.0);
  for (const auto &t : entries_) out[t.col] += t.value * v[t.row];
  return out;
}

double SparseMatrix::row_dot(int r, const Vec &x) const {
  double s = 0.0;
  for (const auto &t : row(r)) s += t.value * x[t.col];
  return s;
}

SparseMatrix SparseMatrix::select_rows(std::span<const int> rows) const {
  std::vector<Triplet> out;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (const auto &t : row(rows[k])) out.push_back({static_cast<int>(k), t.col, t.value});
  }
  return from_triplets(static_cast<int>(rows.size()), cols_, std::move(out));
}

SparseMatrix SparseMatrix::hstack(const SparseMatrix &left, const SparseMatrix &right) {
  if (left.rows() != right.rows()) throw Error("hstack: row count mismatch");
  std::vector<Triplet> out = left.entries_;
  for (const auto &t : right.entries_) out.push_back({t.row, t.col + left.cols(), t.value});
  return from_triplets(left.rows(), left.cols() + right.cols(), std::move(out));
}

std::vector<Vec> SparseMatrix::to_dense() const {
  std::vector<Vec> dense(static_cast<std::size_t>(rows_), Vec(static_cast<std::size_t>(cols_), 0.0));
  for (const auto &t : entries_) dense[t.row][t.col] = t.value;
  return dense;
}

bool SparseMatrix::operator==(const SparseMatrix &other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && entries_ == other.entries_;
}

}  // namespace qbenders
