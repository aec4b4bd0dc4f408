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
#include "qbenders/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace qbenders {

const char *to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
    case LpStatus::NumericalFailure: return "numerical-failure";
  }
  return "?";
}

namespace {

enum class ColState : unsigned char { Basic, AtLower, AtUpper };

constexpr double kPivotTol = 1e-9;
constexpr double kSingularTol = 1e-11;

/// Working form: columns are structurals (shifted to lower bound 0), one slack
/// per inequality row and artificials where the slack cannot start basic.
class Simplex {
public:
  Simplex(const LpProblem &lp, const LpOptions &opt) : lp_(lp), opt_(opt) {
    m_ = lp.rows();
    n_ = lp.cols();
    build_columns();
  }

  LpOutcome run();

private:
  struct Column {
    std::vector<std::pair<int, double>> entries;
  };

  void build_columns();
  bool refactor();
  void recompute_basic_values();
  Vec compute_duals() const;
  double reduced_cost(int j, const Vec &y) const;
  Vec column_times_inverse(int j) const;
  void pivot(int row, int entering, const Vec &alpha);
  /// Runs simplex on the current cost vector; returns Optimal, Unbounded,
  /// IterationLimit or NumericalFailure.
  LpStatus iterate(bool phase_one, int &unbounded_col, Vec &unbounded_alpha);

  const LpProblem &lp_;
  const LpOptions &opt_;
  int m_ = 0;
  int n_ = 0;
  int total_ = 0;
  int first_art_ = 0;

  std::vector<Column> cols_;
  Vec cost_;
  Vec upper_;     // shifted upper bound of every working column
  Vec rhs_;       // rhs after shifting structurals to lower 0
  std::vector<ColState> state_;
  std::vector<int> basis_;
  Vec xb_;
  Vec binv_;      // m x m, row-major
  long iterations_ = 0;
  long bland_pivots_ = 0;
  int since_refactor_ = 0;
  int degenerate_run_ = 0;
};

void Simplex::build_columns() {
  cols_.assign(static_cast<std::size_t>(n_), {});
  for (const auto &t : lp_.matrix.entries()) cols_[t.col].entries.emplace_back(t.row, t.value);
  upper_.resize(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) upper_[j] = lp_.upper[j] - lp_.lower[j];

  rhs_ = lp_.rhs;
  for (int j = 0; j < n_; ++j) {
    if (lp_.lower[j] == 0.0) continue;
    for (auto [i, a] : cols_[j].entries) rhs_[i] -= a * lp_.lower[j];
  }

  // Slacks.
  std::vector<int> slack_of_row(static_cast<std::size_t>(m_), -1);
  std::vector<double> slack_sign(static_cast<std::size_t>(m_), 0.0);
  for (int i = 0; i < m_; ++i) {
    if (lp_.senses[i] == Sense::Equal) continue;
    slack_sign[i] = lp_.senses[i] == Sense::GreaterEqual ? -1.0 : 1.0;
    slack_of_row[i] = static_cast<int>(cols_.size());
    cols_.push_back({{{i, slack_sign[i]}}});
    upper_.push_back(kInf);
  }
  first_art_ = static_cast<int>(cols_.size());

  // Initial basis: a slack when it can absorb the rhs, otherwise an artificial.
  basis_.assign(static_cast<std::size_t>(m_), -1);
  xb_.assign(static_cast<std::size_t>(m_), 0.0);
  for (int i = 0; i < m_; ++i) {
    const double r = rhs_[i];
    if (slack_of_row[i] >= 0 && r * slack_sign[i] >= 0.0) {
      basis_[i] = slack_of_row[i];
      xb_[i] = r * slack_sign[i];
    } else {
      const double sign = r >= 0.0 ? 1.0 : -1.0;
      basis_[i] = static_cast<int>(cols_.size());
      cols_.push_back({{{i, sign}}});
      upper_.push_back(kInf);
      xb_[i] = std::abs(r);
    }
  }
  total_ = static_cast<int>(cols_.size());
  state_.assign(static_cast<std::size_t>(total_), ColState::AtLower);
  for (int i = 0; i < m_; ++i) state_[basis_[i]] = ColState::Basic;
  cost_.assign(static_cast<std::size_t>(total_), 0.0);

  binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0 / cols_[basis_[i]].entries.front().second;
}

bool Simplex::refactor() {
  // Gauss-Jordan with partial pivoting on [B | I].
  const std::size_t m = static_cast<std::size_t>(m_);
  Vec a(m * m, 0.0);
  for (int k = 0; k < m_; ++k) {
    for (auto [i, v] : cols_[basis_[k]].entries) a[i * m + k] = v;
  }
  Vec inv(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) inv[i * m + i] = 1.0;
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    double best = std::abs(a[col * m + col]);
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::abs(a[r * m + col]) > best) {
        best = std::abs(a[r * m + col]);
        piv = r;
      }
    }
    if (best < kSingularTol) return false;
    if (piv != col) {
      for (std::size_t k = 0; k < m; ++k) {
        std::swap(a[piv * m + k], a[col * m + k]);
        std::swap(inv[piv * m + k], inv[col * m + k]);
      }
    }
    const double d = a[col * m + col];
    for (std::size_t k = 0; k < m; ++k) {
      a[col * m + k] /= d;
      inv[col * m + k] /= d;
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      const double f = a[r * m + col];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < m; ++k) {
        a[r * m + k] -= f * a[col * m + k];
        inv[r * m + k] -= f * inv[col * m + k];
      }
    }
  }
  // inv = B^{-1} with rows indexed by basis position.
  binv_ = std::move(inv);
  since_refactor_ = 0;
  recompute_basic_values();
  return true;
}

void Simplex::recompute_basic_values() {
  Vec r = rhs_;
  for (int j = 0; j < total_; ++j) {
    if (state_[j] != ColState::AtUpper) continue;
    for (auto [i, v] : cols_[j].entries) r[i] -= v * upper_[j];
  }
  for (int i = 0; i < m_; ++i) {
    double s = 0.0;
    const double *row = &binv_[static_cast<std::size_t>(i) * m_];
    for (int k = 0; k < m_; ++k) s += row[k] * r[k];
    xb_[i] = s;
  }
}

Vec Simplex::compute_duals() const {
  Vec y(static_cast<std::size_t>(m_), 0.0);
  for (int k = 0; k < m_; ++k) {
    const double cb = cost_[basis_[k]];
    if (cb == 0.0) continue;
    const double *row = &binv_[static_cast<std::size_t>(k) * m_];
    for (int i = 0; i < m_; ++i) y[i] += cb * row[i];
  }
  return y;
}

double Simplex::reduced_cost(int j, const Vec &y) const {
  double d = cost_[j];
  for (auto [i, v] : cols_[j].entries) d -= y[i] * v;
  return d;
}

Vec Simplex::column_times_inverse(int j) const {
  Vec alpha(static_cast<std::size_t>(m_), 0.0);
  for (auto [k, v] : cols_[j].entries) {
    for (int i = 0; i < m_; ++i) alpha[i] += binv_[static_cast<std::size_t>(i) * m_ + k] * v;
  }
  return alpha;
}

void Simplex::pivot(int row, int entering, const Vec &alpha) {
  const std::size_t m = static_cast<std::size_t>(m_);
  double *prow = &binv_[static_cast<std::size_t>(row) * m];
  const double p = alpha[row];
  for (std::size_t k = 0; k < m; ++k) prow[k] /= p;
  for (int i = 0; i < m_; ++i) {
    if (i == row || alpha[i] == 0.0) continue;
    const double f = alpha[i];
    double *irow = &binv_[static_cast<std::size_t>(i) * m];
    for (std::size_t k = 0; k < m; ++k) irow[k] -= f * prow[k];
  }
  basis_[row] = entering;
  state_[entering] = ColState::Basic;
  ++since_refactor_;
}

LpStatus Simplex::iterate(bool phase_one, int &unbounded_col, Vec &unbounded_alpha) {
  const double dtol = opt_.optimality_tol;
  while (true) {
    if (iterations_ >= opt_.max_iterations) return LpStatus::IterationLimit;
    if (since_refactor_ >= opt_.refactor_interval) {
      if (!refactor()) return LpStatus::NumericalFailure;
    }

    const bool bland = degenerate_run_ >= opt_.degenerate_stall;
    const Vec y = compute_duals();
    int entering = -1;
    double best = 0.0;
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == ColState::Basic || upper_[j] == 0.0) continue;
      if (!phase_one && j >= first_art_) continue;
      const double d = reduced_cost(j, y);
      const double gain = state_[j] == ColState::AtLower ? -d : d;
      if (gain <= dtol) continue;
      if (bland) {
        entering = j;
        break;
      }
      if (gain > best) {
        best = gain;
        entering = j;
      }
    }
    if (entering < 0) return LpStatus::Optimal;

    const Vec alpha = column_times_inverse(entering);
    const double dir = state_[entering] == ColState::AtLower ? 1.0 : -1.0;

    // Harris two-pass ratio test; Bland mode uses the exact minimum with
    // lowest-index tie breaking.
    const double ftol = opt_.feasibility_tol;
    double theta_max = upper_[entering];
    for (int i = 0; i < m_; ++i) {
      const double a = alpha[i] * dir;
      const int bj = basis_[i];
      if (a > kPivotTol) {
        theta_max = std::min(theta_max, (xb_[i] + (bland ? 0.0 : ftol)) / a);
      } else if (a < -kPivotTol && std::isfinite(upper_[bj])) {
        theta_max = std::min(theta_max, (upper_[bj] - xb_[i] + (bland ? 0.0 : ftol)) / -a);
      }
    }
    if (!std::isfinite(theta_max)) {
      unbounded_col = entering;
      unbounded_alpha = alpha;
      for (auto &v : unbounded_alpha) v *= dir;
      return LpStatus::Unbounded;
    }

    int leave = -1;
    double theta = upper_[entering];
    bool leave_at_upper = false;
    double best_pivot = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double a = alpha[i] * dir;
      const int bj = basis_[i];
      double ratio;
      bool to_upper;
      if (a > kPivotTol) {
        ratio = xb_[i] / a;
        to_upper = false;
      } else if (a < -kPivotTol && std::isfinite(upper_[bj])) {
        ratio = (upper_[bj] - xb_[i]) / -a;
        to_upper = true;
      } else {
        continue;
      }
      if (ratio > theta_max) continue;
      bool take;
      if (bland) {
        take = leave < 0 || ratio < theta - 1e-12 || (ratio <= theta + 1e-12 && bj < basis_[leave]);
      } else {
        take = std::abs(a) > best_pivot;
      }
      if (take) {
        leave = i;
        theta = std::max(ratio, 0.0);
        leave_at_upper = to_upper;
        best_pivot = std::abs(a);
      }
    }

    ++iterations_;
    if (bland) ++bland_pivots_;
    if (leave >= 0 && upper_[entering] <= theta && !bland) {
      // The entering column reaches its own bound first.
      leave = -1;
    }
    if (leave < 0) {
      theta = upper_[entering];
      for (int i = 0; i < m_; ++i) xb_[i] -= dir * theta * alpha[i];
      state_[entering] = dir > 0 ? ColState::AtUpper : ColState::AtLower;
      degenerate_run_ = 0;
      continue;
    }

    degenerate_run_ = theta <= 1e-12 ? degenerate_run_ + 1 : 0;
    const double entering_value = (state_[entering] == ColState::AtLower ? 0.0 : upper_[entering]) + dir * theta;
    for (int i = 0; i < m_; ++i) xb_[i] -= dir * theta * alpha[i];
    const int leaving = basis_[leave];
    state_[leaving] = leave_at_upper ? ColState::AtUpper : ColState::AtLower;
    pivot(leave, entering, alpha);
    xb_[leave] = entering_value;
    if (opt_.verbosity > 1) {
      std::fprintf(stderr, "lp: it=%ld %s enter=%d leave=%d theta=%.3g%s\n", iterations_,
                   phase_one ? "p1" : "p2", entering, leaving, theta, bland ? " bland" : "");
    }
  }
}

LpOutcome Simplex::run() {
  LpOutcome out;
  for (int j = first_art_; j < total_; ++j) cost_[j] = 1.0;

  int ucol = -1;
  Vec ualpha;
  LpStatus st = LpStatus::Optimal;
  if (total_ > first_art_) {
    st = iterate(true, ucol, ualpha);
    if (st == LpStatus::Optimal && !refactor()) st = LpStatus::NumericalFailure;
  }
  out.iterations = iterations_;
  if (st != LpStatus::Optimal) {
    out.status = st == LpStatus::Unbounded ? LpStatus::NumericalFailure : st;
    out.bland_pivots = bland_pivots_;
    return out;
  }

  double infeasibility = 0.0;
  for (int i = 0; i < m_; ++i) {
    if (basis_[i] >= first_art_) infeasibility += std::max(0.0, xb_[i]);
  }
  double rhs_scale = 1.0;
  for (double r : rhs_) rhs_scale = std::max(rhs_scale, std::abs(r));
  if (infeasibility > opt_.feasibility_tol * rhs_scale) {
    out.status = LpStatus::Infeasible;
    out.ray = compute_duals();
    double largest = 0.0;
    for (double u : out.ray) largest = std::max(largest, std::abs(u));
    for (double &u : out.ray) {
      if (std::abs(u) <= 1e-12 * largest) u = 0.0;
    }
    out.bland_pivots = bland_pivots_;
    return out;
  }

  // Phase 2: artificials are pinned to zero and never re-enter.
  for (int j = first_art_; j < total_; ++j) {
    cost_[j] = 0.0;
    upper_[j] = 0.0;
  }
  for (int i = 0; i < m_; ++i) {
    if (basis_[i] >= first_art_) xb_[i] = std::max(0.0, xb_[i]);
  }
  for (int j = 0; j < n_; ++j) cost_[j] = lp_.cost[j];
  degenerate_run_ = 0;
  st = iterate(false, ucol, ualpha);
  out.iterations = iterations_;
  out.bland_pivots = bland_pivots_;

  if (st == LpStatus::Unbounded) {
    out.status = LpStatus::Unbounded;
    out.ray.assign(static_cast<std::size_t>(n_), 0.0);
    if (ucol < n_) out.ray[ucol] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) out.ray[basis_[i]] = -ualpha[i];
    }
    return out;
  }
  if (st != LpStatus::Optimal) {
    out.status = st;
    return out;
  }
  if (!refactor()) {
    out.status = LpStatus::NumericalFailure;
    return out;
  }

  out.x.assign(static_cast<std::size_t>(n_), 0.0);
  for (int j = 0; j < n_; ++j) {
    if (state_[j] == ColState::AtUpper) out.x[j] = upper_[j];
  }
  for (int i = 0; i < m_; ++i) {
    if (basis_[i] < n_) out.x[basis_[i]] = xb_[i];
  }
  for (int j = 0; j < n_; ++j) {
    out.x[j] = std::clamp(out.x[j], 0.0, upper_[j]) + lp_.lower[j];
  }
  out.duals = compute_duals();
  out.reduced_costs.resize(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) out.reduced_costs[j] = reduced_cost(j, out.duals);
  out.objective = dot(lp_.cost, out.x);

  const double viol = primal_infeasibility(lp_, out.x);
  out.status = viol > 1e3 * opt_.feasibility_tol * rhs_scale ? LpStatus::NumericalFailure : LpStatus::Optimal;
  return out;
}

}  // namespace

LpOutcome solve_lp(const LpProblem &lp, const LpOptions &options) {
  lp.validate();
  Simplex simplex(lp, options);
  LpOutcome out = simplex.run();
  if (options.verbosity > 0) {
    std::fprintf(stderr, "lp: %s after %ld iterations (%ld bland), objective %.10g\n", to_string(out.status),
                 out.iterations, out.bland_pivots, out.objective);
  }
  return out;
}

double farkas_margin(const LpProblem &lp, const Vec &u) {
  if (static_cast<int>(u.size()) != lp.rows()) throw Error("farkas_margin: dimension mismatch");
  for (int i = 0; i < lp.rows(); ++i) {
    if (lp.senses[i] == Sense::GreaterEqual && u[i] < 0.0) return -kInf;
    if (lp.senses[i] == Sense::LessEqual && u[i] > 0.0) return -kInf;
  }
  const Vec g = lp.matrix.transpose_multiply(u);
  // Cancellation noise in A^T u is not a direction of growth.
  Vec g_scale(g.size(), 0.0);
  for (const auto &t : lp.matrix.entries()) g_scale[t.col] += std::abs(t.value * u[t.row]);
  double sup = 0.0;
  for (int j = 0; j < lp.cols(); ++j) {
    if (std::abs(g[j]) <= 1e-12 * g_scale[j]) continue;
    if (g[j] > 0.0) {
      if (!std::isfinite(lp.upper[j])) return -kInf;
      sup += g[j] * lp.upper[j];
    } else {
      sup += g[j] * lp.lower[j];
    }
  }
  return dot(u, lp.rhs) - sup;
}

double dual_infeasibility(const LpProblem &lp, const LpOutcome &outcome) {
  if (outcome.status != LpStatus::Optimal) throw Error("dual_infeasibility: outcome is not optimal");
  double worst = 0.0;
  for (int i = 0; i < lp.rows(); ++i) {
    if (lp.senses[i] == Sense::GreaterEqual) worst = std::max(worst, -outcome.duals[i]);
    if (lp.senses[i] == Sense::LessEqual) worst = std::max(worst, outcome.duals[i]);
  }
  const Vec aty = lp.matrix.transpose_multiply(outcome.duals);
  for (int j = 0; j < lp.cols(); ++j) {
    const double d = lp.cost[j] - aty[j];
    const double x = outcome.x[j];
    const double scale = 1.0 + std::abs(x);
    const bool at_lower = std::abs(x - lp.lower[j]) <= 1e-7 * scale;
    const bool at_upper = std::isfinite(lp.upper[j]) && std::abs(x - lp.upper[j]) <= 1e-7 * scale;
    if (at_lower && at_upper) continue;
    if (at_lower) {
      worst = std::max(worst, -d);
    } else if (at_upper) {
      worst = std::max(worst, d);
    } else {
      worst = std::max(worst, std::abs(d));
    }
  }
  return worst;
}

double primal_infeasibility(const LpProblem &lp, const Vec &x) {
  double worst = 0.0;
  for (int j = 0; j < lp.cols(); ++j) worst = std::max({worst, lp.lower[j] - x[j], x[j] - lp.upper[j]});
  const Vec ax = lp.matrix.multiply(x);
  for (int i = 0; i < lp.rows(); ++i) {
    switch (lp.senses[i]) {
      case Sense::GreaterEqual: worst = std::max(worst, lp.rhs[i] - ax[i]); break;
      case Sense::LessEqual: worst = std::max(worst, ax[i] - lp.rhs[i]); break;
      case Sense::Equal: worst = std::max(worst, std::abs(ax[i] - lp.rhs[i])); break;
    }
  }
  return worst;
}

}  // namespace qbenders
