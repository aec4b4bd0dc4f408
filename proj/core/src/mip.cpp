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
#include "qbenders/mip.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

namespace qbenders {

const char *to_string(MipStatus status) {
  switch (status) {
    case MipStatus::Optimal: return "optimal";
    case MipStatus::Infeasible: return "infeasible";
    case MipStatus::Unbounded: return "unbounded";
    case MipStatus::NodeLimit: return "node-limit";
  }
  return "?";
}

double relative_gap(double incumbent, double bound) {
  if (!std::isfinite(incumbent)) return kInf;
  return std::max(0.0, incumbent - bound) / std::max(std::abs(incumbent), 1.0);
}

namespace {

struct Node {
  long id = 0;
  double bound = 0.0;
  Vec lo;
  Vec hi;
  Vec lp_x;  // relaxation solution over [x, y]
};

struct NodeOrder {
  bool operator()(const Node &a, const Node &b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

class BranchAndBound {
public:
  BranchAndBound(const StandardMilp &m, const MipOptions &opt) : m_(m), opt_(opt), base_(lp_relaxation(m)) {}

  MipOutcome run() {
    const auto start = std::chrono::steady_clock::now();
    Node root;
    root.lo.assign(static_cast<std::size_t>(m_.n_int), 0.0);
    root.hi = m_.int_upper;
    bool unbounded = false;
    if (evaluate(root, unbounded)) {
      open_.push(std::move(root));
    }
    if (unbounded) {
      out_.status = MipStatus::Unbounded;
      out_.wall_seconds = elapsed(start);
      return out_;
    }

    bool hit_limit = false;
    while (!open_.empty()) {
      if (out_.nodes >= opt_.node_limit) {
        hit_limit = true;
        break;
      }
      Node node = open_.top();
      open_.pop();
      if (prunable(node.bound)) continue;
      process(node);
    }

    out_.bound = out_.objective;
    if (!open_.empty()) out_.bound = std::min(out_.bound, open_.top().bound);
    if (hit_limit) {
      out_.status = MipStatus::NodeLimit;
    } else {
      out_.status = std::isfinite(out_.objective) ? MipStatus::Optimal : MipStatus::Infeasible;
      if (out_.status == MipStatus::Optimal) out_.bound = std::min(out_.objective, best_pruned_bound());
    }
    out_.gap = relative_gap(out_.objective, out_.bound);
    out_.wall_seconds = elapsed(start);
    return out_;
  }

private:
  static double elapsed(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  double best_pruned_bound() const { return std::min(out_.objective, pruned_bound_); }

  bool prunable(double bound) {
    if (!std::isfinite(out_.objective)) return false;
    const double slack = opt_.gap_tol * std::max(std::abs(out_.objective), 1.0);
    if (bound >= out_.objective - slack) {
      pruned_bound_ = std::min(pruned_bound_, bound);
      return true;
    }
    return false;
  }

  /// Solves the node relaxation; false when the node can be discarded.
  bool evaluate(Node &node, bool &unbounded) {
    ++out_.nodes;
    node.id = next_id_++;
    LpProblem lp = base_;
    for (int j = 0; j < m_.n_int; ++j) {
      lp.lower[m_.n_cont + j] = node.lo[j];
      lp.upper[m_.n_cont + j] = node.hi[j];
    }
    LpOutcome r = solve_lp(lp, opt_.lp);
    if (r.status == LpStatus::Unbounded) {
      unbounded = true;
      return false;
    }
    if (r.status != LpStatus::Optimal) {
      if (r.status != LpStatus::Infeasible) ++out_.lp_failures;
      return false;
    }
    node.bound = r.objective + m_.objective_constant;
    node.lp_x = std::move(r.x);
    return !prunable(node.bound);
  }

  bool is_excluded(const Vec &y) const {
    for (const auto &p : opt_.excluded) {
      bool same = true;
      for (int j = 0; j < m_.n_int && same; ++j) same = std::abs(p[j] - y[j]) < 0.5;
      if (same) return true;
    }
    return false;
  }

  void push_child(const Node &parent, int j, double lo, double hi) {
    if (lo > hi) return;
    Node child;
    child.lo = parent.lo;
    child.hi = parent.hi;
    child.lo[j] = lo;
    child.hi[j] = hi;
    bool unbounded = false;
    if (evaluate(child, unbounded)) open_.push(std::move(child));
  }

  void process(const Node &node) {
    int branch = -1;
    double best_frac = 1.0;
    for (int j = 0; j < m_.n_int; ++j) {
      const double v = node.lp_x[m_.n_cont + j];
      const double frac = v - std::floor(v);
      if (std::min(frac, 1.0 - frac) <= opt_.integrality_tol) continue;
      const double dist = std::abs(frac - 0.5);
      if (dist < best_frac) {
        best_frac = dist;
        branch = j;
      }
    }
    if (branch >= 0) {
      const double v = node.lp_x[m_.n_cont + branch];
      push_child(node, branch, node.lo[branch], std::floor(v));
      push_child(node, branch, std::ceil(v), node.hi[branch]);
      return;
    }

    Vec y(static_cast<std::size_t>(m_.n_int));
    for (int j = 0; j < m_.n_int; ++j) y[j] = std::round(node.lp_x[m_.n_cont + j]);

    if (is_excluded(y)) {
      int j = 0;
      while (j < m_.n_int && node.lo[j] == node.hi[j]) ++j;
      if (j == m_.n_int) return;
      push_child(node, j, node.lo[j], y[j] - 1.0);
      push_child(node, j, y[j] + 1.0, node.hi[j]);
      push_child(node, j, y[j], y[j]);
      return;
    }

    // Integral relaxation: re-solve the continuous part with y pinned so the
    // incumbent is exactly integral.
    FixedSubproblem sub = fix_integers(m_, y);
    LpOutcome r = solve_lp(sub.lp, opt_.lp);
    if (r.status != LpStatus::Optimal) {
      ++out_.lp_failures;
      return;
    }
    const double value = r.objective + sub.constant;
    if (value < out_.objective) {
      out_.objective = value;
      out_.x = std::move(r.x);
      out_.y = std::move(y);
    }
    pruned_bound_ = std::min(pruned_bound_, node.bound);
  }

  const StandardMilp &m_;
  const MipOptions &opt_;
  const LpProblem base_;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open_;
  MipOutcome out_;
  long next_id_ = 0;
  double pruned_bound_ = kInf;
};

}  // namespace

MipOutcome branch_and_bound(const StandardMilp &m, const MipOptions &options) {
  m.validate();
  for (const auto &p : options.excluded) {
    if (static_cast<int>(p.size()) != m.n_int) throw Error("branch_and_bound: excluded point has wrong dimension");
  }
  BranchAndBound bb(m, options);
  return bb.run();
}

}  // namespace qbenders
