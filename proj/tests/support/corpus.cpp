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

#include "corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "qbenders/lp.hpp"

namespace qbenders::testing {
namespace {

double half_steps(std::mt19937_64 &rng, double lo, double hi) {
  std::uniform_int_distribution<int> d(static_cast<int>(lo * 2), static_cast<int>(hi * 2));
  return d(rng) / 2.0;
}

}  // namespace

Model random_milp(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 17);
  auto uni = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  Model m;
  m.name = "random-" + std::to_string(seed);
  const int n_int = uni(2, 10);
  const int n_cont = uni(2, 15);

  std::vector<int> int_idx, cont_idx;
  std::vector<double> cont_upper;
  long box = 1;
  for (int k = 0; k < n_int; ++k) {
    int u = uni(1, 3);
    while (box * (u + 1) > 1024 && u > 1) --u;
    if (box * (u + 1) > 1024) u = 0;
    box *= u + 1;
    const auto kind = u == 1 ? VarKind::Binary : VarKind::Integer;
    int_idx.push_back(m.add_variable("y" + std::to_string(k), kind, 0, u, half_steps(rng, -6, 6)));
  }
  for (int j = 0; j < n_cont; ++j) {
    const double upper = uni(2, 10);
    cont_upper.push_back(upper);
    cont_idx.push_back(m.add_variable("x" + std::to_string(j), VarKind::Continuous, 0, upper, half_steps(rng, 0.5, 5)));
  }

  // Demand rows: sum a x + sum b y >= rhs, sometimes out of reach for some y.
  const int demand = uni(2, 6);
  for (int r = 0; r < demand; ++r) {
    std::vector<std::pair<int, double>> terms;
    double reach = 0.0;
    for (int j = 0; j < n_cont; ++j) {
      if (uni(0, 2) == 0) continue;
      const double a = half_steps(rng, 0.5, 3);
      terms.emplace_back(cont_idx[j], a);
      reach += a * cont_upper[j];
    }
    for (int k = 0; k < n_int; ++k) {
      if (uni(0, 2) != 0) continue;
      const double b = half_steps(rng, -3, 3);
      if (b != 0.0) terms.emplace_back(int_idx[k], b);
    }
    if (terms.empty()) continue;
    const double rhs = std::round(std::uniform_real_distribution<double>(0.2, 0.7)(rng) * std::max(reach, 2.0) * 2) / 2;
    const Sense sense = uni(0, 7) == 0 ? Sense::Equal : Sense::GreaterEqual;
    m.add_constraint("demand" + std::to_string(r), sense, rhs, std::move(terms));
  }
  // Linking rows: x_j <= U_j y_k.
  const int links = uni(1, std::min(n_cont, 5));
  for (int r = 0; r < links; ++r) {
    const int j = uni(0, n_cont - 1), k = uni(0, n_int - 1);
    m.add_constraint("link" + std::to_string(r), Sense::LessEqual, 0.0,
                     {{cont_idx[j], 1.0}, {int_idx[k], -cont_upper[j]}});
  }
  // Occasional budget row on the continuous side only.
  if (uni(0, 2) == 0) {
    std::vector<std::pair<int, double>> terms;
    double full = 0.0;
    for (int j = 0; j < n_cont; ++j) {
      terms.emplace_back(cont_idx[j], 1.0);
      full += cont_upper[j];
    }
    m.add_constraint("budget", Sense::LessEqual, std::round(full * 0.8), std::move(terms));
  }
  // Pure-integer rows.
  const int pure = uni(0, 2);
  for (int r = 0; r < pure; ++r) {
    std::vector<std::pair<int, double>> terms;
    for (int k = 0; k < n_int; ++k) {
      const int a = uni(-2, 3);
      if (a != 0 && uni(0, 1) == 0) terms.emplace_back(int_idx[k], static_cast<double>(a));
    }
    if (terms.empty()) continue;
    m.add_constraint("pure" + std::to_string(r), Sense::GreaterEqual, static_cast<double>(uni(-1, 2)),
                     std::move(terms));
  }
  return m;
}

std::vector<Vec> integer_points(const StandardMilp &m) {
  std::vector<Vec> out;
  Vec y(static_cast<std::size_t>(m.n_int), 0.0);
  while (true) {
    out.push_back(y);
    int k = 0;
    for (; k < m.n_int; ++k) {
      if (y[k] < m.int_upper[k]) {
        y[k] += 1.0;
        break;
      }
      y[k] = 0.0;
    }
    if (k == m.n_int) break;
  }
  return out;
}

Enumeration enumerate(const StandardMilp &m) {
  Enumeration e;
  for (const Vec &y : integer_points(m)) {
    const FixedSubproblem sub = fix_integers(m, y);
    const LpOutcome lp = solve_lp(sub.lp);
    if (lp.status == LpStatus::Optimal) {
      ++e.feasible_points;
      e.value.push_back(lp.objective);
      const double total = lp.objective + sub.constant;
      if (total < e.objective) {
        e.objective = total;
        e.y = y;
      }
    } else {
      if (lp.status != LpStatus::Infeasible) throw Error("enumerate: LP status " + std::string(to_string(lp.status)));
      ++e.infeasible_points;
      e.value.push_back(kInf);
    }
  }
  return e;
}

RandomMaster random_master(std::uint64_t seed, bool integer_data, int max_int) {
  std::mt19937_64 rng(seed * 0xD1B54A32D192ED03ULL + 5);
  auto uni = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  // Integer data, or tenths.
  auto value = [&](int a, int b) { return integer_data ? uni(a, b) : uni(10 * a, 10 * b) / 10.0; };
  RandomMaster out;
  out.zeta_step = integer_data ? 1.0 : 0.1;
  MasterProblem &mp = out.master;
  mp.n_int = uni(2, max_int);
  for (int j = 0; j < mp.n_int; ++j) {
    mp.int_upper.push_back(uni(0, 3) == 0 ? 3.0 : 1.0);
    mp.d_cost.push_back(value(-4, 4));
    mp.int_names.push_back("y" + std::to_string(j));
  }
  mp.objective_constant = value(-2, 2);
  if (uni(0, 1) == 0) {
    MasterRow row;
    row.name = "pure";
    row.coeff.assign(static_cast<std::size_t>(mp.n_int), 0.0);
    for (auto &c : row.coeff) c = uni(0, 1);
    row.coeff[0] = 1.0;
    row.rhs = 1.0;
    row.sense = uni(0, 3) == 0 ? Sense::Equal : Sense::GreaterEqual;
    mp.rows.push_back(row);
  }
  const int cuts = uni(1, 2);
  for (int k = 0; k < cuts; ++k) {
    Cut c;
    c.kind = CutKind::Optimality;
    c.coeff_y.assign(static_cast<std::size_t>(mp.n_int), 0.0);
    for (auto &v : c.coeff_y) v = uni(0, 1) ? value(-2, 2) : 0.0;
    c.rhs = value(0, 2);
    mp.cuts.push_back(c);
  }
  if (uni(0, 2) == 0) {
    // Feasibility cut 0 >= rhs + coeff.y generated at the all-zero point.
    Cut c;
    c.kind = CutKind::Feasibility;
    c.coeff_zeta = 0;
    c.coeff_y.assign(static_cast<std::size_t>(mp.n_int), 0.0);
    c.coeff_y[static_cast<std::size_t>(uni(0, mp.n_int - 1))] = -1.0;
    c.rhs = 1.0;
    c.origin_y.assign(static_cast<std::size_t>(mp.n_int), 0.0);
    mp.cuts.push_back(c);
  }
  mp.zeta_lo = 0.0;
  mp.zeta_hi = integer_data ? 7.0 : 3.1;
  return out;
}

MasterOptimum brute_force_master(const MasterProblem &master) {
  MasterOptimum best;
  StandardMilp box;
  box.n_int = master.n_int;
  box.int_upper = master.int_upper;
  for (const Vec &y : integer_points(box)) {
    if (!master.y_feasible(y)) continue;
    const double z = master.zeta_required(y);
    if (z > master.zeta_hi + 1e-9) continue;
    const double obj = master.objective(y, z);
    if (obj < best.objective - 1e-9) {
      best.objective = obj;
      best.argmin.assign(1, y);
    } else if (obj <= best.objective + 1e-9) {
      best.argmin.push_back(y);
    }
  }
  return best;
}

std::vector<double> corpus_reference() {
  std::ifstream in(std::string(QBENDERS_TEST_DATA) + "/corpus_reference.txt");
  if (!in) throw Error("corpus_reference.txt not found");
  std::vector<double> out(kCorpusSize, std::nan(""));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    int seed = 0;
    std::string value;
    ss >> seed >> value;
    out.at(static_cast<std::size_t>(seed)) = value == "infeasible" ? kInf : std::stod(value);
  }
  return out;
}

}  // namespace qbenders::testing
