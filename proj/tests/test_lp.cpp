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

#include <cmath>

#include "corpus.hpp"
#include "doctest.h"
#include "qbenders/lp.hpp"

using namespace qbenders;

namespace {

LpProblem make_lp(Vec cost, std::vector<Vec> rows, std::vector<Sense> senses, Vec rhs, Vec lower = {},
                  Vec upper = {}) {
  LpProblem lp;
  const int n = static_cast<int>(cost.size());
  std::vector<Triplet> t;
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    for (int j = 0; j < n; ++j) {
      if (rows[i][j] != 0.0) t.push_back({i, j, rows[i][j]});
    }
  }
  lp.matrix = SparseMatrix::from_triplets(static_cast<int>(rows.size()), n, std::move(t));
  lp.cost = std::move(cost);
  lp.senses = std::move(senses);
  lp.rhs = std::move(rhs);
  lp.lower = lower.empty() ? Vec(static_cast<std::size_t>(n), 0.0) : lower;
  lp.upper = upper.empty() ? Vec(static_cast<std::size_t>(n), kInf) : upper;
  return lp;
}

}  // namespace

TEST_CASE("textbook production LP: optimum, duals and reduced costs") {
  // max 3x + 5y  s.t.  x <= 4, 2y <= 12, 3x + 2y <= 18; optimum 36 at (2, 6)
  // with shadow prices (0, 1.5, 1) in maximisation form.
  const auto lp = make_lp({-3, -5}, {{1, 0}, {0, 2}, {3, 2}}, {Sense::LessEqual, Sense::LessEqual, Sense::LessEqual},
                          {4, 12, 18});
  const LpOutcome r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-36.0));
  CHECK(r.x[0] == doctest::Approx(2.0));
  CHECK(r.x[1] == doctest::Approx(6.0));
  CHECK(r.duals[0] == doctest::Approx(0.0));
  CHECK(r.duals[1] == doctest::Approx(-1.5));
  CHECK(r.duals[2] == doctest::Approx(-1.0));
  CHECK(dual_infeasibility(lp, r) <= 1e-9);
}

TEST_CASE(">= rows carry nonnegative duals and equality rows free ones") {
  // min x + 2y  s.t. x + y >= 3, x - y = -1  ->  x = 1, y = 2, objective 5.
  const auto lp = make_lp({1, 2}, {{1, 1}, {1, -1}}, {Sense::GreaterEqual, Sense::Equal}, {3, -1});
  const LpOutcome r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(5.0));
  CHECK(r.duals[0] == doctest::Approx(1.5));
  CHECK(r.duals[1] == doctest::Approx(-0.5));
}

TEST_CASE("cycling example terminates at the optimum") {
  // Beale's degenerate LP; plain Dantzig pricing cycles on it.
  const auto lp = make_lp({-0.75, 150, -0.02, 6},
                          {{0.25, -60, -0.04, 9}, {0.5, -90, -0.02, 3}, {0, 0, 1, 0}},
                          {Sense::LessEqual, Sense::LessEqual, Sense::LessEqual}, {0, 0, 1});
  const LpOutcome r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-0.05));
}

TEST_CASE("bounded variables are handled without extra rows") {
  // min -x - y  with x in [1, 2], y in [0.5, 3], x + y <= 4.
  const auto lp = make_lp({-1, -1}, {{1, 1}}, {Sense::LessEqual}, {4}, {1, 0.5}, {2, 3});
  const LpOutcome r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-4.0));
  CHECK(primal_infeasibility(lp, r.x) <= 1e-9);
}

TEST_CASE("infeasible LP returns a Farkas certificate") {
  // x + y >= 5 with x, y in [0, 2].
  const auto lp = make_lp({1, 1}, {{1, 1}}, {Sense::GreaterEqual}, {5}, {0, 0}, {2, 2});
  const LpOutcome r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Infeasible);
  CHECK(farkas_margin(lp, r.ray) > 0.0);
  // Margin of the normalised ray: u = 1 gives 5 - 4 = 1.
  CHECK(farkas_margin(lp, r.ray) / r.ray[0] == doctest::Approx(1.0));
  // A wrong-signed multiplier certifies nothing.
  CHECK(farkas_margin(lp, {-1.0}) == -kInf);
}

TEST_CASE("unbounded LP returns an improving direction") {
  const auto lp = make_lp({-1, 0}, {{1, -1}}, {Sense::LessEqual}, {1});
  const LpOutcome r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Unbounded);
  REQUIRE(r.ray.size() == 2);
  CHECK(r.ray[0] > 0.0);
  CHECK(r.ray[0] - r.ray[1] <= 1e-9);
}

TEST_CASE("corpus subproblems satisfy the optimality or infeasibility certificates") {
  int optimal = 0, infeasible = 0;
  for (int seed = 0; seed < testing::kCorpusSize; seed += 3) {
    const StandardMilp m = normalize(testing::random_milp(static_cast<std::uint64_t>(seed)));
    const auto points = testing::integer_points(m);
    for (std::size_t k = 0; k < points.size(); k += 7) {
      const LpProblem lp = fix_integers(m, points[k]).lp;
      const LpOutcome r = solve_lp(lp);
      if (r.status == LpStatus::Optimal) {
        ++optimal;
        CHECK(primal_infeasibility(lp, r.x) <= 1e-7);
        CHECK(dual_infeasibility(lp, r) <= 1e-7);
        // x >= 0 only, so strong duality reads c.x = b.duals.
        CHECK(r.objective == doctest::Approx(dot(lp.rhs, r.duals)).epsilon(1e-9));
      } else {
        REQUIRE(r.status == LpStatus::Infeasible);
        ++infeasible;
        CHECK(farkas_margin(lp, r.ray) > 0.0);
      }
    }
  }
  CHECK(optimal > 50);
  CHECK(infeasible > 50);
}
