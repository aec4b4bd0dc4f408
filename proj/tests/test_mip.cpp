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
#include "qbenders/mes.hpp"
#include "qbenders/mip.hpp"

using namespace qbenders;

TEST_CASE("branch and bound matches the external solver on the corpus") {
  const auto ref = testing::corpus_reference();
  for (int seed = 0; seed < testing::kCorpusSize; ++seed) {
    CAPTURE(seed);
    const StandardMilp m = normalize(testing::random_milp(static_cast<std::uint64_t>(seed)));
    const MipOutcome r = branch_and_bound(m);
    if (std::isinf(ref[seed])) {
      CHECK(r.status == MipStatus::Infeasible);
      continue;
    }
    REQUIRE(r.status == MipStatus::Optimal);
    CHECK(r.objective == doctest::Approx(ref[seed]).epsilon(1e-9));
    CHECK(m.max_violation(r.x, r.y) <= 1e-7);
    CHECK(r.bound <= r.objective + 1e-9);
  }
}

TEST_CASE("branch and bound matches the external solver on the MES instances") {
  for (const auto &ref : testing::kMesReference) {
    CAPTURE(ref.steps);
    const StandardMilp m = normalize(build_instance(default_dataset(0, ref.steps)).model);
    const MipOutcome r = branch_and_bound(m);
    REQUIRE(r.status == MipStatus::Optimal);
    CHECK(r.objective == doctest::Approx(ref.optimum).epsilon(1e-7));
  }
}

TEST_CASE("excluded points are never returned") {
  const StandardMilp m = normalize(testing::random_milp(3));
  MipOptions opt;
  const MipOutcome first = branch_and_bound(m, opt);
  REQUIRE(first.status == MipStatus::Optimal);
  opt.excluded.push_back(first.y);
  const MipOutcome second = branch_and_bound(m, opt);
  REQUIRE(second.status == MipStatus::Optimal);
  CHECK(second.y != first.y);
  CHECK(second.objective >= first.objective - 1e-9);

  // The second-best value agrees with enumeration over the remaining points.
  const testing::Enumeration e = testing::enumerate(m);
  const auto points = testing::integer_points(m);
  double runner_up = kInf;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k] == first.y || std::isinf(e.value[k])) continue;
    runner_up = std::min(runner_up, e.value[k] + dot(m.d_cost, points[k]) + m.objective_constant);
  }
  CHECK(second.objective == doctest::Approx(runner_up).epsilon(1e-9));
}

TEST_CASE("node limit reports the incumbent and a valid bound") {
  const StandardMilp m = normalize(build_instance(default_dataset(0, 4)).model);
  MipOptions opt;
  opt.node_limit = 3;
  const MipOutcome r = branch_and_bound(m, opt);
  CHECK(r.status == MipStatus::NodeLimit);
  CHECK(r.bound <= testing::kMesReference[2].optimum + 1e-6);
}

TEST_CASE("relative gap uses max(|incumbent|, 1) as denominator") {
  CHECK(relative_gap(100.0, 90.0) == doctest::Approx(0.1));
  CHECK(relative_gap(0.5, 0.0) == doctest::Approx(0.5));
  CHECK(relative_gap(kInf, 0.0) == kInf);
  CHECK(relative_gap(1.0, 2.0) == 0.0);
}
