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
#include "qbenders/benders.hpp"
#include "qbenders/mes.hpp"

using namespace qbenders;

namespace {

// Two integers, one continuous: a pure-integer row, a tightening row, a
// linking row and a continuous bound.
Model routing_model() {
  Model m;
  const int y1 = m.add_variable("y1", VarKind::Integer, 0, 3, 2.0);
  const int y2 = m.add_variable("y2", VarKind::Binary, 0, 1, 1.0);
  const int x = m.add_variable("x", VarKind::Continuous, 0, kInf, 1.0);
  m.add_constraint("cover", Sense::GreaterEqual, 1.0, {{y1, 1.0}, {y2, 1.0}});
  m.add_constraint("vi:either", Sense::LessEqual, 3.0, {{y1, 1.0}, {y2, 1.0}});
  m.add_constraint("link", Sense::GreaterEqual, 2.0, {{x, 1.0}, {y1, 1.0}});
  m.add_constraint("cap", Sense::LessEqual, 5.0, {{x, 1.0}});
  return m;
}

double full_value(const StandardMilp &m, const testing::Enumeration &e, std::size_t k, const Vec &y) {
  return e.value[k] + dot(m.d_cost, y) + m.objective_constant;
}

}  // namespace

TEST_CASE("decomposition routes pure-integer rows to the master") {
  const StandardMilp m = normalize(routing_model());
  auto [master, sub] = decompose(m);
  REQUIRE(master.rows.size() == 2);
  int vi = 0;
  for (const auto &r : master.rows) vi += r.valid_inequality ? 1 : 0;
  CHECK(vi == 1);
  CHECK(sub.rows.size() == 2);
  CHECK(sub.n_int == 2);
  CHECK(sub.n_cont == 1);
  CHECK(master.n_int == 2);

  BendersConfig cfg;
  cfg.use_valid_inequalities = false;
  const BendersState s = initialize(m, cfg);
  CHECK(s.master.rows.size() == 1);
  CHECK_FALSE(s.master.rows[0].valid_inequality);
}

TEST_CASE("cuts are tight where generated and never overestimate") {
  for (int seed = 0; seed < 10; ++seed) {
    CAPTURE(seed);
    const StandardMilp m = normalize(testing::random_milp(static_cast<std::uint64_t>(seed)));
    const testing::Enumeration e = testing::enumerate(m);
    const auto points = testing::integer_points(m);
    BendersState s = initialize(m, BendersConfig{});
    for (std::size_t g = 0; g < points.size(); g += 7) {
      const auto &ev = evaluate_candidate(s, points[g], CutSource::SubproblemDual);
      if (!ev.cut) continue;
      const Cut &cut = *ev.cut;
      if (cut.kind == CutKind::Optimality) {
        CHECK(cut.value(points[g]) == doctest::Approx(ev.value).epsilon(1e-6));
        for (std::size_t k = 0; k < points.size(); ++k) {
          if (!std::isinf(e.value[k])) CHECK(cut.value(points[k]) <= e.value[k] + 1e-6 * std::max(1.0, std::abs(e.value[k])));
        }
      } else {
        CHECK(cut.value(points[g]) > 0.0);
        double largest = std::abs(cut.rhs);
        for (double v : cut.coeff_y) largest = std::max(largest, std::abs(v));
        CHECK(largest == doctest::Approx(1.0));
        for (std::size_t k = 0; k < points.size(); ++k) {
          if (!std::isinf(e.value[k])) CHECK(cut.value(points[k]) <= 1e-6);
        }
      }
    }
  }
}

TEST_CASE("exact backend reproduces enumeration on the corpus") {
  const auto ref = testing::corpus_reference();
  BendersConfig cfg;
  cfg.gap_tol = 1e-9;
  cfg.max_iterations = 2000;
  for (int seed = 0; seed < testing::kCorpusSize; ++seed) {
    CAPTURE(seed);
    const StandardMilp m = normalize(testing::random_milp(static_cast<std::uint64_t>(seed)));
    auto backend = make_exact_backend();
    const BendersResult r = run(m, *backend, cfg);
    if (std::isinf(ref[seed])) {
      CHECK(r.status == Termination::Infeasible);
      continue;
    }
    REQUIRE(r.status == Termination::OptimalWithinGap);
    CHECK(r.objective() == doctest::Approx(ref[seed]).epsilon(1e-6));
    CHECK(m.max_violation(r.state.x, r.state.y) <= 1e-7);
    const Timings &t = r.state.timings;
    CHECK(t.master + t.subproblem + t.data_processing <= t.total * (1.0 + 1e-9) + 1e-6);
  }
}

TEST_CASE("gap is relative to the static bound and absolute at zero") {
  BendersState s;
  s.ub = 110.0;
  s.lb_static = 100.0;
  CHECK(s.gap() == doctest::Approx(0.1));
  s.lb_static = -100.0;
  CHECK(s.gap() == doctest::Approx(2.1));
  s.lb_static = 0.0;
  CHECK(s.gap() == doctest::Approx(110.0));
  s.ub = kInf;
  CHECK(std::isinf(s.gap()));
}

TEST_CASE("relaxed master candidate rounds half toward zero") {
  MasterProblem master;
  master.n_int = 2;
  master.d_cost = {1.0, 1.0};
  master.int_upper = {3.0, 3.0};
  master.int_names = {"a", "b"};
  master.zeta_lo = 0.0;
  master.zeta_hi = 10.0;
  master.rows.push_back({"a", {1.0, 0.0}, 1.5, Sense::GreaterEqual, false});
  master.rows.push_back({"b", {0.0, 1.0}, 1.6, Sense::GreaterEqual, false});
  const auto y = relaxed_master_candidate(master);
  REQUIRE(y);
  CHECK((*y)[0] == 1.0);
  CHECK((*y)[1] == 2.0);

  master.rows.push_back({"c", {1.0, 0.0}, 4.0, Sense::GreaterEqual, false});
  CHECK_FALSE(relaxed_master_candidate(master));
}

TEST_CASE("iteration limit stops the loop") {
  const StandardMilp m = normalize(build_instance(default_dataset(0, 3)).model);
  BendersConfig cfg;
  cfg.gap_tol = 1e-12;
  cfg.max_iterations = 2;
  auto backend = make_exact_backend();
  int logged = 0;
  const BendersResult r = run(m, *backend, cfg, [&](const IterationRecord &) { ++logged; });
  CHECK(r.status == Termination::IterationLimit);
  CHECK(r.state.iteration == 2);
  CHECK(logged == 2);
  CHECK(r.state.history.size() == 2);
}

TEST_CASE("relaxed first iteration feeds a relaxed-master cut") {
  const StandardMilp m = normalize(testing::random_milp(1));
  BendersConfig cfg;
  cfg.gap_tol = 1e-9;
  cfg.max_iterations = 2000;
  cfg.relaxed_master_first_iteration = true;
  auto backend = make_exact_backend();
  const BendersResult r = run(m, *backend, cfg);
  REQUIRE(r.status == Termination::OptimalWithinGap);
  CHECK(r.objective() == doctest::Approx(testing::corpus_reference()[1]).epsilon(1e-6));
  bool relaxed = false;
  for (const auto &c : r.state.master.cuts) relaxed = relaxed || c.source == CutSource::RelaxedMaster;
  CHECK(relaxed);
}

TEST_CASE("sampling backend returns a priced feasible design") {
  BendersConfig cfg;
  cfg.max_iterations = 30;
  cfg.neighbourhood_evaluations = 4;
  for (int seed : {0, 2, 3}) {
    CAPTURE(seed);
    const StandardMilp m = normalize(testing::random_milp(static_cast<std::uint64_t>(seed)));
    const testing::Enumeration e = testing::enumerate(m);
    QuboBackendConfig qc;
    qc.sampler = SamplerKind::Decomposed;
    qc.params.reads = 20;
    qc.params.seed = static_cast<std::uint64_t>(seed);
    auto backend = make_qubo_backend(qc);
    const BendersResult r = run(m, *backend, cfg);
    REQUIRE(r.state.has_incumbent);
    CHECK(r.objective() >= e.objective - 1e-6 * std::max(1.0, std::abs(e.objective)));
    CHECK(m.max_violation(r.state.x, r.state.y) <= 1e-7);
    if (r.status == Termination::OptimalWithinGap) CHECK(r.state.gap() <= cfg.gap_tol + 1e-12);
    const auto points = testing::integer_points(m);
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (points[k] == r.state.y) CHECK(r.objective() == doctest::Approx(full_value(m, e, k, points[k])));
    }
  }
}

TEST_CASE("configuration is validated") {
  BendersConfig cfg;
  cfg.gap_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.multi_cut = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.neighbourhood_evaluations = -1;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
