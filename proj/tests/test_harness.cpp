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

#include <sstream>
#include <string>

#include "corpus.hpp"
#include "doctest.h"
#include "qbenders/harness.hpp"
#include "qbenders/mes.hpp"

using namespace qbenders;

namespace {

RunReport timed(const std::string &instance, const std::string &config, double total) {
  RunReport r;
  r.instance = instance;
  r.config = config;
  r.timings.total = total;
  return r;
}

int count_lines(const std::string &text) {
  int n = 0;
  for (char c : text) n += c == '\n' ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("best-case extrapolation") {
  RunReport r;
  r.instance = "mes-T3";
  r.config = "benders-mock";
  r.timings.data_processing = 100.0;
  r.timings.subproblem = 5.0;
  r.timings.total = 140.0;
  r.sampler.tasks = 50;
  r.sampler.device_seconds = 1.0;
  r.iterations = 10;
  const Extrapolation e = extrapolate(r);
  CHECK(e.best_total == 15.2);
  CHECK(e.device_per_task == 0.02);
  CHECK(e.raw_total == 140.0);

  r.timings.data_processing = 0.0;
  CHECK(extrapolate(r).best_total == doctest::Approx(5.2).epsilon(1e-15));

  r.sampler.tasks = 0;
  CHECK_THROWS_AS(extrapolate(r), Error);
  r.sampler.tasks = 3;
  r.sampler.device_seconds = 0.0;
  CHECK_THROWS_AS(extrapolate(r), Error);

  r.sampler.device_seconds = 0.3;
  const std::string json = extrapolation_to_json(extrapolate(r), r);
  CHECK(json.find("qbenders-extrapolation") != std::string::npos);
}

TEST_CASE("settings JSON overrides only what it names") {
  RunSettings s;
  const RunSettings defaults;
  apply_settings_json(s, R"({"format": "qbenders-config", "version": 1, "gap_tol": 0.01, "sampler": {"reads": 7}})");
  CHECK(s.gap_tol == 0.01);
  CHECK(s.sampler.reads == 7);
  CHECK(s.sampler.repeats == defaults.sampler.repeats);
  CHECK(s.max_iterations == defaults.max_iterations);

  RunSettings back;
  apply_settings_json(back, settings_to_json(s));
  CHECK(settings_to_json(back) == settings_to_json(s));

  try {
    apply_settings_json(s, R"({"sampler": {"temperature": 3}})");
    FAIL("unknown key accepted");
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find("sampler.temperature") != std::string::npos);
  }
  CHECK_THROWS_AS(apply_settings_json(s, R"({"gap_tol": "tight"})"), Error);
  CHECK_THROWS_AS(apply_settings_json(s, R"({"format": "other"})"), Error);
  CHECK_THROWS_AS(apply_settings_json(s, "[1, 2"), Error);
}

TEST_CASE("solver names round trip") {
  for (auto k : {SolverKind::Direct, SolverKind::BendersExact, SolverKind::BendersSa, SolverKind::BendersMock}) {
    CHECK(solver_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(solver_kind_from_string("quantum"), Error);
}

TEST_CASE("ordering flags name the slower configuration") {
  std::vector<RunReport> reports{timed("a", "direct", 1.0), timed("a", "benders-exact", 2.0),
                                 timed("a", "benders-sa", 3.0), timed("b", "direct", 5.0),
                                 timed("b", "benders-exact", 2.0), timed("b", "benders-sa", 4.0),
                                 timed("b", "benders-mock", 0.1)};
  const auto flags = ordering_flags(reports);
  REQUIRE(flags.size() == 1);
  CHECK(flags[0].rfind("b: direct", 0) == 0);
}

TEST_CASE("runs on the smallest MES instance") {
  const Model model = build_instance(default_dataset(0, 2)).model;
  const double ref = testing::kMesReference[0].optimum;
  RunSettings s;
  s.gap_tol = 1e-6;

  const RunReport direct = run_solver("mes-T2", model, SolverKind::Direct, s, ref);
  CHECK(direct.success);
  CHECK(direct.objective == doctest::Approx(ref).epsilon(1e-7));
  CHECK(direct.design.size() == 20);

  int logged = 0;
  const RunReport exact = run_solver("mes-T2", model, SolverKind::BendersExact, s, ref,
                                     [&](const IterationRecord &) { ++logged; });
  CHECK(exact.success);
  CHECK(exact.objective == doctest::Approx(ref).epsilon(1e-6));
  REQUIRE(exact.gap_reference);
  CHECK(std::abs(*exact.gap_reference) <= 1e-6);
  CHECK(logged == exact.iterations);
  CHECK(exact.history.size() == static_cast<std::size_t>(exact.iterations));
  CHECK(exact.optimality_cuts > 0);
  CHECK_THROWS_AS(extrapolate(exact), Error);

  RunSettings loose;
  const RunReport sa = run_solver("mes-T2", model, SolverKind::BendersSa, loose, ref);
  CHECK(sa.success);
  CHECK(sa.gap_static <= loose.gap_tol);
  CHECK(sa.objective >= ref - 1e-6);
  CHECK(sa.sampler.reads > 0);

  const RunReport mock = run_solver("mes-T2", model, SolverKind::BendersMock, loose, ref);
  CHECK(mock.success);
  CHECK(mock.sampler.tasks > 0);
  CHECK(mock.sampler.device_seconds > 0.0);
  CHECK(extrapolate(mock).best_total > 0.0);

  SUBCASE("report JSON round trips") {
    for (const RunReport *r : {&direct, &exact, &mock}) {
      const std::string text = report_to_json(*r);
      CHECK(report_to_json(report_from_json(text)) == text);
    }
  }
  SUBCASE("log and CSV outputs") {
    std::stringstream log;
    write_run_log(log, exact);
    CHECK(count_lines(log.str()) == exact.iterations + 1);
    CHECK(log.str().find("\"result\"") != std::string::npos);

    std::stringstream csv;
    write_summary_csv(csv, {direct, exact, sa, mock});
    CHECK(count_lines(csv.str()) == 5);
    CHECK(csv.str().rfind("instance,steps,config", 0) == 0);

    std::stringstream plot;
    write_plot_csv(plot, {direct, exact, sa, mock});
    CHECK(count_lines(plot.str()) == 2);
  }
}
