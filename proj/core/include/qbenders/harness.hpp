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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qbenders/backends.hpp"
#include "qbenders/benders.hpp"
#include "qbenders/mip.hpp"
#include "qbenders/model.hpp"

namespace qbenders {

enum class SolverKind { Direct, BendersExact, BendersSa, BendersMock };
const char *to_string(SolverKind kind);
SolverKind solver_kind_from_string(const std::string &name);

/// Every tunable of a run. Sources are layered: defaults, then a JSON config
/// file (apply_settings_json), then command-line flags.
struct RunSettings {
  double gap_tol = 0.05;
  int max_iterations = 100;
  double time_limit = 0.0;
  int multi_cut = 1;
  bool valid_inequalities = true;
  bool relaxed_master_first_iteration = false;
  int neighbourhood_evaluations = 8;
  std::uint64_t seed = 0;
  SamplerParams sampler;
  MockAnnealerParams mock;
  PenaltyPolicy penalty;
  double zeta_step = 0.1;
  double direct_gap_tol = 1e-6;
  long node_limit = 500000;

  RunSettings();
};

/// Overwrite the fields present in a JSON config object (format
/// "qbenders-config", version 1). Unknown keys are rejected by path.
void apply_settings_json(RunSettings &settings, const std::string &json_text);
std::string settings_to_json(const RunSettings &settings);

struct RunReport {
  std::string instance;
  std::string config;
  int steps = 0;  // MES time steps when known
  std::string status;
  bool success = false;  // optimal or within the gap tolerance
  double objective = kInf;
  double lb_static = -kInf;
  double gap_static = kInf;
  std::optional<double> reference;
  std::optional<double> gap_reference;
  double master_bound = -kInf;
  int iterations = 0;
  long nodes = 0;
  int optimality_cuts = 0;
  int feasibility_cuts = 0;
  int duplicate_cuts = 0;
  int early_stops = 0;
  Timings timings;
  SamplerMeta sampler;
  std::uint64_t seed = 0;
  std::vector<IterationRecord> history;
  Vec design;  // raw values of the integer variables
};

/// Solve one instance with one configuration. reference, when given, is a
/// known optimum used for the reference gap.
RunReport run_solver(const std::string &instance_id, const Model &model, SolverKind kind, const RunSettings &settings,
                     std::optional<double> reference = std::nullopt, const IterationLogger &logger = {});

std::string report_to_json(const RunReport &report);
RunReport report_from_json(const std::string &text);

/// One JSON object per line: every iteration record, then the final report.
void write_run_log(std::ostream &out, const RunReport &report);
void write_summary_csv(std::ostream &out, const std::vector<RunReport> &reports);
/// Rows x = steps, one column of total seconds per config.
void write_plot_csv(std::ostream &out, const std::vector<RunReport> &reports);

struct Extrapolation {
  double raw_total = 0.0;
  double best_total = 0.0;
  double data_processing = 0.0;
  double subproblem = 0.0;
  double device_per_task = 0.0;
  int iterations = 0;
};

/// Best case if data processing ran 10x faster and each master problem
/// needed one annealer task: 0.1 x data-processing + subproblem + per-task
/// device time x iterations.
Extrapolation extrapolate(const RunReport &report);
std::string extrapolation_to_json(const Extrapolation &e, const RunReport &report);

/// Expected ordering of total times on one instance: direct <= benders-exact
/// <= benders-sa. Returns one human-readable flag per violation.
std::vector<std::string> ordering_flags(const std::vector<RunReport> &reports);

}  // namespace qbenders
