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

// qbenders: solve, compare and inspect hybrid Benders runs.
//
// Settings precedence is flags > --config file > built-in defaults.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qbenders/harness.hpp"
#include "qbenders/mes.hpp"
#include "qbenders/model_io.hpp"

namespace fs = std::filesystem;
using namespace qbenders;

namespace {

enum Exit { kOk = 0, kError = 1, kLimit = 2, kInfeasible = 3, kUnbounded = 4 };

int exit_code(const std::string &status) {
  if (status == "optimal" || status == "optimal-within-gap") return kOk;
  if (status == "infeasible") return kInfeasible;
  if (status == "unbounded") return kUnbounded;
  if (status == "iteration-limit" || status == "time-limit" || status == "node-limit") return kLimit;
  return kError;
}

std::string read_text(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path &path, const std::string &text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

/// Optional flag values; only those given on the command line override the file.
struct Overrides {
  std::optional<double> gap_tol, time_limit, zeta_step, t_hot, t_cold, device_time, queue_latency, direct_gap;
  std::optional<int> max_iterations, multi_cut, reads, repeats, sub_qubo_limit, sweeps_per_bit, workers, init_reads,
      capacity, neighbourhood;
  std::optional<long> node_limit;
  std::optional<std::uint64_t> seed;
  std::optional<bool> valid_inequalities, relaxed_first;
  std::string config_path;

  void attach(CLI::App *app) {
    app->add_option("--config", config_path, "JSON settings file (format qbenders-config)")->check(CLI::ExistingFile);
    app->add_option("--gap-tol", gap_tol, "Benders termination gap against the static bound");
    app->add_option("--max-iterations", max_iterations);
    app->add_option("--time-limit", time_limit, "Seconds, 0 for none");
    app->add_option("--multi-cut", multi_cut, "Master candidates turned into cuts per iteration");
    app->add_option("--valid-inequalities", valid_inequalities, "Route vi: rows into the master (true/false)");
    app->add_option("--relaxed-first", relaxed_first, "Round the LP relaxation for the first master");
    app->add_option("--neighbourhood", neighbourhood, "Incumbent neighbours priced per iteration");
    app->add_option("--seed", seed);
    app->add_option("--zeta-step", zeta_step, "Discretization step of the surrogate");
    app->add_option("--reads", reads);
    app->add_option("--repeats", repeats, "Improvement-free passes before the decomposed sampler stops");
    app->add_option("--sub-qubo-limit", sub_qubo_limit, "Largest block handed to the inner sampler");
    app->add_option("--sweeps-per-bit", sweeps_per_bit);
    app->add_option("--t-hot", t_hot);
    app->add_option("--t-cold", t_cold);
    app->add_option("--workers", workers);
    app->add_option("--init-reads", init_reads, "Full-problem anneals used to seed the decomposed sampler");
    app->add_option("--device-time", device_time, "Mock annealer seconds per task");
    app->add_option("--queue-latency", queue_latency, "Mock annealer queue seconds per task");
    app->add_option("--capacity", capacity, "Mock annealer capacity in bits");
    app->add_option("--direct-gap", direct_gap, "Relative gap for the direct branch and bound");
    app->add_option("--node-limit", node_limit);
  }

  RunSettings resolve() const {
    RunSettings s;
    if (!config_path.empty()) apply_settings_json(s, read_text(config_path));
    auto set = [](auto &field, const auto &opt) {
      if (opt) field = *opt;
    };
    set(s.gap_tol, gap_tol);
    set(s.time_limit, time_limit);
    set(s.zeta_step, zeta_step);
    set(s.sampler.schedule.t_hot, t_hot);
    set(s.sampler.schedule.t_cold, t_cold);
    set(s.mock.device_time_per_task, device_time);
    set(s.mock.queue_latency, queue_latency);
    set(s.direct_gap_tol, direct_gap);
    set(s.max_iterations, max_iterations);
    set(s.multi_cut, multi_cut);
    set(s.sampler.reads, reads);
    set(s.sampler.repeats, repeats);
    set(s.sampler.sub_qubo_limit, sub_qubo_limit);
    set(s.sampler.schedule.sweeps_per_bit, sweeps_per_bit);
    set(s.sampler.workers, workers);
    set(s.sampler.init_reads, init_reads);
    set(s.mock.capacity_bits, capacity);
    set(s.node_limit, node_limit);
    set(s.seed, seed);
    set(s.valid_inequalities, valid_inequalities);
    set(s.relaxed_master_first_iteration, relaxed_first);
    set(s.neighbourhood_evaluations, neighbourhood);
    s.sampler.validate();
    return s;
  }
};

/// Where a model comes from: a problem file, a dataset file, or the generator.
struct Source {
  std::string model_path;
  std::string dataset_path;
  int steps = 0;
  std::uint64_t data_seed = 0;

  void attach(CLI::App *app) {
    auto *m = app->add_option("--model", model_path, "Problem file (format qbenders-model)")->check(CLI::ExistingFile);
    auto *d = app->add_option("--dataset", dataset_path, "MES dataset file")->check(CLI::ExistingFile);
    auto *t = app->add_option("--steps", steps, "Generate the default MES instance with this many steps");
    app->add_option("--data-seed", data_seed, "Seed of the generated dataset");
    m->excludes(d)->excludes(t);
    d->excludes(t);
  }

  std::pair<std::string, Model> load(bool valid_inequalities) const {
    MesOptions opt;
    opt.valid_inequalities = valid_inequalities;
    if (!model_path.empty()) {
      Model model = load_model_file(model_path);
      const std::string id = model.name.empty() ? fs::path(model_path).stem().string() : model.name;
      return {id, std::move(model)};
    }
    if (!dataset_path.empty()) {
      MesInstance inst = build_instance(dataset_from_json(read_text(dataset_path)), opt);
      return {inst.model.name, std::move(inst.model)};
    }
    if (steps <= 0) throw Error("give one of --model, --dataset or --steps");
    MesInstance inst = build_instance(default_dataset(data_seed, steps), opt);
    return {inst.model.name, std::move(inst.model)};
  }
};

void print_report(const RunReport &r) {
  std::printf("%s %s: %s objective=%.6f gap_static=%.4f", r.instance.c_str(), r.config.c_str(), r.status.c_str(),
              r.objective, r.gap_static);
  if (r.gap_reference) std::printf(" gap_reference=%.2e", *r.gap_reference);
  std::printf(" iterations=%d total=%.3fs (master %.3f, subproblem %.3f, data %.3f)\n", r.iterations,
              r.timings.total, r.timings.master, r.timings.subproblem, r.timings.data_processing);
}

IterationLogger verbose_logger(bool verbose) {
  if (!verbose) return {};
  return [](const IterationRecord &r) {
    std::fprintf(stderr, "  it %3d ub=%.4f gap=%.4f bits=%d cuts=%d/%d early=%d\n", r.iteration, r.ub, r.gap,
                 r.qubo_bits, r.optimality_cuts, r.feasibility_cuts, r.stopped_early ? 1 : 0);
  };
}

std::vector<SolverKind> parse_solvers(const std::vector<std::string> &names) {
  std::vector<SolverKind> out;
  for (const auto &n : names) out.push_back(solver_kind_from_string(n));
  return out;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Hybrid Benders decomposition with QUBO master problems"};
  app.require_subcommand(1);

  // solve
  auto *solve = app.add_subcommand("solve", "Run one solver configuration on one instance");
  Source solve_src;
  Overrides solve_over;
  std::string solver_name = "benders-mock", report_path, log_path;
  std::optional<double> reference;
  bool verbose = false;
  solve_src.attach(solve);
  solve_over.attach(solve);
  solve->add_option("--solver", solver_name, "direct, benders-exact, benders-sa or benders-mock");
  solve->add_option("--report", report_path, "Write the run report (JSON)");
  solve->add_option("--log", log_path, "Write the run log (JSON lines)");
  solve->add_option("--reference", reference, "Known optimum for the reference gap");
  solve->add_flag("-v,--verbose", verbose, "Print one line per iteration");

  // compare
  auto *compare = app.add_subcommand("compare", "Run several configurations on several instances");
  Overrides cmp_over;
  std::vector<int> cmp_steps{2, 3, 4, 5};
  std::vector<std::string> cmp_models;
  std::vector<std::string> cmp_solvers{"direct", "benders-exact", "benders-sa", "benders-mock"};
  std::uint64_t cmp_data_seed = 0;
  std::string out_dir = "results";
  cmp_over.attach(compare);
  compare->add_option("--steps", cmp_steps, "Default MES instances to run")->delimiter(',');
  compare->add_option("--model", cmp_models, "Problem files to run instead of MES instances")->check(CLI::ExistingFile);
  compare->add_option("--data-seed", cmp_data_seed);
  compare->add_option("--solvers", cmp_solvers)->delimiter(',');
  compare->add_option("--out", out_dir, "Directory for summary.csv, plot.csv, runs.jsonl and reports");

  // extrapolate
  auto *extra = app.add_subcommand("extrapolate", "Best-case timing estimate from a mock-annealer report");
  std::string extra_in, extra_out;
  extra->add_option("report", extra_in, "Run report (JSON)")->required()->check(CLI::ExistingFile);
  extra->add_option("--out", extra_out, "Write the estimate here instead of stdout");

  // generate
  auto *gen = app.add_subcommand("generate", "Emit an MES dataset and its problem file");
  int gen_steps = 2;
  std::uint64_t gen_seed = 0;
  std::string gen_model, gen_dataset;
  bool gen_no_vi = false;
  gen->add_option("--steps", gen_steps, "Typical time steps")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed);
  gen->add_option("--model-out", gen_model, "Problem file to write")->required();
  gen->add_option("--dataset-out", gen_dataset, "Dataset file to write");
  gen->add_flag("--no-valid-inequalities", gen_no_vi);

  // stats
  auto *stats = app.add_subcommand("stats", "Print variable and constraint counts");
  Source stats_src;
  stats_src.attach(stats);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const RunSettings settings = solve_over.resolve();
      const auto [id, model] = solve_src.load(settings.valid_inequalities);
      const SolverKind kind = solver_kind_from_string(solver_name);
      const RunReport r = run_solver(id, model, kind, settings, reference, verbose_logger(verbose));
      print_report(r);
      if (!report_path.empty()) write_text(report_path, report_to_json(r));
      if (!log_path.empty()) {
        std::ostringstream ss;
        write_run_log(ss, r);
        write_text(log_path, ss.str());
      }
      return exit_code(r.status);
    }
    if (*compare) {
      const RunSettings settings = cmp_over.resolve();
      const std::vector<SolverKind> kinds = parse_solvers(cmp_solvers);
      std::vector<std::pair<std::string, Model>> instances;
      if (!cmp_models.empty()) {
        for (const auto &p : cmp_models) {
          Model m = load_model_file(p);
          instances.emplace_back(m.name.empty() ? fs::path(p).stem().string() : m.name, std::move(m));
        }
      } else {
        MesOptions opt;
        opt.valid_inequalities = settings.valid_inequalities;
        for (int t : cmp_steps) {
          MesInstance inst = build_instance(default_dataset(cmp_data_seed, t), opt);
          instances.emplace_back(inst.model.name, std::move(inst.model));
        }
      }
      fs::create_directories(out_dir);
      std::ofstream log(fs::path(out_dir) / "runs.jsonl");
      std::vector<RunReport> reports;
      int failures = 0;
      for (const auto &[id, model] : instances) {
        std::optional<double> ref;
        for (SolverKind k : kinds) {
          RunReport r;
          try {
            r = run_solver(id, model, k, settings, ref);
          } catch (const std::exception &e) {
            // A failed cell is recorded and the remaining cells still run.
            r.instance = id;
            r.config = to_string(k);
            r.status = std::string("error: ") + e.what();
            r.seed = settings.seed;
          }
          if (k == SolverKind::Direct && r.status == "optimal") ref = r.objective;
          if (!r.success) ++failures;
          print_report(r);
          write_run_log(log, r);
          write_text(fs::path(out_dir) / (id + "." + r.config + ".json"), report_to_json(r));
          reports.push_back(std::move(r));
        }
      }
      std::ofstream summary(fs::path(out_dir) / "summary.csv");
      write_summary_csv(summary, reports);
      std::ofstream plot(fs::path(out_dir) / "plot.csv");
      write_plot_csv(plot, reports);
      for (const auto &flag : ordering_flags(reports)) std::printf("flag: %s\n", flag.c_str());
      return failures == 0 ? kOk : kLimit;
    }
    if (*extra) {
      const RunReport r = report_from_json(read_text(extra_in));
      const std::string text = extrapolation_to_json(extrapolate(r), r);
      if (extra_out.empty()) {
        std::cout << text;
      } else {
        write_text(extra_out, text);
      }
      return kOk;
    }
    if (*gen) {
      const MesDataset data = default_dataset(gen_seed, gen_steps);
      MesOptions opt;
      opt.valid_inequalities = !gen_no_vi;
      const MesInstance inst = build_instance(data, opt);
      if (fs::path(gen_model).has_parent_path()) fs::create_directories(fs::path(gen_model).parent_path());
      save_model_file(inst.model, gen_model);
      if (!gen_dataset.empty()) write_text(gen_dataset, dataset_to_json(data));
      return kOk;
    }
    if (*stats) {
      const auto [id, model] = stats_src.load(true);
      const ModelStats raw = model_stats(model);
      const ModelStats st = model_stats(normalize(model));
      std::printf("instance %s\n", id.c_str());
      std::printf("variables %zu (continuous %zu, integer %zu)\n", raw.variables, raw.continuous, raw.integer);
      std::printf("constraints %zu\n", raw.constraints);
      std::printf("standard rows %zu (pure-integer %zu, mixed %zu, pure-continuous %zu)\n", st.constraints,
                  st.pure_integer_rows, st.mixed_rows, st.pure_continuous_rows);
      std::printf("binary bits after encoding %zu\n", st.binary_after_encoding);
      return kOk;
    }
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kError;
  }
  return kError;
}
