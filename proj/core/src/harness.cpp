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
#include "qbenders/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>

#include "json.hpp"

namespace qbenders {
namespace {

using Json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Json num(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double get_num(const Json &j) {
  if (j.is_null()) return std::nan("");
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw Error("expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Json timings_json(const Timings &t) {
  return {{"master", t.master}, {"subproblem", t.subproblem}, {"data_processing", t.data_processing}, {"total", t.total}};
}

Timings timings_from(const Json &j) {
  return {j.at("master").get<double>(), j.at("subproblem").get<double>(), j.at("data_processing").get<double>(),
          j.at("total").get<double>()};
}

Json meta_json(const SamplerMeta &m) {
  return {{"reads", m.reads},   {"passes", m.passes},
          {"repeats", m.repeats}, {"sub_qubos", m.sub_qubos},
          {"tasks", m.tasks},   {"wall_seconds", m.wall_seconds},
          {"device_seconds", m.device_seconds}, {"queue_seconds", m.queue_seconds},
          {"stopped_early", m.stopped_early}};
}

SamplerMeta meta_from(const Json &j) {
  SamplerMeta m;
  m.reads = j.at("reads").get<int>();
  m.passes = j.at("passes").get<int>();
  m.repeats = j.at("repeats").get<int>();
  m.sub_qubos = j.at("sub_qubos").get<int>();
  m.tasks = j.at("tasks").get<int>();
  m.wall_seconds = j.at("wall_seconds").get<double>();
  m.device_seconds = j.at("device_seconds").get<double>();
  m.queue_seconds = j.at("queue_seconds").get<double>();
  m.stopped_early = j.at("stopped_early").get<bool>();
  return m;
}

Json iteration_json(const IterationRecord &r) {
  return {{"iteration", r.iteration},
          {"ub", num(r.ub)},
          {"lb_static", num(r.lb_static)},
          {"master_bound", num(r.master_bound)},
          {"gap", num(r.gap)},
          {"candidates", r.candidates},
          {"optimality_cuts", r.optimality_cuts},
          {"feasibility_cuts", r.feasibility_cuts},
          {"duplicate_cuts", r.duplicate_cuts},
          {"qubo_bits", r.qubo_bits},
          {"escalations", r.escalations},
          {"stopped_early", r.stopped_early},
          {"sampler", meta_json(r.sampler)},
          {"timings", timings_json(r.timings)}};
}

IterationRecord iteration_from(const Json &j) {
  IterationRecord r;
  r.iteration = j.at("iteration").get<int>();
  r.ub = get_num(j.at("ub"));
  r.lb_static = get_num(j.at("lb_static"));
  r.master_bound = get_num(j.at("master_bound"));
  r.gap = get_num(j.at("gap"));
  r.candidates = j.at("candidates").get<int>();
  r.optimality_cuts = j.at("optimality_cuts").get<int>();
  r.feasibility_cuts = j.at("feasibility_cuts").get<int>();
  r.duplicate_cuts = j.at("duplicate_cuts").get<int>();
  r.qubo_bits = j.at("qubo_bits").get<int>();
  r.escalations = j.at("escalations").get<int>();
  r.stopped_early = j.at("stopped_early").get<bool>();
  r.sampler = meta_from(j.at("sampler"));
  r.timings = timings_from(j.at("timings"));
  return r;
}

Json report_json(const RunReport &r, bool with_history) {
  Json j = {{"format", "qbenders-report"},
            {"version", 1},
            {"instance", r.instance},
            {"config", r.config},
            {"steps", r.steps},
            {"status", r.status},
            {"success", r.success},
            {"objective", num(r.objective)},
            {"lb_static", num(r.lb_static)},
            {"gap_static", num(r.gap_static)},
            {"reference", r.reference ? num(*r.reference) : Json(nullptr)},
            {"gap_reference", r.gap_reference ? num(*r.gap_reference) : Json(nullptr)},
            {"master_bound", num(r.master_bound)},
            {"iterations", r.iterations},
            {"nodes", r.nodes},
            {"optimality_cuts", r.optimality_cuts},
            {"feasibility_cuts", r.feasibility_cuts},
            {"duplicate_cuts", r.duplicate_cuts},
            {"early_stops", r.early_stops},
            {"timings", timings_json(r.timings)},
            {"sampler", meta_json(r.sampler)},
            {"seed", r.seed},
            {"design", r.design}};
  if (with_history) {
    Json h = Json::array();
    for (const auto &rec : r.history) h.push_back(iteration_json(rec));
    j["history"] = h;
  }
  return j;
}

double static_gap(double ub, double lb) {
  if (!std::isfinite(ub) || !std::isfinite(lb)) return kInf;
  return lb == 0.0 ? ub - lb : (ub - lb) / std::abs(lb);
}

Vec integer_design(const StandardMilp &m, const Model &model, const Vec &x, const Vec &y) {
  if (x.empty() || y.empty()) return {};
  const Vec raw = denormalize(m, x, y);
  Vec design;
  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    if (model.variables[i].is_integer()) design.push_back(raw[i]);
  }
  return design;
}

void check_keys(const Json &j, const std::string &where, std::initializer_list<const char *> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto &[key, value] : j.items()) {
    (void)value;
    if (!ok.count(key)) throw Error("config: unknown key '" + where + key + "'");
  }
}

}  // namespace

const char *to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Direct: return "direct";
    case SolverKind::BendersExact: return "benders-exact";
    case SolverKind::BendersSa: return "benders-sa";
    case SolverKind::BendersMock: return "benders-mock";
  }
  return "?";
}

SolverKind solver_kind_from_string(const std::string &name) {
  for (auto k : {SolverKind::Direct, SolverKind::BendersExact, SolverKind::BendersSa, SolverKind::BendersMock}) {
    if (name == to_string(k)) return k;
  }
  throw Error("unknown solver '" + name + "' (expected direct, benders-exact, benders-sa or benders-mock)");
}

RunSettings::RunSettings() {
  sampler.reads = 50;
  sampler.repeats = 3;
  sampler.schedule.sweeps_per_bit = 3;
  sampler.init_reads = 200;
}

void apply_settings_json(RunSettings &s, const std::string &text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error &e) {
    throw Error(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error("config: top level must be an object");
  check_keys(j, "", {"format", "version", "gap_tol", "max_iterations", "time_limit", "multi_cut", "valid_inequalities",
                     "relaxed_master_first_iteration", "neighbourhood_evaluations", "seed", "sampler", "mock", "penalty", "zeta_step",
                     "direct_gap_tol", "node_limit"});
  if (j.contains("format") && j["format"] != "qbenders-config") throw Error("config: format must be 'qbenders-config'");
  if (j.contains("version") && j["version"] != 1) throw Error("config: unsupported version");
  try {
    auto take = [&](const Json &obj, const char *key, auto &field) {
      if (obj.contains(key)) field = obj.at(key).get<std::decay_t<decltype(field)>>();
    };
    take(j, "gap_tol", s.gap_tol);
    take(j, "max_iterations", s.max_iterations);
    take(j, "time_limit", s.time_limit);
    take(j, "multi_cut", s.multi_cut);
    take(j, "valid_inequalities", s.valid_inequalities);
    take(j, "relaxed_master_first_iteration", s.relaxed_master_first_iteration);
    take(j, "neighbourhood_evaluations", s.neighbourhood_evaluations);
    take(j, "seed", s.seed);
    take(j, "zeta_step", s.zeta_step);
    take(j, "direct_gap_tol", s.direct_gap_tol);
    take(j, "node_limit", s.node_limit);
    if (j.contains("sampler")) {
      const auto &p = j["sampler"];
      check_keys(p, "sampler.", {"reads", "repeats", "sub_qubo_limit", "sweeps", "sweeps_per_bit", "t_hot", "t_cold",
                                 "greedy_polish", "workers", "max_passes", "init_reads"});
      take(p, "reads", s.sampler.reads);
      take(p, "repeats", s.sampler.repeats);
      take(p, "sub_qubo_limit", s.sampler.sub_qubo_limit);
      take(p, "sweeps", s.sampler.schedule.sweeps);
      take(p, "sweeps_per_bit", s.sampler.schedule.sweeps_per_bit);
      take(p, "t_hot", s.sampler.schedule.t_hot);
      take(p, "t_cold", s.sampler.schedule.t_cold);
      take(p, "greedy_polish", s.sampler.schedule.greedy_polish);
      take(p, "workers", s.sampler.workers);
      take(p, "max_passes", s.sampler.max_passes);
      take(p, "init_reads", s.sampler.init_reads);
    }
    if (j.contains("mock")) {
      const auto &m = j["mock"];
      check_keys(m, "mock.", {"queue_latency", "device_time_per_task", "capacity_bits", "sleep"});
      take(m, "queue_latency", s.mock.queue_latency);
      take(m, "device_time_per_task", s.mock.device_time_per_task);
      take(m, "capacity_bits", s.mock.capacity_bits);
      take(m, "sleep", s.mock.sleep);
    }
    if (j.contains("penalty")) {
      const auto &p = j["penalty"];
      check_keys(p, "penalty.", {"initial_rho", "escalation_factor", "max_escalations"});
      take(p, "initial_rho", s.penalty.initial_rho);
      take(p, "escalation_factor", s.penalty.escalation_factor);
      take(p, "max_escalations", s.penalty.max_escalations);
    }
  } catch (const Json::exception &e) {
    throw Error(std::string("config: ") + e.what());
  }
}

std::string settings_to_json(const RunSettings &s) {
  const auto &p = s.sampler;
  Json j = {{"format", "qbenders-config"},
            {"version", 1},
            {"gap_tol", s.gap_tol},
            {"max_iterations", s.max_iterations},
            {"time_limit", s.time_limit},
            {"multi_cut", s.multi_cut},
            {"valid_inequalities", s.valid_inequalities},
            {"relaxed_master_first_iteration", s.relaxed_master_first_iteration},
            {"neighbourhood_evaluations", s.neighbourhood_evaluations},
            {"seed", s.seed},
            {"zeta_step", s.zeta_step},
            {"direct_gap_tol", s.direct_gap_tol},
            {"node_limit", s.node_limit},
            {"sampler",
             {{"reads", p.reads},
              {"repeats", p.repeats},
              {"sub_qubo_limit", p.sub_qubo_limit},
              {"sweeps", p.schedule.sweeps},
              {"sweeps_per_bit", p.schedule.sweeps_per_bit},
              {"t_hot", p.schedule.t_hot},
              {"t_cold", p.schedule.t_cold},
              {"greedy_polish", p.schedule.greedy_polish},
              {"workers", p.workers},
              {"max_passes", p.max_passes},
              {"init_reads", p.init_reads}}},
            {"mock",
             {{"queue_latency", s.mock.queue_latency},
              {"device_time_per_task", s.mock.device_time_per_task},
              {"capacity_bits", s.mock.capacity_bits},
              {"sleep", s.mock.sleep}}},
            {"penalty",
             {{"initial_rho", s.penalty.initial_rho},
              {"escalation_factor", s.penalty.escalation_factor},
              {"max_escalations", s.penalty.max_escalations}}}};
  return j.dump(2) + "\n";
}

RunReport run_solver(const std::string &instance_id, const Model &model, SolverKind kind, const RunSettings &settings,
                     std::optional<double> reference, const IterationLogger &logger) {
  RunReport rep;
  rep.instance = instance_id;
  rep.config = to_string(kind);
  rep.seed = settings.seed;
  if (auto it = model.metadata.find("steps"); it != model.metadata.end()) rep.steps = std::stoi(it->second);
  rep.reference = reference;

  const auto t0 = Clock::now();
  const StandardMilp m = normalize(model);
  if (kind == SolverKind::Direct) {
    const LpOutcome relax = solve_lp(lp_relaxation(m));
    if (relax.status == LpStatus::Optimal) rep.lb_static = relax.objective;
    MipOptions opt;
    opt.gap_tol = settings.direct_gap_tol;
    opt.node_limit = settings.node_limit;
    const MipOutcome r = branch_and_bound(m, opt);
    rep.status = to_string(r.status);
    rep.success = r.status == MipStatus::Optimal;
    rep.objective = r.objective;
    rep.master_bound = r.bound;
    rep.nodes = r.nodes;
    rep.design = integer_design(m, model, r.x, r.y);
    rep.timings.total = seconds_since(t0);
  } else {
    BendersConfig cfg;
    cfg.gap_tol = settings.gap_tol;
    cfg.max_iterations = settings.max_iterations;
    cfg.time_limit = settings.time_limit;
    cfg.multi_cut = settings.multi_cut;
    cfg.use_valid_inequalities = settings.valid_inequalities;
    cfg.relaxed_master_first_iteration = settings.relaxed_master_first_iteration;
    cfg.neighbourhood_evaluations = settings.neighbourhood_evaluations;
    std::unique_ptr<MasterBackend> backend;
    if (kind == SolverKind::BendersExact) {
      backend = make_exact_backend();
    } else {
      QuboBackendConfig qc;
      qc.sampler = kind == SolverKind::BendersSa ? SamplerKind::SimulatedAnnealing : SamplerKind::MockAnnealer;
      qc.params = settings.sampler;
      qc.params.seed = settings.seed;
      qc.mock = settings.mock;
      qc.penalty = settings.penalty;
      qc.zeta_step = settings.zeta_step;
      backend = make_qubo_backend(qc);
    }
    const BendersResult r = run(m, *backend, cfg, logger);
    const auto &s = r.state;
    rep.status = to_string(r.status);
    rep.success = r.status == Termination::OptimalWithinGap;
    rep.objective = s.ub;
    rep.lb_static = s.lb_static;
    rep.master_bound = s.master_bound;
    rep.iterations = s.iteration;
    rep.optimality_cuts = s.cut_count(CutKind::Optimality);
    rep.feasibility_cuts = s.cut_count(CutKind::Feasibility);
    rep.duplicate_cuts = s.duplicate_cuts;
    rep.early_stops = s.early_stops;
    rep.sampler = s.sampler;
    rep.history = s.history;
    rep.design = integer_design(m, model, s.x, s.y);
    rep.timings = s.timings;
    rep.timings.total = seconds_since(t0);
  }
  rep.gap_static = static_gap(rep.objective, rep.lb_static);
  if (reference && std::isfinite(rep.objective)) {
    rep.gap_reference = (rep.objective - *reference) / std::max(std::abs(*reference), 1e-12);
  }
  return rep;
}

std::string report_to_json(const RunReport &r) { return report_json(r, true).dump(2) + "\n"; }

RunReport report_from_json(const std::string &text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error &e) {
    throw Error(std::string("report: ") + e.what());
  }
  try {
    if (j.value("format", "") != "qbenders-report") throw Error("report: format must be 'qbenders-report'");
    RunReport r;
    r.instance = j.at("instance").get<std::string>();
    r.config = j.at("config").get<std::string>();
    r.steps = j.at("steps").get<int>();
    r.status = j.at("status").get<std::string>();
    r.success = j.at("success").get<bool>();
    r.objective = get_num(j.at("objective"));
    r.lb_static = get_num(j.at("lb_static"));
    r.gap_static = get_num(j.at("gap_static"));
    if (!j.at("reference").is_null()) r.reference = get_num(j["reference"]);
    if (!j.at("gap_reference").is_null()) r.gap_reference = get_num(j["gap_reference"]);
    r.master_bound = get_num(j.at("master_bound"));
    r.iterations = j.at("iterations").get<int>();
    r.nodes = j.at("nodes").get<long>();
    r.optimality_cuts = j.at("optimality_cuts").get<int>();
    r.feasibility_cuts = j.at("feasibility_cuts").get<int>();
    r.duplicate_cuts = j.at("duplicate_cuts").get<int>();
    r.early_stops = j.at("early_stops").get<int>();
    r.timings = timings_from(j.at("timings"));
    r.sampler = meta_from(j.at("sampler"));
    r.seed = j.at("seed").get<std::uint64_t>();
    r.design = j.at("design").get<Vec>();
    if (j.contains("history")) {
      for (const auto &h : j["history"]) r.history.push_back(iteration_from(h));
    }
    return r;
  } catch (const Json::exception &e) {
    throw Error(std::string("report: ") + e.what());
  }
}

void write_run_log(std::ostream &out, const RunReport &report) {
  for (const auto &rec : report.history) {
    Json j = iteration_json(rec);
    j["type"] = "iteration";
    j["instance"] = report.instance;
    j["config"] = report.config;
    out << j.dump() << '\n';
  }
  Json j = report_json(report, false);
  j["type"] = "result";
  out << j.dump() << '\n';
}

void write_summary_csv(std::ostream &out, const std::vector<RunReport> &reports) {
  out << "instance,steps,config,status,objective,lb_static,gap_static,reference,gap_reference,iterations,nodes,"
         "optimality_cuts,feasibility_cuts,early_stops,master_s,subproblem_s,data_processing_s,total_s,reads,"
         "repeats,tasks,device_s,seed\n";
  for (const auto &r : reports) {
    out << r.instance << ',' << r.steps << ',' << r.config << ',' << r.status << ',' << fmt(r.objective) << ','
        << fmt(r.lb_static) << ',' << fmt(r.gap_static) << ',' << (r.reference ? fmt(*r.reference) : "") << ','
        << (r.gap_reference ? fmt(*r.gap_reference) : "") << ',' << r.iterations << ',' << r.nodes << ','
        << r.optimality_cuts << ',' << r.feasibility_cuts << ',' << r.early_stops << ',' << fmt(r.timings.master)
        << ',' << fmt(r.timings.subproblem) << ',' << fmt(r.timings.data_processing) << ',' << fmt(r.timings.total)
        << ',' << r.sampler.reads << ',' << r.sampler.repeats << ',' << r.sampler.tasks << ','
        << fmt(r.sampler.device_seconds) << ',' << r.seed << '\n';
  }
}

void write_plot_csv(std::ostream &out, const std::vector<RunReport> &reports) {
  std::vector<std::string> configs;
  std::map<int, std::map<std::string, double>> table;
  for (const auto &r : reports) {
    if (std::find(configs.begin(), configs.end(), r.config) == configs.end()) configs.push_back(r.config);
    table[r.steps][r.config] = r.timings.total;
  }
  out << "steps";
  for (const auto &c : configs) out << ',' << c;
  out << '\n';
  for (const auto &[steps, row] : table) {
    out << steps;
    for (const auto &c : configs) {
      out << ',';
      if (auto it = row.find(c); it != row.end()) out << fmt(it->second);
    }
    out << '\n';
  }
}

Extrapolation extrapolate(const RunReport &r) {
  if (r.sampler.tasks <= 0 || !(r.sampler.device_seconds > 0.0)) {
    throw Error("extrapolate: report '" + r.instance + "/" + r.config + "' has no annealer device-time metadata");
  }
  Extrapolation e;
  e.raw_total = r.timings.total;
  e.data_processing = r.timings.data_processing;
  e.subproblem = r.timings.subproblem;
  e.device_per_task = r.sampler.device_seconds / r.sampler.tasks;
  e.iterations = r.iterations;
  e.best_total = 0.1 * e.data_processing + e.subproblem + e.device_per_task * e.iterations;
  return e;
}

std::string extrapolation_to_json(const Extrapolation &e, const RunReport &r) {
  Json j = {{"format", "qbenders-extrapolation"},
            {"version", 1},
            {"instance", r.instance},
            {"config", r.config},
            {"raw",
             {{"total", e.raw_total},
              {"master", r.timings.master},
              {"subproblem", r.timings.subproblem},
              {"data_processing", r.timings.data_processing}}},
            {"best_case",
             {{"total", e.best_total},
              {"master", e.device_per_task * e.iterations},
              {"subproblem", e.subproblem},
              {"data_processing", 0.1 * e.data_processing}}},
            {"device_per_task", e.device_per_task},
            {"iterations", e.iterations}};
  return j.dump(2) + "\n";
}

std::vector<std::string> ordering_flags(const std::vector<RunReport> &reports) {
  std::map<std::string, std::map<std::string, double>> by_instance;
  for (const auto &r : reports) by_instance[r.instance][r.config] = r.timings.total;
  const std::vector<std::string> order{"direct", "benders-exact", "benders-sa"};
  std::vector<std::string> flags;
  for (const auto &[inst, times] : by_instance) {
    for (std::size_t a = 0; a + 1 < order.size(); ++a) {
      auto fa = times.find(order[a]), fb = times.find(order[a + 1]);
      if (fa == times.end() || fb == times.end()) continue;
      if (fa->second > fb->second) {
        flags.push_back(inst + ": " + order[a] + " (" + fmt(fa->second) + " s) slower than " + order[a + 1] + " (" +
                        fmt(fb->second) + " s)");
      }
    }
  }
  return flags;
}

}  // namespace qbenders
