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
#include "qbenders/benders.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace qbenders {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool within_gap(double ub, double lb, double tol) {
  if (!std::isfinite(ub) || !std::isfinite(lb)) return false;
  return lb == 0.0 ? ub - lb <= tol : ub - lb <= tol * std::abs(lb);
}

double gap_value(double ub, double lb) {
  if (!std::isfinite(ub) || !std::isfinite(lb)) return kInf;
  return lb == 0.0 ? ub - lb : (ub - lb) / std::abs(lb);
}

/// Extremes of d.y over the integer box.
std::pair<double, double> box_range(const Vec &d, const Vec &upper) {
  double lo = 0.0, hi = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    lo += std::min(0.0, d[j] * upper[j]);
    hi += std::max(0.0, d[j] * upper[j]);
  }
  return {lo, hi};
}

void add_meta(SamplerMeta &into, const SamplerMeta &from) {
  into.reads += from.reads;
  into.passes += from.passes;
  into.repeats += from.repeats;
  into.sub_qubos += from.sub_qubos;
  into.tasks += from.tasks;
  into.wall_seconds += from.wall_seconds;
  into.device_seconds += from.device_seconds;
  into.queue_seconds += from.queue_seconds;
  into.stopped_early = into.stopped_early || from.stopped_early;
}

/// Upper end of the zeta range: no point better than the incumbent needs more.
double zeta_upper(const BendersState &s) {
  const auto [dmin, dmax] = box_range(s.master.d_cost, s.master.int_upper);
  (void)dmax;
  const double reference = std::min(s.ub, s.probe_objective);
  if (std::isfinite(reference)) return std::max(s.master.zeta_lo, reference - s.master.objective_constant - dmin);
  return s.master.zeta_lo + 2.0 * std::max(1.0, std::abs(s.lb_static));
}

void add_cut(BendersState &s, const Vec &y, Cut cut, int iteration, CutSource source, IterationRecord &rec) {
  for (const auto &c : s.master.cuts) {
    if (c.same_as(cut)) {
      ++s.duplicate_cuts;
      ++rec.duplicate_cuts;
      if (std::find(s.tabu.begin(), s.tabu.end(), y) == s.tabu.end()) s.tabu.push_back(y);
      return;
    }
  }
  cut.iteration = iteration;
  cut.source = source;
  cut.origin_y = y;
  if (cut.kind == CutKind::Optimality) {
    ++rec.optimality_cuts;
  } else {
    ++rec.feasibility_cuts;
  }
  s.master.cuts.push_back(std::move(cut));
}

}  // namespace

void BendersConfig::validate() const {
  if (!(gap_tol > 0.0)) throw Error("benders: gap_tol must be positive");
  if (multi_cut < 1) throw Error("benders: multi_cut must be >= 1");
  if (max_iterations < 1) throw Error("benders: max_iterations must be >= 1");
  if (neighbourhood_evaluations < 0) throw Error("benders: neighbourhood_evaluations must be >= 0");
}

const char *to_string(Termination t) {
  switch (t) {
    case Termination::Continue: return "continue";
    case Termination::OptimalWithinGap: return "optimal-within-gap";
    case Termination::IterationLimit: return "iteration-limit";
    case Termination::TimeLimit: return "time-limit";
    case Termination::Infeasible: return "infeasible";
    case Termination::Unbounded: return "unbounded";
  }
  return "?";
}

LpProblem SubproblemTemplate::at(const Vec &y) const {
  LpProblem lp;
  lp.cost = c;
  lp.matrix = A;
  lp.senses.assign(b.size(), Sense::GreaterEqual);
  const Vec by = B.multiply(y);
  lp.rhs.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) lp.rhs[i] = b[i] - by[i];
  lp.lower.assign(static_cast<std::size_t>(n_cont), 0.0);
  lp.upper.assign(static_cast<std::size_t>(n_cont), kInf);
  return lp;
}

std::pair<MasterProblem, SubproblemTemplate> decompose(const StandardMilp &m) {
  m.validate();
  MasterProblem master;
  master.n_int = m.n_int;
  master.d_cost = m.d_cost;
  master.int_upper = m.int_upper;
  master.objective_constant = m.objective_constant;
  master.int_names = m.int_names;

  SubproblemTemplate sub;
  sub.n_cont = m.n_cont;
  sub.n_int = m.n_int;
  sub.c = m.c;
  const auto classes = classify_constraints(m);
  for (int i = 0; i < m.rows(); ++i) {
    if (classes[i] != ConstraintClass::PureInteger) {
      sub.rows.push_back(i);
      continue;
    }
    MasterRow row;
    row.name = i < static_cast<int>(m.row_names.size()) ? m.row_names[i] : "row" + std::to_string(i);
    row.coeff.assign(static_cast<std::size_t>(m.n_int), 0.0);
    for (const auto &t : m.B.row(i)) row.coeff[t.col] = t.value;
    row.rhs = m.b[i];
    row.valid_inequality = row.name.starts_with(kValidInequalityPrefix);
    master.rows.push_back(std::move(row));
  }
  sub.A = m.A.select_rows(sub.rows);
  sub.B = m.B.select_rows(sub.rows);
  for (int i : sub.rows) sub.b.push_back(m.b[i]);
  return {std::move(master), std::move(sub)};
}

Cut make_optimality_cut(const Vec &duals, const SubproblemTemplate &sub) {
  if (duals.size() != sub.b.size()) throw Error("make_optimality_cut: one dual per subproblem row expected");
  Cut cut;
  cut.kind = CutKind::Optimality;
  cut.coeff_zeta = 1;
  cut.rhs = dot(sub.b, duals);
  cut.coeff_y = sub.B.transpose_multiply(duals);
  for (double &v : cut.coeff_y) v = -v;
  cut.source = CutSource::SubproblemDual;
  return cut;
}

Cut make_feasibility_cut(const Vec &ray, const SubproblemTemplate &sub) {
  if (ray.size() != sub.b.size()) throw Error("make_feasibility_cut: one multiplier per subproblem row expected");
  Cut cut;
  cut.kind = CutKind::Feasibility;
  cut.coeff_zeta = 0;
  cut.rhs = dot(sub.b, ray);
  cut.coeff_y = sub.B.transpose_multiply(ray);
  double norm = std::abs(cut.rhs);
  for (double &v : cut.coeff_y) {
    v = -v;
    norm = std::max(norm, std::abs(v));
  }
  if (norm > 0.0) {
    cut.rhs /= norm;
    for (double &v : cut.coeff_y) v /= norm;
  }
  cut.source = CutSource::SubproblemRay;
  return cut;
}

double BendersState::gap() const { return gap_value(ub, lb_static); }

int BendersState::cut_count(CutKind kind) const {
  return static_cast<int>(std::count_if(master.cuts.begin(), master.cuts.end(),
                                        [kind](const Cut &c) { return c.kind == kind; }));
}

std::optional<Vec> seed_from_lp_relaxation(BendersState &s) {
  const auto t0 = Clock::now();
  const LpOutcome r = solve_lp(lp_relaxation(s.milp), s.config.lp);
  s.timings.subproblem += seconds_since(t0);
  if (r.status == LpStatus::Infeasible) {
    s.infeasible = true;
    return std::nullopt;
  }
  if (r.status == LpStatus::Unbounded) {
    s.unbounded = true;
    return std::nullopt;
  }
  if (r.status != LpStatus::Optimal) throw Error(std::string("LP relaxation failed: ") + to_string(r.status));
  s.lb_static = r.objective;

  // Any feasible y has c.x >= LB_static - constant - d.y.
  const auto [dmin, dmax] = box_range(s.master.d_cost, s.master.int_upper);
  (void)dmin;
  double zeta_lo = s.lb_static - s.master.objective_constant - dmax;
  if (std::all_of(s.milp.c.begin(), s.milp.c.end(), [](double v) { return v >= 0.0; })) zeta_lo = std::max(zeta_lo, 0.0);
  s.master.zeta_lo = zeta_lo;

  Vec sub_duals;
  for (int i : s.sub.rows) sub_duals.push_back(std::max(0.0, r.duals[i]));
  Cut seed = make_optimality_cut(sub_duals, s.sub);
  seed.source = CutSource::LpRelaxationSeed;
  seed.iteration = 0;
  s.master.cuts.push_back(std::move(seed));
  return Vec(r.x.begin() + s.milp.n_cont, r.x.end());
}

std::optional<Vec> relaxed_master_candidate(const MasterProblem &master, const LpOptions &lp) {
  const StandardMilp milp = master.to_milp();
  const LpOutcome r = solve_lp(lp_relaxation(milp), lp);
  if (r.status != LpStatus::Optimal) return std::nullopt;
  Vec y(r.x.begin() + milp.n_cont, r.x.end());
  for (int j = 0; j < master.n_int; ++j) y[j] = std::clamp(std::ceil(y[j] - 0.5), 0.0, master.int_upper[j]);
  return y;
}

const SubproblemEval &evaluate_candidate(BendersState &s, const Vec &y, CutSource source) {
  if (auto it = s.evaluated.find(y); it != s.evaluated.end()) return it->second;
  SubproblemEval ev;
  const LpProblem lp = s.sub.at(y);
  auto t0 = Clock::now();
  const LpOutcome r = solve_lp(lp, s.config.lp);
  s.timings.subproblem += seconds_since(t0);
  ev.status = r.status;
  const double constant = dot(s.milp.d_cost, y) + s.milp.objective_constant;
  if (r.status == LpStatus::Optimal) {
    ev.value = r.objective;
    ev.objective = r.objective + constant;
    ev.x = r.x;
    Vec duals(r.duals.size());
    for (std::size_t i = 0; i < duals.size(); ++i) duals[i] = std::max(0.0, r.duals[i]);
    Cut cut = make_optimality_cut(duals, s.sub);
    cut.source = source;
    // Strong duality: the cut must be tight where it was generated.
    if (std::abs(cut.value(y) - ev.value) <= 1e-6 * std::max(1.0, std::abs(ev.value))) {
      ev.cut = std::move(cut);
    } else {
      ev.cut_rejected = true;
    }
    if (ev.objective < s.ub) {
      s.ub = ev.objective;
      s.x = r.x;
      s.y = y;
      s.has_incumbent = true;
    }
  } else if (r.status == LpStatus::Infeasible) {
    Cut cut = make_feasibility_cut(r.ray, s.sub);
    cut.source = source == CutSource::SubproblemDual ? CutSource::SubproblemRay : source;
    if (farkas_margin(lp, r.ray) > 0.0 && cut.value(y) > 1e-9) {
      ev.cut = std::move(cut);
    } else {
      ev.cut_rejected = true;
    }
  } else if (r.status == LpStatus::Unbounded) {
    s.unbounded = true;
  }
  if (ev.cut_rejected) ++s.rejected_cuts;
  return s.evaluated.emplace(y, std::move(ev)).first->second;
}

BendersState initialize(const StandardMilp &m, const BendersConfig &config) {
  config.validate();
  BendersState s;
  s.config = config;
  s.milp = m;
  auto [master, sub] = decompose(m);
  if (!config.use_valid_inequalities) {
    std::erase_if(master.rows, [](const MasterRow &r) { return r.valid_inequality; });
  }
  s.master = std::move(master);
  s.sub = std::move(sub);
  const auto relaxed = seed_from_lp_relaxation(s);
  if (!relaxed) return s;

  // The relaxation rounded up is usually a feasible design. Its value only
  // sizes the zeta range; it does not become the incumbent.
  Vec probe = *relaxed;
  for (int j = 0; j < s.master.n_int; ++j) probe[j] = std::clamp(std::ceil(probe[j] - 1e-6), 0.0, s.master.int_upper[j]);
  if (s.master.y_feasible(probe)) {
    const auto t0 = Clock::now();
    const LpOutcome r = solve_lp(s.sub.at(probe), s.config.lp);
    s.timings.subproblem += seconds_since(t0);
    if (r.status == LpStatus::Optimal) s.probe_objective = r.objective + dot(s.milp.d_cost, probe) + s.milp.objective_constant;
  }
  return s;
}

namespace {

// Single steps and up/down swaps around the incumbent that the master deems
// feasible and has not priced yet, best master objective first.
std::vector<Vec> incumbent_neighbours(const BendersState &s, int limit) {
  const MasterProblem &m = s.master;
  std::vector<std::pair<double, Vec>> ranked;
  auto consider = [&](Vec y) {
    if (s.evaluated.count(y) || !m.y_feasible(y)) return;
    ranked.emplace_back(m.repaired_objective(y), std::move(y));
  };
  const int n = m.n_int;
  for (int i = 0; i < n; ++i) {
    for (const double step : {-1.0, 1.0}) {
      const double v = s.y[i] + step;
      if (v < 0.0 || v > m.int_upper[i]) continue;
      Vec y = s.y;
      y[i] = v;
      consider(y);
      if (step < 0.0) continue;
      for (int j = 0; j < n; ++j) {
        if (j == i || s.y[j] < 1.0) continue;
        Vec z = y;
        z[j] -= 1.0;
        consider(std::move(z));
      }
    }
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
  std::vector<Vec> out;
  for (int k = 0; k < limit && k < static_cast<int>(ranked.size()); ++k) out.push_back(std::move(ranked[k].second));
  return out;
}

void search_neighbourhood(BendersState &s, bool even_if_searched) {
  if (s.config.neighbourhood_evaluations <= 0 || !s.has_incumbent) return;
  if (within_gap(s.ub, s.lb_static, s.config.gap_tol)) return;
  if (!even_if_searched && s.y == s.searched_incumbent) return;
  s.searched_incumbent = s.y;
  for (const auto &y : incumbent_neighbours(s, s.config.neighbourhood_evaluations)) {
    evaluate_candidate(s, y, CutSource::SubproblemDual);
  }
}

}  // namespace

void iterate(BendersState &s, MasterBackend &backend, const IterationLogger &logger) {
  const auto t_iter = Clock::now();
  const Timings before = s.timings;
  IterationRecord rec;
  rec.iteration = ++s.iteration;

  std::vector<std::pair<Vec, CutSource>> candidates;
  std::vector<Vec> alternatives;
  double callback_seconds = 0.0;
  if (s.iteration == 1 && s.config.relaxed_master_first_iteration) {
    const auto t0 = Clock::now();
    auto y = relaxed_master_candidate(s.master, s.config.lp);
    s.timings.master += seconds_since(t0);
    if (!y) {
      s.infeasible = !s.has_incumbent;
    } else {
      candidates.emplace_back(*y, CutSource::RelaxedMaster);
    }
  } else {
    s.master.zeta_hi = zeta_upper(s);
    CandidateStop stop = [&](const Vec &y) {
      const auto t0 = Clock::now();
      evaluate_candidate(s, y, CutSource::SubproblemDual);
      search_neighbourhood(s, false);
      callback_seconds += seconds_since(t0);
      return within_gap(s.ub, s.lb_static, s.config.gap_tol);
    };
    if (s.has_incumbent) backend.set_incumbent(s.y);
    const MasterSolve ms = backend.solve(s.master, s.config.multi_cut, s.tabu, stop);
    s.timings.master += std::max(0.0, ms.solve_seconds - callback_seconds);
    add_meta(s.sampler, ms.sampler);
    rec.sampler = ms.sampler;
    rec.qubo_bits = ms.qubo_bits;
    rec.escalations = ms.escalations;
    rec.stopped_early = ms.sampler.stopped_early;
    if (ms.sampler.stopped_early) ++s.early_stops;
    if (ms.infeasible) {
      if (s.has_incumbent) {
        s.master_bound = s.ub;
      } else {
        s.infeasible = true;
      }
    }
    if (ms.bound) s.master_bound = std::max(s.master_bound, std::min(*ms.bound, s.ub));
    for (const auto &c : ms.candidates) candidates.emplace_back(c.y, CutSource::SubproblemDual);
    for (const auto &c : ms.alternatives) alternatives.push_back(c.y);
    if (candidates.empty() && !ms.infeasible) {
      ++s.failed_iterations;
      backend.escalate();
    }
  }

  rec.candidates = static_cast<int>(candidates.size());
  for (const auto &[y, source] : candidates) {
    const auto &ev = evaluate_candidate(s, y, source);
    if (ev.cut) {
      add_cut(s, y, *ev.cut, s.iteration, ev.cut->source, rec);
    } else if (std::find(s.tabu.begin(), s.tabu.end(), y) == s.tabu.end()) {
      s.tabu.push_back(y);
    }
  }
  for (const auto &alt : alternatives) evaluate_candidate(s, alt, CutSource::SubproblemDual);
  search_neighbourhood(s, true);
  if (s.has_incumbent && s.master_bound > s.ub) s.master_bound = s.ub;

  const double wall = seconds_since(t_iter);
  s.timings.data_processing += std::max(0.0, wall - (s.timings.master - before.master) -
                                                 (s.timings.subproblem - before.subproblem));
  rec.timings.master = s.timings.master - before.master;
  rec.timings.subproblem = s.timings.subproblem - before.subproblem;
  rec.timings.data_processing = s.timings.data_processing - before.data_processing;
  rec.timings.total = wall;
  rec.ub = s.ub;
  rec.lb_static = s.lb_static;
  rec.master_bound = s.master_bound;
  rec.gap = s.gap();
  s.history.push_back(rec);
  if (logger) logger(rec);
}

Termination check_termination(const BendersState &s, bool exact_backend, double elapsed_seconds) {
  if (s.unbounded) return Termination::Unbounded;
  if (s.infeasible) return Termination::Infeasible;
  if (s.has_incumbent) {
    if (within_gap(s.ub, s.lb_static, s.config.gap_tol)) return Termination::OptimalWithinGap;
    if (exact_backend && s.config.use_master_bound && within_gap(s.ub, s.master_bound, s.config.gap_tol)) {
      return Termination::OptimalWithinGap;
    }
  }
  if (s.iteration >= s.config.max_iterations) return Termination::IterationLimit;
  if (s.config.time_limit > 0.0 && elapsed_seconds >= s.config.time_limit) return Termination::TimeLimit;
  return Termination::Continue;
}

BendersResult run(const StandardMilp &m, MasterBackend &backend, const BendersConfig &config,
                  const IterationLogger &logger) {
  const auto t0 = Clock::now();
  BendersResult result;
  result.state = initialize(m, config);
  auto &s = result.state;
  s.timings.data_processing = std::max(0.0, seconds_since(t0) - s.timings.subproblem);
  while (true) {
    result.status = check_termination(s, backend.exact(), seconds_since(t0));
    if (result.status != Termination::Continue) break;
    iterate(s, backend, logger);
  }
  s.timings.total = seconds_since(t0);
  return result;
}

}  // namespace qbenders
