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
#include "qbenders/mes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <unordered_map>

#include "json.hpp"

namespace qbenders {
namespace {

using Json = nlohmann::json;

constexpr std::array kDispatchable{ComponentKind::HeatPump, ComponentKind::Chiller, ComponentKind::Chp};

const char *short_name(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::HeatPump: return "hp";
    case ComponentKind::Chiller: return "ch";
    case ComponentKind::Chp: return "chp";
    case ComponentKind::Pv: return "pv";
    case ComponentKind::Battery: return "bat";
  }
  return "?";
}

ComponentKind kind_from_string(const std::string &s) {
  for (auto k : {ComponentKind::HeatPump, ComponentKind::Chiller, ComponentKind::Chp, ComponentKind::Pv,
                 ComponentKind::Battery}) {
    if (s == to_string(k)) return k;
  }
  throw Error("unknown component kind '" + s + "'");
}

std::string step_name(const std::string &base, int t) { return base + "[" + std::to_string(t) + "]"; }

double max_of(const Vec &v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

/// Heat delivered per MW of rated size for heat suppliers.
double heat_per_rated(const ComponentSpec &c) {
  return c.kind == ComponentKind::Chp ? c.heat_to_power : 1.0;
}

class Names {
public:
  explicit Names(const Model &m) {
    for (std::size_t i = 0; i < m.variables.size(); ++i) index_[m.variables[i].name] = static_cast<int>(i);
  }
  int operator()(const std::string &name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error("MES model has no variable '" + name + "'");
    return it->second;
  }

private:
  std::unordered_map<std::string, int> index_;
};

}  // namespace

const char *to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::HeatPump: return "heat-pump";
    case ComponentKind::Chiller: return "chiller";
    case ComponentKind::Chp: return "chp";
    case ComponentKind::Pv: return "pv";
    case ComponentKind::Battery: return "battery";
  }
  return "?";
}

void ComponentSpec::validate() const {
  const std::string who = to_string(kind);
  if (!(capacity_min >= 0.0 && capacity_min <= capacity_max)) throw Error(who + ": capacity bounds out of order");
  auto in_unit = [](double v) { return v > 0.0 && v <= 1.0; };
  if (!(min_part_load >= 0.0 && min_part_load < 1.0)) throw Error(who + ": min part load must be in [0, 1)");
  if (!(breakpoint > 0.0 && breakpoint < 1.0)) throw Error(who + ": breakpoint must be in (0, 1)");
  if (!(efficiency_low > 0.0 && efficiency_high > 0.0)) throw Error(who + ": efficiencies must be positive");
  if (!in_unit(charge_efficiency) || !in_unit(discharge_efficiency)) {
    throw Error(who + ": charge/discharge efficiencies must be in (0, 1]");
  }
  if (kind == ComponentKind::Chp && (efficiency_low > 1.0 || efficiency_high > 1.0)) {
    throw Error(who + ": electrical efficiency must be in (0, 1]");
  }
  if (investment_cost < 0.0 || operating_cost < 0.0) throw Error(who + ": costs must be nonnegative");
}

void DemandProfile::validate() const {
  const std::size_t t = weight.size();
  if (t == 0) throw Error("profile: at least one time step needed");
  if (heating.size() != t || cooling.size() != t || electricity.size() != t || pv_availability.size() != t) {
    throw Error("profile: every series needs one value per time step");
  }
  for (std::size_t i = 0; i < t; ++i) {
    if (heating[i] < 0.0 || cooling[i] < 0.0 || electricity[i] < 0.0) throw Error("profile: demands must be >= 0");
    if (!(weight[i] > 0.0)) throw Error("profile: weights must be positive");
    if (pv_availability[i] < 0.0 || pv_availability[i] > 1.0) throw Error("profile: PV availability must be in [0, 1]");
  }
}

const ComponentSpec &MesDataset::component(ComponentKind kind) const {
  for (const auto &c : components) {
    if (c.kind == kind) return c;
  }
  throw Error(std::string("dataset has no ") + to_string(kind));
}

MesDataset default_dataset(std::uint64_t seed, int steps) {
  if (steps < 1) throw Error("default_dataset: steps must be >= 1");
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1p-53); };

  MesDataset ds;
  ds.seed = seed;
  auto &p = ds.profile;
  double weight_sum = 0.0;
  for (int t = 0; t < steps; ++t) {
    const double phase = 2.0 * std::numbers::pi * (t + 0.5) / steps;
    p.heating.push_back(std::max(0.5, 5.5 + 2.5 * std::cos(phase) + uniform(-0.5, 0.5)));
    p.cooling.push_back(std::max(0.3, 3.0 - 2.0 * std::cos(phase) + uniform(-0.3, 0.3)));
    p.electricity.push_back(std::max(0.5, 4.0 + 0.8 * std::sin(phase) + uniform(-0.3, 0.3)));
    p.pv_availability.push_back(std::clamp(0.35 - 0.2 * std::cos(phase) + uniform(-0.05, 0.05), 0.0, 1.0));
    p.weight.push_back(1.0 + uniform(0.0, 0.5));
    weight_sum += p.weight.back();
  }
  for (double &w : p.weight) w *= 8760.0 / weight_sum;

  // Rated sizes follow the profile so every unit is needed but not oversized.
  const double chp_heat = 1.2 * 3.0;
  const double hp_size = std::max(1.0, std::ceil((max_of(p.heating) - chp_heat) * 1.2 * 2.0) / 2.0);
  ComponentSpec hp{.kind = ComponentKind::HeatPump, .capacity_max = hp_size, .investment_cost = 6000.0,
                   .operating_cost = 0.02, .efficiency_low = 3.0, .efficiency_high = 3.1,
                   .min_part_load = 0.3, .breakpoint = 0.6};
  const double cooling_size = std::ceil(max_of(p.cooling) * 1.1 * 2.0) / 2.0;
  ComponentSpec ch{.kind = ComponentKind::Chiller, .capacity_max = cooling_size, .investment_cost = 5000.0,
                   .operating_cost = 0.02, .efficiency_low = 4.0, .efficiency_high = 4.15,
                   .min_part_load = 0.3, .breakpoint = 0.6};
  ComponentSpec chp{.kind = ComponentKind::Chp, .capacity_max = 3.0, .investment_cost = 12000.0,
                    .operating_cost = 0.1, .efficiency_low = 0.33, .efficiency_high = 0.36,
                    .heat_to_power = 1.2, .min_part_load = 0.4, .breakpoint = 0.6};
  ComponentSpec pv{.kind = ComponentKind::Pv, .capacity_max = 5.0, .investment_cost = 9000.0};
  ComponentSpec bat{.kind = ComponentKind::Battery, .capacity_max = 4.0, .investment_cost = 3000.0,
                    .operating_cost = 0.01, .power_max = 2.0, .charge_efficiency = 0.95,
                    .discharge_efficiency = 0.95};
  ds.components = {hp, ch, chp, pv, bat};
  ds.prices = Prices{.electricity = 2.5, .gas = 0.75, .annualization = 0.1};
  return ds;
}

MesInstance build_instance(const MesDataset &dataset, const MesOptions &options) {
  dataset.profile.validate();
  for (const auto &c : dataset.components) c.validate();
  const auto &prof = dataset.profile;
  const auto &pr = dataset.prices;
  const int steps = prof.steps();
  const auto &hp = dataset.component(ComponentKind::HeatPump);
  const auto &ch = dataset.component(ComponentKind::Chiller);
  const auto &chp = dataset.component(ComponentKind::Chp);
  const auto &pv = dataset.component(ComponentKind::Pv);
  const auto &bat = dataset.component(ComponentKind::Battery);

  // Structural screen: the full superstructure must cover the peaks.
  const double heat_cap = hp.capacity_max + chp.heat_to_power * chp.capacity_max;
  if (heat_cap < max_of(prof.heating)) throw Error("MES data: heat suppliers cannot cover the peak heating demand");
  if (ch.capacity_max < max_of(prof.cooling)) throw Error("MES data: chiller cannot cover the peak cooling demand");

  MesInstance inst;
  inst.dataset = dataset;
  Model &m = inst.model;
  m.name = "mes-T" + std::to_string(steps) + "-seed" + std::to_string(dataset.seed);
  m.metadata["generator"] = "qbenders-mes";
  m.metadata["steps"] = std::to_string(steps);
  m.metadata["seed"] = std::to_string(dataset.seed);

  const double ann = pr.annualization;
  for (const auto *c : {&hp, &ch, &chp}) {
    m.add_variable(std::string("buy_") + short_name(c->kind), VarKind::Binary, 0.0, 1.0,
                   ann * c->investment_cost * c->capacity_max);
  }
  m.add_variable("buy_bat", VarKind::Binary, 0.0, 1.0, ann * bat.investment_cost * bat.capacity_max);
  const int pv_cap = m.add_variable("pv_cap", VarKind::Continuous, pv.capacity_min, pv.capacity_max, ann * pv.investment_cost);

  for (int t = 0; t < steps; ++t) {
    for (const char *b : {"charge", "discharge", "on_hp", "on_ch", "on_chp", "mode_hp", "mode_ch", "mode_chp"}) {
      m.add_variable(step_name(b, t), VarKind::Binary, 0.0, 1.0, 0.0);
    }
    const double w = prof.weight[t];
    m.add_variable(step_name("op_hp", t), VarKind::Continuous, 0.0, kInf, w * hp.operating_cost);
    m.add_variable(step_name("op_ch", t), VarKind::Continuous, 0.0, kInf, w * ch.operating_cost);
    m.add_variable(step_name("op_chp", t), VarKind::Continuous, 0.0, kInf,
                   w * (chp.operating_cost + pr.gas / chp.efficiency_low));
    m.add_variable(step_name("seg_hp", t), VarKind::Continuous, 0.0, kInf, 0.0);
    m.add_variable(step_name("seg_ch", t), VarKind::Continuous, 0.0, kInf, 0.0);
    m.add_variable(step_name("seg_chp", t), VarKind::Continuous, 0.0, kInf,
                   w * pr.gas * (1.0 / chp.efficiency_high - 1.0 / chp.efficiency_low));
    m.add_variable(step_name("soc", t), VarKind::Continuous, 0.0, kInf, 0.0);
    m.add_variable(step_name("charge_flow", t), VarKind::Continuous, 0.0, kInf, 0.0);
    m.add_variable(step_name("discharge_flow", t), VarKind::Continuous, 0.0, kInf, w * bat.operating_cost);
    m.add_variable(step_name("grid", t), VarKind::Continuous, 0.0, kInf, w * pr.electricity);
  }

  const Names v(m);
  for (int t = 0; t < steps; ++t) {
    for (const auto kind : kDispatchable) {
      const auto &c = dataset.component(kind);
      const std::string u = short_name(kind);
      const int op = v(step_name("op_" + u, t)), seg = v(step_name("seg_" + u, t));
      const int on = v(step_name("on_" + u, t)), mode = v(step_name("mode_" + u, t)), buy = v("buy_" + u);
      const double k = c.capacity_max;
      m.add_constraint(step_name("cap:" + u, t), Sense::LessEqual, 0.0, {{op, 1.0}, {on, -k}});
      m.add_constraint(step_name("minload:" + u, t), Sense::GreaterEqual, 0.0, {{op, 1.0}, {on, -c.min_part_load * k}});
      m.add_constraint(step_name("seg2:" + u, t), Sense::LessEqual, 0.0, {{seg, 1.0}, {mode, -(1.0 - c.breakpoint) * k}});
      m.add_constraint(step_name("seg1full:" + u, t), Sense::GreaterEqual, 0.0,
                       {{op, 1.0}, {seg, -1.0}, {mode, -c.breakpoint * k}});
      m.add_constraint(step_name("seg1:" + u, t), Sense::LessEqual, 0.0, {{op, 1.0}, {seg, -1.0}, {on, -c.breakpoint * k}});
      m.add_constraint(step_name("mode:" + u, t), Sense::LessEqual, 0.0, {{mode, 1.0}, {on, -1.0}});
      m.add_constraint(step_name("on:" + u, t), Sense::LessEqual, 0.0, {{on, 1.0}, {buy, -1.0}});
    }

    const int chg = v(step_name("charge", t)), dis = v(step_name("discharge", t)), buy_bat = v("buy_bat");
    const int cf = v(step_name("charge_flow", t)), df = v(step_name("discharge_flow", t));
    const int soc = v(step_name("soc", t)), soc_prev = v(step_name("soc", (t + steps - 1) % steps));
    m.add_constraint(step_name("chg", t), Sense::LessEqual, 0.0, {{cf, 1.0}, {chg, -bat.power_max}});
    m.add_constraint(step_name("dis", t), Sense::LessEqual, 0.0, {{df, 1.0}, {dis, -bat.power_max}});
    m.add_constraint(step_name("excl", t), Sense::LessEqual, 1.0, {{chg, 1.0}, {dis, 1.0}});
    m.add_constraint(step_name("chgbuy", t), Sense::LessEqual, 0.0, {{chg, 1.0}, {buy_bat, -1.0}});
    m.add_constraint(step_name("disbuy", t), Sense::LessEqual, 0.0, {{dis, 1.0}, {buy_bat, -1.0}});
    m.add_constraint(step_name("soccap", t), Sense::LessEqual, 0.0, {{soc, 1.0}, {buy_bat, -bat.capacity_max}});
    // Flows are scaled by the step weight so stored energy is counted like costs.
    const double w = prof.weight[t];
    std::vector<std::pair<int, double>> storage{
        {soc, 1.0}, {cf, -w * bat.charge_efficiency}, {df, w / bat.discharge_efficiency}};
    if (soc_prev != soc) storage.emplace_back(soc_prev, -1.0);
    m.add_constraint(step_name("storage", t), Sense::Equal, 0.0, std::move(storage));

    const int op_hp = v(step_name("op_hp", t)), op_ch = v(step_name("op_ch", t)), op_chp = v(step_name("op_chp", t));
    const int seg_hp = v(step_name("seg_hp", t)), seg_ch = v(step_name("seg_ch", t));
    m.add_constraint(step_name("heat", t), Sense::GreaterEqual, prof.heating[t],
                     {{op_hp, 1.0}, {op_chp, chp.heat_to_power}});
    m.add_constraint(step_name("cool", t), Sense::GreaterEqual, prof.cooling[t], {{op_ch, 1.0}});
    m.add_constraint(step_name("elec", t), Sense::GreaterEqual, prof.electricity[t],
                     {{v(step_name("grid", t)), 1.0},
                      {pv_cap, prof.pv_availability[t]},
                      {op_chp, 1.0},
                      {df, 1.0},
                      {cf, -1.0},
                      {op_hp, -1.0 / hp.efficiency_low},
                      {seg_hp, 1.0 / hp.efficiency_low - 1.0 / hp.efficiency_high},
                      {op_ch, -1.0 / ch.efficiency_low},
                      {seg_ch, 1.0 / ch.efficiency_low - 1.0 / ch.efficiency_high}});
  }

  if (options.valid_inequalities) {
    for (auto &row : peak_demand_inequalities(inst)) {
      m.add_constraint(std::move(row.name), row.sense, row.rhs, std::move(row.terms));
      ++inst.valid_inequality_rows;
    }
  }
  return inst;
}

std::vector<Constraint> peak_demand_inequalities(const MesInstance &inst) {
  const auto &ds = inst.dataset;
  const auto &prof = ds.profile;
  const auto &hp = ds.component(ComponentKind::HeatPump);
  const auto &ch = ds.component(ComponentKind::Chiller);
  const auto &chp = ds.component(ComponentKind::Chp);
  const Names v(inst.model);
  std::vector<Constraint> rows;
  auto heat_row = [&](std::string name, int hp_var, int chp_var, double demand) {
    if (demand <= 0.0) return;
    rows.push_back({std::move(name), Sense::GreaterEqual, demand,
                    {{hp_var, hp.capacity_max * heat_per_rated(hp)}, {chp_var, chp.capacity_max * heat_per_rated(chp)}}});
  };
  auto cool_row = [&](std::string name, int ch_var, double demand) {
    if (demand <= 0.0) return;
    rows.push_back({std::move(name), Sense::GreaterEqual, demand, {{ch_var, ch.capacity_max}}});
  };
  heat_row("vi:peak-heat", v("buy_hp"), v("buy_chp"), max_of(prof.heating));
  cool_row("vi:peak-cool", v("buy_ch"), max_of(prof.cooling));
  for (int t = 0; t < prof.steps(); ++t) {
    heat_row(step_name("vi:heat", t), v(step_name("on_hp", t)), v(step_name("on_chp", t)), prof.heating[t]);
    cool_row(step_name("vi:cool", t), v(step_name("on_ch", t)), prof.cooling[t]);
  }
  return rows;
}

std::string dataset_to_json(const MesDataset &ds) {
  Json j;
  j["format"] = "qbenders-mes-dataset";
  j["version"] = 1;
  j["seed"] = ds.seed;
  j["steps"] = ds.profile.steps();
  Json comps = Json::array();
  for (const auto &c : ds.components) {
    comps.push_back({{"kind", to_string(c.kind)},
                     {"capacity_min", c.capacity_min},
                     {"capacity_max", c.capacity_max},
                     {"investment_cost", c.investment_cost},
                     {"operating_cost", c.operating_cost},
                     {"efficiency_low", c.efficiency_low},
                     {"efficiency_high", c.efficiency_high},
                     {"heat_to_power", c.heat_to_power},
                     {"min_part_load", c.min_part_load},
                     {"breakpoint", c.breakpoint},
                     {"power_max", c.power_max},
                     {"charge_efficiency", c.charge_efficiency},
                     {"discharge_efficiency", c.discharge_efficiency}});
  }
  j["components"] = comps;
  const auto &p = ds.profile;
  j["profile"] = {{"heating", p.heating},
                  {"cooling", p.cooling},
                  {"electricity", p.electricity},
                  {"weight", p.weight},
                  {"pv_availability", p.pv_availability}};
  j["prices"] = {{"electricity", ds.prices.electricity}, {"gas", ds.prices.gas}, {"annualization", ds.prices.annualization}};
  return j.dump(2) + "\n";
}

MesDataset dataset_from_json(const std::string &text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error &e) {
    throw Error(std::string("dataset JSON: ") + e.what());
  }
  try {
    MesDataset ds;
    ds.seed = j.at("seed").get<std::uint64_t>();
    for (const auto &c : j.at("components")) {
      ComponentSpec s;
      s.kind = kind_from_string(c.at("kind").get<std::string>());
      s.capacity_min = c.at("capacity_min").get<double>();
      s.capacity_max = c.at("capacity_max").get<double>();
      s.investment_cost = c.at("investment_cost").get<double>();
      s.operating_cost = c.at("operating_cost").get<double>();
      s.efficiency_low = c.at("efficiency_low").get<double>();
      s.efficiency_high = c.at("efficiency_high").get<double>();
      s.heat_to_power = c.at("heat_to_power").get<double>();
      s.min_part_load = c.at("min_part_load").get<double>();
      s.breakpoint = c.at("breakpoint").get<double>();
      s.power_max = c.at("power_max").get<double>();
      s.charge_efficiency = c.at("charge_efficiency").get<double>();
      s.discharge_efficiency = c.at("discharge_efficiency").get<double>();
      ds.components.push_back(s);
    }
    const auto &p = j.at("profile");
    ds.profile.heating = p.at("heating").get<Vec>();
    ds.profile.cooling = p.at("cooling").get<Vec>();
    ds.profile.electricity = p.at("electricity").get<Vec>();
    ds.profile.weight = p.at("weight").get<Vec>();
    ds.profile.pv_availability = p.at("pv_availability").get<Vec>();
    const auto &pr = j.at("prices");
    ds.prices = {pr.at("electricity").get<double>(), pr.at("gas").get<double>(), pr.at("annualization").get<double>()};
    return ds;
  } catch (const Json::exception &e) {
    throw Error(std::string("dataset JSON: ") + e.what());
  }
}

}  // namespace qbenders
