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
#include <string>
#include <vector>

#include "qbenders/model.hpp"

namespace qbenders {

enum class ComponentKind { HeatPump, Chiller, Chp, Pv, Battery };
const char *to_string(ComponentKind kind);

/// One unit of the superstructure. Dispatchable units (heat pump, chiller,
/// CHP) come in a fixed rated size and follow a two-segment part-load curve:
/// output up to breakpoint x rated size converts at efficiency_low, output
/// above it at efficiency_high. PV capacity is sized continuously. Money is
/// in currency units, power in MW, energy in MWh.
struct ComponentSpec {
  ComponentKind kind = ComponentKind::HeatPump;
  double capacity_min = 0.0;
  double capacity_max = 0.0;       // rated size; PV: sizing upper bound; battery: MWh
  double investment_cost = 0.0;    // per MW (per MWh for the battery)
  double operating_cost = 0.0;     // per MWh of output
  double efficiency_low = 1.0;     // output per unit input on the first segment
  double efficiency_high = 1.0;    // output per unit input on the second segment
  double heat_to_power = 0.0;      // CHP heat per unit electricity
  double min_part_load = 0.0;      // fraction of rated size
  double breakpoint = 0.5;         // fraction of rated size where segment 2 starts
  double power_max = 0.0;          // battery charge/discharge limit, MW
  double charge_efficiency = 1.0;
  double discharge_efficiency = 1.0;

  void validate() const;
};

struct DemandProfile {
  Vec heating;
  Vec cooling;
  Vec electricity;
  Vec weight;           // hours represented by each typical step
  Vec pv_availability;  // in [0, 1]

  int steps() const { return static_cast<int>(weight.size()); }
  void validate() const;
};

struct Prices {
  double electricity = 1.5;  // grid import, per MWh
  double gas = 0.5;          // per MWh
  double annualization = 0.1;
};

struct MesDataset {
  std::vector<ComponentSpec> components;  // one of each kind
  DemandProfile profile;
  Prices prices;
  std::uint64_t seed = 0;

  const ComponentSpec &component(ComponentKind kind) const;
};

struct MesOptions {
  bool valid_inequalities = true;
};

struct MesInstance {
  MesDataset dataset;
  Model model;
  int valid_inequality_rows = 0;
};

/// Deterministic synthetic dataset with T typical steps.
MesDataset default_dataset(std::uint64_t seed, int steps);

MesInstance build_instance(const MesDataset &dataset, const MesOptions &options = {});

/// Pure purchase/on-binary rows implied by the balances and linking rows:
/// installed (or running) supply covers the peak (or step) demand per form.
std::vector<Constraint> peak_demand_inequalities(const MesInstance &inst);

/// Component table, profile table and prices as JSON text.
std::string dataset_to_json(const MesDataset &dataset);
MesDataset dataset_from_json(const std::string &text);

}  // namespace qbenders
