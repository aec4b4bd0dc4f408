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
#include "qbenders/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qbenders {
namespace {

using nlohmann::json;

constexpr const char *kFormat = "qbenders-model";
constexpr int kVersion = 1;

json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return json(v);
}

double read_number(const json &node, const std::string &field) {
  if (node.is_number()) return node.get<double>();
  if (node.is_string()) {
    const auto s = node.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw Error(field + ": expected a number or \"inf\"");
}

const json &require(const json &node, const char *key, const std::string &path) {
  auto it = node.find(key);
  if (it == node.end()) throw Error(path + ": missing field '" + key + "'");
  return *it;
}

VarKind parse_kind(const std::string &s, const std::string &field) {
  if (s == "continuous") return VarKind::Continuous;
  if (s == "integer") return VarKind::Integer;
  if (s == "binary") return VarKind::Binary;
  throw Error(field + ": unknown variable kind '" + s + "'");
}

Sense parse_sense(const std::string &s, const std::string &field) {
  if (s == ">=") return Sense::GreaterEqual;
  if (s == "<=") return Sense::LessEqual;
  if (s == "=" || s == "==") return Sense::Equal;
  throw Error(field + ": unknown constraint sense '" + s + "'");
}

std::size_t line_of(const std::string &text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

void save_model(const Model &model, std::ostream &out) {
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["name"] = model.name;
  j["metadata"] = model.metadata;
  j["objective_offset"] = model.objective_offset;
  json vars = json::array();
  for (const auto &v : model.variables) {
    vars.push_back({{"name", v.name},
                    {"kind", to_string(v.kind)},
                    {"lower", number_or_inf(v.lower)},
                    {"upper", number_or_inf(v.upper)},
                    {"cost", v.cost}});
  }
  j["variables"] = std::move(vars);
  json rows = json::array();
  for (const auto &c : model.constraints) {
    json terms = json::array();
    for (auto [idx, a] : c.terms) terms.push_back(json::array({idx, a}));
    rows.push_back({{"name", c.name}, {"sense", to_string(c.sense)}, {"rhs", c.rhs}, {"terms", std::move(terms)}});
  }
  j["constraints"] = std::move(rows);
  out << j.dump(1) << '\n';
}

Model load_model(std::istream &in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  return model_from_string(buffer.str());
}

Model model_from_string(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw Error("problem file line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  try {
    if (!j.is_object()) throw Error("problem file: top level must be an object");
    if (require(j, "format", "problem file") != kFormat) throw Error("format: expected \"qbenders-model\"");
    if (require(j, "version", "problem file") != kVersion) throw Error("version: unsupported version");

    Model m;
    m.name = j.value("name", std::string{});
    if (auto it = j.find("metadata"); it != j.end()) m.metadata = it->get<std::map<std::string, std::string>>();
    m.objective_offset = j.value("objective_offset", 0.0);

    const auto &vars = require(j, "variables", "problem file");
    for (std::size_t k = 0; k < vars.size(); ++k) {
      const std::string path = "variables[" + std::to_string(k) + "]";
      const auto &v = vars[k];
      Variable var;
      var.name = require(v, "name", path).get<std::string>();
      var.kind = parse_kind(require(v, "kind", path).get<std::string>(), path + ".kind");
      var.lower = read_number(require(v, "lower", path), path + ".lower");
      var.upper = read_number(require(v, "upper", path), path + ".upper");
      var.cost = read_number(require(v, "cost", path), path + ".cost");
      m.variables.push_back(std::move(var));
    }
    const auto &rows = require(j, "constraints", "problem file");
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const std::string path = "constraints[" + std::to_string(k) + "]";
      const auto &r = rows[k];
      Constraint c;
      c.name = require(r, "name", path).get<std::string>();
      c.sense = parse_sense(require(r, "sense", path).get<std::string>(), path + ".sense");
      c.rhs = read_number(require(r, "rhs", path), path + ".rhs");
      for (const auto &t : require(r, "terms", path)) {
        if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer()) {
          throw Error(path + ".terms: each term must be [variable_index, coefficient]");
        }
        const int idx = t[0].get<int>();
        if (idx < 0 || static_cast<std::size_t>(idx) >= m.variables.size()) {
          throw Error(path + ".terms: variable index " + std::to_string(idx) + " out of range");
        }
        c.terms.emplace_back(idx, read_number(t[1], path + ".terms"));
      }
      m.constraints.push_back(std::move(c));
    }
    return m;
  } catch (const json::exception &e) {
    throw Error(std::string("problem file: ") + e.what());
  }
}

std::string model_to_string(const Model &model) {
  std::ostringstream out;
  save_model(model, out);
  return out.str();
}

void save_model_file(const Model &model, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  save_model(model, out);
}

Model load_model_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return load_model(in);
}

}  // namespace qbenders
