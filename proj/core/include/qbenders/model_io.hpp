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

#include <filesystem>
#include <iosfwd>
#include <string>

#include "qbenders/model.hpp"

namespace qbenders {

/// Problem file: a single JSON object, format "qbenders-model" version 1.
///
///   {
///     "format": "qbenders-model", "version": 1,
///     "name": "...", "metadata": {"key": "value"}, "objective_offset": 0.0,
///     "variables": [{"name": "x", "kind": "continuous|integer|binary",
///                    "lower": 0.0, "upper": 10.0 | "inf", "cost": 1.5}],
///     "constraints": [{"name": "c0", "sense": ">=|<=|=", "rhs": 3.0,
///                      "terms": [[var_index, coefficient], ...]}]
///   }
///
/// Numbers are written in shortest round-trip form, so load(save(m)) == m.
void save_model(const Model &model, std::ostream &out);
Model load_model(std::istream &in);

void save_model_file(const Model &model, const std::filesystem::path &path);
Model load_model_file(const std::filesystem::path &path);

std::string model_to_string(const Model &model);
Model model_from_string(const std::string &text);

}  // namespace qbenders
