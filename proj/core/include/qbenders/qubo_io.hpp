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

#include <iosfwd>
#include <string>

#include "qbenders/qubo.hpp"

namespace qbenders {

/// Plain-text coordinate form:
///   qubo <num_bits> <linear count> <quadratic count>
///   constant <c>
///   <i> <i> <linear_i>      one line per nonzero linear term
///   <i> <j> <w_ij>          one line per quadratic term, i < j
/// Numbers use 17 significant digits so a round trip is bit-exact.
void write_qubo(std::ostream &out, const Qubo &q);
Qubo read_qubo(std::istream &in);

void write_qubo_file(const std::string &path, const Qubo &q);
Qubo read_qubo_file(const std::string &path);

}  // namespace qbenders
