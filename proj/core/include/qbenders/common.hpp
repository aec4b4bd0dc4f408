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

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qbenders {

using Vec = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Raised for malformed models, dimension mismatches and contract violations.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Sense { GreaterEqual, LessEqual, Equal };

const char *to_string(Sense sense);

double dot(const Vec &a, const Vec &b);

}  // namespace qbenders
