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

#include <sstream>

#include "corpus.hpp"
#include "doctest.h"
#include "qbenders/model.hpp"
#include "qbenders/model_io.hpp"
#include "qbenders/sparse.hpp"

using namespace qbenders;

TEST_CASE("sparse matrix sums duplicates and drops zeros") {
  auto m = SparseMatrix::from_triplets(2, 3, {{1, 2, 1.0}, {0, 0, 2.0}, {1, 2, 3.0}, {0, 1, 0.0}});
  CHECK(m.nonzeros() == 2);
  CHECK(m.multiply({1, 1, 1}) == Vec{2.0, 4.0});
  CHECK(m.transpose_multiply({1, 2}) == Vec{2.0, 0.0, 8.0});
  CHECK(m.row(1).size() == 1);
  const std::vector<int> pick{1};
  CHECK(m.select_rows(pick).to_dense() == std::vector<Vec>{{0, 0, 4}});
  CHECK_THROWS_AS(SparseMatrix::from_triplets(1, 1, {{0, 3, 1.0}}), Error);
}

TEST_CASE("normalize maps bounds and senses into the >= standard form") {
  Model raw;
  const int x = raw.add_variable("x", VarKind::Continuous, 1.0, 4.0, 2.0);
  const int y = raw.add_variable("y", VarKind::Integer, -1.0, 2.0, 3.0);
  raw.add_constraint("le", Sense::LessEqual, 5.0, {{x, 1.0}, {y, 1.0}});
  raw.add_constraint("eq", Sense::Equal, 2.0, {{x, 1.0}, {y, -1.0}});
  const StandardMilp m = normalize(raw);
  CHECK(m.n_cont == 1);
  CHECK(m.n_int == 1);
  CHECK(m.int_upper == Vec{3.0});
  // Objective constant collects cost * lower bound shifts: 2*1 + 3*(-1).
  CHECK(m.objective_constant == doctest::Approx(-1.0));
  // <= row, two rows for the equality, one for the finite continuous upper bound.
  CHECK(m.rows() == 4);

  const Vec raw_point{2.0, 0.0};
  CHECK(raw.max_violation(raw_point) == 0.0);
  const auto [xs, ys] = to_standard(m, raw_point);
  CHECK(xs == Vec{1.0});
  CHECK(ys == Vec{1.0});
  CHECK(denormalize(m, xs, ys) == raw_point);
  CHECK(m.objective(xs, ys) == doctest::Approx(raw.objective(raw_point)));
  CHECK(m.max_violation(xs, ys) <= 1e-12);
}

TEST_CASE("normalize rejects free and unbounded integer variables") {
  Model a;
  a.add_variable("free", VarKind::Continuous, -kInf, kInf, 1.0);
  CHECK_THROWS_WITH_AS(normalize(a), doctest::Contains("no finite lower bound"), Error);
  Model b;
  b.add_variable("n", VarKind::Integer, 0.0, kInf, 1.0);
  CHECK_THROWS_WITH_AS(normalize(b), doctest::Contains("finite upper bound"), Error);
}

TEST_CASE("constraint classes follow the variable kinds of each row") {
  Model raw;
  const int x = raw.add_variable("x", VarKind::Continuous, 0, 5, 1);
  const int y = raw.add_variable("y", VarKind::Binary, 0, 1, 1);
  raw.add_constraint("pure", Sense::GreaterEqual, 0.0, {{y, 1.0}});
  raw.add_constraint("mixed", Sense::GreaterEqual, 1.0, {{x, 1.0}, {y, 2.0}});
  raw.add_constraint("cont", Sense::GreaterEqual, 1.0, {{x, 1.0}});
  const StandardMilp m = normalize(raw);
  const auto cls = classify_constraints(m);
  REQUIRE(cls.size() == 4);
  CHECK(cls[0] == ConstraintClass::PureInteger);
  CHECK(cls[1] == ConstraintClass::Mixed);
  CHECK(cls[2] == ConstraintClass::PureContinuous);
  const ModelStats st = model_stats(raw);
  CHECK(st.pure_integer_rows == 1);
  CHECK(st.mixed_rows == 1);
  CHECK(st.pure_continuous_rows == 1);
  CHECK(st.binary_after_encoding == 1);
}

TEST_CASE("bits_for_integer is the width of the upper bound") {
  CHECK(bits_for_integer(0) == 0);
  CHECK(bits_for_integer(1) == 1);
  CHECK(bits_for_integer(2) == 2);
  CHECK(bits_for_integer(3) == 2);
  CHECK(bits_for_integer(4) == 3);
  CHECK(bits_for_integer(1023) == 10);
}

TEST_CASE("problem files round-trip the whole corpus") {
  for (int seed = 0; seed < testing::kCorpusSize; ++seed) {
    const Model m = testing::random_milp(static_cast<std::uint64_t>(seed));
    CHECK(model_from_string(model_to_string(m)) == m);
  }
}

TEST_CASE("problem file diagnostics name the line or field") {
  CHECK_THROWS_WITH_AS(model_from_string("{\n\"format\": \"qbenders-model\",\n  oops\n}"), doctest::Contains("line 3"),
                       Error);
  CHECK_THROWS_WITH_AS(model_from_string(R"({"format": "other", "version": 1})"), doctest::Contains("format"), Error);
  CHECK_THROWS_WITH_AS(
      model_from_string(R"({"format": "qbenders-model", "version": 1, "name": "m",
        "variables": [{"name": "v", "kind": "weird", "lower": 0, "upper": 1, "cost": 0}], "constraints": []})"),
      doctest::Contains("unknown variable kind"), Error);
  CHECK_THROWS_WITH_AS(
      model_from_string(R"({"format": "qbenders-model", "version": 1, "name": "m",
        "variables": [{"name": "v", "kind": "binary", "lower": 0, "upper": 1, "cost": 0}],
        "constraints": [{"name": "r", "sense": ">=", "rhs": 0, "terms": [[5, 1.0]]}]})"),
      doctest::Contains("out of range"), Error);
}
