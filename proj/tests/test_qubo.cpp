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

#include <cmath>
#include <random>
#include <sstream>

#include "corpus.hpp"
#include "doctest.h"
#include "qbenders/mip.hpp"
#include "qbenders/qubo.hpp"
#include "qbenders/qubo_io.hpp"
#include "qbenders/samplers.hpp"

using namespace qbenders;

namespace {

MasterProblem two_binaries(Sense sense, Vec coeff, double rhs) {
  MasterProblem mp;
  mp.n_int = 2;
  mp.d_cost = {0.0, 0.0};
  mp.int_upper = {1.0, 1.0};
  mp.int_names = {"y1", "y2"};
  mp.zeta_lo = 0.0;
  mp.zeta_hi = 0.0;
  MasterRow row;
  row.name = "r";
  row.coeff = std::move(coeff);
  row.rhs = rhs;
  row.sense = sense;
  mp.rows.push_back(row);
  return mp;
}

PenaltyPolicy unit_rho() {
  PenaltyPolicy p;
  p.initial_rho = 1.0;
  return p;
}

}  // namespace

TEST_CASE("equality penalty expands (y1 + y2 - 1)^2") {
  const Qubo q = compile_master(two_binaries(Sense::Equal, {1, 1}, 1), unit_rho(), 1.0);
  REQUIRE(q.num_bits == 2);
  CHECK(q.constant == 1.0);
  CHECK(q.linear == Vec{-1.0, -1.0});
  REQUIRE(q.quadratic.size() == 1);
  CHECK(q.quadratic[0] == QuadTerm{0, 1, 2.0});
  const SampleSet s = sample_exact(q);
  REQUIRE(s.samples.size() == 2);
  CHECK(s.samples[0].bits == Bits{0, 1});
  CHECK(s.samples[1].bits == Bits{1, 0});
  CHECK(s.samples[0].energy == 0.0);
}

TEST_CASE("inequality at its bound gets an empty slack") {
  const Qubo q = compile_master(two_binaries(Sense::GreaterEqual, {1, 0}, 1), unit_rho(), 1.0);
  CHECK(q.rows[0].slack.bits() == 0);
  REQUIRE(q.num_bits == 2);
  CHECK(q.constant == 1.0);
  CHECK(q.linear == Vec{-1.0, 0.0});
  CHECK(q.quadratic.empty());
}

TEST_CASE("slack covers exactly the violation-free range") {
  // y1 + y2 >= 0 over binaries leaves room 0..2: two slack bits.
  const Qubo q = compile_master(two_binaries(Sense::GreaterEqual, {1, 1}, 0), unit_rho(), 1.0);
  CHECK(q.rows[0].slack.bits() == 2);
  CHECK(q.rows[0].slack.max_value() == 3.0);
  CHECK(q.num_bits == 4);
}

TEST_CASE("unsatisfiable rows are rejected at compile time") {
  CHECK_THROWS_AS(compile_master(two_binaries(Sense::GreaterEqual, {1, 1}, 3), unit_rho(), 1.0), Error);
}

TEST_CASE("encoding uses the fewest bits that reach hi") {
  CHECK(encode_value(0, 10, 1).k_max == 3);
  CHECK(encode_value(0, 7, 1).k_max == 2);
  CHECK(encode_value(0, 8, 1).k_max == 3);
  CHECK(encode_value(0, 1, 1).k_max == 0);
  CHECK(encode_value(2.5, 2.5, 0.1).k_max == -1);
  CHECK(encode_value(-1, 2.2, 0.1).k_max == 5);  // 32 steps of 0.1
  CHECK(encode_value(-1, 2.1, 0.1).k_max == 4);  // 31 steps fit in 5 bits
  const BinaryEncoding e = encode_value(-1.0, 2.2, 0.1);
  CHECK(decode(e, quantize(e, 0.55)) == doctest::Approx(0.5));
  CHECK(decode(e, quantize(e, -7.0)) == doctest::Approx(-1.0));
  CHECK(decode(e, quantize(e, 9.0)) == doctest::Approx(e.max_value()));
}

TEST_CASE("decode of quantize is exact on every representable value") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const double step = std::ldexp(1.0, std::uniform_int_distribution<int>(-4, 3)(rng));
    const double lo = std::uniform_int_distribution<int>(-100, 100)(rng) * step;
    const int span = std::uniform_int_distribution<int>(0, 300)(rng);
    const BinaryEncoding e = encode_value(lo, lo + span * step, step);
    for (int k = 0; k <= span; ++k) {
      const double v = lo + k * step;
      REQUIRE(decode(e, quantize(e, v)) == v);
    }
  }
}

TEST_CASE("escalation scales only the violated row") {
  auto mp = two_binaries(Sense::Equal, {1, 1}, 1);
  MasterRow other;
  other.name = "other";
  other.coeff = {1, 0};
  other.rhs = 0;
  mp.rows.push_back(other);
  const Qubo q = compile_master(mp, unit_rho(), 1.0);
  PenaltyPolicy policy = unit_rho();
  const auto next = escalate_penalties(q, {1.0, 0.0}, policy);
  REQUIRE(next);
  CHECK(next->rows[0].rho == 10.0);
  CHECK(next->rows[1].rho == 1.0);
  const Qubo before = row_penalty(q, 0), after = row_penalty(*next, 0);
  CHECK(after.constant == 10.0 * before.constant);
  for (std::size_t i = 0; i < before.linear.size(); ++i) CHECK(after.linear[i] == 10.0 * before.linear[i]);
  CHECK(row_penalty(*next, 1).linear == row_penalty(q, 1).linear);

  Qubo last = q;
  for (int k = 0; k < policy.max_escalations; ++k) last = *escalate_penalties(last, {1.0, 0.0}, policy);
  CHECK_FALSE(escalate_penalties(last, {1.0, 0.0}, policy).has_value());
}

TEST_CASE("feasible assignments carry exactly the master objective") {
  auto rm = testing::random_master(11, true);
  const Qubo q = compile_master(rm.master, {}, rm.zeta_step);
  const SampleSet s = sample_exact(q);
  const QuboSolution sol = extract_solution(q, s.best().bits);
  CHECK(sol.feasible);
  CHECK(sol.penalty == 0.0);
  CHECK(s.best().energy == sol.master_objective);
}

TEST_CASE("small random masters: QUBO argmin matches the brute-force master") {
  // The zeta box is part of the master here, so the oracle is the grid
  // enumeration rather than the unbounded MILP form.
  int checked = 0, bounded_agree = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto rm = testing::random_master(seed, true, 3);
    const Qubo q = compile_master(rm.master, {}, rm.zeta_step);
    if (q.num_bits > 12) continue;
    ++checked;
    const SampleSet s = sample_exact(q);
    const QuboSolution sol = extract_solution(q, s.best().bits);
    CAPTURE(seed);
    const testing::MasterOptimum opt = testing::brute_force_master(rm.master);
    if (std::isinf(opt.objective)) {
      CHECK_FALSE(sol.feasible);
      continue;
    }
    CHECK(sol.feasible);
    CHECK(sol.master_objective == opt.objective);
    // Without an active zeta ceiling the MILP form agrees as well.
    const MipOutcome exact = branch_and_bound(rm.master.to_milp());
    if (exact.status == MipStatus::Optimal && rm.master.zeta_required(exact.y) <= rm.master.zeta_hi) {
      CHECK(sol.master_objective == doctest::Approx(exact.objective).epsilon(1e-12));
      ++bounded_agree;
    }
  }
  CHECK(checked >= 10);
  CHECK(bounded_agree >= 5);
}

TEST_CASE("QUBO text format round-trips and reports bad lines") {
  auto rm = testing::random_master(3, false);
  const Qubo q = compile_master(rm.master, {}, rm.zeta_step);
  std::stringstream ss;
  write_qubo(ss, q);
  const Qubo back = read_qubo(ss);
  CHECK(back.num_bits == q.num_bits);
  CHECK(back.constant == q.constant);
  CHECK(back.linear == q.linear);
  CHECK(back.quadratic == q.quadratic);

  std::istringstream bad("qubo 2 1 1\nconstant 0\n0 0 1.5\n0 5 2\n");
  CHECK_THROWS_WITH_AS(read_qubo(bad), doctest::Contains("line 4"), Error);
}

TEST_CASE("coupling looks up either orientation") {
  const Qubo q = Qubo::from_terms(3, 0.0, {0, 0, 0}, {{2, 0, 1.5}, {0, 2, 0.5}, {1, 2, 0.0}});
  CHECK(q.quadratic.size() == 1);
  CHECK(q.coupling(0, 2) == 2.0);
  CHECK(q.coupling(2, 0) == 2.0);
  CHECK(q.coupling(1, 2) == 0.0);
}
