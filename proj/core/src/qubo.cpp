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
#include "qbenders/qubo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

namespace qbenders {
namespace {

constexpr double kSnapTol = 1e-9;
constexpr double kExactLimit = 0x1p53;  // integers below this are exact in double

bool is_integral(double v) {
  return std::abs(v - std::round(v)) <= kSnapTol * std::max(1.0, std::abs(v));
}

double snap(double v) { return is_integral(v) ? std::round(v) : v; }

/// Smallest 10^p (p <= 6) that makes every value integral, 0 when none does.
double decimal_scale(const Vec &coeff, double rhs) {
  double s = 1.0;
  for (int p = 0; p <= 6; ++p, s *= 10.0) {
    bool ok = is_integral(rhs * s);
    for (std::size_t j = 0; ok && j < coeff.size(); ++j) ok = is_integral(coeff[j] * s);
    if (ok) return s;
  }
  return 0.0;
}

double floor_units(double v, double step) { return std::floor(v / step + kSnapTol); }

struct Term {
  int bit;
  double w;
};

/// Linear expression of a penalty row over bits: sum w_b f_b + kappa.
void row_expression(const Qubo &q, const PenaltyRow &row, std::vector<Term> &terms, double &kappa) {
  terms.clear();
  kappa = -row.rhs;
  for (auto [j, a] : row.y_terms) {
    const auto &enc = q.y_encoding[static_cast<std::size_t>(j)];
    kappa += a * enc.offset;
    for (int k = 0; k < enc.bits(); ++k) terms.push_back({enc.first_bit + k, a * enc.step * std::ldexp(1.0, k)});
  }
  if (row.zeta_coeff != 0.0) {
    const auto &enc = q.zeta_encoding;
    double off = row.zeta_coeff * enc.offset;
    if (row.integer_regime) off = snap(off);
    kappa += off;
    for (int k = 0; k < enc.bits(); ++k) {
      double w = row.zeta_coeff * enc.step * std::ldexp(1.0, k);
      terms.push_back({enc.first_bit + k, row.integer_regime ? snap(w) : w});
    }
  }
  if (!row.equality) {
    for (int k = 0; k < row.slack.bits(); ++k) {
      terms.push_back({row.slack.first_bit + k, -row.slack.step * std::ldexp(1.0, k)});
    }
  }
}

class Assembler {
public:
  explicit Assembler(int n) : n_(n), linear_(static_cast<std::size_t>(n), 0.0) {}

  void add_constant(double v) {
    constant_ += v;
    magnitude_ += std::abs(v);
  }
  void add_linear(int i, double v) {
    linear_[i] += v;
    magnitude_ += std::abs(v);
  }
  void add_pair(int i, int j, double v) {
    if (i > j) std::swap(i, j);
    magnitude_ += std::abs(v);
    quad_[static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n_) + static_cast<std::uint64_t>(j)] += v;
  }

  void add_penalty(const std::vector<Term> &terms, double kappa, double rho) {
    add_constant(rho * kappa * kappa);
    for (std::size_t a = 0; a < terms.size(); ++a) {
      const auto &ta = terms[a];
      add_linear(ta.bit, rho * ta.w * ta.w);
      add_linear(ta.bit, 2.0 * rho * kappa * ta.w);
      for (std::size_t b = a + 1; b < terms.size(); ++b) add_pair(ta.bit, terms[b].bit, 2.0 * rho * ta.w * terms[b].w);
    }
  }

  /// Sum of |contribution| so far; bounds every partial sum.
  double magnitude() const { return magnitude_; }

  void finish(Qubo &q) {
    q.num_bits = n_;
    q.constant = constant_;
    q.linear = std::move(linear_);
    q.quadratic.clear();
    q.quadratic.reserve(quad_.size());
    for (auto [key, w] : quad_) {
      if (w == 0.0) continue;
      q.quadratic.push_back({static_cast<int>(key / static_cast<std::uint64_t>(n_)),
                             static_cast<int>(key % static_cast<std::uint64_t>(n_)), w});
    }
    std::sort(q.quadratic.begin(), q.quadratic.end(),
              [](const QuadTerm &a, const QuadTerm &b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  }

private:
  int n_;
  double constant_ = 0.0;
  double magnitude_ = 0.0;
  Vec linear_;
  std::unordered_map<std::uint64_t, double> quad_;
};

void assemble(Qubo &q) {
  Assembler acc(q.num_bits);
  acc.add_constant(q.objective_constant + q.zeta_encoding.offset);
  for (int k = 0; k < q.zeta_encoding.bits(); ++k) {
    acc.add_linear(q.zeta_encoding.first_bit + k, q.zeta_encoding.step * std::ldexp(1.0, k));
  }
  for (std::size_t j = 0; j < q.y_encoding.size(); ++j) {
    const auto &enc = q.y_encoding[j];
    acc.add_constant(q.d_cost[j] * enc.offset);
    for (int k = 0; k < enc.bits(); ++k) acc.add_linear(enc.first_bit + k, q.d_cost[j] * enc.step * std::ldexp(1.0, k));
  }
  std::vector<Term> terms;
  double kappa = 0.0;
  for (const auto &row : q.rows) {
    row_expression(q, row, terms, kappa);
    acc.add_penalty(terms, kappa, row.rho);
  }
  const double magnitude = acc.magnitude();
  acc.finish(q);

  bool exact = std::all_of(q.rows.begin(), q.rows.end(), [](const PenaltyRow &r) { return r.integer_regime; });
  exact = exact && q.constant == std::round(q.constant);
  for (double v : q.linear) exact = exact && v == std::round(v);
  for (const auto &t : q.quadratic) exact = exact && t.w == std::round(t.w);
  q.integer_regime = exact && magnitude < kExactLimit;
}

double objective_bound(const MasterProblem &master, const BinaryEncoding &zeta) {
  double lo = zeta.offset + master.objective_constant;
  double hi = zeta.max_value() + master.objective_constant;
  for (int j = 0; j < master.n_int; ++j) {
    const double v = master.d_cost[j] * master.int_upper[j];
    lo += std::min(0.0, v);
    hi += std::max(0.0, v);
  }
  return std::max(std::abs(lo), std::abs(hi));
}

}  // namespace

double BinaryEncoding::max_value() const {
  if (k_max < 0) return offset;
  return offset + step * (std::ldexp(1.0, k_max + 1) - 1.0);
}

double BinaryEncoding::decode_from(std::span<const std::uint8_t> all_bits) const {
  return decode(*this, all_bits.subspan(static_cast<std::size_t>(first_bit), static_cast<std::size_t>(bits())));
}

BinaryEncoding encode_value(double lo, double hi, double step) {
  if (!(step > 0.0)) throw Error("encode_value: step must be positive");
  if (!(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) throw Error("encode_value: need finite lo <= hi");
  BinaryEncoding enc;
  enc.step = step;
  enc.offset = lo;
  const double steps = std::ceil((hi - lo) / step - kSnapTol);
  if (steps <= 0.0) return enc;
  if (steps >= 0x1p62) throw Error("encode_value: range too large to encode");
  enc.k_max = static_cast<int>(std::bit_width(static_cast<unsigned long long>(steps))) - 1;
  return enc;
}

double decode(const BinaryEncoding &enc, std::span<const std::uint8_t> bits) {
  if (static_cast<int>(bits.size()) != enc.bits()) throw Error("decode: bit count mismatch");
  long long units = 0;
  for (int k = 0; k < enc.bits(); ++k) {
    if (bits[k]) units += 1LL << k;
  }
  return enc.offset + enc.step * static_cast<double>(units);
}

Bits quantize(const BinaryEncoding &enc, double value) {
  Bits bits(static_cast<std::size_t>(enc.bits()), 0);
  if (enc.bits() == 0) return bits;
  double units = std::floor((value - enc.offset) / enc.step + kSnapTol);
  units = std::clamp(units, 0.0, std::ldexp(1.0, enc.bits()) - 1.0);
  const auto u = static_cast<unsigned long long>(units);
  for (int k = 0; k < enc.bits(); ++k) bits[k] = static_cast<std::uint8_t>((u >> k) & 1ULL);
  return bits;
}

double Qubo::coupling(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = std::lower_bound(quadratic.begin(), quadratic.end(), QuadTerm{i, j, 0.0},
                             [](const QuadTerm &a, const QuadTerm &b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  return it != quadratic.end() && it->i == i && it->j == j ? it->w : 0.0;
}

Qubo Qubo::from_terms(int num_bits, double constant, Vec linear, std::vector<QuadTerm> terms) {
  if (static_cast<int>(linear.size()) != num_bits) throw Error("Qubo::from_terms: linear size mismatch");
  Assembler acc(num_bits);
  acc.add_constant(constant);
  for (int i = 0; i < num_bits; ++i) acc.add_linear(i, linear[i]);
  for (const auto &t : terms) {
    if (t.i < 0 || t.j < 0 || t.i >= num_bits || t.j >= num_bits) throw Error("Qubo::from_terms: index out of range");
    if (t.i == t.j) {
      acc.add_linear(t.i, t.w);
    } else {
      acc.add_pair(t.i, t.j, t.w);
    }
  }
  Qubo q;
  acc.finish(q);
  return q;
}

Qubo compile_master(const MasterProblem &master, const PenaltyPolicy &policy, double zeta_step) {
  if (!(zeta_step > 0.0)) throw Error("compile_master: zeta step must be positive");
  if (!std::isfinite(master.zeta_lo) || !std::isfinite(master.zeta_hi)) {
    throw Error("compile_master: zeta needs a finite range [zeta_lo, zeta_hi]");
  }
  Qubo q;
  q.d_cost = master.d_cost;
  q.objective_constant = master.objective_constant;
  q.zeta_step = zeta_step;

  int next_bit = 0;
  for (int j = 0; j < master.n_int; ++j) {
    auto enc = encode_value(0.0, master.int_upper[j], 1.0);
    enc.first_bit = next_bit;
    for (int k = 0; k < enc.bits(); ++k) q.bit_map.push_back({BitOwner::Integer, j, k});
    next_bit += enc.bits();
    q.y_encoding.push_back(enc);
  }
  if (master.zeta_hi <= master.zeta_lo) {
    q.zeta_encoding = encode_value(master.zeta_lo, master.zeta_lo, zeta_step);
  } else {
    const double offset = floor_units(master.zeta_lo, zeta_step) * zeta_step;
    q.zeta_encoding = encode_value(offset, std::max(master.zeta_hi, offset), zeta_step);
  }
  q.zeta_encoding.first_bit = next_bit;
  for (int k = 0; k < q.zeta_encoding.bits(); ++k) q.bit_map.push_back({BitOwner::Zeta, 0, k});
  next_bit += q.zeta_encoding.bits();

  const double inv_step = 1.0 / zeta_step;
  const bool lattice_integral = is_integral(inv_step);

  for (const auto &row : master.rows) {
    PenaltyRow pr;
    pr.name = row.name;
    pr.origin = row.valid_inequality ? RowOrigin::ValidInequality : RowOrigin::Structural;
    pr.equality = row.sense == Sense::Equal;
    double s = decimal_scale(row.coeff, row.rhs);
    pr.integer_regime = s > 0.0;
    pr.scale = pr.integer_regime ? s : inv_step;
    for (int j = 0; j < master.n_int; ++j) {
      if (row.coeff[j] != 0.0) pr.y_terms.emplace_back(j, snap(row.coeff[j] * pr.scale));
    }
    pr.rhs = snap(row.rhs * pr.scale);
    q.rows.push_back(std::move(pr));
  }

  for (std::size_t k = 0; k < master.cuts.size(); ++k) {
    const auto &cut = master.cuts[k];
    PenaltyRow pr;
    pr.name = std::string(to_string(cut.kind)) + "-cut-" + std::to_string(k);
    pr.scale = inv_step;
    pr.integer_regime = lattice_integral;
    if (cut.kind == CutKind::Optimality) {
      // zeta - coeff.y >= rhs with coeff and rhs rounded down onto the lattice,
      // which only weakens the cut on y >= 0.
      pr.origin = RowOrigin::OptimalityCut;
      pr.zeta_coeff = snap(inv_step);
      for (int j = 0; j < master.n_int; ++j) {
        const double units = floor_units(cut.coeff_y[j], zeta_step);
        if (units != 0.0) pr.y_terms.emplace_back(j, -units);
      }
      pr.rhs = floor_units(cut.rhs, zeta_step);
      q.rows.push_back(std::move(pr));
      continue;
    }
    pr.origin = RowOrigin::FeasibilityCut;
    double norm = std::abs(cut.rhs);
    for (double v : cut.coeff_y) norm = std::max(norm, std::abs(v));
    if (norm == 0.0) {
      ++q.skipped_rows;
      continue;
    }
    bool encoded = false;
    for (double target = 100.0; target <= 1e5 && !encoded; target *= 10.0) {
      const double f = target / norm;
      pr.y_terms.clear();
      double at_origin = floor_units(f * cut.rhs, zeta_step);
      for (int j = 0; j < master.n_int; ++j) {
        const double units = floor_units(f * cut.coeff_y[j], zeta_step);
        if (units != 0.0) pr.y_terms.emplace_back(j, -units);
        if (!cut.origin_y.empty()) at_origin += units * cut.origin_y[j];
      }
      pr.rhs = floor_units(f * cut.rhs, zeta_step);
      encoded = cut.origin_y.empty() || at_origin > 0.0;
    }
    if (!encoded) {
      ++q.skipped_rows;
      continue;
    }
    q.rows.push_back(std::move(pr));
  }

  // Slack ranges from interval arithmetic over the encoded box.
  for (auto &pr : q.rows) {
    double lhs_min = 0.0, lhs_max = 0.0;
    for (auto [j, a] : pr.y_terms) {
      const auto &enc = q.y_encoding[static_cast<std::size_t>(j)];
      const double lo = a * enc.offset, hi = a * enc.max_value();
      lhs_min += std::min(lo, hi);
      lhs_max += std::max(lo, hi);
    }
    if (pr.zeta_coeff != 0.0) {
      const double lo = pr.zeta_coeff * q.zeta_encoding.offset, hi = pr.zeta_coeff * q.zeta_encoding.max_value();
      lhs_min += std::min(lo, hi);
      lhs_max += std::max(lo, hi);
    }
    const double tol = kSnapTol * std::max(1.0, std::abs(pr.rhs));
    if (lhs_max < pr.rhs - tol || (pr.equality && lhs_min > pr.rhs + tol)) {
      throw Error("compile_master: row '" + pr.name + "' cannot be satisfied inside the encoded variable box");
    }
    if (!pr.equality) {
      pr.slack = encode_value(0.0, std::max(0.0, lhs_max - pr.rhs), 1.0);
      pr.slack.first_bit = next_bit;
      const int row_index = static_cast<int>(&pr - q.rows.data());
      for (int k = 0; k < pr.slack.bits(); ++k) q.bit_map.push_back({BitOwner::Slack, row_index, k});
      next_bit += pr.slack.bits();
    } else {
      pr.slack = encode_value(0.0, 0.0, 1.0);
      pr.slack.first_bit = next_bit;
    }
  }
  q.num_bits = next_bit;

  double rho0 = policy.initial_rho;
  // One unit of violation must outweigh the whole objective span.
  if (rho0 <= 0.0) rho0 = std::floor(2.0 * objective_bound(master, q.zeta_encoding)) + 1.0;
  for (auto &pr : q.rows) pr.rho = rho0;

  assemble(q);
  return q;
}

double energy(const Qubo &q, std::span<const std::uint8_t> bits) {
  if (static_cast<int>(bits.size()) != q.num_bits) throw Error("energy: bit vector length mismatch");
  long double e = q.constant;
  for (int i = 0; i < q.num_bits; ++i) {
    if (bits[i]) e += q.linear[i];
  }
  for (const auto &t : q.quadratic) {
    if (bits[t.i] && bits[t.j]) e += t.w;
  }
  return static_cast<double>(e);
}

QuboSolution extract_solution(const Qubo &q, std::span<const std::uint8_t> bits) {
  if (static_cast<int>(bits.size()) != q.num_bits) throw Error("extract_solution: bit vector length mismatch");
  QuboSolution s;
  s.y.resize(q.y_encoding.size());
  for (std::size_t j = 0; j < q.y_encoding.size(); ++j) s.y[j] = q.y_encoding[j].decode_from(bits);
  s.zeta = q.zeta_encoding.decode_from(bits);

  long double objective = static_cast<long double>(s.zeta) + q.objective_constant;
  for (std::size_t j = 0; j < s.y.size(); ++j) objective += static_cast<long double>(q.d_cost[j]) * s.y[j];
  s.master_objective = static_cast<double>(objective);

  std::vector<Term> terms;
  long double penalty = 0.0L;
  s.feasible = true;
  for (const auto &row : q.rows) {
    double kappa = 0.0;
    row_expression(q, row, terms, kappa);
    long double r = kappa;
    for (const auto &t : terms) {
      if (bits[t.bit]) r += t.w;
    }
    const double residual = static_cast<double>(r);
    s.residuals.push_back(residual);
    s.violations.push_back(std::abs(residual) / row.scale);
    penalty += static_cast<long double>(row.rho) * r * r;
    if (std::abs(residual) > kSnapTol * std::max(1.0, std::abs(row.rhs))) s.feasible = false;
  }
  s.penalty = static_cast<double>(penalty);
  return s;
}

Bits encode_assignment(const Qubo &q, const Vec &y, double zeta) {
  if (y.size() != q.y_encoding.size()) throw Error("encode_assignment: one value per integer variable expected");
  Bits bits(static_cast<std::size_t>(q.num_bits), 0);
  auto place = [&bits](const BinaryEncoding &enc, const Bits &code) {
    std::copy(code.begin(), code.end(), bits.begin() + enc.first_bit);
  };
  for (std::size_t j = 0; j < y.size(); ++j) place(q.y_encoding[j], quantize(q.y_encoding[j], y[j]));
  const auto &ze = q.zeta_encoding;
  const double up = ze.offset + ze.step * std::ceil((zeta - ze.offset) / ze.step - kSnapTol);
  place(ze, quantize(ze, up));

  std::vector<Term> terms;
  for (const auto &row : q.rows) {
    if (row.equality) continue;
    double kappa = 0.0;
    row_expression(q, row, terms, kappa);
    long double lhs = kappa;
    for (const auto &t : terms) {
      if (t.bit < row.slack.first_bit || t.bit >= row.slack.first_bit + row.slack.bits()) {
        if (bits[t.bit]) lhs += t.w;
      }
    }
    place(row.slack, quantize(row.slack, static_cast<double>(lhs)));
  }
  return bits;
}

std::optional<Qubo> escalate_penalties(const Qubo &q, const Vec &violations, const PenaltyPolicy &policy, double tol) {
  if (violations.size() != q.rows.size()) throw Error("escalate_penalties: one violation per row expected");
  Qubo out = q;
  bool changed = false;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (violations[i] <= tol) continue;
    auto &row = out.rows[i];
    if (row.escalations >= policy.max_escalations) return std::nullopt;
    row.rho *= policy.escalation_factor;
    ++row.escalations;
    changed = true;
  }
  if (changed) assemble(out);
  return out;
}

Qubo row_penalty(const Qubo &q, int row) {
  if (row < 0 || static_cast<std::size_t>(row) >= q.rows.size()) throw Error("row_penalty: row out of range");
  std::vector<Term> terms;
  double kappa = 0.0;
  row_expression(q, q.rows[static_cast<std::size_t>(row)], terms, kappa);
  Assembler acc(q.num_bits);
  acc.add_penalty(terms, kappa, q.rows[static_cast<std::size_t>(row)].rho);
  Qubo out;
  acc.finish(out);
  return out;
}

}  // namespace qbenders
