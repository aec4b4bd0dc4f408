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
#include "qbenders/qubo_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace qbenders {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string &token, int line) {
  try {
    std::size_t used = 0;
    double v = std::stod(token, &used);
    if (used == token.size()) return v;
  } catch (const std::exception &) {
  }
  throw Error("qubo line " + std::to_string(line) + ": bad number '" + token + "'");
}

int parse_index(const std::string &token, int line, int num_bits) {
  double v = parse_double(token, line);
  if (v != static_cast<int>(v) || v < 0 || v >= num_bits) {
    throw Error("qubo line " + std::to_string(line) + ": bad bit index '" + token + "'");
  }
  return static_cast<int>(v);
}

}  // namespace

void write_qubo(std::ostream &out, const Qubo &q) {
  int n_linear = 0;
  for (double v : q.linear) n_linear += v != 0.0;
  out << "qubo " << q.num_bits << ' ' << n_linear << ' ' << q.quadratic.size() << '\n';
  out << "constant " << fmt(q.constant) << '\n';
  for (int i = 0; i < q.num_bits; ++i) {
    if (q.linear[i] != 0.0) out << i << ' ' << i << ' ' << fmt(q.linear[i]) << '\n';
  }
  for (const auto &t : q.quadratic) out << t.i << ' ' << t.j << ' ' << fmt(t.w) << '\n';
}

Qubo read_qubo(std::istream &in) {
  std::string text;
  int line_no = 0;
  auto next_line = [&](std::istringstream &ls) {
    while (std::getline(in, text)) {
      ++line_no;
      auto first = text.find_first_not_of(" \t\r");
      if (first == std::string::npos || text[first] == '#') continue;
      ls.clear();
      ls.str(text);
      return true;
    }
    return false;
  };
  std::istringstream ls;
  std::string tag, a, b, c;
  if (!next_line(ls) || !(ls >> tag >> a >> b >> c) || tag != "qubo") {
    throw Error("qubo line " + std::to_string(line_no) + ": expected 'qubo <bits> <linear> <quadratic>'");
  }
  const int num_bits = static_cast<int>(parse_double(a, line_no));
  const long n_linear = static_cast<long>(parse_double(b, line_no));
  const long n_quad = static_cast<long>(parse_double(c, line_no));
  if (num_bits < 0 || n_linear < 0 || n_quad < 0) throw Error("qubo header: negative count");
  if (!next_line(ls) || !(ls >> tag >> a) || tag != "constant") {
    throw Error("qubo line " + std::to_string(line_no) + ": expected 'constant <value>'");
  }
  const double constant = parse_double(a, line_no);
  Vec linear(static_cast<std::size_t>(num_bits), 0.0);
  std::vector<QuadTerm> terms;
  for (long k = 0; k < n_linear + n_quad; ++k) {
    if (!next_line(ls) || !(ls >> a >> b >> c)) {
      throw Error("qubo line " + std::to_string(line_no) + ": expected '<i> <j> <weight>'");
    }
    const int i = parse_index(a, line_no, num_bits);
    const int j = parse_index(b, line_no, num_bits);
    const double w = parse_double(c, line_no);
    if (i == j) {
      linear[static_cast<std::size_t>(i)] += w;
    } else {
      terms.push_back({i, j, w});
    }
  }
  return Qubo::from_terms(num_bits, constant, std::move(linear), std::move(terms));
}

void write_qubo_file(const std::string &path, const Qubo &q) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_qubo(out, q);
}

Qubo read_qubo_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return read_qubo(in);
}

}  // namespace qbenders
