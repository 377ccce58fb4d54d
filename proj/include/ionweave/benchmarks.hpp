// Copyright 2026 The ionweave Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ionweave/circuit.hpp"
#include "ionweave/rng.hpp"

namespace ionweave {

/// The six benchmark families used throughout the experiment harness.
enum class BenchmarkFamily { ADD, BV, QAO, PRI, RAN, HAM };

inline const char* to_string(BenchmarkFamily f) {
  switch (f) {
    case BenchmarkFamily::ADD: return "ADD";
    case BenchmarkFamily::BV: return "BV";
    case BenchmarkFamily::QAO: return "QAO";
    case BenchmarkFamily::PRI: return "PRI";
    case BenchmarkFamily::RAN: return "RAN";
    case BenchmarkFamily::HAM: return "HAM";
  }
  return "?";
}

inline BenchmarkFamily benchmark_from_string(const std::string& s) {
  std::string u;
  for (char c : s) u += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u == "ADD") return BenchmarkFamily::ADD;
  if (u == "BV") return BenchmarkFamily::BV;
  if (u == "QAO") return BenchmarkFamily::QAO;
  if (u == "PRI") return BenchmarkFamily::PRI;
  if (u == "RAN") return BenchmarkFamily::RAN;
  if (u == "HAM") return BenchmarkFamily::HAM;
  throw std::invalid_argument("unknown benchmark family '" + s + "'");
}

inline std::vector<BenchmarkFamily> all_benchmark_families() {
  return {BenchmarkFamily::ADD, BenchmarkFamily::BV,  BenchmarkFamily::QAO,
          BenchmarkFamily::PRI, BenchmarkFamily::RAN, BenchmarkFamily::HAM};
}

namespace detail {

// Toffoli via the standard 6-CX network. Keeps the two-qubit budget of the
// adder explicit: every Toffoli costs exactly 6 entangling gates.
inline void add_toffoli(Circuit& c, int a, int b, int target) {
  c.add_one("h", target);
  c.add_two("cx", b, target);
  c.add_one("tdg", target);
  c.add_two("cx", a, target);
  c.add_one("t", target);
  c.add_two("cx", b, target);
  c.add_one("tdg", target);
  c.add_two("cx", a, target);
  c.add_one("t", b);
  c.add_one("t", target);
  c.add_one("h", target);
  c.add_two("cx", a, b);
  c.add_one("t", a);
  c.add_one("tdg", b);
  c.add_two("cx", a, b);
}

// exp(-i θ Z⊗Z) as CX · RZ · CX. Two entangling gates per bond.
inline void add_zz(Circuit& c, int a, int b) {
  c.add_two("cx", a, b);
  c.add_one("rz", b);
  c.add_two("cx", a, b);
}

// Ripple-carry adder (MAJ/UMA ladder) for m-bit operands. Register layout:
//   0        carry-in ancilla
//   1..m     operand a
//   m+1..2m  operand b
//   2m+1     carry-out
// MAJ and UMA each contain one Toffoli, so each rung costs 8 entangling
// gates; the carry-out copy adds one more: 16m+1 total.
inline Circuit make_adder(int n) {
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("ADD needs an even qubit count >= 4 (2 m-bit operands + 2)");
  int m = (n - 2) / 2;
  Circuit c(n);
  auto a = [&](int i) { return 1 + i; };
  auto b = [&](int i) { return 1 + m + i; };
  const int cin = 0, cout = 2 * m + 1;

  auto maj = [&](int x, int y, int z) {
    c.add_two("cx", z, y);
    c.add_two("cx", z, x);
    add_toffoli(c, x, y, z);
  };
  auto uma = [&](int x, int y, int z) {
    add_toffoli(c, x, y, z);
    c.add_two("cx", z, x);
    c.add_two("cx", x, y);
  };

  maj(cin, b(0), a(0));
  for (int i = 1; i < m; ++i) maj(a(i - 1), b(i), a(i));
  c.add_two("cx", a(m - 1), cout);
  for (int i = m - 1; i >= 1; --i) uma(a(i - 1), b(i), a(i));
  uma(cin, b(0), a(0));
  for (int i = 0; i < m; ++i) c.add_measure(b(i));
  return c;
}

// Bernstein–Vazirani with the all-ones secret string: one oracle CX per
// secret bit, so exactly n−1 entangling gates.
inline Circuit make_bv(int n) {
  Circuit c(n);
  const int anc = n - 1;
  c.add_one("x", anc);
  for (int q = 0; q < n; ++q) c.add_one("h", q);
  for (int q = 0; q < n - 1; ++q) c.add_two("cx", q, anc);
  for (int q = 0; q < n - 1; ++q) c.add_one("h", q);
  for (int q = 0; q < n - 1; ++q) c.add_measure(q);
  return c;
}

// Seeded Hamiltonian cycle over 0..n-1 returned as an edge list.
inline std::vector<std::pair<int, int>> random_cycle(int n, Rng& rng) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    int a = order[i], b = order[(i + 1) % n];
    edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  return edges;
}

// MaxCut QAOA (p=1) on a seeded 4-regular graph formed by two edge-disjoint
// Hamiltonian cycles. Cost layer spends 2 entangling gates per edge; the
// mixer is a single-qubit layer.
inline Circuit make_qaoa(int n, uint64_t seed) {
  Rng rng(seed);
  std::set<std::pair<int, int>> edges;
  if (n <= 5) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) edges.emplace(i, j);
  } else {
    for (auto& e : random_cycle(n, rng)) edges.insert(e);
    for (int attempt = 0; attempt < 64; ++attempt) {
      auto cycle = random_cycle(n, rng);
      bool disjoint = true;
      for (auto& e : cycle)
        if (edges.count(e)) {
          disjoint = false;
          break;
        }
      if (disjoint) {
        for (auto& e : cycle) edges.insert(e);
        break;
      }
    }
    // If no disjoint second cycle appears the graph simply stays sparser;
    // determinism matters more than hitting exactly 2n edges.
  }
  Circuit c(n);
  for (int q = 0; q < n; ++q) c.add_one("h", q);
  for (auto& [a, b] : edges) add_zz(c, a, b);
  for (int q = 0; q < n; ++q) c.add_one("rx", q);
  for (int q = 0; q < n; ++q) c.add_measure(q);
  return c;
}

// Sparse random layers: 3 rounds of a full single-qubit layer followed by
// ⌊n/4⌋ disjoint CZ pairs, modelling circuits whose entangling layers touch
// only part of the register.
inline Circuit make_prism(int n, uint64_t seed) {
  Rng rng(seed);
  static const char* const kOneQubit[] = {"h", "t", "s", "x"};
  Circuit c(n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int round = 0; round < 3; ++round) {
    for (int q = 0; q < n; ++q) c.add_one(kOneQubit[rng.uniform_below(4)], q);
    rng.shuffle(order);
    for (int p = 0; p < n / 4; ++p) c.add_two("cz", order[2 * p], order[2 * p + 1]);
  }
  for (int q = 0; q < n; ++q) c.add_measure(q);
  return c;
}

// Dense random circuit: 21 layers, each pairing up the whole register in a
// fresh shuffled order plus a coin-flipped single-qubit gate per qubit.
inline Circuit make_random(int n, uint64_t seed) {
  Rng rng(seed);
  Circuit c(n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int layer = 0; layer < 21; ++layer) {
    for (int q = 0; q < n; ++q)
      if (rng.uniform_below(2)) c.add_one(layer % 2 ? "t" : "h", q);
    rng.shuffle(order);
    for (int p = 0; p < n / 2; ++p) c.add_two("cz", order[2 * p], order[2 * p + 1]);
  }
  for (int q = 0; q < n; ++q) c.add_measure(q);
  return c;
}

// One first-order Trotter step of the 1D transverse-field Ising chain:
// RX field layer, then ZZ bonds split into even and odd sub-layers.
// A chain has n−1 bonds at 2 entangling gates each.
inline Circuit make_tfim(int n) {
  Circuit c(n);
  for (int q = 0; q < n; ++q) c.add_one("rx", q);
  for (int a = 0; a + 1 < n; a += 2) add_zz(c, a, a + 1);
  for (int a = 1; a + 1 < n; a += 2) add_zz(c, a, a + 1);
  for (int q = 0; q < n; ++q) c.add_measure(q);
  return c;
}

}  // namespace detail

/// Builds one benchmark circuit. Deterministic in (family, qubit_count,
/// seed); families without internal randomness ignore the seed.
inline Circuit generate_benchmark(BenchmarkFamily family, int qubit_count, uint64_t seed) {
  if (qubit_count < 2) throw std::invalid_argument("benchmarks need at least 2 qubits");
  switch (family) {
    case BenchmarkFamily::ADD: return detail::make_adder(qubit_count);
    case BenchmarkFamily::BV: return detail::make_bv(qubit_count);
    case BenchmarkFamily::QAO: return detail::make_qaoa(qubit_count, derive_seed(seed, "qao"));
    case BenchmarkFamily::PRI: return detail::make_prism(qubit_count, derive_seed(seed, "pri"));
    case BenchmarkFamily::RAN: return detail::make_random(qubit_count, derive_seed(seed, "ran"));
    case BenchmarkFamily::HAM: return detail::make_tfim(qubit_count);
  }
  throw std::invalid_argument("unknown benchmark family");
}

inline Circuit generate_benchmark(const std::string& name, int qubit_count, uint64_t seed) {
  return generate_benchmark(benchmark_from_string(name), qubit_count, seed);
}

}  // namespace ionweave
