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

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ionweave {

enum class GateKind { OneQubit, TwoQubit, Measurement };

inline const char* to_string(GateKind k) {
  switch (k) {
    case GateKind::OneQubit: return "gate1";
    case GateKind::TwoQubit: return "gate2";
    case GateKind::Measurement: return "measure";
  }
  return "?";
}

/// A gate is an opaque labelled operation on one or two logical qubits.
/// The simulator only needs the operand structure and the gate class;
/// unitaries are never represented.
struct Gate {
  GateKind kind;
  int q0 = -1;
  int q1 = -1;  // only meaningful for two-qubit gates
  std::string tag;

  static Gate one(std::string tag, int q) {
    return Gate{GateKind::OneQubit, q, -1, std::move(tag)};
  }
  static Gate two(std::string tag, int a, int b) {
    if (a == b) throw std::invalid_argument("two-qubit gate needs distinct operands");
    return Gate{GateKind::TwoQubit, a, b, std::move(tag)};
  }
  static Gate measure(int q, std::string tag = "M") {
    return Gate{GateKind::Measurement, q, -1, std::move(tag)};
  }

  bool is_two_qubit() const { return kind == GateKind::TwoQubit; }
  int operand_count() const { return is_two_qubit() ? 2 : 1; }

  bool touches(int q) const { return q0 == q || (is_two_qubit() && q1 == q); }

  bool operator==(const Gate& o) const {
    return kind == o.kind && q0 == o.q0 && q1 == o.q1 && tag == o.tag;
  }
};

/// Gate-level IR. Gate order defines the data dependencies; everything
/// downstream (slicing, graphs, simulation) is a pure function of it.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int qubit_count) : qubit_count_(qubit_count) {
    if (qubit_count < 1) throw std::invalid_argument("circuit needs at least one qubit");
  }

  int qubit_count() const { return qubit_count_; }
  const std::vector<Gate>& gates() const { return gates_; }
  size_t gate_count() const { return gates_.size(); }

  void add(Gate g) {
    check_operand(g.q0);
    if (g.is_two_qubit()) check_operand(g.q1);
    gates_.push_back(std::move(g));
  }

  void add_one(const std::string& tag, int q) { add(Gate::one(tag, q)); }
  void add_two(const std::string& tag, int a, int b) { add(Gate::two(tag, a, b)); }
  void add_measure(int q) { add(Gate::measure(q)); }

  size_t two_qubit_gate_count() const {
    size_t n = 0;
    for (const auto& g : gates_)
      if (g.is_two_qubit()) ++n;
    return n;
  }

  bool operator==(const Circuit& o) const {
    return qubit_count_ == o.qubit_count_ && gates_ == o.gates_;
  }

 private:
  void check_operand(int q) const {
    if (q < 0 || q >= qubit_count_)
      throw std::out_of_range("gate operand " + std::to_string(q) +
                              " outside qubit range [0," + std::to_string(qubit_count_) + ")");
  }

  int qubit_count_ = 1;
  std::vector<Gate> gates_;
};

/// A maximal set of gates with pairwise disjoint operands, executed
/// concurrently. Slice indices are dense and start at 0.
struct TimeSlice {
  int index = 0;
  std::vector<Gate> gates;
};

/// ASAP layering: each gate lands in the earliest slice after every earlier
/// gate that shares an operand with it. Deterministic; preserves gate count.
inline std::vector<TimeSlice> time_slice(const Circuit& circuit) {
  std::vector<TimeSlice> slices;
  std::vector<int> last_slice(circuit.qubit_count(), -1);
  for (const auto& g : circuit.gates()) {
    int at = last_slice[g.q0] + 1;
    if (g.is_two_qubit()) at = std::max(at, last_slice[g.q1] + 1);
    if (static_cast<size_t>(at) >= slices.size())
      slices.push_back(TimeSlice{static_cast<int>(slices.size()), {}});
    slices[at].gates.push_back(g);
    last_slice[g.q0] = at;
    if (g.is_two_qubit()) last_slice[g.q1] = at;
  }
  return slices;
}

/// Flattens slices back into a circuit (slice order, then in-slice order).
inline Circuit flatten(const std::vector<TimeSlice>& slices, int qubit_count) {
  Circuit c(qubit_count);
  for (const auto& s : slices)
    for (const auto& g : s.gates) c.add(g);
  return c;
}

// --- line-oriented text format (test fixtures and CLI dumps) ---
//
//   qubits <n>
//   gate1 <tag> <q>
//   gate2 <tag> <a> <b>
//   measure <tag> <q>
//
// '#' starts a comment line.

inline void write_circuit(std::ostream& os, const Circuit& c) {
  os << "qubits " << c.qubit_count() << "\n";
  for (const auto& g : c.gates()) {
    os << to_string(g.kind) << ' ' << g.tag << ' ' << g.q0;
    if (g.is_two_qubit()) os << ' ' << g.q1;
    os << "\n";
  }
}

inline Circuit read_circuit(std::istream& is) {
  std::string line;
  Circuit circuit;
  bool have_header = false;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (!have_header) {
      int n = 0;
      if (word != "qubits" || !(ls >> n))
        throw std::runtime_error("circuit text: expected 'qubits <n>' at line " +
                                 std::to_string(lineno));
      circuit = Circuit(n);
      have_header = true;
      continue;
    }
    std::string tag;
    int a = -1, b = -1;
    if (word == "gate1") {
      if (!(ls >> tag >> a)) throw std::runtime_error("circuit text: bad gate1 at line " + std::to_string(lineno));
      circuit.add_one(tag, a);
    } else if (word == "gate2") {
      if (!(ls >> tag >> a >> b)) throw std::runtime_error("circuit text: bad gate2 at line " + std::to_string(lineno));
      circuit.add_two(tag, a, b);
    } else if (word == "measure") {
      if (!(ls >> tag >> a)) throw std::runtime_error("circuit text: bad measure at line " + std::to_string(lineno));
      circuit.add(Gate{GateKind::Measurement, a, -1, tag});
    } else {
      throw std::runtime_error("circuit text: unknown record '" + word + "' at line " +
                               std::to_string(lineno));
    }
  }
  if (!have_header) throw std::runtime_error("circuit text: missing 'qubits' header");
  return circuit;
}

}  // namespace ionweave
