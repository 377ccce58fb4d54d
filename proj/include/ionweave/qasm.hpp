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

#include <cctype>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ionweave/circuit.hpp"

namespace ionweave {

/// Raised on any malformed or unsupported OpenQASM 2 input. Carries the
/// 1-based line and column so callers can point at the offending token.
class QasmParseError : public std::runtime_error {
 public:
  QasmParseError(const std::string& what, int line, int col)
      : std::runtime_error("qasm:" + std::to_string(line) + ":" + std::to_string(col) +
                           ": " + what),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

namespace detail {

struct QasmCursor {
  std::string text;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  bool done() const { return pos >= text.size(); }
  char peek() const { return done() ? '\0' : text[pos]; }

  char take() {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (!done()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else if (c == '/' && pos + 1 < text.size() && text[pos + 1] == '/') {
        while (!done() && peek() != '\n') take();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw QasmParseError(what, line, col);
  }

  std::string word() {
    skip_space_and_comments();
    if (done()) fail("unexpected end of input");
    if (!std::isalpha(static_cast<unsigned char>(peek())) && peek() != '_')
      fail(std::string("expected identifier, found '") + peek() + "'");
    std::string w;
    while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
      w += take();
    return w;
  }

  void expect(char c) {
    skip_space_and_comments();
    if (done() || peek() != c) fail(std::string("expected '") + c + "'");
    take();
  }

  bool accept(char c) {
    skip_space_and_comments();
    if (!done() && peek() == c) {
      take();
      return true;
    }
    return false;
  }

  int integer() {
    skip_space_and_comments();
    if (done() || !std::isdigit(static_cast<unsigned char>(peek())))
      fail("expected an integer");
    long v = 0;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek())))
      v = v * 10 + (take() - '0');
    return static_cast<int>(v);
  }

  // Skips a parenthesised parameter list; ionweave treats gates as opaque,
  // so rotation angles are validated for balance but not evaluated.
  void skip_params() {
    if (!accept('(')) return;
    int depth = 1;
    while (!done() && depth > 0) {
      char c = take();
      if (c == '(') ++depth;
      if (c == ')') --depth;
    }
    if (depth != 0) fail("unbalanced '(' in gate parameters");
  }
};

}  // namespace detail

/// Reads the OpenQASM 2 subset that the bundled benchmarks and most
/// exported NISQ circuits use: one quantum register, the standard one-
/// and two-qubit gates, `measure`, and `barrier` (ignored). Classical
/// registers are accepted and discarded. Anything else — gate
/// definitions, `if`, `reset`, multiple qregs, register-wide operands —
/// raises QasmParseError.
inline Circuit read_qasm(const std::string& source) {
  using detail::QasmCursor;
  static const std::set<std::string> one_qubit_gates = {
      "id", "x",  "y",  "z",  "h",  "s",  "sdg", "t", "tdg",
      "rx", "ry", "rz", "u1", "u2", "u3", "sx",  "p", "u"};
  static const std::set<std::string> two_qubit_gates = {"cx", "cz", "swap", "rzz"};

  QasmCursor cur{source};
  cur.skip_space_and_comments();

  // Optional header: OPENQASM 2.0;  (bare gate lists are accepted too).
  {
    QasmCursor mark = cur;
    if (!cur.done() && cur.word() == "OPENQASM") {
      cur.skip_space_and_comments();
      while (!cur.done() && cur.peek() != ';') cur.take();
      cur.expect(';');
    } else {
      cur = mark;
    }
  }

  std::string qreg_name;
  int qreg_size = 0;
  Circuit circuit;
  bool have_qreg = false;

  auto operand = [&](const std::string& why) -> int {
    int at_line = cur.line, at_col = cur.col;
    std::string name = cur.word();
    if (!have_qreg) throw QasmParseError("operand before any qreg", at_line, at_col);
    if (name != qreg_name)
      throw QasmParseError("unknown register '" + name + "' in " + why, at_line, at_col);
    if (!cur.accept('['))
      throw QasmParseError("register-wide operands are not supported; index " + name + "[k]",
                           cur.line, cur.col);
    int idx = cur.integer();
    cur.expect(']');
    if (idx >= qreg_size)
      throw QasmParseError("index " + std::to_string(idx) + " outside " + qreg_name + "[" +
                               std::to_string(qreg_size) + "]",
                           at_line, at_col);
    return idx;
  };

  while (true) {
    cur.skip_space_and_comments();
    if (cur.done()) break;
    int at_line = cur.line, at_col = cur.col;
    std::string head = cur.word();

    if (head == "include") {
      while (!cur.done() && cur.peek() != ';') cur.take();
      cur.expect(';');
    } else if (head == "qreg") {
      if (have_qreg)
        throw QasmParseError("multiple quantum registers are not supported", at_line, at_col);
      qreg_name = cur.word();
      cur.expect('[');
      qreg_size = cur.integer();
      cur.expect(']');
      cur.expect(';');
      if (qreg_size < 1) throw QasmParseError("empty qreg", at_line, at_col);
      circuit = Circuit(qreg_size);
      have_qreg = true;
    } else if (head == "creg") {
      cur.word();
      cur.expect('[');
      cur.integer();
      cur.expect(']');
      cur.expect(';');
    } else if (head == "barrier") {
      // Barriers only constrain compiler reordering; the IR keeps program
      // order anyway, so they are read and dropped.
      while (!cur.done() && cur.peek() != ';') cur.take();
      cur.expect(';');
    } else if (head == "measure") {
      int q = operand("measure");
      cur.skip_space_and_comments();
      if (cur.accept('-')) {
        cur.expect('>');
        cur.word();
        if (cur.accept('[')) {
          cur.integer();
          cur.expect(']');
        }
      }
      cur.expect(';');
      circuit.add_measure(q);
    } else if (one_qubit_gates.count(head)) {
      cur.skip_params();
      int q = operand(head);
      cur.expect(';');
      circuit.add_one(head, q);
    } else if (two_qubit_gates.count(head)) {
      cur.skip_params();
      int a = operand(head);
      cur.expect(',');
      int b = operand(head);
      cur.expect(';');
      if (a == b) throw QasmParseError(head + " with identical operands", at_line, at_col);
      circuit.add_two(head, a, b);
    } else {
      throw QasmParseError("unsupported construct '" + head + "'", at_line, at_col);
    }
  }

  if (!have_qreg) throw QasmParseError("no qreg declared", cur.line, cur.col);
  return circuit;
}

inline Circuit read_qasm(std::istream& is) {
  std::ostringstream buf;
  buf << is.rdbuf();
  return read_qasm(buf.str());
}

/// Serialises a circuit back to OpenQASM 2. Tags that match stdlib gate
/// names are emitted as-is; parameterised tags fall back to `u1(0)` so the
/// output stays loadable (ionweave never evaluates angles).
inline std::string write_qasm(const Circuit& c) {
  static const std::set<std::string> known = {
      "id", "x",  "y",  "z",  "h",  "s",  "sdg", "t",  "tdg", "rx", "ry",
      "rz", "u1", "u2", "u3", "sx", "p",  "u",   "cx", "cz",  "swap", "rzz"};
  std::ostringstream os;
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  os << "qreg q[" << c.qubit_count() << "];\n";
  os << "creg m[" << c.qubit_count() << "];\n";
  for (const auto& g : c.gates()) {
    switch (g.kind) {
      case GateKind::OneQubit: {
        std::string name = known.count(g.tag) ? g.tag : "u1";
        if (name == "rx" || name == "ry" || name == "rz" || name == "u1" || name == "p" ||
            name == "rzz")
          os << name << "(0) q[" << g.q0 << "];\n";
        else
          os << name << " q[" << g.q0 << "];\n";
        break;
      }
      case GateKind::TwoQubit: {
        std::string name = known.count(g.tag) ? g.tag : "cx";
        if (name == "rzz")
          os << "rzz(0) q[" << g.q0 << "],q[" << g.q1 << "];\n";
        else
          os << name << " q[" << g.q0 << "],q[" << g.q1 << "];\n";
        break;
      }
      case GateKind::Measurement:
        os << "measure q[" << g.q0 << "] -> m[" << g.q0 << "];\n";
        break;
    }
  }
  return os.str();
}

}  // namespace ionweave
