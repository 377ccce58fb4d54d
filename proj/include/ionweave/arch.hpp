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

#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace ionweave {

/// Per-operation timing (µs) and infidelity constants, plus the knobs of
/// the entanglement attempt process and the idle-decoherence scale. All
/// latency and fidelity arithmetic in the simulator reads from here and
/// nowhere else.
struct CalibrationTable {
  double gate1_time = 5.0;
  double gate1_infidelity = 3e-5;
  double gate2_time = 100.0;
  double gate2_infidelity = 8e-4;
  // Merge/split already folds in the ~300 µs of recooling the chain needs
  // afterwards, so no separate cooling op is charged around it.
  double merge_split_time = 380.0;
  double merge_split_infidelity = 0.0;
  double shuttle_time = 5.0;  // one inter-trap step
  double shuttle_infidelity = 1e-5;
  double x_junction_time = 100.0;
  double x_junction_infidelity = 1e-4;
  double measure_time = 400.0;
  double measure_infidelity = 9e-5;
  double matter_link_time = 400.0;
  double matter_link_infidelity = 7e-8;
  double photonic_time = 5760.0;  // end-to-end switched-entanglement reference point
  double photonic_infidelity = 7e-3;
  double cooling_time = 100.0;  // pre-attempt cooling of the communication ion
  double attempt_time = 500.0;  // one heralded entanglement attempt
  double t2_idle = 1e8;         // idle coherence scale, µs

  // Crossbar connection-setup latency measured at known switch sizes;
  // other sizes are interpolated (see xbar_latency). Sorted by port count.
  std::vector<std::pair<int, double>> xbar_anchors = {{32, 1100.0}, {256, 5230.0}};

  void validate() const {
    const double times[] = {gate1_time,     gate2_time,   merge_split_time, shuttle_time,
                            x_junction_time, measure_time, matter_link_time, photonic_time,
                            cooling_time,   attempt_time, t2_idle};
    for (double t : times)
      if (!(t > 0)) throw std::invalid_argument("calibration times must be positive");
    const double infs[] = {gate1_infidelity,      gate2_infidelity,  merge_split_infidelity,
                           shuttle_infidelity,    x_junction_infidelity, measure_infidelity,
                           matter_link_infidelity, photonic_infidelity};
    for (double f : infs)
      if (f < 0 || f >= 1) throw std::invalid_argument("infidelities must lie in [0,1)");
    if (xbar_anchors.empty()) throw std::invalid_argument("xbar anchor set must not be empty");
    for (size_t i = 0; i < xbar_anchors.size(); ++i) {
      if (xbar_anchors[i].first < 2 || xbar_anchors[i].second <= 0)
        throw std::invalid_argument("xbar anchors need ports >= 2 and positive latency");
      if (i && xbar_anchors[i].first <= xbar_anchors[i - 1].first)
        throw std::invalid_argument("xbar anchors must be sorted by port count");
    }
  }
};

/// The inter-module entanglement process: `concurrency` heralded attempts
/// kept in flight per entanglement, each succeeding with probability
/// `success_probability`, preceded by cooling. A calibrated override pins
/// the attempt-phase latency to a measured value when the simple geometric
/// model is not trusted. Distillation folds 2^d raw pairs into one.
struct EntanglementModel {
  int concurrency = 1;
  double success_probability = 0.1;
  double non_xbar_override = -1.0;  // < 0 means "use the geometric model"
  int distill_iterations = 3;
  bool analytic_distillation = false;
  double raw_pair_fidelity = 0.94;
  double calibrated_fidelity = 0.993;
  int in_flight_per_module = 2;

  void validate() const {
    if (concurrency < 1) throw std::invalid_argument("attempt concurrency must be >= 1");
    if (!(success_probability > 0) || success_probability > 1)
      throw std::invalid_argument("attempt success probability must be in (0,1]");
    if (distill_iterations < 0) throw std::invalid_argument("distillation iterations must be >= 0");
    if (raw_pair_fidelity <= 0 || raw_pair_fidelity > 1 || calibrated_fidelity <= 0 ||
        calibrated_fidelity > 1)
      throw std::invalid_argument("pair fidelities must be in (0,1]");
    if (in_flight_per_module < 1)
      throw std::invalid_argument("per-module entanglement budget must be >= 1");
  }
};

enum class QccdRole { Computing, Communication };

/// One trapping device inside a module: a linear array of `traps` trap
/// zones sharing `data_capacity` data slots. Communication devices
/// additionally hold `comm_capacity` slots for entangled-pair halves and
/// sit next to the module's photonic ports.
struct QccdSpec {
  QccdRole role = QccdRole::Computing;
  int data_capacity = 32;
  int comm_capacity = 0;
  int traps = 2;

  int slots_per_trap() const { return (data_capacity + traps - 1) / traps; }
};

/// A module: QCCDs joined by ion-transport links, with `ports` photonic
/// ports hanging off the communication QCCDs.
struct ModuleSpec {
  std::vector<QccdSpec> qccds;
  // (qccd_a, qccd_b, parallel link count) — undirected.
  std::vector<std::array<int, 3>> links;
  int ports = 64;

  int data_capacity() const {
    int n = 0;
    for (const auto& q : qccds) n += q.data_capacity;
    return n;
  }

  /// Hop distance from each QCCD to the nearest communication QCCD (and
  /// therefore to the photonic ports), by multi-source BFS over the link
  /// graph. Unreachable devices come back as -1 and fail validation.
  std::vector<int> port_distances() const {
    std::vector<int> dist(qccds.size(), -1);
    std::deque<int> frontier;
    for (size_t i = 0; i < qccds.size(); ++i)
      if (qccds[i].role == QccdRole::Communication) {
        dist[i] = 0;
        frontier.push_back(static_cast<int>(i));
      }
    while (!frontier.empty()) {
      int at = frontier.front();
      frontier.pop_front();
      for (const auto& [a, b, cnt] : links) {
        int other = (a == at) ? b : (b == at) ? a : -1;
        if (other >= 0 && dist[other] == -1) {
          dist[other] = dist[at] + 1;
          frontier.push_back(other);
        }
      }
    }
    return dist;
  }

  void validate() const {
    if (qccds.empty()) throw std::invalid_argument("module needs at least one device");
    if (ports < 1) throw std::invalid_argument("module needs at least one photonic port");
    bool has_comm = false;
    for (const auto& q : qccds) {
      if (q.data_capacity < 1 || q.traps < 1)
        throw std::invalid_argument("device capacities and trap counts must be positive");
      if (q.role == QccdRole::Communication) has_comm = true;
    }
    if (!has_comm) throw std::invalid_argument("module needs a communication device");
    for (const auto& [a, b, cnt] : links) {
      if (a < 0 || b < 0 || a >= static_cast<int>(qccds.size()) ||
          b >= static_cast<int>(qccds.size()) || a == b || cnt < 1)
        throw std::invalid_argument("malformed transport link");
    }
    for (int d : port_distances())
      if (d < 0) throw std::invalid_argument("device unreachable from communication devices");
  }
};

/// Switch fabric joining the modules: either one big crossbar taking every
/// port, or several smaller crossbars each taking an equal share of every
/// module's ports.
struct MonolithicSwitch {
  int ports_total = 256;
};
struct MultiSwitch {
  int switch_count = 8;
  int ports_per_switch = 32;
};
using SwitchTopology = std::variant<MonolithicSwitch, MultiSwitch>;

/// Complete machine description: modules, switch fabric, calibration, and
/// entanglement process. Immutable after validate(); everything downstream
/// treats it as shared read-only state.
struct ArchitectureSpec {
  std::string name = "custom";
  std::vector<ModuleSpec> modules;
  SwitchTopology topology = MonolithicSwitch{256};
  CalibrationTable table;
  EntanglementModel entanglement;
  bool x_junction_per_hop = true;  // charge one junction traversal per inter-device hop

  int total_ports() const {
    int p = 0;
    for (const auto& m : modules) p += m.ports;
    return p;
  }

  int switch_port_count() const {
    if (std::holds_alternative<MonolithicSwitch>(topology))
      return std::get<MonolithicSwitch>(topology).ports_total;
    return std::get<MultiSwitch>(topology).ports_per_switch;
  }

  int concurrent_switch_paths() const {
    // A crossbar is internally non-blocking, so a monolithic fabric never
    // serializes connections; with multiple switches each hosts one
    // module-to-module path at a time.
    if (std::holds_alternative<MonolithicSwitch>(topology)) return 0;  // unbounded
    return std::get<MultiSwitch>(topology).switch_count;
  }

  void validate() const {
    if (modules.size() < 1) throw std::invalid_argument("architecture needs modules");
    for (const auto& m : modules) m.validate();
    table.validate();
    entanglement.validate();
    const int total = total_ports();
    if (std::holds_alternative<MonolithicSwitch>(topology)) {
      if (std::get<MonolithicSwitch>(topology).ports_total != total)
        throw std::invalid_argument("monolithic switch size must equal the summed module ports");
    } else {
      const auto& ms = std::get<MultiSwitch>(topology);
      if (ms.switch_count < 1 || ms.ports_per_switch < 2)
        throw std::invalid_argument("switch fabric shape must be positive");
      if (ms.switch_count * ms.ports_per_switch != total)
        throw std::invalid_argument("switch fabric ports must equal the summed module ports");
      // Every module wires the same number of ports into every switch, so
      // a connection between any two modules can land on any switch. The
      // one-port-per-switch layout is the special case ports_per_switch ==
      // module_count.
      if (ms.ports_per_switch % static_cast<int>(modules.size()) != 0)
        throw std::invalid_argument(
            "each switch must take an equal number of ports from every module");
    }
  }
};

// --- calibration queries ---

/// Crossbar connection-setup latency for a switch with `ports` ports.
/// Anchor sizes return their measured value exactly. Other sizes are
/// log-linear in port count between (or beyond) the outermost anchors;
/// below the smallest anchor the latency scales proportionally with port
/// count instead, which keeps small fabrics positive where a log-linear
/// extension would cross zero.
inline double xbar_latency(int ports, const CalibrationTable& table) {
  table.validate();
  if (ports < 2) throw std::invalid_argument("a switch needs at least 2 ports");
  const auto& A = table.xbar_anchors;
  for (const auto& [p, v] : A)
    if (p == ports) return v;
  if (ports < A.front().first)
    return A.front().second * static_cast<double>(ports) / A.front().first;
  if (A.size() == 1) return A.front().second * static_cast<double>(ports) / A.front().first;

  size_t hi = 1;
  while (hi + 1 < A.size() && A[hi].first < ports) ++hi;
  const auto& [p0, v0] = A[hi - 1];
  const auto& [p1, v1] = A[hi];
  double slope = (v1 - v0) / (std::log(static_cast<double>(p1)) - std::log(static_cast<double>(p0)));
  return v0 + slope * (std::log(static_cast<double>(ports)) - std::log(static_cast<double>(p0)));
}

/// Expected number of attempt rounds until at least one of `c` concurrent
/// heralded attempts succeeds: 1 / (1 − (1 − p)^c).
inline double expected_rounds(int c, double p) {
  if (c < 1) throw std::invalid_argument("attempt concurrency must be >= 1");
  if (!(p > 0) || p > 1) throw std::invalid_argument("success probability must be in (0,1]");
  if (p == 1.0) return 1.0;
  return 1.0 / (1.0 - std::pow(1.0 - p, c));
}

/// Latency of the attempt phase (everything after the crossbar is set
/// up): cooling plus the expected number of attempt rounds, unless a
/// calibrated override is installed, which wins verbatim.
inline double non_xbar_latency(const EntanglementModel& model, const CalibrationTable& table) {
  model.validate();
  if (model.non_xbar_override >= 0) return model.non_xbar_override;
  return table.cooling_time +
         table.attempt_time * expected_rounds(model.concurrency, model.success_probability);
}

/// End-to-end latency of one raw inter-module entanglement: crossbar setup
/// for the governing switch size, then the attempt phase.
inline double entanglement_latency(const ArchitectureSpec& arch, const EntanglementModel& model,
                                   const CalibrationTable& table) {
  return xbar_latency(arch.switch_port_count(), table) + non_xbar_latency(model, table);
}

inline double entanglement_latency(const ArchitectureSpec& arch) {
  return entanglement_latency(arch, arch.entanglement, arch.table);
}

struct DistillationResult {
  double fidelity = 1.0;
  int raw_pairs = 1;
};

/// Output fidelity and raw-pair cost of `d` distillation iterations.
/// Calibrated mode returns the measured post-distillation constant for any
/// d ≥ 1 (the shipped number reflects the full calibrated process);
/// analytic mode applies the two-to-one purification recurrence
/// F' = F² / (F² + (1−F)²) d times. Either way 2^d raw pairs are consumed.
inline DistillationResult distilled_fidelity(const EntanglementModel& model) {
  model.validate();
  DistillationResult out;
  out.raw_pairs = 1 << model.distill_iterations;
  if (model.distill_iterations == 0) {
    out.fidelity = model.raw_pair_fidelity;
  } else if (!model.analytic_distillation) {
    out.fidelity = model.calibrated_fidelity;
  } else {
    double f = model.raw_pair_fidelity;
    for (int i = 0; i < model.distill_iterations; ++i) f = f * f / (f * f + (1 - f) * (1 - f));
    out.fidelity = f;
  }
  return out;
}

// --- presets ---

namespace detail {

// Six devices in a 3×2 grid; the bottom row (indices 4, 5) carries the
// communication role and the photonic ports. Grid neighbors are linked.
inline ModuleSpec grid_module(int rows, int cols, int comm_row, int data_capacity, int traps,
                              int links_per_pair, int comm_capacity, int ports) {
  ModuleSpec m;
  m.ports = ports;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      QccdSpec q;
      q.role = (r == comm_row) ? QccdRole::Communication : QccdRole::Computing;
      q.data_capacity = data_capacity;
      q.comm_capacity = (r == comm_row) ? comm_capacity : 0;
      q.traps = traps;
      m.qccds.push_back(q);
    }
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) m.links.push_back({id(r, c), id(r, c + 1), links_per_pair});
      if (r + 1 < rows) m.links.push_back({id(r, c), id(r + 1, c), links_per_pair});
    }
  return m;
}

}  // namespace detail

/// Full-scale reference machine with one big crossbar: 4 modules of 6
/// devices (4 computing + 2 communication) at 32 data slots each, 8
/// transport links per neighboring pair, 64 ports per module, and the
/// measured 2750 µs attempt phase at 2 concurrent attempts.
inline ArchitectureSpec baseline_preset() {
  ArchitectureSpec a;
  a.name = "baseline";
  for (int m = 0; m < 4; ++m)
    a.modules.push_back(detail::grid_module(3, 2, 2, 32, 2, 8, 32, 64));
  a.topology = MonolithicSwitch{256};
  a.entanglement.concurrency = 2;
  a.entanglement.non_xbar_override = 2750.0;
  a.validate();
  return a;
}

/// Same modules as `baseline`, but the crossbar is split into 8 switches
/// of 32 ports and the attempt phase runs 8 concurrent attempts with its
/// measured 765 µs latency.
inline ArchitectureSpec titan_preset() {
  ArchitectureSpec a = baseline_preset();
  a.name = "titan";
  a.topology = MultiSwitch{8, 32};
  a.entanglement.concurrency = 8;
  a.entanglement.non_xbar_override = 765.0;
  a.validate();
  return a;
}

/// Shrunk machine for minutes-scale experiments: 4 modules of 4 devices
/// (2×2 grid, bottom row communication) at 8 data slots each — 128 data
/// slots total — keeping the full-scale role structure and port counts.
inline ArchitectureSpec desk_preset() {
  ArchitectureSpec a;
  a.name = "desk";
  for (int m = 0; m < 4; ++m)
    a.modules.push_back(detail::grid_module(2, 2, 1, 8, 2, 8, 8, 64));
  a.topology = MultiSwitch{8, 32};
  a.entanglement.concurrency = 8;
  a.entanglement.non_xbar_override = 765.0;
  a.validate();
  return a;
}

inline ArchitectureSpec preset(const std::string& name) {
  if (name == "baseline") return baseline_preset();
  if (name == "titan") return titan_preset();
  if (name == "desk") return desk_preset();
  throw std::invalid_argument("unknown preset '" + name + "' (expected baseline, titan, or desk)");
}

// --- JSON (de)serialization ---

inline void to_json(nlohmann::json& j, const CalibrationTable& t) {
  j = nlohmann::json{{"gate1_time", t.gate1_time},
                     {"gate1_infidelity", t.gate1_infidelity},
                     {"gate2_time", t.gate2_time},
                     {"gate2_infidelity", t.gate2_infidelity},
                     {"merge_split_time", t.merge_split_time},
                     {"merge_split_infidelity", t.merge_split_infidelity},
                     {"shuttle_time", t.shuttle_time},
                     {"shuttle_infidelity", t.shuttle_infidelity},
                     {"x_junction_time", t.x_junction_time},
                     {"x_junction_infidelity", t.x_junction_infidelity},
                     {"measure_time", t.measure_time},
                     {"measure_infidelity", t.measure_infidelity},
                     {"matter_link_time", t.matter_link_time},
                     {"matter_link_infidelity", t.matter_link_infidelity},
                     {"photonic_time", t.photonic_time},
                     {"photonic_infidelity", t.photonic_infidelity},
                     {"cooling_time", t.cooling_time},
                     {"attempt_time", t.attempt_time},
                     {"t2_idle", t.t2_idle},
                     {"xbar_anchors", t.xbar_anchors}};
}

inline void from_json(const nlohmann::json& j, CalibrationTable& t) {
  CalibrationTable defaults;
  t = defaults;
  j.at("gate1_time").get_to(t.gate1_time);
  j.at("gate1_infidelity").get_to(t.gate1_infidelity);
  j.at("gate2_time").get_to(t.gate2_time);
  j.at("gate2_infidelity").get_to(t.gate2_infidelity);
  j.at("merge_split_time").get_to(t.merge_split_time);
  if (j.contains("merge_split_infidelity"))
    j.at("merge_split_infidelity").get_to(t.merge_split_infidelity);
  j.at("shuttle_time").get_to(t.shuttle_time);
  j.at("shuttle_infidelity").get_to(t.shuttle_infidelity);
  j.at("x_junction_time").get_to(t.x_junction_time);
  j.at("x_junction_infidelity").get_to(t.x_junction_infidelity);
  j.at("measure_time").get_to(t.measure_time);
  j.at("measure_infidelity").get_to(t.measure_infidelity);
  j.at("matter_link_time").get_to(t.matter_link_time);
  j.at("matter_link_infidelity").get_to(t.matter_link_infidelity);
  j.at("photonic_time").get_to(t.photonic_time);
  j.at("photonic_infidelity").get_to(t.photonic_infidelity);
  j.at("cooling_time").get_to(t.cooling_time);
  j.at("attempt_time").get_to(t.attempt_time);
  j.at("t2_idle").get_to(t.t2_idle);
  j.at("xbar_anchors").get_to(t.xbar_anchors);
}

inline void to_json(nlohmann::json& j, const EntanglementModel& m) {
  j = nlohmann::json{{"concurrency", m.concurrency},
                     {"success_probability", m.success_probability},
                     {"non_xbar_override", m.non_xbar_override},
                     {"distill_iterations", m.distill_iterations},
                     {"analytic_distillation", m.analytic_distillation},
                     {"raw_pair_fidelity", m.raw_pair_fidelity},
                     {"calibrated_fidelity", m.calibrated_fidelity},
                     {"in_flight_per_module", m.in_flight_per_module}};
}

inline void from_json(const nlohmann::json& j, EntanglementModel& m) {
  m = EntanglementModel{};
  j.at("concurrency").get_to(m.concurrency);
  j.at("success_probability").get_to(m.success_probability);
  j.at("non_xbar_override").get_to(m.non_xbar_override);
  j.at("distill_iterations").get_to(m.distill_iterations);
  j.at("analytic_distillation").get_to(m.analytic_distillation);
  j.at("raw_pair_fidelity").get_to(m.raw_pair_fidelity);
  j.at("calibrated_fidelity").get_to(m.calibrated_fidelity);
  j.at("in_flight_per_module").get_to(m.in_flight_per_module);
}

inline void to_json(nlohmann::json& j, const QccdSpec& q) {
  j = nlohmann::json{{"role", q.role == QccdRole::Communication ? "communication" : "computing"},
                     {"data_capacity", q.data_capacity},
                     {"comm_capacity", q.comm_capacity},
                     {"traps", q.traps}};
}

inline void from_json(const nlohmann::json& j, QccdSpec& q) {
  std::string role = j.at("role").get<std::string>();
  if (role == "communication")
    q.role = QccdRole::Communication;
  else if (role == "computing")
    q.role = QccdRole::Computing;
  else
    throw std::invalid_argument("device role must be 'computing' or 'communication'");
  j.at("data_capacity").get_to(q.data_capacity);
  j.at("comm_capacity").get_to(q.comm_capacity);
  j.at("traps").get_to(q.traps);
}

inline void to_json(nlohmann::json& j, const ModuleSpec& m) {
  j = nlohmann::json{{"qccds", m.qccds}, {"links", m.links}, {"ports", m.ports}};
}

inline void from_json(const nlohmann::json& j, ModuleSpec& m) {
  j.at("qccds").get_to(m.qccds);
  j.at("links").get_to(m.links);
  j.at("ports").get_to(m.ports);
}

inline void to_json(nlohmann::json& j, const ArchitectureSpec& a) {
  nlohmann::json topo;
  if (std::holds_alternative<MonolithicSwitch>(a.topology)) {
    topo = {{"kind", "monolithic"},
            {"ports_total", std::get<MonolithicSwitch>(a.topology).ports_total}};
  } else {
    const auto& ms = std::get<MultiSwitch>(a.topology);
    topo = {{"kind", "multi"},
            {"switch_count", ms.switch_count},
            {"ports_per_switch", ms.ports_per_switch}};
  }
  j = nlohmann::json{{"name", a.name},
                     {"modules", a.modules},
                     {"switch", topo},
                     {"calibration", a.table},
                     {"entanglement", a.entanglement},
                     {"x_junction_per_hop", a.x_junction_per_hop}};
}

inline void from_json(const nlohmann::json& j, ArchitectureSpec& a) {
  j.at("name").get_to(a.name);
  j.at("modules").get_to(a.modules);
  const auto& topo = j.at("switch");
  std::string kind = topo.at("kind").get<std::string>();
  if (kind == "monolithic") {
    a.topology = MonolithicSwitch{topo.at("ports_total").get<int>()};
  } else if (kind == "multi") {
    a.topology =
        MultiSwitch{topo.at("switch_count").get<int>(), topo.at("ports_per_switch").get<int>()};
  } else {
    throw std::invalid_argument("switch kind must be 'monolithic' or 'multi'");
  }
  j.at("calibration").get_to(a.table);
  j.at("entanglement").get_to(a.entanglement);
  j.at("x_junction_per_hop").get_to(a.x_junction_per_hop);
  a.validate();
}

}  // namespace ionweave
