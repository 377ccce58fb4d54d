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
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ionweave/arch.hpp"
#include "ionweave/circuit.hpp"
#include "ionweave/mapping.hpp"
#include "ionweave/rng.hpp"

namespace ionweave {

enum class OpKind {
  Gate1,
  Gate2,
  Split,
  Merge,
  ShuttleStep,
  XJunction,
  MatterLink,
  Entangle,
  Distill,
  TeleportLocal,
  Measure,
  Cool
};

inline const char* to_string(OpKind k) {
  switch (k) {
    case OpKind::Gate1: return "gate1";
    case OpKind::Gate2: return "gate2";
    case OpKind::Split: return "split";
    case OpKind::Merge: return "merge";
    case OpKind::ShuttleStep: return "shuttle_step";
    case OpKind::XJunction: return "x_junction";
    case OpKind::MatterLink: return "matter_link";
    case OpKind::Entangle: return "entangle";
    case OpKind::Distill: return "distill";
    case OpKind::TeleportLocal: return "teleport_local";
    case OpKind::Measure: return "measure";
    case OpKind::Cool: return "cool";
  }
  return "?";
}

inline OpKind op_kind_from_string(const std::string& s) {
  static const std::map<std::string, OpKind> lut = {
      {"gate1", OpKind::Gate1},           {"gate2", OpKind::Gate2},
      {"split", OpKind::Split},           {"merge", OpKind::Merge},
      {"shuttle_step", OpKind::ShuttleStep}, {"x_junction", OpKind::XJunction},
      {"matter_link", OpKind::MatterLink}, {"entangle", OpKind::Entangle},
      {"distill", OpKind::Distill},       {"teleport_local", OpKind::TeleportLocal},
      {"measure", OpKind::Measure},       {"cool", OpKind::Cool}};
  auto it = lut.find(s);
  if (it == lut.end()) throw std::invalid_argument("unknown op kind '" + s + "'");
  return it->second;
}

/// One scheduled physical operation. `qubits` lists the *logical* qubits
/// participating; transport of untracked entangled-pair halves shows up
/// with an empty list. Infidelity is fixed at emission so a trace is
/// self-describing.
struct PhysicalOp {
  OpKind kind;
  std::string location;
  std::vector<int> qubits;
  double start = 0;
  double duration = 0;
  double infidelity = 0;
};

/// Duration of one op of `kind` (the entanglement op's duration is
/// machine-dependent and computed by the scheduler instead).
inline double op_time(OpKind kind, const CalibrationTable& t) {
  switch (kind) {
    case OpKind::Gate1: return t.gate1_time;
    case OpKind::Gate2: return t.gate2_time;
    case OpKind::Split: return t.merge_split_time;
    case OpKind::Merge: return t.merge_split_time;
    case OpKind::ShuttleStep: return t.shuttle_time;
    case OpKind::XJunction: return t.x_junction_time;
    case OpKind::MatterLink: return t.matter_link_time;
    case OpKind::Entangle: return t.photonic_time;
    case OpKind::Distill: return 0;  // scheduler-derived: d * (gate + measure)
    case OpKind::TeleportLocal: return t.gate2_time;
    case OpKind::Measure: return t.measure_time;
    case OpKind::Cool: return t.cooling_time;
  }
  return 0;
}

/// Infidelity charged per op of `kind`. The entanglement op carries the
/// post-distillation pair infidelity; distillation itself is folded into
/// that number and charged zero.
inline double op_infidelity(OpKind kind, const CalibrationTable& t,
                            const EntanglementModel& model) {
  switch (kind) {
    case OpKind::Gate1: return t.gate1_infidelity;
    case OpKind::Gate2: return t.gate2_infidelity;
    case OpKind::Split: return t.merge_split_infidelity;
    case OpKind::Merge: return t.merge_split_infidelity;
    case OpKind::ShuttleStep: return t.shuttle_infidelity;
    case OpKind::XJunction: return t.x_junction_infidelity;
    case OpKind::MatterLink: return t.matter_link_infidelity;
    case OpKind::Entangle: return 1.0 - distilled_fidelity(model).fidelity;
    case OpKind::Distill: return 0;
    case OpKind::TeleportLocal: return t.gate2_infidelity;
    case OpKind::Measure: return t.measure_infidelity;
    case OpKind::Cool: return 0;
  }
  return 0;
}

/// Raised when no trap in the operand's module has room for a required
/// move; carries the index of the unroutable gate.
class CapacityDeadlock : public std::runtime_error {
 public:
  CapacityDeadlock(int gate_index, const std::string& what)
      : std::runtime_error("gate " + std::to_string(gate_index) + ": " + what),
        gate_index_(gate_index) {}
  int gate_index() const { return gate_index_; }

 private:
  int gate_index_;
};

/// A bank of identical servers, each busy until some time. Acquiring
/// picks the earliest-free server (lowest index on ties) — the scheduling
/// primitive behind transport links, per-module entanglement budgets, and
/// switch paths.
struct ServerPool {
  std::vector<double> busy_until;

  double earliest_free() const {
    double t = std::numeric_limits<double>::infinity();
    for (double b : busy_until) t = std::min(t, b);
    return busy_until.empty() ? 0.0 : t;
  }

  /// Starts a hold of `duration` no earlier than `ready`; returns the
  /// actual start time.
  double acquire(double ready, double duration) {
    size_t best = 0;
    for (size_t i = 1; i < busy_until.size(); ++i)
      if (busy_until[i] < busy_until[best]) best = i;
    double start = std::max(ready, busy_until[best]);
    busy_until[best] = start + duration;
    return start;
  }
};

/// Where a logical qubit currently sits. Qubits move during execution —
/// the initial mapping is only the starting state — and stay wherever the
/// last gate left them.
struct QubitLocation {
  int module = -1, qccd = -1, trap = -1;
  bool operator==(const QubitLocation& o) const {
    return module == o.module && qccd == o.qccd && trap == o.trap;
  }
};

/// Mutable machine state threaded through one simulation run.
struct MachineState {
  std::vector<QubitLocation> loc;                        // per logical qubit
  std::vector<std::vector<std::vector<std::vector<int>>>> roster;  // [m][qccd][trap] -> qubits
  std::vector<double> qubit_free;                        // busy-until per qubit
  std::vector<double> qubit_busy;                        // accumulated active time
  std::vector<double> last_active;                       // for eviction ranking
  std::map<std::tuple<int, int, int>, ServerPool> links; // (module, lo, hi) -> link bank
  std::vector<ServerPool> entanglement_budget;           // per module
  ServerPool switch_paths;                               // empty = non-blocking fabric

  /// Every qubit in exactly one roster slot, where it thinks it is, and
  /// no trap over capacity.
  void check_conservation(const ArchitectureSpec& arch) const {
    std::vector<int> seen(loc.size(), 0);
    for (size_t m = 0; m < roster.size(); ++m)
      for (size_t d = 0; d < roster[m].size(); ++d)
        for (size_t t = 0; t < roster[m][d].size(); ++t) {
          if (static_cast<int>(roster[m][d][t].size()) >
              arch.modules[m].qccds[d].slots_per_trap())
            throw std::logic_error("trap over capacity");
          for (int q : roster[m][d][t]) {
            ++seen[q];
            if (!(loc[q] == QubitLocation{static_cast<int>(m), static_cast<int>(d),
                                          static_cast<int>(t)}))
              throw std::logic_error("qubit location out of sync with roster");
          }
        }
    for (int c : seen)
      if (c != 1) throw std::logic_error("qubit conservation violated");
  }
};

/// Per-run summary: makespan, op census, communication counters, and the
/// analytic fidelity estimate, plus the full op trace when collected.
struct ExecutionReport {
  double total_latency = 0;
  std::map<std::string, int> op_counts;
  int matter_link_crossings = 0;
  int entanglement_count = 0;
  int raw_pairs_consumed = 0;
  double photonic_share = 0;  // entangle time / total op time
  double fidelity = 1.0;
  std::vector<double> slice_end_times;
  std::vector<PhysicalOp> ops;
};

/// Multiplies (1 − infidelity) over every op, then an exponential idle
/// penalty per logical qubit: idle = makespan − time spent in ops that
/// list the qubit, decaying with the calibration table's T2 scale.
inline double estimate_fidelity(const std::vector<PhysicalOp>& ops, double makespan,
                                const CalibrationTable& table, int qubit_count) {
  double f = 1.0;
  std::vector<double> busy(qubit_count, 0.0);
  for (const auto& op : ops) {
    f *= 1.0 - op.infidelity;
    for (int q : op.qubits)
      if (q >= 0 && q < qubit_count) busy[q] += op.duration;
  }
  for (int q = 0; q < qubit_count; ++q) {
    double idle = std::max(0.0, makespan - busy[q]);
    f *= std::exp(-idle / table.t2_idle);
  }
  return f;
}

/// Dependency-chain lower bound on the makespan: every gate costs at least
/// its bare calibrated time, ignoring all transport and contention.
inline double critical_path_lower_bound(const Circuit& c, const CalibrationTable& table) {
  std::vector<double> done(c.qubit_count(), 0.0);
  double bound = 0;
  for (const auto& g : c.gates()) {
    double cost = g.kind == GateKind::TwoQubit    ? table.gate2_time
                  : g.kind == GateKind::OneQubit  ? table.gate1_time
                                                  : table.measure_time;
    double at = done[g.q0];
    if (g.is_two_qubit()) at = std::max(at, done[g.q1]);
    at += cost;
    done[g.q0] = at;
    if (g.is_two_qubit()) done[g.q1] = at;
    bound = std::max(bound, at);
  }
  return bound;
}

struct SimOptions {
  bool sampled_attempts = false;  // draw attempt rounds instead of expected value
  uint64_t seed = 0;              // root seed for sampled mode
  bool collect_trace = true;      // keep the op list in the report
  bool check_invariants = true;   // verify conservation after every gate
};

/// Routes gates one at a time onto the machine, tracking qubit locations,
/// trap occupancy, and resource contention. Gates must be fed in schedule
/// order (slice by slice, ascending index inside a slice); the engine is
/// a greedy list scheduler — each op starts as soon as its operands and
/// resources allow, so independent gates overlap.
class Simulator {
 public:
  Simulator(const MappingAssignment& mapping, const ArchitectureSpec& arch,
            const SimOptions& options = {})
      : arch_(arch), options_(options), rng_(derive_seed(options.seed, "attempts")) {
    arch.validate();
    mapping.validate(arch);
    state_.loc.resize(mapping.qubit_count());
    state_.qubit_free.assign(mapping.qubit_count(), 0.0);
    state_.qubit_busy.assign(mapping.qubit_count(), 0.0);
    state_.last_active.assign(mapping.qubit_count(), 0.0);
    state_.roster.resize(arch.modules.size());
    for (size_t m = 0; m < arch.modules.size(); ++m) {
      state_.roster[m].resize(arch.modules[m].qccds.size());
      for (size_t d = 0; d < arch.modules[m].qccds.size(); ++d)
        state_.roster[m][d].resize(arch.modules[m].qccds[d].traps);
      for (const auto& [a, b, cnt] : arch.modules[m].links) {
        auto key = std::make_tuple(static_cast<int>(m), std::min(a, b), std::max(a, b));
        state_.links[key].busy_until.assign(cnt, 0.0);
      }
      ServerPool budget;
      budget.busy_until.assign(arch.entanglement.in_flight_per_module, 0.0);
      state_.entanglement_budget.push_back(budget);
    }
    if (arch.concurrent_switch_paths() > 0)
      state_.switch_paths.busy_until.assign(arch.concurrent_switch_paths(), 0.0);
    for (int q = 0; q < mapping.qubit_count(); ++q) {
      const auto& p = mapping[q];
      int trap = p.slot / arch.modules[p.module].qccds[p.qccd].slots_per_trap();
      state_.loc[q] = {p.module, p.qccd, trap};
      state_.roster[p.module][p.qccd][trap].push_back(q);
    }
    if (options_.check_invariants) state_.check_conservation(arch_);
  }

  const MachineState& state() const { return state_; }
  const std::vector<PhysicalOp>& trace() const { return all_ops_; }
  double makespan() const { return makespan_; }

  /// Translates one logical gate into physical ops and commits them to the
  /// schedule. Returns the ops emitted for this gate.
  std::vector<PhysicalOp> route_gate(const Gate& g, int gate_index) {
    std::vector<PhysicalOp> ops;
    switch (g.kind) {
      case GateKind::OneQubit: {
        double start = emit(ops, OpKind::Gate1, trap_name(state_.loc[g.q0]), {g.q0},
                            state_.qubit_free[g.q0]);
        finish_qubit(g.q0, start + arch_.table.gate1_time);
        break;
      }
      case GateKind::Measurement: {
        double start = emit(ops, OpKind::Measure, trap_name(state_.loc[g.q0]), {g.q0},
                            state_.qubit_free[g.q0]);
        finish_qubit(g.q0, start + arch_.table.measure_time);
        break;
      }
      case GateKind::TwoQubit: {
        const auto a = state_.loc[g.q0], b = state_.loc[g.q1];
        if (a.module != b.module) {
          route_remote_gate(g, ops);
        } else {
          if (!(a == b)) move_qubit(g.q0, b, g.q1, gate_index, ops);
          double ready = std::max(state_.qubit_free[g.q0], state_.qubit_free[g.q1]);
          double start =
              emit(ops, OpKind::Gate2, trap_name(state_.loc[g.q0]), {g.q0, g.q1}, ready);
          double end = start + arch_.table.gate2_time;
          finish_qubit(g.q0, end);
          finish_qubit(g.q1, end);
        }
        break;
      }
    }
    commit(ops);
    if (options_.check_invariants) state_.check_conservation(arch_);
    return ops;
  }

  /// Reserves the switch path and both modules' entanglement budgets, then
  /// schedules pair generation plus distillation. Returns (ops, time the
  /// distilled pair is ready). The budget is held until distillation ends;
  /// the optical path is released once generation completes.
  std::pair<std::vector<PhysicalOp>, double> execute_entanglement(int src_module,
                                                                  int dst_module) {
    std::vector<PhysicalOp> ops;
    double gen_time = entangle_duration();
    double distill_time =
        arch_.entanglement.distill_iterations * (arch_.table.gate2_time + arch_.table.measure_time);

    double ready = std::max(state_.entanglement_budget[src_module].earliest_free(),
                            state_.entanglement_budget[dst_module].earliest_free());
    std::string where = "xbar";
    if (!state_.switch_paths.busy_until.empty()) {
      ready = std::max(ready, state_.switch_paths.earliest_free());
      double start = state_.switch_paths.acquire(ready, gen_time);
      ready = start;  // all three reservations begin together
      where = "switch";
    }
    state_.entanglement_budget[src_module].acquire(ready, gen_time + distill_time);
    state_.entanglement_budget[dst_module].acquire(ready, gen_time + distill_time);

    PhysicalOp gen{OpKind::Entangle,
                   where,
                   {},
                   ready,
                   gen_time,
                   op_infidelity(OpKind::Entangle, arch_.table, arch_.entanglement)};
    ops.push_back(gen);
    double t = ready + gen_time;
    if (distill_time > 0) {
      ops.push_back(PhysicalOp{OpKind::Distill, "m" + std::to_string(dst_module), {}, t,
                               distill_time, 0.0});
      t += distill_time;
    }
    entanglement_count_ += 1;
    raw_pairs_ += distilled_fidelity(arch_.entanglement).raw_pairs;
    return {std::move(ops), t};
  }

  /// Seals the run: computes makespan-derived numbers and the fidelity
  /// estimate. `slice_ends` is the per-slice completion timeline gathered
  /// by the caller.
  ExecutionReport finish(std::vector<double> slice_ends = {}) {
    ExecutionReport r;
    r.total_latency = makespan_;
    r.op_counts = op_counts_;
    r.matter_link_crossings = op_counts_.count("matter_link") ? op_counts_.at("matter_link") : 0;
    r.entanglement_count = entanglement_count_;
    r.raw_pairs_consumed = raw_pairs_;
    double photonic = 0, total = 0;
    for (const auto& op : all_ops_) {
      total += op.duration;
      if (op.kind == OpKind::Entangle) photonic += op.duration;
    }
    r.photonic_share = total > 0 ? photonic / total : 0.0;
    r.fidelity = estimate_fidelity(all_ops_, makespan_, arch_.table,
                                   static_cast<int>(state_.loc.size()));
    r.slice_end_times = std::move(slice_ends);
    if (options_.collect_trace) r.ops = all_ops_;
    return r;
  }

 private:
  double entangle_duration() {
    double xbar = xbar_latency(arch_.switch_port_count(), arch_.table);
    if (!options_.sampled_attempts)
      return xbar + non_xbar_latency(arch_.entanglement, arch_.table);
    double p_round = 1.0 - std::pow(1.0 - arch_.entanglement.success_probability,
                                    arch_.entanglement.concurrency);
    int rounds = 1;
    if (p_round < 1.0) {
      double u = rng_.uniform01();
      rounds = 1 + static_cast<int>(std::floor(std::log1p(-u) / std::log1p(-p_round)));
    }
    return xbar + arch_.table.cooling_time + arch_.table.attempt_time * rounds;
  }

  std::string trap_name(const QubitLocation& l) const {
    return "m" + std::to_string(l.module) + ".d" + std::to_string(l.qccd) + ".t" +
           std::to_string(l.trap);
  }

  double emit(std::vector<PhysicalOp>& ops, OpKind kind, std::string location,
              std::vector<int> qubits, double start, double duration = -1) {
    if (duration < 0) duration = op_time(kind, arch_.table);
    ops.push_back(PhysicalOp{kind, std::move(location), std::move(qubits), start, duration,
                             op_infidelity(kind, arch_.table, arch_.entanglement)});
    return start;
  }

  void finish_qubit(int q, double end) {
    state_.qubit_free[q] = end;
    state_.last_active[q] = end;
  }

  void commit(const std::vector<PhysicalOp>& ops) {
    for (const auto& op : ops) {
      makespan_ = std::max(makespan_, op.start + op.duration);
      ++op_counts_[to_string(op.kind)];
      for (int q : op.qubits) state_.qubit_busy[q] += op.duration;
      all_ops_.push_back(op);
    }
  }

  // Shortest QCCD-to-QCCD route inside a module (BFS, lowest-index device
  // first on ties), as the list of devices visited.
  std::vector<int> qccd_path(int module, int from, int to) const {
    const auto& mod = arch_.modules[module];
    std::vector<std::vector<int>> adj(mod.qccds.size());
    for (const auto& [a, b, cnt] : mod.links) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    std::vector<int> parent(mod.qccds.size(), -2);
    std::deque<int> frontier{from};
    parent[from] = -1;
    while (!frontier.empty()) {
      int at = frontier.front();
      frontier.pop_front();
      if (at == to) break;
      for (int nxt : adj[at])
        if (parent[nxt] == -2) {
          parent[nxt] = at;
          frontier.push_back(nxt);
        }
    }
    std::vector<int> path;
    for (int at = to; at != -1; at = parent[at]) path.push_back(at);
    std::reverse(path.begin(), path.end());
    return path;
  }

  ServerPool& link_pool(int module, int a, int b) {
    return state_.links.at(std::make_tuple(module, std::min(a, b), std::max(a, b)));
  }

  // Transport ops moving tracked qubit `q` (or an untracked pair half when
  // q < 0) along `path` within `module`, starting no earlier than `ready`.
  // Emits split (tracked only), one junction turn + matter-link per hop,
  // shuttle steps for the intra-device trap walk, and the final merge.
  double emit_transport(int q, int module, const std::vector<int>& path, int from_trap,
                        int to_trap, double ready, std::vector<PhysicalOp>& ops) {
    std::vector<int> tag;
    if (q >= 0) tag = {q};
    double t = ready;
    if (q >= 0) {
      emit(ops, OpKind::Split, trap_name({module, path.front(), from_trap}), tag, t);
      t += arch_.table.merge_split_time;
    }
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      int a = path[i], b = path[i + 1];
      if (arch_.x_junction_per_hop) {
        emit(ops, OpKind::XJunction, "m" + std::to_string(module) + ".d" + std::to_string(a), tag,
             t);
        t += arch_.table.x_junction_time;
      }
      double start = link_pool(module, a, b).acquire(t, arch_.table.matter_link_time);
      emit(ops, OpKind::MatterLink,
           "m" + std::to_string(module) + ".link" + std::to_string(std::min(a, b)) + "-" +
               std::to_string(std::max(a, b)),
           tag, start);
      t = start + arch_.table.matter_link_time;
    }
    if (path.size() == 1 && q >= 0) {
      // Same device: walk the linear trap array.
      int hops = std::abs(to_trap - from_trap);
      for (int s = 0; s < hops; ++s) {
        emit(ops, OpKind::ShuttleStep, trap_name({module, path.front(), from_trap}), tag, t);
        t += arch_.table.shuttle_time;
      }
    }
    emit(ops, OpKind::Merge, trap_name({module, path.back(), to_trap}), tag, t);
    t += arch_.table.merge_split_time;
    return t;
  }

  // Moves qubit `q` into the trap of `anchor` (same module), evicting a
  // resident first if the trap is full. The evicted qubit is the least
  // recently active resident other than the anchor; it goes to the
  // emptiest trap with room in the same device, else anywhere in the
  // module, else the move fails.
  void move_qubit(int q, QubitLocation dest, int anchor, int gate_index,
                  std::vector<PhysicalOp>& ops) {
    const auto& mod = arch_.modules[dest.module];
    auto& dest_roster = state_.roster[dest.module][dest.qccd][dest.trap];
    if (static_cast<int>(dest_roster.size()) >= mod.qccds[dest.qccd].slots_per_trap()) {
      int victim = -1;
      for (int r : dest_roster) {
        if (r == anchor) continue;
        if (victim == -1 || state_.last_active[r] < state_.last_active[victim] ||
            (state_.last_active[r] == state_.last_active[victim] && r < victim))
          victim = r;
      }
      if (victim == -1)
        throw CapacityDeadlock(gate_index, "destination trap is full of active operands");
      QubitLocation spot = find_room(dest.module, dest.qccd, dest.trap);
      if (spot.module < 0)
        throw CapacityDeadlock(gate_index, "no free slot anywhere in module " +
                                               std::to_string(dest.module));
      relocate(victim, spot, ops);
    }
    relocate(q, dest, ops);
  }

  // Emptiest trap with a free slot, preferring the given device, then the
  // rest of the module; (-1,-1,-1) when everything is full.
  QubitLocation find_room(int module, int prefer_qccd, int exclude_trap) const {
    const auto& mod = arch_.modules[module];
    QubitLocation best{-1, -1, -1};
    int best_load = std::numeric_limits<int>::max();
    bool best_preferred = false;
    for (size_t d = 0; d < mod.qccds.size(); ++d) {
      for (int t = 0; t < mod.qccds[d].traps; ++t) {
        if (static_cast<int>(d) == prefer_qccd && t == exclude_trap) continue;
        int load = static_cast<int>(state_.roster[module][d][t].size());
        if (load >= mod.qccds[d].slots_per_trap()) continue;
        bool preferred = static_cast<int>(d) == prefer_qccd;
        if (best.module < 0 || (preferred && !best_preferred) ||
            (preferred == best_preferred && load < best_load)) {
          best = {module, static_cast<int>(d), t};
          best_load = load;
          best_preferred = preferred;
        }
      }
    }
    return best;
  }

  void relocate(int q, QubitLocation dest, std::vector<PhysicalOp>& ops) {
    QubitLocation src = state_.loc[q];
    auto path = qccd_path(src.module, src.qccd, dest.qccd);
    double end = emit_transport(q, src.module, path, src.trap, dest.trap,
                                state_.qubit_free[q], ops);
    auto& from = state_.roster[src.module][src.qccd][src.trap];
    from.erase(std::find(from.begin(), from.end(), q));
    state_.roster[dest.module][dest.qccd][dest.trap].push_back(q);
    state_.loc[q] = dest;
    finish_qubit(q, end);
  }

  // Remote two-qubit gate: distilled pair + teleportation. Pair halves are
  // driven from the communication device nearest each operand to the
  // operand's trap, then each side runs a local entangling gate and a
  // measurement; classical corrections are free.
  void route_remote_gate(const Gate& g, std::vector<PhysicalOp>& ops) {
    auto [pair_ops, pair_ready] =
        execute_entanglement(state_.loc[g.q0].module, state_.loc[g.q1].module);
    for (auto& op : pair_ops) ops.push_back(std::move(op));

    double done[2];
    const int operands[2] = {g.q0, g.q1};
    for (int side = 0; side < 2; ++side) {
      int q = operands[side];
      QubitLocation at = state_.loc[q];
      int comm = nearest_comm_qccd(at.module, at.qccd);
      auto path = qccd_path(at.module, comm, at.qccd);
      // The half only merges into the operand's chain, so the merge (and
      // any link hops) involve the data qubit's trap but no split.
      double arrive = emit_transport(-1, at.module, path, 0, at.trap,
                                     std::max(pair_ready, 0.0), ops);
      double start = emit(ops, OpKind::TeleportLocal, trap_name(at), {q},
                          std::max(arrive, state_.qubit_free[q]));
      double t = start + arch_.table.gate2_time;
      emit(ops, OpKind::Measure, trap_name(at), {}, t);
      done[side] = t + arch_.table.measure_time;
    }
    double end = std::max(done[0], done[1]);
    finish_qubit(g.q0, end);
    finish_qubit(g.q1, end);
  }

  int nearest_comm_qccd(int module, int target_qccd) const {
    const auto& mod = arch_.modules[module];
    int best = -1;
    size_t best_len = 0;
    for (size_t d = 0; d < mod.qccds.size(); ++d) {
      if (mod.qccds[d].role != QccdRole::Communication) continue;
      size_t len = qccd_path(module, static_cast<int>(d), target_qccd).size();
      if (best == -1 || len < best_len) {
        best = static_cast<int>(d);
        best_len = len;
      }
    }
    return best;
  }

  const ArchitectureSpec& arch_;
  SimOptions options_;
  MachineState state_;
  Rng rng_;
  std::vector<PhysicalOp> all_ops_;
  std::map<std::string, int> op_counts_;
  double makespan_ = 0;
  int entanglement_count_ = 0;
  int raw_pairs_ = 0;
};

/// Runs a full circuit against a mapping: slices are dispatched in order,
/// gates inside a slice in index order, each as early as operands and
/// resources permit. Deterministic for fixed inputs and seed.
inline ExecutionReport simulate(const Circuit& circuit, const MappingAssignment& mapping,
                                const ArchitectureSpec& arch, const SimOptions& options = {}) {
  if (mapping.qubit_count() < circuit.qubit_count())
    throw std::invalid_argument("mapping does not cover all circuit qubits");
  Simulator sim(mapping, arch, options);
  auto slices = time_slice(circuit);
  std::vector<double> slice_ends;
  int gate_index = 0;
  for (const auto& slice : slices) {
    double end = slice_ends.empty() ? 0.0 : slice_ends.back();
    for (const auto& g : slice.gates) {
      auto ops = sim.route_gate(g, gate_index++);
      for (const auto& op : ops) end = std::max(end, op.start + op.duration);
    }
    slice_ends.push_back(end);
  }
  return sim.finish(std::move(slice_ends));
}

// --- trace text format: one op per line,
//   <kind> <location> <q0,q1,...|-> <start> <duration>
// with times printed to full precision so a re-read trace reproduces the
// report's numbers exactly. ---

inline void write_trace(std::ostream& os, const std::vector<PhysicalOp>& ops) {
  char num[2][64];
  for (const auto& op : ops) {
    std::snprintf(num[0], sizeof num[0], "%.17g", op.start);
    std::snprintf(num[1], sizeof num[1], "%.17g", op.duration);
    os << to_string(op.kind) << ' ' << op.location << ' ';
    if (op.qubits.empty()) {
      os << '-';
    } else {
      for (size_t i = 0; i < op.qubits.size(); ++i) os << (i ? "," : "") << op.qubits[i];
    }
    os << ' ' << num[0] << ' ' << num[1] << "\n";
  }
}

/// Re-reads a trace; infidelities are reattached from the architecture so
/// downstream fidelity recomputation matches the original emission.
inline std::vector<PhysicalOp> read_trace(std::istream& is, const ArchitectureSpec& arch) {
  std::vector<PhysicalOp> ops;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind, location, qubits;
    PhysicalOp op;
    if (!(ls >> kind >> location >> qubits >> op.start >> op.duration))
      throw std::runtime_error("trace: bad record at line " + std::to_string(lineno));
    op.kind = op_kind_from_string(kind);
    op.location = location;
    if (qubits != "-") {
      std::istringstream qs(qubits);
      std::string item;
      while (std::getline(qs, item, ',')) op.qubits.push_back(std::stoi(item));
    }
    op.infidelity = op_infidelity(op.kind, arch.table, arch.entanglement);
    ops.push_back(std::move(op));
  }
  return ops;
}

// --- report JSON ---

inline void to_json(nlohmann::json& j, const ExecutionReport& r) {
  j = nlohmann::json{{"total_latency_us", r.total_latency},
                     {"op_counts", r.op_counts},
                     {"matter_link_crossings", r.matter_link_crossings},
                     {"entanglement_count", r.entanglement_count},
                     {"raw_pairs_consumed", r.raw_pairs_consumed},
                     {"photonic_share", r.photonic_share},
                     {"fidelity", r.fidelity},
                     {"slice_end_times", r.slice_end_times}};
}

inline void from_json(const nlohmann::json& j, ExecutionReport& r) {
  j.at("total_latency_us").get_to(r.total_latency);
  j.at("op_counts").get_to(r.op_counts);
  j.at("matter_link_crossings").get_to(r.matter_link_crossings);
  j.at("entanglement_count").get_to(r.entanglement_count);
  j.at("raw_pairs_consumed").get_to(r.raw_pairs_consumed);
  j.at("photonic_share").get_to(r.photonic_share);
  j.at("fidelity").get_to(r.fidelity);
  j.at("slice_end_times").get_to(r.slice_end_times);
}

}  // namespace ionweave
