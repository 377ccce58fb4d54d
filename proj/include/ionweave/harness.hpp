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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ionweave/arch.hpp"
#include "ionweave/benchmarks.hpp"
#include "ionweave/circuit.hpp"
#include "ionweave/graph.hpp"
#include "ionweave/mapping.hpp"
#include "ionweave/partition.hpp"
#include "ionweave/rng.hpp"
#include "ionweave/sim.hpp"

namespace ionweave {

/// The four pipeline stages under comparison. Each step changes exactly
/// one thing relative to its predecessor:
///   BASE    — one monolithic crossbar, module-level partition, devices
///             filled in natural qubit order;
///   SWITCH  — same pipeline on the split-switch fabric and its faster
///             entanglement calibration;
///   HP      — adds communication-seeded KL sub-partitioning inside each
///             module;
///   HP+SAM  — additionally places sub-partitions by communication score
///             versus port distance.
enum class Variant { Base, Switch, Hp, HpSam };

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::Base: return "BASE";
    case Variant::Switch: return "SWITCH";
    case Variant::Hp: return "HP";
    case Variant::HpSam: return "HP+SAM";
  }
  return "?";
}

inline Variant variant_from_string(const std::string& s) {
  std::string u;
  for (char c : s)
    if (c != '_' && c != '-') u += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u == "BASE") return Variant::Base;
  if (u == "SWITCH") return Variant::Switch;
  if (u == "HP") return Variant::Hp;
  if (u == "HP+SAM" || u == "HPSAM") return Variant::HpSam;
  throw std::invalid_argument("unknown pipeline variant '" + s + "'");
}

inline std::vector<Variant> all_variants() {
  return {Variant::Base, Variant::Switch, Variant::Hp, Variant::HpSam};
}

struct BenchmarkRequest {
  BenchmarkFamily family = BenchmarkFamily::BV;
  int qubit_count = 16;

  std::string label() const {
    return std::string(to_string(family)) + "-" + std::to_string(qubit_count);
  }
};

/// Everything one experiment needs. All randomness fans out from `seed`
/// with fixed labels (benchmark construction, partition initialization,
/// attempt sampling), so a config is a complete reproducibility record.
///
/// The experiment pipeline computes one static mapping per circuit, so its
/// default decay scale is deeper than the LookaheadConfig type default
/// (which suits per-slice callers): with sigma = 8 the partitioner still
/// favors imminent interactions but sees hundreds of future slices before
/// the weights prune away, which a whole-circuit mapping needs.
struct ExperimentConfig {
  ArchitectureSpec arch;  // the switched design; BASE derives its fabric from this
  std::vector<BenchmarkRequest> benchmarks;
  std::vector<Variant> variants = all_variants();
  LookaheadConfig lookahead{.sigma = 8.0};
  int kl_iterations = 8;
  int refine_iterations = 4;
  int restarts = 2;
  uint64_t seed = 1;
  std::string normalize_to = "SWITCH";
  bool sampled_attempts = false;
  bool write_traces = false;
  std::string out_dir;
};

/// One (benchmark × variant-or-port-count) execution.
struct ReportCell {
  std::string benchmark;
  int qubit_count = 0;
  std::string variant;
  bool ok = false;
  std::string error;
  int inter_module_gates = 0;
  ExecutionReport report;
  double normalized_latency = 1.0;
  double normalized_fidelity = 1.0;
};

struct ComparisonReport {
  std::string architecture;
  std::string normalize_to;
  uint64_t seed = 0;
  nlohmann::json metadata;
  std::vector<ReportCell> cells;

  const ReportCell* find(const std::string& benchmark, const std::string& variant) const {
    for (const auto& c : cells)
      if (c.benchmark == benchmark && c.variant == variant) return &c;
    return nullptr;
  }
};

inline void to_json(nlohmann::json& j, const ReportCell& c) {
  j = nlohmann::json{{"benchmark", c.benchmark},
                     {"qubits", c.qubit_count},
                     {"variant", c.variant},
                     {"ok", c.ok},
                     {"error", c.error},
                     {"inter_module_gates", c.inter_module_gates},
                     {"normalized_latency", c.normalized_latency},
                     {"normalized_fidelity", c.normalized_fidelity}};
  if (c.ok) j["report"] = c.report;
}

inline void to_json(nlohmann::json& j, const ComparisonReport& r) {
  j = nlohmann::json{{"architecture", r.architecture},
                     {"normalize_to", r.normalize_to},
                     {"seed", r.seed},
                     {"metadata", r.metadata},
                     {"cells", r.cells}};
}

namespace detail {

/// The BASE fabric: same modules, one crossbar taking every port, and the
/// slower full-crossbar entanglement calibration (2 concurrent attempts;
/// the measured attempt-phase latency when the source design uses one).
inline ArchitectureSpec base_variant_arch(ArchitectureSpec arch) {
  arch.topology = MonolithicSwitch{arch.total_ports()};
  arch.entanglement.concurrency = 2;
  if (arch.entanglement.non_xbar_override >= 0) arch.entanglement.non_xbar_override = 2750.0;
  arch.validate();
  return arch;
}

inline ArchitectureSpec arch_for_variant(const ArchitectureSpec& arch, Variant v) {
  if (v == Variant::Base) return base_variant_arch(arch);
  return arch;
}

inline int comm_qccds_per_module(const ArchitectureSpec& arch) {
  int n = 0;
  for (const auto& q : arch.modules.front().qccds)
    if (q.role == QccdRole::Communication) ++n;
  return std::max(1, n);
}

/// Natural-order sub-partitioning: within each module, qubits ascending,
/// split into j balanced contiguous chunks. Scores still come from the
/// graph so the tree stays usable by any mapper.
inline PartitionTree chunked_tree(const QubitGraph& g, std::vector<std::vector<int>> modules,
                                  int subs_per_module) {
  std::vector<int> module_of(g.node_count(), -1);
  for (size_t m = 0; m < modules.size(); ++m)
    for (int q : modules[m]) module_of[q] = static_cast<int>(m);
  PartitionTree tree;
  for (size_t m = 0; m < modules.size(); ++m) {
    std::sort(modules[m].begin(), modules[m].end());
    auto sizes = balanced_sizes(static_cast<int>(modules[m].size()), subs_per_module);
    ModulePartition mp;
    size_t at = 0;
    for (int s = 0; s < subs_per_module; ++s) {
      SubPartition sp;
      sp.qubits.assign(modules[m].begin() + at, modules[m].begin() + at + sizes[s]);
      at += sizes[s];
      for (int q : sp.qubits)
        for (const auto& [u, w] : g.neighbors(q))
          if (module_of[u] != static_cast<int>(m)) sp.comm_score += w;
      mp.subs.push_back(std::move(sp));
    }
    tree.modules.push_back(std::move(mp));
  }
  return tree;
}

/// Builds the partition tree for one variant. The module-level split is
/// seeded identically everywhere, so variants differ only in the stages
/// they are meant to differ in.
inline PartitionTree build_tree(Variant v, const QubitGraph& g, const ExperimentConfig& cfg,
                                uint64_t partition_seed) {
  const int k = static_cast<int>(cfg.arch.modules.size());
  const int j = static_cast<int>(cfg.arch.modules.front().qccds.size());
  if (v == Variant::Base || v == Variant::Switch) {
    auto modules = partition_k_way(g, k, cfg.kl_iterations, cfg.restarts,
                                   derive_seed(partition_seed, "modules"));
    return chunked_tree(g, std::move(modules), j);
  }
  PartitionConfig pc;
  pc.module_count = k;
  pc.subs_per_module = j;
  pc.kl_iterations = cfg.kl_iterations;
  pc.refine_iterations = cfg.refine_iterations;
  pc.capacity = cfg.arch.modules.front().qccds.front().data_capacity;
  pc.seed_subpartitions = comm_qccds_per_module(cfg.arch);
  pc.comm_seeded = true;
  pc.restarts = cfg.restarts;
  pc.seed = partition_seed;
  return hierarchical_partition(g, pc);
}

inline int count_inter_module_gates(const Circuit& circuit, const PartitionTree& tree) {
  auto module_of = tree.module_of();
  int n = 0;
  for (const auto& g : circuit.gates())
    if (g.is_two_qubit() && module_of[g.q0] != module_of[g.q1]) ++n;
  return n;
}

inline std::string sanitize(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  return s;
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Runs one (benchmark, variant) cell through the full pipeline: generate,
/// slice, weight, partition, map, simulate.
inline ReportCell run_cell(const ExperimentConfig& cfg, const BenchmarkRequest& bench,
                           Variant variant) {
  ReportCell cell;
  cell.benchmark = bench.label();
  cell.qubit_count = bench.qubit_count;
  cell.variant = to_string(variant);
  try {
    Circuit circuit = generate_benchmark(bench.family, bench.qubit_count,
                                         derive_seed(cfg.seed, "bench-" + bench.label()));
    auto slices = time_slice(circuit);
    if (slices.empty()) throw std::runtime_error("benchmark produced an empty circuit");
    QubitGraph graph = build_lookahead_graph(slices, 0, circuit.qubit_count(), cfg.lookahead);

    uint64_t partition_seed = derive_seed(cfg.seed, "partition-" + bench.label());
    PartitionTree tree = detail::build_tree(variant, graph, cfg, partition_seed);
    ArchitectureSpec arch = detail::arch_for_variant(cfg.arch, variant);
    MappingAssignment mapping = (variant == Variant::HpSam) ? switch_aware_map(tree, arch)
                                                            : natural_order_map(tree, arch);
    cell.inter_module_gates = detail::count_inter_module_gates(circuit, tree);

    SimOptions opts;
    opts.sampled_attempts = cfg.sampled_attempts;
    opts.seed = derive_seed(cfg.seed, "sim-" + bench.label() + "-" + cell.variant);
    cell.report = simulate(circuit, mapping, arch, opts);
    cell.ok = true;
  } catch (const std::exception& e) {
    cell.ok = false;
    cell.error = e.what();
  }
  return cell;
}

namespace detail {

inline void normalize_cells(ComparisonReport& report) {
  for (auto& cell : report.cells) {
    const ReportCell* base = report.find(cell.benchmark, report.normalize_to);
    if (!cell.ok || !base || !base->ok || base->report.total_latency <= 0 ||
        base->report.fidelity <= 0) {
      cell.normalized_latency = 1.0;
      cell.normalized_fidelity = 1.0;
      continue;
    }
    cell.normalized_latency = cell.report.total_latency / base->report.total_latency;
    cell.normalized_fidelity = cell.report.fidelity / base->report.fidelity;
  }
}

inline void maybe_write_trace(const ExperimentConfig& cfg, const ReportCell& cell) {
  if (!cfg.write_traces || cfg.out_dir.empty() || !cell.ok) return;
  std::filesystem::create_directories(cfg.out_dir);
  std::string name = "trace_" + sanitize(cell.benchmark) + "_" + sanitize(cell.variant) + ".txt";
  std::ofstream os(std::filesystem::path(cfg.out_dir) / name);
  write_trace(os, cell.report.ops);
}

}  // namespace detail

/// Executes every (benchmark × variant) cell, concurrently where the
/// platform allows, and merges results in (benchmark, variant) order so
/// the report is identical no matter how execution interleaves.
inline ComparisonReport run_experiment(const ExperimentConfig& cfg) {
  cfg.arch.validate();
  ComparisonReport report;
  report.architecture = cfg.arch.name;
  report.normalize_to = cfg.normalize_to;
  // The normalization base must be a variant that actually appears in this
  // report; if the configured one was not requested, fall back to the first.
  if (!cfg.variants.empty()) {
    bool present = false;
    for (Variant v : cfg.variants) present = present || to_string(v) == cfg.normalize_to;
    if (!present) report.normalize_to = to_string(cfg.variants.front());
  }
  report.seed = cfg.seed;
  report.metadata = {
      {"variants", [&] {
         std::vector<std::string> v;
         for (auto var : cfg.variants) v.push_back(to_string(var));
         return v;
       }()},
      {"mapping_cadence",
       "all variants use one static pre-execution mapping; the reference pipeline is run at the "
       "same cadence so stage effects stay comparable"},
      {"sampled_attempts", cfg.sampled_attempts}};

  std::vector<std::future<ReportCell>> futures;
  for (const auto& bench : cfg.benchmarks)
    for (Variant v : cfg.variants)
      futures.push_back(std::async(std::launch::async,
                                   [&cfg, bench, v] { return run_cell(cfg, bench, v); }));
  for (auto& f : futures) report.cells.push_back(f.get());

  detail::normalize_cells(report);
  for (const auto& cell : report.cells) detail::maybe_write_trace(cfg, cell);
  return report;
}

/// Entanglement process used by the port study: the fabric is rewired so
/// each module contributes one port to each of `ports` tiny switches, and
/// the number of concurrent attempts scales with the port budget (8 ports
/// feed one attempt, never below 1). Latency comes from the geometric
/// attempt model, so shrinking the budget is visible end to end.
inline ArchitectureSpec ports_variant_arch(ArchitectureSpec arch, int ports) {
  if (ports < 2) throw std::invalid_argument("port sweep needs at least 2 ports per module");
  for (auto& m : arch.modules) {
    if (ports > m.ports)
      throw std::invalid_argument("port count " + std::to_string(ports) +
                                  " exceeds the module budget of " + std::to_string(m.ports));
    m.ports = ports;
  }
  arch.topology = MultiSwitch{ports, static_cast<int>(arch.modules.size())};
  arch.entanglement.concurrency = std::max(1, ports / 8);
  arch.entanglement.non_xbar_override = -1.0;
  arch.validate();
  return arch;
}

/// One cell per (benchmark × port count), pipeline fixed to HP+SAM,
/// normalized to the largest requested port count.
inline ComparisonReport sweep_ports(const ExperimentConfig& cfg, std::vector<int> port_counts) {
  if (port_counts.empty()) throw std::invalid_argument("port sweep needs at least one count");
  int largest = *std::max_element(port_counts.begin(), port_counts.end());

  ComparisonReport report;
  report.architecture = cfg.arch.name;
  report.normalize_to = "ports" + std::to_string(largest);
  report.seed = cfg.seed;
  report.metadata = {{"port_counts", port_counts},
                     {"pipeline", "HP+SAM"},
                     {"attempt_model", "geometric"}};

  std::vector<std::future<ReportCell>> futures;
  for (const auto& bench : cfg.benchmarks)
    for (int ports : port_counts) {
      ExperimentConfig cell_cfg = cfg;
      cell_cfg.arch = ports_variant_arch(cfg.arch, ports);
      futures.push_back(std::async(std::launch::async, [cell_cfg, bench, ports] {
        ReportCell cell = run_cell(cell_cfg, bench, Variant::HpSam);
        cell.variant = "ports" + std::to_string(ports);
        return cell;
      }));
    }
  for (auto& f : futures) report.cells.push_back(f.get());
  detail::normalize_cells(report);
  for (const auto& cell : report.cells) detail::maybe_write_trace(cfg, cell);
  return report;
}

// --- plot-data emission ---

namespace detail {

inline std::vector<std::string> report_benchmarks(const ComparisonReport& r) {
  std::vector<std::string> out;
  for (const auto& c : r.cells)
    if (std::find(out.begin(), out.end(), c.benchmark) == out.end()) out.push_back(c.benchmark);
  return out;
}

inline std::vector<std::string> report_variants(const ComparisonReport& r, bool ports) {
  std::vector<std::string> out;
  for (const auto& c : r.cells) {
    bool is_ports = c.variant.rfind("ports", 0) == 0;
    if (is_ports != ports) continue;
    if (std::find(out.begin(), out.end(), c.variant) == out.end()) out.push_back(c.variant);
  }
  return out;
}

// One row per benchmark; per variant, a raw column extracted by `value`
// and a normalized column extracted by `norm`.
template <typename ValueFn, typename NormFn>
void write_wide_csv(const std::filesystem::path& path, const ComparisonReport& r,
                    const std::vector<std::string>& variants, const char* value_name,
                    ValueFn value, const char* norm_name, NormFn norm) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "benchmark,qubits";
  for (const auto& v : variants) os << ',' << v << '_' << value_name << ',' << v << '_' << norm_name;
  os << "\n";
  for (const auto& bench : report_benchmarks(r)) {
    bool any = false;
    std::ostringstream row;
    for (const auto& v : variants) {
      const ReportCell* cell = r.find(bench, v);
      if (cell && cell->ok) {
        any = true;
        row << ',' << format_double(value(*cell)) << ',' << format_double(norm(*cell));
      } else {
        row << ",,";
      }
    }
    if (!any) continue;
    const ReportCell* first = nullptr;
    for (const auto& c : r.cells)
      if (c.benchmark == bench) {
        first = &c;
        break;
      }
    os << bench << ',' << (first ? first->qubit_count : 0) << row.str() << "\n";
  }
}

}  // namespace detail

/// Writes `report.json` plus the four CSV tables next to it: performance
/// and fidelity (raw + normalized per variant), the stage-ablation table
/// (communication counters per variant), and the port-sweep table. Tables
/// whose cells are absent from this report still appear with headers so
/// consumers see a stable file set.
inline void emit_plot_data(const ComparisonReport& report, const std::string& out_dir) {
  if (report.cells.empty()) throw std::invalid_argument("refusing to plot an empty report");
  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);

  {
    std::ofstream os(dir / "report.json");
    if (!os) throw std::runtime_error("cannot write " + (dir / "report.json").string());
    nlohmann::json j = report;
    os << j.dump(2) << "\n";
  }

  auto variants = detail::report_variants(report, false);
  auto ports = detail::report_variants(report, true);

  detail::write_wide_csv(
      dir / "perf.csv", report, variants, "latency_us",
      [](const ReportCell& c) { return c.report.total_latency; }, "norm",
      [](const ReportCell& c) { return c.normalized_latency; });
  detail::write_wide_csv(
      dir / "fidelity.csv", report, variants, "fidelity",
      [](const ReportCell& c) { return c.report.fidelity; }, "norm",
      [](const ReportCell& c) { return c.normalized_fidelity; });
  detail::write_wide_csv(
      dir / "ablation.csv", report, variants, "crossings",
      [](const ReportCell& c) { return static_cast<double>(c.report.matter_link_crossings); },
      "photonic_share", [](const ReportCell& c) { return c.report.photonic_share; });
  detail::write_wide_csv(
      dir / "ports.csv", report, ports, "latency_us",
      [](const ReportCell& c) { return c.report.total_latency; }, "norm",
      [](const ReportCell& c) { return c.normalized_latency; });
}

// --- config file ---

inline void from_json(const nlohmann::json& j, BenchmarkRequest& b) {
  b.family = benchmark_from_string(j.at("family").get<std::string>());
  j.at("qubits").get_to(b.qubit_count);
}

inline void to_json(nlohmann::json& j, const BenchmarkRequest& b) {
  j = nlohmann::json{{"family", to_string(b.family)}, {"qubits", b.qubit_count}};
}

/// Loads an experiment config. `arch` may be a preset name ("baseline",
/// "titan", "desk") or an inline architecture object.
inline ExperimentConfig load_experiment_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  if (j.contains("arch")) {
    if (j.at("arch").is_string())
      cfg.arch = preset(j.at("arch").get<std::string>());
    else
      cfg.arch = j.at("arch").get<ArchitectureSpec>();
  } else {
    cfg.arch = desk_preset();
  }
  if (j.contains("benchmarks")) j.at("benchmarks").get_to(cfg.benchmarks);
  if (j.contains("variants")) {
    cfg.variants.clear();
    for (const auto& v : j.at("variants")) cfg.variants.push_back(variant_from_string(v));
  }
  if (j.contains("lookahead")) {
    const auto& l = j.at("lookahead");
    if (l.contains("sigma")) l.at("sigma").get_to(cfg.lookahead.sigma);
    if (l.contains("big_weight")) l.at("big_weight").get_to(cfg.lookahead.big_weight);
  }
  if (j.contains("partition")) {
    const auto& p = j.at("partition");
    if (p.contains("kl_iterations")) p.at("kl_iterations").get_to(cfg.kl_iterations);
    if (p.contains("refine_iterations")) p.at("refine_iterations").get_to(cfg.refine_iterations);
    if (p.contains("restarts")) p.at("restarts").get_to(cfg.restarts);
  }
  if (j.contains("seed")) j.at("seed").get_to(cfg.seed);
  if (j.contains("normalize_to")) j.at("normalize_to").get_to(cfg.normalize_to);
  if (j.contains("sampled_attempts")) j.at("sampled_attempts").get_to(cfg.sampled_attempts);
  if (j.contains("write_traces")) j.at("write_traces").get_to(cfg.write_traces);
  if (j.contains("out_dir")) j.at("out_dir").get_to(cfg.out_dir);
  cfg.lookahead.validate();
  cfg.arch.validate();
  return cfg;
}

}  // namespace ionweave
