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
//
// Command-line front end: runs pipeline comparisons, port sweeps, and
// stage ablations over the bundled presets or user-supplied configs, and
// writes the report/CSV bundle consumed by plotting scripts.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ionweave/harness.hpp"

namespace {

using ionweave::ComparisonReport;
using ionweave::ExperimentConfig;

ionweave::ArchitectureSpec resolve_arch(const std::string& arg) {
  if (arg == "baseline" || arg == "titan" || arg == "desk") return ionweave::preset(arg);
  std::ifstream is(arg);
  if (!is) throw std::runtime_error("cannot open architecture file '" + arg + "'");
  nlohmann::json j;
  is >> j;
  return j.get<ionweave::ArchitectureSpec>();
}

std::vector<ionweave::BenchmarkRequest> parse_benchmarks(const std::vector<std::string>& args) {
  std::vector<ionweave::BenchmarkRequest> out;
  for (const auto& arg : args) {
    std::istringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      auto colon = item.find(':');
      if (colon == std::string::npos)
        throw std::runtime_error("benchmark '" + item + "' must look like FAMILY:QUBITS");
      ionweave::BenchmarkRequest req;
      req.family = ionweave::benchmark_from_string(item.substr(0, colon));
      req.qubit_count = std::stoi(item.substr(colon + 1));
      out.push_back(req);
    }
  }
  return out;
}

// Flags shared by the experiment subcommands, wired into one CLI11 group.
struct CommonFlags {
  std::string config_path;
  std::string arch = "";
  std::vector<std::string> benches;
  std::vector<std::string> variants;
  uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
  bool trace = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config file (JSON)");
    cmd->add_option("--arch", arch, "architecture preset (baseline|titan|desk) or file");
    cmd->add_option("--bench", benches, "benchmarks as FAMILY:QUBITS (repeatable, comma lists ok)");
    cmd->add_option("--variant", variants, "pipeline variants to run (repeatable)");
    cmd->add_option("--seed", seed, "root seed for all derived randomness")
        ->each([this](const std::string&) { seed_set = true; });
    cmd->add_option("--out", out_dir, "output directory for report.json and CSV tables");
    cmd->add_flag("--trace", trace, "write a per-cell physical-op trace next to the report");
  }

  ExperimentConfig build() const {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw std::runtime_error("cannot open config file '" + config_path + "'");
      nlohmann::json j;
      is >> j;
      cfg = ionweave::load_experiment_config(j);
    } else {
      cfg.arch = ionweave::desk_preset();
    }
    if (!arch.empty()) cfg.arch = resolve_arch(arch);
    if (!benches.empty()) cfg.benchmarks = parse_benchmarks(benches);
    if (!variants.empty()) {
      cfg.variants.clear();
      for (const auto& v : variants) cfg.variants.push_back(ionweave::variant_from_string(v));
    }
    if (seed_set) cfg.seed = seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (trace) cfg.write_traces = true;
    return cfg;
  }
};

void print_report(const ComparisonReport& report) {
  std::printf("%-10s %-10s %14s %10s %10s %9s %8s\n", "benchmark", "variant", "latency_us",
              "norm", "fidelity", "crossings", "entangle");
  for (const auto& c : report.cells) {
    if (!c.ok) {
      std::printf("%-10s %-10s  error: %s\n", c.benchmark.c_str(), c.variant.c_str(),
                  c.error.c_str());
      continue;
    }
    std::printf("%-10s %-10s %14.1f %10.4f %10.6f %9d %8d\n", c.benchmark.c_str(),
                c.variant.c_str(), c.report.total_latency, c.normalized_latency,
                c.report.fidelity, c.report.matter_link_crossings, c.report.entanglement_count);
  }
  std::printf("(normalized to %s)\n", report.normalize_to.c_str());
}

void print_ablation(const ComparisonReport& report) {
  std::printf("\nstage-to-stage change (latency, matter-link crossings):\n");
  const char* chain[] = {"BASE", "SWITCH", "HP", "HP+SAM"};
  for (const auto& bench : [&] {
         std::vector<std::string> names;
         for (const auto& c : report.cells)
           if (std::find(names.begin(), names.end(), c.benchmark) == names.end())
             names.push_back(c.benchmark);
         return names;
       }()) {
    std::printf("  %s:\n", bench.c_str());
    for (int i = 1; i < 4; ++i) {
      const auto* prev = report.find(bench, chain[i - 1]);
      const auto* cur = report.find(bench, chain[i]);
      if (!prev || !cur || !prev->ok || !cur->ok) continue;
      double dl = 100.0 * (cur->report.total_latency - prev->report.total_latency) /
                  prev->report.total_latency;
      int dc = cur->report.matter_link_crossings - prev->report.matter_link_crossings;
      std::printf("    %-7s -> %-7s  latency %+7.2f%%   crossings %+d\n", chain[i - 1], chain[i],
                  dl, dc);
    }
  }
}

void write_outputs(const ComparisonReport& report, const std::string& out_dir) {
  if (out_dir.empty()) return;
  if (report.cells.empty()) {
    // Nothing to tabulate; still leave a well-formed (empty) report behind.
    std::filesystem::create_directories(out_dir);
    std::ofstream os(std::filesystem::path(out_dir) / "report.json");
    nlohmann::json j = report;
    os << j.dump(2) << "\n";
    return;
  }
  ionweave::emit_plot_data(report, out_dir);
}

int fail(const std::exception& e) {
  nlohmann::json j{{"error", e.what()}};
  std::cerr << j.dump() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compiler and latency/fidelity simulator for switched trapped-ion clusters"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, ablate_flags;
  std::vector<int> port_counts = {64, 48, 32, 16};
  std::string validate_path;

  auto* run_cmd = app.add_subcommand("run", "run a benchmark x variant comparison");
  run_flags.attach(run_cmd);
  auto* sweep_cmd = app.add_subcommand("sweep-ports", "study per-module photonic port budgets");
  sweep_flags.attach(sweep_cmd);
  sweep_cmd->add_option("--ports", port_counts, "port counts to sweep (repeatable or comma list)")
      ->delimiter(',');
  auto* ablate_cmd =
      app.add_subcommand("ablate", "run the full BASE/SWITCH/HP/HP+SAM chain and show deltas");
  ablate_flags.attach(ablate_cmd);
  auto* validate_cmd = app.add_subcommand("validate-config", "parse and check a config file");
  validate_cmd->add_option("config", validate_path, "experiment config file (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed() || ablate_cmd->parsed()) {
      bool ablate = ablate_cmd->parsed();
      ExperimentConfig cfg = (ablate ? ablate_flags : run_flags).build();
      if (ablate) cfg.variants = ionweave::all_variants();
      ComparisonReport report = ionweave::run_experiment(cfg);
      print_report(report);
      if (ablate) print_ablation(report);
      write_outputs(report, cfg.out_dir);
    } else if (sweep_cmd->parsed()) {
      ExperimentConfig cfg = sweep_flags.build();
      ComparisonReport report = ionweave::sweep_ports(cfg, port_counts);
      print_report(report);
      write_outputs(report, cfg.out_dir);
    } else if (validate_cmd->parsed()) {
      std::ifstream is(validate_path);
      if (!is) throw std::runtime_error("cannot open config file '" + validate_path + "'");
      nlohmann::json j;
      is >> j;
      ExperimentConfig cfg = ionweave::load_experiment_config(j);
      std::printf("config ok: arch=%s, %zu benchmark(s), %zu variant(s), seed=%llu\n",
                  cfg.arch.name.c_str(), cfg.benchmarks.size(), cfg.variants.size(),
                  static_cast<unsigned long long>(cfg.seed));
    }
  } catch (const std::exception& e) {
    return fail(e);
  }
  return 0;
}
