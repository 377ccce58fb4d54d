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

#include <catch_amalgamated.hpp>

#include <cmath>

#include <nlohmann/json.hpp>

#include "ionweave/arch.hpp"

using namespace ionweave;

TEST_CASE("crossbar latency hits the anchors exactly") {
  CalibrationTable t;
  CHECK(xbar_latency(32, t) == 1100.0);
  CHECK(xbar_latency(256, t) == 5230.0);
}

TEST_CASE("crossbar latency interpolates log-linearly between anchors") {
  CalibrationTable t;
  // Independent recomputation of the line through (ln 32, 1100) and
  // (ln 256, 5230).
  double slope = (5230.0 - 1100.0) / (std::log(256.0) - std::log(32.0));
  auto line = [&](int p) { return 1100.0 + slope * (std::log(double(p)) - std::log(32.0)); };
  CHECK(xbar_latency(64, t) == Catch::Approx(line(64)).epsilon(1e-12));
  CHECK(xbar_latency(48, t) == Catch::Approx(line(48)).epsilon(1e-12));
  CHECK(xbar_latency(64, t) == Catch::Approx(2476.666666666666).epsilon(1e-12));
  // Beyond the last anchor the same line extends.
  CHECK(xbar_latency(512, t) == Catch::Approx(line(512)).epsilon(1e-12));
}

TEST_CASE("crossbar latency scales proportionally below the smallest anchor") {
  CalibrationTable t;
  CHECK(xbar_latency(16, t) == Catch::Approx(1100.0 * 16 / 32).epsilon(1e-12));
  CHECK(xbar_latency(4, t) == Catch::Approx(137.5).epsilon(1e-12));
  CHECK_THROWS_AS(xbar_latency(1, t), std::invalid_argument);
}

TEST_CASE("expected attempt rounds") {
  CHECK(expected_rounds(1, 0.1) == Catch::Approx(10.0).epsilon(1e-12));
  CHECK(expected_rounds(2, 0.1) == Catch::Approx(1.0 / (1.0 - 0.81)).epsilon(1e-12));
  CHECK(expected_rounds(8, 0.5) == Catch::Approx(1.0 / (1.0 - std::pow(0.5, 8))).epsilon(1e-12));
  CHECK(expected_rounds(3, 1.0) == 1.0);
  CHECK_THROWS_AS(expected_rounds(0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(expected_rounds(1, 0.0), std::invalid_argument);
}

TEST_CASE("attempt-phase latency: geometric model and calibrated override") {
  CalibrationTable t;
  EntanglementModel m;
  m.concurrency = 2;
  m.success_probability = 0.1;
  m.non_xbar_override = -1.0;
  CHECK(non_xbar_latency(m, t) ==
        Catch::Approx(100.0 + 500.0 * expected_rounds(2, 0.1)).epsilon(1e-12));
  m.non_xbar_override = 2750.0;
  CHECK(non_xbar_latency(m, t) == 2750.0);
  // The geometric model at the same concurrency sits within 1% of the
  // calibrated figure; the override exists for exactness, not correction.
  m.non_xbar_override = -1.0;
  CHECK(std::abs(non_xbar_latency(m, t) - 2750.0) / 2750.0 < 0.01);
}

TEST_CASE("per-entanglement latency of the shipped presets") {
  CHECK(entanglement_latency(baseline_preset()) == 7980.0);
  CHECK(entanglement_latency(titan_preset()) == 1865.0);
  // 76.6% per-entanglement reduction from the big-crossbar design.
  CHECK(1.0 - 1865.0 / 7980.0 == Catch::Approx(0.766).margin(5e-4));
}

TEST_CASE("distillation fidelity and raw-pair cost") {
  EntanglementModel m;  // calibrated mode, d = 3
  auto r = distilled_fidelity(m);
  CHECK(r.fidelity == 0.993);
  CHECK(r.raw_pairs == 8);

  m.distill_iterations = 0;
  CHECK(distilled_fidelity(m).fidelity == 0.94);
  CHECK(distilled_fidelity(m).raw_pairs == 1);

  m.analytic_distillation = true;
  m.distill_iterations = 1;
  // Oracle: one application of F' = F^2 / (F^2 + (1-F)^2) from 0.94.
  double f1 = 0.94 * 0.94 / (0.94 * 0.94 + 0.06 * 0.06);
  CHECK(distilled_fidelity(m).fidelity == Catch::Approx(f1).epsilon(1e-15));
  m.distill_iterations = 3;
  double f = 0.94;
  for (int i = 0; i < 3; ++i) f = f * f / (f * f + (1 - f) * (1 - f));
  CHECK(distilled_fidelity(m).fidelity == Catch::Approx(f).epsilon(1e-15));
  CHECK(distilled_fidelity(m).fidelity > 0.9999999);
  CHECK(distilled_fidelity(m).raw_pairs == 8);
}

TEST_CASE("preset shapes match their documentation") {
  auto base = baseline_preset();
  CHECK(base.modules.size() == 4);
  CHECK(base.modules[0].qccds.size() == 6);
  CHECK(base.modules[0].data_capacity() == 6 * 32);
  CHECK(base.total_ports() == 256);
  CHECK(base.switch_port_count() == 256);
  CHECK(base.concurrent_switch_paths() == 0);  // non-blocking crossbar

  auto titan = titan_preset();
  CHECK(titan.switch_port_count() == 32);
  CHECK(titan.concurrent_switch_paths() == 8);

  auto desk = desk_preset();
  CHECK(desk.modules.size() == 4);
  CHECK(desk.modules[0].qccds.size() == 4);
  CHECK(desk.modules[0].data_capacity() == 32);
  int comm = 0;
  for (const auto& q : desk.modules[0].qccds)
    if (q.role == QccdRole::Communication) ++comm;
  CHECK(comm == 2);

  CHECK(preset("baseline").name == "baseline");
  CHECK(preset("titan").name == "titan");
  CHECK(preset("desk").name == "desk");
  CHECK_THROWS_AS(preset("galaxy"), std::invalid_argument);
}

TEST_CASE("port distances fall with proximity to the communication row") {
  auto m = desk_preset().modules[0];  // 2x2 grid, row 1 = communication
  auto d = m.port_distances();
  REQUIRE(d.size() == 4);
  CHECK(d[2] == 0);
  CHECK(d[3] == 0);
  CHECK(d[0] == 1);
  CHECK(d[1] == 1);
}

TEST_CASE("architecture serialization round-trips") {
  for (const auto* name : {"baseline", "titan", "desk"}) {
    auto a = preset(name);
    nlohmann::json j = a;
    auto b = j.get<ArchitectureSpec>();
    CHECK(b.name == a.name);
    CHECK(b.modules.size() == a.modules.size());
    CHECK(b.total_ports() == a.total_ports());
    CHECK(b.switch_port_count() == a.switch_port_count());
    CHECK(b.entanglement.concurrency == a.entanglement.concurrency);
    CHECK(b.entanglement.non_xbar_override == a.entanglement.non_xbar_override);
    CHECK(b.table.gate2_time == a.table.gate2_time);
    CHECK(entanglement_latency(b) == entanglement_latency(a));
    CHECK(b.modules[0].links == a.modules[0].links);
  }
}

TEST_CASE("validation rejects inconsistent fabrics") {
  auto a = titan_preset();
  a.topology = MultiSwitch{8, 16};  // 128 switch ports vs 256 module ports
  CHECK_THROWS_AS(a.validate(), std::invalid_argument);
  a = baseline_preset();
  a.topology = MonolithicSwitch{128};
  CHECK_THROWS_AS(a.validate(), std::invalid_argument);
  a = baseline_preset();
  a.table.gate2_infidelity = 1.5;
  CHECK_THROWS_AS(a.validate(), std::invalid_argument);
  a = baseline_preset();
  a.table.xbar_anchors = {{256, 5230.0}, {32, 1100.0}};  // unsorted
  CHECK_THROWS_AS(a.validate(), std::invalid_argument);
  a = baseline_preset();
  a.modules.clear();
  CHECK_THROWS_AS(a.validate(), std::invalid_argument);
}
