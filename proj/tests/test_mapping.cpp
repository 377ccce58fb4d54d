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

#include <sstream>

#include "ionweave/arch.hpp"
#include "ionweave/mapping.hpp"
#include "ionweave/partition.hpp"

using namespace ionweave;

namespace {

// One desk module holds 4 devices of 8 slots; build a 32-qubit tree with
// 4 subs of 8 per module, with chosen per-sub communication scores.
PartitionTree scored_tree(const std::vector<std::vector<double>>& scores_per_module) {
  PartitionTree tree;
  int q = 0;
  for (const auto& scores : scores_per_module) {
    ModulePartition mp;
    for (double score : scores) {
      SubPartition sp;
      for (int i = 0; i < 8; ++i) sp.qubits.push_back(q++);
      sp.comm_score = score;
      mp.subs.push_back(std::move(sp));
    }
    tree.modules.push_back(std::move(mp));
  }
  return tree;
}

}  // namespace

TEST_CASE("natural order fills devices in index order") {
  auto arch = desk_preset();
  auto tree = scored_tree({{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}});
  auto map = natural_order_map(tree, arch);
  CHECK(map.qubit_count() == 128);
  // Qubit 0 is the first qubit of module 0's first sub: device 0, slot 0.
  CHECK(map[0] == QubitPlacement{0, 0, 0});
  CHECK(map[7] == QubitPlacement{0, 0, 7});
  CHECK(map[8] == QubitPlacement{0, 1, 0});
  CHECK(map[31] == QubitPlacement{0, 3, 7});
  CHECK(map[32] == QubitPlacement{1, 0, 0});
  CHECK(map[127] == QubitPlacement{3, 3, 7});
}

TEST_CASE("switch-aware placement pairs heavy talkers with port-near devices") {
  auto arch = desk_preset();  // devices 2 and 3 are the communication row
  auto tree = scored_tree({{5.0, 9.0, 1.0, 0.0},
                           {0.0, 0.0, 0.0, 0.0},
                           {1.0, 1.0, 1.0, 1.0},
                           {0.0, 3.0, 2.0, 1.0}});
  auto map = switch_aware_map(tree, arch);

  // Module 0: score ranking (sub1=9, sub0=5, sub2=1, sub3=0); distance
  // ranking (device 2, 3 at the ports, then 0, 1). So sub1 -> device 2,
  // sub0 -> device 3, sub2 -> device 0, sub3 -> device 1.
  CHECK(map[8] == QubitPlacement{0, 2, 0});   // first qubit of sub1
  CHECK(map[0] == QubitPlacement{0, 3, 0});   // first qubit of sub0
  CHECK(map[16] == QubitPlacement{0, 0, 0});  // first qubit of sub2
  CHECK(map[24] == QubitPlacement{0, 1, 0});  // first qubit of sub3

  // Module 1: all scores tie at zero; sub order and device-distance order
  // decide, so sub0 -> device 2, sub1 -> device 3, sub2 -> device 0.
  CHECK(map[32] == QubitPlacement{1, 2, 0});
  CHECK(map[40] == QubitPlacement{1, 3, 0});
  CHECK(map[48] == QubitPlacement{1, 0, 0});

  // Module 2: uniform nonzero scores behave like the all-tie case.
  CHECK(map[64] == QubitPlacement{2, 2, 0});

  // Module 3: ranking 1 (3.0), 2 (2.0), 3 (1.0), 0 (0.0).
  CHECK(map[104] == QubitPlacement{3, 2, 0});  // sub1
  CHECK(map[112] == QubitPlacement{3, 3, 0});  // sub2
  CHECK(map[120] == QubitPlacement{3, 0, 0});  // sub3
  CHECK(map[96] == QubitPlacement{3, 1, 0});   // sub0
}

TEST_CASE("uniform score rescaling never changes the placement") {
  auto arch = desk_preset();
  auto tree = scored_tree({{5.0, 9.0, 1.0, 0.5},
                           {4.0, 2.0, 8.0, 6.0},
                           {1.0, 1.5, 0.25, 2.0},
                           {3.0, 3.5, 0.5, 1.0}});
  auto a = switch_aware_map(tree, arch);
  for (auto& m : tree.modules)
    for (auto& s : m.subs) s.comm_score *= 1000.0;
  auto b = switch_aware_map(tree, arch);
  CHECK(a.placements() == b.placements());
}

TEST_CASE("placement validation catches structural errors") {
  auto arch = desk_preset();
  std::vector<QubitPlacement> v(2);
  v[0] = {0, 0, 0};
  v[1] = {0, 0, 0};  // duplicate slot
  CHECK_THROWS_AS(MappingAssignment(v).validate(arch), std::invalid_argument);
  v[1] = {0, 0, 8};  // slot beyond the 8-slot device
  CHECK_THROWS_AS(MappingAssignment(v).validate(arch), std::invalid_argument);
  v[1] = {9, 0, 0};
  CHECK_THROWS_AS(MappingAssignment(v).validate(arch), std::invalid_argument);
  v[1] = {0, 1, 0};
  CHECK_NOTHROW(MappingAssignment(v).validate(arch));
  CHECK(MappingAssignment(v).occupant(0, 1, 0) == 1);
  CHECK(MappingAssignment(v).occupant(0, 1, 1) == -1);
}

TEST_CASE("oversized sub-partitions are rejected at placement") {
  auto arch = desk_preset();
  PartitionTree tree;
  tree.modules.resize(4);
  SubPartition big;
  for (int i = 0; i < 9; ++i) big.qubits.push_back(i);  // 9 > 8-slot device
  tree.modules[0].subs.push_back(big);
  CHECK_THROWS_WITH(natural_order_map(tree, arch),
                    Catch::Matchers::ContainsSubstring("capacity"));
}

TEST_CASE("mapping text round trip") {
  auto arch = desk_preset();
  auto tree = scored_tree({{1, 2, 3, 4}, {4, 3, 2, 1}, {0, 0, 0, 0}, {2, 2, 1, 1}});
  auto map = switch_aware_map(tree, arch);
  std::stringstream ss;
  write_mapping(ss, map);
  auto back = read_mapping(ss);
  CHECK(back.placements() == map.placements());
  std::istringstream bad("qubits 2\n0 0 0 0\n");
  CHECK_THROWS_WITH(read_mapping(bad), Catch::Matchers::ContainsSubstring("not all qubits"));
}
