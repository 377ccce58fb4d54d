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
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ionweave/arch.hpp"
#include "ionweave/partition.hpp"

namespace ionweave {

/// Static placement of every logical qubit on a physical data slot.
/// Slots are numbered 0..data_capacity-1 inside each device; the trap a
/// slot belongs to is slot / slots_per_trap.
struct QubitPlacement {
  int module = -1;
  int qccd = -1;
  int slot = -1;
  bool operator==(const QubitPlacement& o) const {
    return module == o.module && qccd == o.qccd && slot == o.slot;
  }
};

class MappingAssignment {
 public:
  MappingAssignment() = default;
  explicit MappingAssignment(std::vector<QubitPlacement> placements)
      : placements_(std::move(placements)) {}

  int qubit_count() const { return static_cast<int>(placements_.size()); }
  const QubitPlacement& operator[](int q) const { return placements_.at(q); }
  const std::vector<QubitPlacement>& placements() const { return placements_; }

  /// Logical qubit at (module, qccd, slot), or -1.
  int occupant(int module, int qccd, int slot) const {
    for (int q = 0; q < qubit_count(); ++q) {
      const auto& p = placements_[q];
      if (p.module == module && p.qccd == qccd && p.slot == slot) return q;
    }
    return -1;
  }

  void validate(const ArchitectureSpec& arch) const {
    std::map<std::tuple<int, int, int>, int> seen;
    for (int q = 0; q < qubit_count(); ++q) {
      const auto& p = placements_[q];
      if (p.module < 0 || p.module >= static_cast<int>(arch.modules.size()))
        throw std::invalid_argument("mapping places a qubit on a nonexistent module");
      const auto& mod = arch.modules[p.module];
      if (p.qccd < 0 || p.qccd >= static_cast<int>(mod.qccds.size()))
        throw std::invalid_argument("mapping places a qubit on a nonexistent device");
      if (p.slot < 0 || p.slot >= mod.qccds[p.qccd].data_capacity)
        throw std::invalid_argument("mapping places a qubit on a nonexistent slot");
      auto [it, fresh] = seen.insert({{p.module, p.qccd, p.slot}, q});
      if (!fresh)
        throw std::invalid_argument("mapping places two qubits on one slot");
    }
  }

 private:
  std::vector<QubitPlacement> placements_;
};

namespace detail {

inline void place_sub(const std::vector<int>& qubits, int module, int qccd,
                      const ArchitectureSpec& arch, std::vector<QubitPlacement>& out) {
  const auto& spec = arch.modules[module].qccds[qccd];
  if (static_cast<int>(qubits.size()) > spec.data_capacity)
    throw std::invalid_argument("sub-partition of " + std::to_string(qubits.size()) +
                                " qubits exceeds device data capacity " +
                                std::to_string(spec.data_capacity));
  std::vector<int> ordered = qubits;
  std::sort(ordered.begin(), ordered.end());
  int slot = 0;
  for (int q : ordered) out[q] = QubitPlacement{module, qccd, slot++};
}

}  // namespace detail

/// Natural-order placement: sub-partition s of module m lands on device s,
/// qubits fill slots in ascending index order. This is the graph-blind
/// placement the switch-aware mapper is compared against.
inline MappingAssignment natural_order_map(const PartitionTree& tree,
                                           const ArchitectureSpec& arch) {
  if (tree.modules.size() != arch.modules.size())
    throw std::invalid_argument("partition tree and architecture disagree on module count");
  std::vector<QubitPlacement> out(tree.qubit_count());
  for (size_t m = 0; m < tree.modules.size(); ++m) {
    const auto& subs = tree.modules[m].subs;
    if (subs.size() > arch.modules[m].qccds.size())
      throw std::invalid_argument("more sub-partitions than devices in module " +
                                  std::to_string(m));
    for (size_t s = 0; s < subs.size(); ++s)
      detail::place_sub(subs[s].qubits, static_cast<int>(m), static_cast<int>(s), arch, out);
  }
  MappingAssignment mapping(std::move(out));
  mapping.validate(arch);
  return mapping;
}

/// Communication-aware placement: inside each module, sub-partitions are
/// ranked by communication score (descending, lowest sub index on ties)
/// and devices by hop distance to the photonic ports (ascending, lowest
/// device index on ties); the two rankings are zipped. The heaviest-
/// communicating sub-partition therefore always occupies the port-nearest
/// communication device, and a uniform rescaling of all scores changes
/// nothing.
inline MappingAssignment switch_aware_map(const PartitionTree& tree,
                                          const ArchitectureSpec& arch) {
  if (tree.modules.size() != arch.modules.size())
    throw std::invalid_argument("partition tree and architecture disagree on module count");
  std::vector<QubitPlacement> out(tree.qubit_count());
  for (size_t m = 0; m < tree.modules.size(); ++m) {
    const auto& subs = tree.modules[m].subs;
    const auto& mod = arch.modules[m];
    if (subs.size() > mod.qccds.size())
      throw std::invalid_argument("more sub-partitions than devices in module " +
                                  std::to_string(m));

    std::vector<int> sub_order(subs.size());
    for (size_t i = 0; i < subs.size(); ++i) sub_order[i] = static_cast<int>(i);
    std::stable_sort(sub_order.begin(), sub_order.end(), [&](int a, int b) {
      return subs[a].comm_score > subs[b].comm_score;
    });

    auto dist = mod.port_distances();
    std::vector<int> qccd_order(mod.qccds.size());
    for (size_t i = 0; i < mod.qccds.size(); ++i) qccd_order[i] = static_cast<int>(i);
    std::stable_sort(qccd_order.begin(), qccd_order.end(),
                     [&](int a, int b) { return dist[a] < dist[b]; });

    for (size_t i = 0; i < sub_order.size(); ++i)
      detail::place_sub(subs[sub_order[i]].qubits, static_cast<int>(m), qccd_order[i], arch, out);
  }
  MappingAssignment mapping(std::move(out));
  mapping.validate(arch);
  return mapping;
}

// --- text serialization: `qubits N` header, then one `q module qccd slot`
// line per qubit, ascending by qubit. ---

inline void write_mapping(std::ostream& os, const MappingAssignment& mapping) {
  os << "qubits " << mapping.qubit_count() << "\n";
  for (int q = 0; q < mapping.qubit_count(); ++q) {
    const auto& p = mapping[q];
    os << q << ' ' << p.module << ' ' << p.qccd << ' ' << p.slot << "\n";
  }
}

inline MappingAssignment read_mapping(std::istream& is) {
  std::string line;
  int n = -1, lineno = 0;
  std::vector<QubitPlacement> placements;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (n < 0) {
      std::string word;
      if (!(ls >> word >> n) || word != "qubits" || n < 1)
        throw std::runtime_error("mapping text: expected 'qubits <n>' at line " +
                                 std::to_string(lineno));
      placements.assign(n, {});
      continue;
    }
    int q;
    QubitPlacement p;
    if (!(ls >> q >> p.module >> p.qccd >> p.slot) || q < 0 || q >= n)
      throw std::runtime_error("mapping text: bad record at line " + std::to_string(lineno));
    placements[q] = p;
  }
  if (n < 0) throw std::runtime_error("mapping text: missing 'qubits' header");
  for (const auto& p : placements)
    if (p.module < 0) throw std::runtime_error("mapping text: not all qubits placed");
  return MappingAssignment(std::move(placements));
}

}  // namespace ionweave
