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
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ionweave/graph.hpp"
#include "ionweave/rng.hpp"

namespace ionweave {

/// Knobs for the partitioning stack. `kl_iterations` caps Kernighan-Lin
/// improvement passes per bipartition; `refine_iterations` caps the outer
/// sweeps of pairwise refinement inside each module.
struct PartitionConfig {
  int module_count = 1;        // top-level partitions (one per module)
  int subs_per_module = 1;     // sub-partitions inside each module (one per QCCD)
  int kl_iterations = 8;       // KL pass cap per bipartition
  int refine_iterations = 4;   // outer sweeps over sub-partition pairs
  int capacity = 0;            // max qubits per sub-partition; 0 = unbounded
  int seed_subpartitions = 1;  // subs per module seeded with comm-heavy qubits
  bool comm_seeded = true;     // seed init by external communication (else index chunks)
  int restarts = 2;            // extra random-init restarts per bipartition
  uint64_t seed = 0;           // root of all internal randomness

  void validate(int qubit_count) const {
    if (module_count < 1 || subs_per_module < 1)
      throw std::invalid_argument("partition shape must be at least 1x1");
    if (module_count * subs_per_module < 2)
      throw std::invalid_argument("partitioning needs at least 2 sub-partitions overall");
    if (kl_iterations < 1 || refine_iterations < 0)
      throw std::invalid_argument("iteration caps must be positive");
    if (seed_subpartitions < 0 || seed_subpartitions > subs_per_module)
      throw std::invalid_argument("seed sub-partition count out of range");
    if (capacity > 0 && qubit_count > module_count * subs_per_module * capacity)
      throw std::invalid_argument("qubits exceed total sub-partition capacity");
  }
};

/// A sub-partition is the unit that later lands on one QCCD. Its score is
/// the summed edge weight from its members to qubits in *other modules* —
/// the traffic that will have to ride the photonic interconnect.
struct SubPartition {
  std::vector<int> qubits;
  double comm_score = 0.0;
};

struct ModulePartition {
  std::vector<SubPartition> subs;

  std::vector<int> qubits() const {
    std::vector<int> all;
    for (const auto& s : subs) all.insert(all.end(), s.qubits.begin(), s.qubits.end());
    std::sort(all.begin(), all.end());
    return all;
  }
};

/// Result of hierarchical partitioning: k modules of j sub-partitions,
/// disjoint and covering all qubits.
struct PartitionTree {
  std::vector<ModulePartition> modules;

  int qubit_count() const {
    int n = 0;
    for (const auto& m : modules)
      for (const auto& s : m.subs) n += static_cast<int>(s.qubits.size());
    return n;
  }

  /// Per-qubit (module, sub) labels; throws if the tree is not a disjoint
  /// cover of 0..n-1.
  std::vector<std::pair<int, int>> labels() const {
    std::vector<std::pair<int, int>> out(qubit_count(), {-1, -1});
    for (size_t m = 0; m < modules.size(); ++m)
      for (size_t s = 0; s < modules[m].subs.size(); ++s)
        for (int q : modules[m].subs[s].qubits) {
          if (q < 0 || q >= static_cast<int>(out.size()) || out[q].first != -1)
            throw std::logic_error("partition tree does not form a disjoint cover");
          out[q] = {static_cast<int>(m), static_cast<int>(s)};
        }
    for (auto& [mod, sub] : out)
      if (mod == -1) throw std::logic_error("partition tree does not cover all qubits");
    return out;
  }

  std::vector<int> module_of() const {
    auto lab = labels();
    std::vector<int> out(lab.size());
    for (size_t q = 0; q < lab.size(); ++q) out[q] = lab[q].first;
    return out;
  }
};

namespace detail {

// Balanced piece sizes: n split into k parts differing by at most one,
// larger parts first.
inline std::vector<int> balanced_sizes(int n, int k) {
  std::vector<int> sizes(k, n / k);
  for (int i = 0; i < n % k; ++i) ++sizes[i];
  return sizes;
}

// One KL improvement run on a two-sided assignment over local node ids
// 0..n-1 of `g`. Sides may be unequal; only swaps are performed, so sizes
// are invariant. Returns true if any pass committed an improvement.
//
// Each pass tentatively swaps the best remaining (a, b) pair by gain
// D[a] + D[b] - 2 w(a,b), locks the pair, updates D, then commits the
// prefix of swaps with the largest strictly positive cumulative gain.
// Ties always resolve to the lowest node index, keeping results
// reproducible across platforms.
inline bool kl_refine(const QubitGraph& g, std::vector<char>& side, int max_passes) {
  const int n = g.node_count();
  bool improved_ever = false;
  for (int pass = 0; pass < max_passes; ++pass) {
    std::vector<double> D(n, 0.0);
    for (int v = 0; v < n; ++v)
      for (const auto& [u, w] : g.neighbors(v)) D[v] += (side[u] != side[v]) ? w : -w;

    std::vector<char> locked(n, 0);
    std::vector<std::pair<int, int>> swaps;
    std::vector<double> gains;
    while (true) {
      int best_a = -1, best_b = -1;
      double best_gain = 0.0;
      for (int a = 0; a < n; ++a) {
        if (locked[a] || side[a] != 0) continue;
        for (int b = 0; b < n; ++b) {
          if (locked[b] || side[b] != 1) continue;
          double gain = D[a] + D[b] - 2.0 * g.weight(a, b);
          if (best_a == -1 || gain > best_gain) {
            best_gain = gain;
            best_a = a;
            best_b = b;
          }
        }
      }
      if (best_a == -1) break;
      locked[best_a] = locked[best_b] = 1;
      swaps.emplace_back(best_a, best_b);
      gains.push_back(best_gain);
      // D update treats (a, b) as if already swapped.
      for (int v = 0; v < n; ++v) {
        if (locked[v]) continue;
        double wa = g.weight(v, best_a), wb = g.weight(v, best_b);
        if (side[v] == side[best_a])
          D[v] += 2.0 * wa - 2.0 * wb;
        else
          D[v] += 2.0 * wb - 2.0 * wa;
      }
    }

    double best_total = 0.0, running = 0.0;
    size_t best_len = 0;
    for (size_t i = 0; i < gains.size(); ++i) {
      running += gains[i];
      if (running > best_total + 1e-12) {
        best_total = running;
        best_len = i + 1;
      }
    }
    if (best_len == 0) break;
    for (size_t i = 0; i < best_len; ++i) {
      std::swap(side[swaps[i].first], side[swaps[i].second]);
    }
    improved_ever = true;
  }
  return improved_ever;
}

inline double side_cut(const QubitGraph& g, const std::vector<char>& side) {
  double cut = 0;
  for (const auto& [a, b, w] : g.edges())
    if (side[a] != side[b]) cut += w;
  return cut;
}

// Induced subgraph over `nodes` (global ids), relabelled to 0..m-1 in the
// given order.
inline QubitGraph induced(const QubitGraph& g, const std::vector<int>& nodes) {
  std::vector<int> local(g.node_count(), -1);
  for (size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = static_cast<int>(i);
  QubitGraph out(static_cast<int>(nodes.size()), g.origin_slice());
  for (size_t i = 0; i < nodes.size(); ++i)
    for (const auto& [u, w] : g.neighbors(nodes[i]))
      if (local[u] > static_cast<int>(i)) out.add_weight(static_cast<int>(i), local[u], w);
  return out;
}

// Best-of-restarts sized bipartition of `g` into sides of size_a/size_b.
// Restart 0 is the deterministic index-order split; further restarts use
// seeded random splits. Lowest cut wins, first found on ties.
inline std::vector<char> sized_bipartition(const QubitGraph& g, int size_a, int max_passes,
                                           int restarts, uint64_t seed) {
  const int n = g.node_count();
  std::vector<char> best;
  double best_cut = 0;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int r = 0; r <= restarts; ++r) {
    std::vector<char> side(n, 1);
    if (r == 0) {
      for (int i = 0; i < size_a; ++i) side[i] = 0;
    } else {
      Rng rng(derive_seed(seed, "kl-restart-" + std::to_string(r)));
      rng.shuffle(order);
      for (int i = 0; i < size_a; ++i) side[order[i]] = 0;
    }
    kl_refine(g, side, max_passes);
    double cut = side_cut(g, side);
    if (best.empty() || cut < best_cut - 1e-12) {
      best = side;
      best_cut = cut;
    }
  }
  return best;
}

}  // namespace detail

/// Balanced two-way split. Odd node counts are padded with one zero-weight
/// dummy node before splitting, so the halves differ by at most one qubit.
/// `init`, when given, fixes the starting assignment (0/1 per node) and
/// disables restarts, which makes runs reproducible from external state.
struct Bipartition {
  std::vector<int> a, b;
  double cut = 0.0;
};

inline Bipartition kl_bipartition(const QubitGraph& g, int max_passes = 8,
                                  const std::optional<std::vector<int>>& init = std::nullopt,
                                  int restarts = 2, uint64_t seed = 0) {
  const int n = g.node_count();
  if (n < 2) throw std::invalid_argument("bipartition needs at least 2 nodes");
  const int padded = n + (n % 2);

  QubitGraph work(padded, g.origin_slice());
  for (const auto& [x, y, w] : g.edges()) work.add_weight(x, y, w);

  std::vector<char> side;
  if (init) {
    if (static_cast<int>(init->size()) != n)
      throw std::invalid_argument("initial assignment must cover every node");
    side.assign(padded, 0);
    int ones = 0;
    for (int i = 0; i < n; ++i) {
      if ((*init)[i] != 0 && (*init)[i] != 1)
        throw std::invalid_argument("initial assignment entries must be 0 or 1");
      side[i] = static_cast<char>((*init)[i]);
      ones += (*init)[i];
    }
    if (padded > n) side[n] = static_cast<char>(ones <= padded / 2 ? 1 : 0);
    int zeros = std::count(side.begin(), side.end(), static_cast<char>(0));
    if (zeros != padded / 2)
      throw std::invalid_argument("initial assignment must be balanced");
    detail::kl_refine(work, side, max_passes);
  } else {
    side = detail::sized_bipartition(work, padded / 2, max_passes, restarts, seed);
  }

  Bipartition out;
  for (int v = 0; v < n; ++v) (side[v] == 0 ? out.a : out.b).push_back(v);
  out.cut = 0;
  for (const auto& [x, y, w] : g.edges())
    if (side[x] != side[y]) out.cut += w;
  return out;
}

/// Balanced k-way partition by recursive sized bisection: the k target
/// piece sizes are fixed up front, the node set is split into the first
/// ⌈k/2⌉ pieces versus the rest, and each half recurses. Any k ≥ 2 is
/// expressible this way, so no fallback scheme is needed. Piece sizes
/// differ by at most one.
inline std::vector<std::vector<int>> partition_k_way(const QubitGraph& g, int k,
                                                     int max_passes = 8, int restarts = 2,
                                                     uint64_t seed = 0) {
  const int n = g.node_count();
  if (k < 1) throw std::invalid_argument("partition count must be positive");
  if (k == 1) {
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    return {all};
  }
  if (k > n) throw std::invalid_argument("more partitions than nodes");

  auto sizes = detail::balanced_sizes(n, k);
  std::vector<std::vector<int>> out;

  // nodes: global ids; sizes[lo..hi): target piece sizes for this branch.
  auto recurse = [&](auto&& self, std::vector<int> nodes, int lo, int hi, int depth) -> void {
    if (hi - lo == 1) {
      std::sort(nodes.begin(), nodes.end());
      out.push_back(std::move(nodes));
      return;
    }
    int mid = lo + (hi - lo + 1) / 2;
    int left_total = std::accumulate(sizes.begin() + lo, sizes.begin() + mid, 0);
    QubitGraph sub = detail::induced(g, nodes);
    auto side = detail::sized_bipartition(
        sub, left_total, max_passes, restarts,
        derive_seed(seed, "kway-" + std::to_string(depth) + "-" + std::to_string(lo)));
    std::vector<int> left, right;
    for (size_t i = 0; i < nodes.size(); ++i)
      (side[i] == 0 ? left : right).push_back(nodes[i]);
    self(self, std::move(left), lo, mid, depth + 1);
    self(self, std::move(right), mid, hi, depth + 1);
  };

  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  recurse(recurse, std::move(all), 0, k, 0);
  return out;
}

/// Communication-seeded initial sub-partition layout (one module at a
/// time): qubits are ranked by their summed edge weight into *other*
/// modules, the top-ranked qubits with nonzero external weight are packed
/// into the first `seed_subpartitions` sub-partitions, and all remaining
/// slots are filled in ascending index order. The index fill is a warm
/// start for the pairwise refinement: when qubit ids correlate with
/// interaction structure (arithmetic chains, rings) it already clusters
/// well, and refinement only moves qubits when the graph says so.
/// Sub-partition target sizes are balanced.
inline std::vector<std::vector<std::vector<int>>> comm_seeded_init(
    const QubitGraph& g, const std::vector<std::vector<int>>& modules, int subs_per_module,
    int seed_subpartitions) {
  std::vector<int> module_of(g.node_count(), -1);
  for (size_t m = 0; m < modules.size(); ++m)
    for (int q : modules[m]) module_of[q] = static_cast<int>(m);
  for (int v : module_of)
    if (v == -1) throw std::invalid_argument("module partition must cover every node");

  std::vector<std::vector<std::vector<int>>> out;
  for (size_t m = 0; m < modules.size(); ++m) {
    std::vector<int> members = modules[m];
    std::sort(members.begin(), members.end());
    auto sizes = detail::balanced_sizes(static_cast<int>(members.size()), subs_per_module);

    std::vector<std::pair<double, int>> ranked;  // (-external weight, qubit)
    for (int q : members) {
      double ext = 0;
      for (const auto& [u, w] : g.neighbors(q))
        if (module_of[u] != static_cast<int>(m)) ext += w;
      ranked.emplace_back(-ext, q);
    }
    std::sort(ranked.begin(), ranked.end());

    std::vector<std::vector<int>> subs(subs_per_module);
    size_t next = 0;
    for (int s = 0; s < seed_subpartitions && s < subs_per_module; ++s)
      while (static_cast<int>(subs[s].size()) < sizes[s] && next < ranked.size() &&
             -ranked[next].first > 0)
        subs[s].push_back(ranked[next++].second);

    std::vector<int> rest;
    for (size_t i = next; i < ranked.size(); ++i) rest.push_back(ranked[i].second);
    std::sort(rest.begin(), rest.end());
    size_t r = 0;
    for (int s = 0; s < subs_per_module; ++s)
      while (static_cast<int>(subs[s].size()) < sizes[s]) subs[s].push_back(rest[r++]);
    for (auto& s : subs) std::sort(s.begin(), s.end());
    out.push_back(std::move(subs));
  }
  return out;
}

namespace detail {

// Pairwise KL over all sub-partition pairs inside one module, repeated up
// to `q` sweeps. Moving a qubit between two subs never changes its cut
// edges to any third sub (they stay cut), so refining each induced pair
// subgraph in isolation optimizes the true total cut.
inline void refine_module_subs(const QubitGraph& g, std::vector<std::vector<int>>& subs,
                               int max_passes, int sweeps) {
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    bool changed = false;
    for (size_t s1 = 0; s1 < subs.size(); ++s1) {
      for (size_t s2 = s1 + 1; s2 < subs.size(); ++s2) {
        std::vector<int> nodes = subs[s1];
        nodes.insert(nodes.end(), subs[s2].begin(), subs[s2].end());
        QubitGraph pair = induced(g, nodes);
        std::vector<char> side(nodes.size(), 1);
        for (size_t i = 0; i < subs[s1].size(); ++i) side[i] = 0;
        if (kl_refine(pair, side, max_passes)) {
          changed = true;
          std::vector<int> a, b;
          for (size_t i = 0; i < nodes.size(); ++i) (side[i] == 0 ? a : b).push_back(nodes[i]);
          std::sort(a.begin(), a.end());
          std::sort(b.begin(), b.end());
          subs[s1] = std::move(a);
          subs[s2] = std::move(b);
        }
      }
    }
    if (!changed) break;
  }
}

}  // namespace detail

/// Full hierarchical partition: one k-way split at module level, then an
/// independent j-way split inside each module (seeded initialization plus
/// pairwise KL refinement). Keeping the second stage local to a module is
/// what makes the two-level scheme cheap — inner refinement never looks at
/// another module's qubits.
inline PartitionTree hierarchical_partition(const QubitGraph& g, const PartitionConfig& cfg) {
  cfg.validate(g.node_count());
  const int k = cfg.module_count, j = cfg.subs_per_module;

  std::vector<std::vector<int>> modules =
      partition_k_way(g, k, cfg.kl_iterations, cfg.restarts, derive_seed(cfg.seed, "modules"));

  std::vector<int> module_of(g.node_count(), -1);
  for (size_t m = 0; m < modules.size(); ++m)
    for (int q : modules[m]) module_of[q] = static_cast<int>(m);

  std::vector<std::vector<std::vector<int>>> subs;
  if (cfg.comm_seeded) {
    subs = comm_seeded_init(g, modules, j, cfg.seed_subpartitions);
  } else {
    for (auto& members : modules) {
      std::sort(members.begin(), members.end());
      auto sizes = detail::balanced_sizes(static_cast<int>(members.size()), j);
      std::vector<std::vector<int>> chunked;
      size_t at = 0;
      for (int s = 0; s < j; ++s) {
        chunked.emplace_back(members.begin() + at, members.begin() + at + sizes[s]);
        at += sizes[s];
      }
      subs.push_back(std::move(chunked));
    }
  }

  PartitionTree tree;
  for (size_t m = 0; m < modules.size(); ++m) {
    if (j > 1) detail::refine_module_subs(g, subs[m], cfg.kl_iterations, cfg.refine_iterations);
    ModulePartition mp;
    for (auto& qubits : subs[m]) {
      SubPartition sp;
      sp.qubits = std::move(qubits);
      for (int q : sp.qubits)
        for (const auto& [u, w] : g.neighbors(q))
          if (module_of[u] != static_cast<int>(m)) sp.comm_score += w;
      mp.subs.push_back(std::move(sp));
    }
    tree.modules.push_back(std::move(mp));
  }
  return tree;
}

/// Index-order layout: module m takes the m-th balanced contiguous range of
/// qubit ids, split again into j balanced contiguous sub-partitions. This
/// is the graph-blind baseline the partitioners are compared against.
/// Scores are still computed from `g` when provided so downstream mapping
/// stays well-defined.
inline PartitionTree index_chunk_tree(int qubit_count, int k, int j,
                                      const QubitGraph* g = nullptr) {
  auto module_sizes = detail::balanced_sizes(qubit_count, k);
  PartitionTree tree;
  int at = 0;
  std::vector<int> module_of(qubit_count, 0);
  std::vector<std::pair<int, int>> ranges;
  for (int m = 0; m < k; ++m) {
    ranges.emplace_back(at, at + module_sizes[m]);
    for (int q = at; q < at + module_sizes[m]; ++q) module_of[q] = m;
    at += module_sizes[m];
  }
  for (int m = 0; m < k; ++m) {
    auto [lo, hi] = ranges[m];
    auto sizes = detail::balanced_sizes(hi - lo, j);
    ModulePartition mp;
    int q = lo;
    for (int s = 0; s < j; ++s) {
      SubPartition sp;
      for (int i = 0; i < sizes[s]; ++i) sp.qubits.push_back(q++);
      if (g)
        for (int v : sp.qubits)
          for (const auto& [u, w] : g->neighbors(v))
            if (module_of[u] != m) sp.comm_score += w;
      mp.subs.push_back(std::move(sp));
    }
    tree.modules.push_back(std::move(mp));
  }
  return tree;
}

}  // namespace ionweave
