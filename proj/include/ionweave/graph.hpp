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

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "ionweave/circuit.hpp"

namespace ionweave {

/// Parameters of the lookahead weighting. `sigma` is the decay scale of
/// D(x) = 2^(-x/sigma); `big_weight` is the weight pinned onto pairs that
/// interact in the slice being mapped, and must dominate any achievable
/// lookahead sum. Leaving `big_weight` at 0 picks 2*T+1 automatically,
/// which always dominates because each of the < T future slices
/// contributes less than 1.
struct LookaheadConfig {
  double sigma = 1.0;
  double big_weight = 0.0;  // 0 = auto (2*T+1)

  void validate() const {
    if (!(sigma > 0)) throw std::invalid_argument("lookahead sigma must be positive");
    if (big_weight < 0) throw std::invalid_argument("big_weight must be non-negative");
  }
};

/// Undirected weighted graph over qubit (or group) indices. Adjacency is
/// kept symmetric by construction; absent edge means weight 0.
class QubitGraph {
 public:
  QubitGraph() = default;
  explicit QubitGraph(int node_count, int origin_slice = 0)
      : adj_(node_count), origin_slice_(origin_slice) {}

  int node_count() const { return static_cast<int>(adj_.size()); }
  int origin_slice() const { return origin_slice_; }

  double weight(int a, int b) const {
    auto it = adj_[a].find(b);
    return it == adj_[a].end() ? 0.0 : it->second;
  }

  void add_weight(int a, int b, double w) {
    if (a == b) throw std::invalid_argument("self-edges are not allowed");
    if (w == 0) return;
    adj_[a][b] += w;
    adj_[b][a] += w;
  }

  void set_weight(int a, int b, double w) {
    if (a == b) throw std::invalid_argument("self-edges are not allowed");
    adj_[a][b] = w;
    adj_[b][a] = w;
  }

  /// Neighbours of `a` with their weights, ascending by index.
  const std::map<int, double>& neighbors(int a) const { return adj_[a]; }

  /// Every edge once, as (i, j, w) with i < j, ascending lexicographically.
  std::vector<std::tuple<int, int, double>> edges() const {
    std::vector<std::tuple<int, int, double>> out;
    for (int a = 0; a < node_count(); ++a)
      for (const auto& [b, w] : adj_[a])
        if (a < b) out.emplace_back(a, b, w);
    return out;
  }

  double total_weight() const {
    double s = 0;
    for (const auto& [a, b, w] : edges()) s += w;
    return s;
  }

  void prune_below(double eps) {
    for (auto& row : adj_)
      for (auto it = row.begin(); it != row.end();)
        it = (it->second < eps) ? row.erase(it) : std::next(it);
  }

 private:
  std::vector<std::map<int, double>> adj_;
  int origin_slice_ = 0;
};

/// Builds the interaction graph seen from slice `t`: pairs gated in slice
/// `t` itself get the pinning weight L, and every future interaction of a
/// pair at slice m adds 2^(-(m-t)/sigma). Edges that decay below 1e-15
/// are dropped.
inline QubitGraph build_lookahead_graph(const std::vector<TimeSlice>& slices, int t,
                                        int qubit_count, const LookaheadConfig& cfg = {}) {
  cfg.validate();
  const int T = static_cast<int>(slices.size());
  if (t < 0 || t >= T) throw std::out_of_range("slice index out of range");
  double L = cfg.big_weight > 0 ? cfg.big_weight : 2.0 * T + 1.0;
  if (L <= T)
    throw std::invalid_argument("big_weight must exceed the slice count to pin current pairs");

  QubitGraph g(qubit_count, t);
  for (int m = t + 1; m < T; ++m) {
    double decay = std::exp2(-static_cast<double>(m - t) / cfg.sigma);
    for (const auto& gate : slices[m].gates)
      if (gate.is_two_qubit()) g.add_weight(gate.q0, gate.q1, decay);
  }
  for (const auto& gate : slices[t].gates)
    if (gate.is_two_qubit()) g.set_weight(gate.q0, gate.q1, L);
  g.prune_below(1e-15);
  return g;
}

/// Collapses nodes into groups: the weight between two groups is the sum
/// of all member-pair weights, and intra-group weight is dropped.
/// `grouping[node]` must be defined for every node (-1 is rejected).
inline QubitGraph contract_graph(const QubitGraph& g, const std::vector<int>& grouping,
                                 int group_count) {
  if (static_cast<int>(grouping.size()) != g.node_count())
    throw std::invalid_argument("grouping must cover every node");
  for (int v : grouping)
    if (v < 0 || v >= group_count) throw std::invalid_argument("grouping has an unassigned node");
  QubitGraph out(group_count, g.origin_slice());
  for (const auto& [a, b, w] : g.edges()) {
    int ga = grouping[a], gb = grouping[b];
    if (ga != gb) out.add_weight(ga, gb, w);
  }
  return out;
}

/// Sum of weights crossing the given grouping (each edge counted once).
inline double cut_weight(const QubitGraph& g, const std::vector<int>& grouping) {
  double cut = 0;
  for (const auto& [a, b, w] : g.edges())
    if (grouping[a] != grouping[b]) cut += w;
  return cut;
}

/// Edge-list dump, one `i j weight` line per edge, for debugging and
/// cross-checking against external evaluations.
inline void write_edge_list(std::ostream& os, const QubitGraph& g) {
  char buf[64];
  for (const auto& [a, b, w] : g.edges()) {
    std::snprintf(buf, sizeof buf, "%.17g", w);
    os << a << ' ' << b << ' ' << buf << "\n";
  }
}

}  // namespace ionweave
