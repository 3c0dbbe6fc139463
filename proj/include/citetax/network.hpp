// Copyright 2026 The citetax Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CITETAX_NETWORK_HPP_
#define CITETAX_NETWORK_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "citetax/graphbuild.hpp"

namespace citetax {

enum class QualityKind { kCPM, kModularity };

std::string_view to_string(QualityKind kind);
QualityKind parse_quality_kind(std::string_view text);

struct LocalEdge {
  int u = 0;
  int v = 0;
  double w = 0.0;
};

// Undirected weighted network in CSR form, the unit the clustering code
// works on. Each node carries:
//   size         number of original documents it stands for,
//   node_weight  the weight used by the quality function's penalty term
//                (size for CPM, strength for modularity),
//   self_weight  edge weight internal to an aggregated node,
//   key          a label-independent identifier that drives visit order.
class Network {
 public:
  Network() = default;

  // Builds a network over nodes [0, n_nodes). Parallel edges are summed and
  // self-loops are dropped. `keys` defaults to the node index.
  static Network from_edges(int n_nodes, std::span<const LocalEdge> edges,
                            QualityKind kind, std::vector<std::uint64_t> keys = {});

  int size() const { return static_cast<int>(size_.size()); }
  std::span<const int> neighbors(int i) const {
    return {adj_.data() + offsets_[i], adj_.data() + offsets_[i + 1]};
  }
  std::span<const double> weights(int i) const {
    return {w_.data() + offsets_[i], w_.data() + offsets_[i + 1]};
  }
  std::int64_t node_size(int i) const { return size_[i]; }
  double node_weight(int i) const { return node_weight_[i]; }
  double self_weight(int i) const { return self_[i]; }
  std::uint64_t key(int i) const { return key_[i]; }
  std::size_t n_edges() const { return adj_.size() / 2; }

  // Sum of all undirected edge weights including internal weight.
  double total_edge_weight() const;
  // Twice total_edge_weight; the modularity normaliser 2m.
  double total_strength() const { return 2.0 * total_edge_weight(); }

  // Network induced by `nodes` (node k of the result is nodes[k]).
  Network subnetwork(std::span<const int> nodes) const;

  // One node per cluster; nodes with cluster kNoCluster are left out.
  Network reduce(std::span<const int> cluster, int n_clusters) const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<int> adj_;
  std::vector<double> w_;
  std::vector<std::int64_t> size_;
  std::vector<double> node_weight_;
  std::vector<double> self_;
  std::vector<std::uint64_t> key_;
};

// Network over graph.nodes (node k is graph.nodes[k], key = doc index).
Network network_from_graph(const SimilarityGraph& graph, QualityKind kind);

// Quality of an assignment; every entry of `cluster` must be >= 0.
//   CPM:        sum_c [ w_in(c) - gamma * n_c (n_c - 1) / 2 ]
//   modularity: sum_c [ w_in(c) / m - gamma * (K_c / 2m)^2 ]
// n_c counts original documents and w_in includes internal weight, so the
// value of an aggregated network equals that of the network it came from.
// `total_strength` is 2m of the original network (ignored for CPM); pass 0
// to use the network's own.
double quality(const Network& net, std::span<const int> cluster, QualityKind kind,
               double resolution, double total_strength = 0.0);

}  // namespace citetax

#endif  // CITETAX_NETWORK_HPP_
