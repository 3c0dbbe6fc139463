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

#include "citetax/network.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace citetax {

std::string_view to_string(QualityKind kind) {
  return kind == QualityKind::kCPM ? "cpm" : "modularity";
}

QualityKind parse_quality_kind(std::string_view text) {
  if (text == "cpm" || text == "CPM") return QualityKind::kCPM;
  if (text == "modularity") return QualityKind::kModularity;
  throw UsageError("unknown quality function '" + std::string(text) + "'");
}

Network Network::from_edges(int n_nodes, std::span<const LocalEdge> edges,
                            QualityKind kind, std::vector<std::uint64_t> keys) {
  std::vector<LocalEdge> directed;
  directed.reserve(edges.size() * 2);
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n_nodes || e.v >= n_nodes) {
      throw UsageError("edge endpoint out of range");
    }
    if (e.u == e.v || e.w == 0.0) continue;
    directed.push_back({e.u, e.v, e.w});
    directed.push_back({e.v, e.u, e.w});
  }
  std::sort(directed.begin(), directed.end(), [](const LocalEdge& a, const LocalEdge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });

  Network net;
  net.offsets_.assign(static_cast<std::size_t>(n_nodes) + 1, 0);
  for (std::size_t k = 0; k < directed.size(); ++k) {
    const auto& e = directed[k];
    if (k > 0 && directed[k - 1].u == e.u && directed[k - 1].v == e.v) {
      net.w_.back() += e.w;
      continue;
    }
    net.adj_.push_back(e.v);
    net.w_.push_back(e.w);
    net.offsets_[e.u + 1] = net.adj_.size();
  }
  // Rows without entries inherit the previous end offset.
  for (int i = 1; i <= n_nodes; ++i) {
    net.offsets_[i] = std::max(net.offsets_[i], net.offsets_[i - 1]);
  }
  net.size_.assign(n_nodes, 1);
  net.self_.assign(n_nodes, 0.0);
  net.node_weight_.assign(n_nodes, 1.0);
  if (kind == QualityKind::kModularity) {
    for (int i = 0; i < n_nodes; ++i) {
      const auto w = net.weights(i);
      net.node_weight_[i] = std::accumulate(w.begin(), w.end(), 0.0);
    }
  }
  if (keys.empty()) {
    keys.resize(n_nodes);
    std::iota(keys.begin(), keys.end(), std::uint64_t{0});
  }
  if (static_cast<int>(keys.size()) != n_nodes) throw UsageError("key count mismatch");
  net.key_ = std::move(keys);
  return net;
}

double Network::total_edge_weight() const {
  double total = std::accumulate(self_.begin(), self_.end(), 0.0);
  return total + std::accumulate(w_.begin(), w_.end(), 0.0) / 2.0;
}

Network Network::subnetwork(std::span<const int> nodes) const {
  std::unordered_map<int, int> local;
  local.reserve(nodes.size() * 2);
  for (std::size_t k = 0; k < nodes.size(); ++k) local.emplace(nodes[k], static_cast<int>(k));

  Network sub;
  sub.offsets_.assign(nodes.size() + 1, 0);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const int i = nodes[k];
    const auto nb = neighbors(i);
    const auto w = weights(i);
    for (std::size_t e = 0; e < nb.size(); ++e) {
      auto it = local.find(nb[e]);
      if (it == local.end()) continue;
      sub.adj_.push_back(it->second);
      sub.w_.push_back(w[e]);
    }
    sub.offsets_[k + 1] = sub.adj_.size();
    sub.size_.push_back(size_[i]);
    sub.node_weight_.push_back(node_weight_[i]);
    sub.self_.push_back(self_[i]);
    sub.key_.push_back(key_[i]);
  }
  // Keep each row sorted by local index.
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    std::vector<std::pair<int, double>> row;
    for (std::size_t e = sub.offsets_[k]; e < sub.offsets_[k + 1]; ++e) {
      row.emplace_back(sub.adj_[e], sub.w_[e]);
    }
    std::sort(row.begin(), row.end());
    for (std::size_t e = 0; e < row.size(); ++e) {
      sub.adj_[sub.offsets_[k] + e] = row[e].first;
      sub.w_[sub.offsets_[k] + e] = row[e].second;
    }
  }
  return sub;
}

Network Network::reduce(std::span<const int> cluster, int n_clusters) const {
  Network red;
  red.size_.assign(n_clusters, 0);
  red.node_weight_.assign(n_clusters, 0.0);
  red.self_.assign(n_clusters, 0.0);
  red.key_.assign(n_clusters, UINT64_MAX);
  std::vector<std::vector<int>> members(n_clusters);
  for (int i = 0; i < size(); ++i) {
    const int c = cluster[i];
    if (c == kNoCluster) continue;
    members[c].push_back(i);
    red.size_[c] += size_[i];
    red.node_weight_[c] += node_weight_[i];
    red.self_[c] += self_[i];
    red.key_[c] = std::min(red.key_[c], key_[i]);
  }
  red.offsets_.assign(static_cast<std::size_t>(n_clusters) + 1, 0);
  std::vector<double> acc(n_clusters, 0.0);
  std::vector<int> touched;
  for (int c = 0; c < n_clusters; ++c) {
    touched.clear();
    for (int i : members[c]) {
      const auto nb = neighbors(i);
      const auto w = weights(i);
      for (std::size_t e = 0; e < nb.size(); ++e) {
        const int d = cluster[nb[e]];
        if (d == kNoCluster) continue;
        if (d == c) {
          // Each internal edge is seen from both ends.
          red.self_[c] += w[e] / 2.0;
          continue;
        }
        if (acc[d] == 0.0) touched.push_back(d);
        acc[d] += w[e];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (int d : touched) {
      red.adj_.push_back(d);
      red.w_.push_back(acc[d]);
      acc[d] = 0.0;
    }
    red.offsets_[c + 1] = red.adj_.size();
  }
  return red;
}

Network network_from_graph(const SimilarityGraph& graph, QualityKind kind) {
  std::vector<LocalEdge> edges;
  edges.reserve(graph.edges.size());
  auto local = [&](DocIndex doc) {
    auto it = std::lower_bound(graph.nodes.begin(), graph.nodes.end(), doc);
    return static_cast<int>(it - graph.nodes.begin());
  };
  for (const auto& e : graph.edges) edges.push_back({local(e.u), local(e.v), e.w});
  std::vector<std::uint64_t> keys(graph.nodes.begin(), graph.nodes.end());
  return Network::from_edges(static_cast<int>(graph.nodes.size()), edges, kind,
                             std::move(keys));
}

double quality(const Network& net, std::span<const int> cluster, QualityKind kind,
               double resolution, double total_strength) {
  if (static_cast<int>(cluster.size()) != net.size()) {
    throw DataError("partition does not cover every node");
  }
  int n_clusters = 0;
  for (int c : cluster) {
    if (c < 0) throw DataError("node missing from partition");
    n_clusters = std::max(n_clusters, c + 1);
  }
  std::vector<double> internal(n_clusters, 0.0);
  std::vector<double> mass(n_clusters, 0.0);
  for (int i = 0; i < net.size(); ++i) {
    const int c = cluster[i];
    internal[c] += net.self_weight(i);
    mass[c] += kind == QualityKind::kCPM ? static_cast<double>(net.node_size(i))
                                         : net.node_weight(i);
    const auto nb = net.neighbors(i);
    const auto w = net.weights(i);
    for (std::size_t e = 0; e < nb.size(); ++e) {
      if (nb[e] > i && cluster[nb[e]] == c) internal[c] += w[e];
    }
  }
  double q = 0.0;
  if (kind == QualityKind::kCPM) {
    for (int c = 0; c < n_clusters; ++c) {
      q += internal[c] - resolution * mass[c] * (mass[c] - 1.0) / 2.0;
    }
    return q;
  }
  const double two_m = total_strength > 0.0 ? total_strength : net.total_strength();
  if (two_m <= 0.0) return 0.0;
  for (int c = 0; c < n_clusters; ++c) {
    q += 2.0 * internal[c] / two_m - resolution * (mass[c] / two_m) * (mass[c] / two_m);
  }
  return q;
}

}  // namespace citetax
