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

#include "citetax/slm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>

namespace citetax {
namespace {

struct Clustering {
  std::vector<int> cluster;
  int n_clusters = 0;

  static Clustering singletons(int n) {
    Clustering c;
    c.cluster.resize(n);
    std::iota(c.cluster.begin(), c.cluster.end(), 0);
    c.n_clusters = n;
    return c;
  }
};

double move_scale(QualityKind kind, double resolution, double total_strength) {
  if (kind == QualityKind::kCPM) return resolution;
  return total_strength > 0.0 ? resolution / total_strength : 0.0;
}

std::vector<int> visit_order(const Network& net, std::uint64_t salt) {
  std::vector<std::pair<std::uint64_t, int>> keyed(net.size());
  for (int i = 0; i < net.size(); ++i) keyed[i] = {mix64(salt ^ mix64(net.key(i))), i};
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> order(net.size());
  for (int i = 0; i < net.size(); ++i) order[i] = keyed[i].second;
  return order;
}

// Moves single nodes to the neighbouring cluster with the largest quality
// gain until no node moves. A node stays put unless some cluster is strictly
// better; among equally good alternatives the lowest cluster id wins.
bool local_moving(const Network& net, Clustering& c, double scale, std::uint64_t salt) {
  const int n = net.size();
  if (n <= 1) return false;
  std::vector<double> cluster_weight(n, 0.0);
  std::vector<int> cluster_count(n, 0);
  for (int i = 0; i < n; ++i) {
    cluster_weight[c.cluster[i]] += net.node_weight(i);
    ++cluster_count[c.cluster[i]];
  }
  std::vector<int> unused;
  for (int k = n - 1; k >= 0; --k) {
    if (cluster_count[k] == 0) unused.push_back(k);
  }

  const auto order = visit_order(net, salt);
  std::vector<double> edge_weight_to(n, 0.0);
  std::vector<char> seen(n, 0);
  std::vector<int> neighbor_clusters;
  bool update = false;
  int stable = 0;
  std::size_t visits = 0;
  const std::size_t max_visits = static_cast<std::size_t>(n) * 10000 + 1000000;
  for (int pos = 0; stable < n && visits < max_visits; pos = (pos + 1 == n) ? 0 : pos + 1) {
    ++visits;
    const int j = order[pos];
    const int current = c.cluster[j];
    const double wj = net.node_weight(j);

    neighbor_clusters.clear();
    const auto nb = net.neighbors(j);
    const auto w = net.weights(j);
    for (std::size_t e = 0; e < nb.size(); ++e) {
      const int l = c.cluster[nb[e]];
      if (!seen[l]) {
        seen[l] = 1;
        neighbor_clusters.push_back(l);
      }
      edge_weight_to[l] += w[e];
    }

    cluster_weight[current] -= wj;
    --cluster_count[current];
    const bool current_empty = cluster_count[current] == 0;
    if (current_empty) unused.push_back(current);

    int best = current;
    double best_gain = edge_weight_to[current] - scale * wj * cluster_weight[current];
    for (int l : neighbor_clusters) {
      if (l == current) continue;
      const double gain = edge_weight_to[l] - scale * wj * cluster_weight[l];
      if (gain > best_gain || (gain == best_gain && best != current && l < best)) {
        best = l;
        best_gain = gain;
      }
    }
    for (int l : neighbor_clusters) {
      edge_weight_to[l] = 0.0;
      seen[l] = 0;
    }
    edge_weight_to[current] = 0.0;

    if (best_gain < 0.0) {
      // An empty cluster (gain 0) beats every candidate.
      best = current_empty ? current : unused.back();
      if (!current_empty) unused.pop_back();
    }
    if (current_empty && best == current) {
      unused.pop_back();
    }

    cluster_weight[best] += wj;
    ++cluster_count[best];
    if (best == current) {
      ++stable;
    } else {
      c.cluster[j] = best;
      stable = 1;
      update = true;
    }
  }

  std::vector<int> relabel(n, -1);
  int next = 0;
  for (int k = 0; k < n; ++k) {
    if (cluster_count[k] > 0) relabel[k] = next++;
  }
  for (int i = 0; i < n; ++i) c.cluster[i] = relabel[c.cluster[i]];
  c.n_clusters = next;
  return update;
}

bool slm_pass(const Network& net, Clustering& c, double scale, std::uint64_t salt,
              unsigned threads) {
  const int n = net.size();
  if (n <= 1) return false;
  bool update = local_moving(net, c, scale, mix64(salt + 1));
  if (c.n_clusters >= n) return update;

  std::vector<std::vector<int>> members(c.n_clusters);
  for (int i = 0; i < n; ++i) members[c.cluster[i]].push_back(i);

  std::vector<Clustering> refined(c.n_clusters);
  const std::uint64_t sub_salt = mix64(salt + 2);
  parallel_for(members.size(), threads, [&](std::size_t k) {
    refined[k] = Clustering::singletons(static_cast<int>(members[k].size()));
    if (members[k].size() > 1) {
      local_moving(net.subnetwork(members[k]), refined[k], scale, sub_salt);
    }
  });

  std::vector<int> sub_cluster(n);
  std::vector<int> enclosing;
  int total = 0;
  for (std::size_t k = 0; k < members.size(); ++k) {
    for (std::size_t m = 0; m < members[k].size(); ++m) {
      sub_cluster[members[k][m]] = total + refined[k].cluster[m];
    }
    for (int s = 0; s < refined[k].n_clusters; ++s) enclosing.push_back(static_cast<int>(k));
    total += refined[k].n_clusters;
  }
  if (total >= n) return update;

  const Network reduced = net.reduce(sub_cluster, total);
  Clustering rc{enclosing, c.n_clusters};
  update |= slm_pass(reduced, rc, scale, mix64(salt + 3), threads);
  for (int i = 0; i < n; ++i) c.cluster[i] = rc.cluster[sub_cluster[i]];
  c.n_clusters = rc.n_clusters;
  return update;
}

// Dense relabel: clusters ordered by size descending, then lowest member.
int canonical_labels(const Network& net, std::vector<int>& cluster) {
  std::map<int, std::pair<std::int64_t, int>> stats;  // id -> (size, min node)
  for (int i = 0; i < static_cast<int>(cluster.size()); ++i) {
    if (cluster[i] == kNoCluster) continue;
    auto [it, inserted] = stats.try_emplace(cluster[i], 0, i);
    it->second.first += net.node_size(i);
  }
  std::vector<std::pair<int, std::pair<std::int64_t, int>>> order(stats.begin(), stats.end());
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second.first != b.second.first) return a.second.first > b.second.first;
    return a.second.second < b.second.second;
  });
  std::map<int, int> relabel;
  for (std::size_t k = 0; k < order.size(); ++k) relabel[order[k].first] = static_cast<int>(k);
  for (int& c : cluster) {
    if (c != kNoCluster) c = relabel[c];
  }
  return static_cast<int>(order.size());
}

// Quality with dropped nodes counted as singletons.
double surviving_quality(const Network& net, const std::vector<int>& cluster, int n_clusters,
                         QualityKind kind, double resolution, double total_strength) {
  std::vector<int> filled(cluster);
  int next = n_clusters;
  for (int& c : filled) {
    if (c == kNoCluster) c = next++;
  }
  return quality(net, filled, kind, resolution, total_strength);
}

Partition run_once(const Network& net, const ClusterParams& params, std::uint64_t seed,
                   double total_strength) {
  const double scale = move_scale(params.quality, params.resolution, total_strength);
  Clustering c = Clustering::singletons(net.size());
  Partition p;
  double q = quality(net, c.cluster, params.quality, params.resolution, total_strength);
  p.trace.push_back(q);
  int iteration = 0;
  for (; iteration < params.max_iterations; ++iteration) {
    Clustering before = c;
    slm_pass(net, c, scale, mix64(seed ^ mix64(static_cast<std::uint64_t>(iteration) + 17)),
             params.threads);
    double q_new = quality(net, c.cluster, params.quality, params.resolution, total_strength);
    if (q_new < q) {
      c = std::move(before);
      q_new = q;
    }
    p.trace.push_back(q_new);
    const double gain = q_new - q;
    q = q_new;
    if (gain <= params.epsilon) break;
  }
  p.hit_max_iterations = iteration >= params.max_iterations;
  p.cluster = std::move(c.cluster);
  p.n_clusters = canonical_labels(net, p.cluster);
  p.quality_value = q;
  p.resolution = params.resolution;
  return p;
}

double resolved_strength(const Network& net, const ClusterParams& params) {
  return params.quality == QualityKind::kModularity ? net.total_strength() : 0.0;
}

Partition smart_local_moving_with_strength(const Network& net, const ClusterParams& params,
                                           double total_strength) {
  if (net.size() == 0) throw DataError("cannot cluster an empty network");
  Partition best;
  for (int r = 0; r < std::max(params.restarts, 1); ++r) {
    const std::uint64_t seed = r == 0 ? params.seed : mix64(params.seed + static_cast<std::uint64_t>(r));
    Partition p = run_once(net, params, seed, total_strength);
    if (r == 0 || p.quality_value > best.quality_value) best = std::move(p);
  }
  return best;
}

Partition target_search(const Network& net, const ClusterParams& params, double target,
                        int min_size, double total_strength) {
  if (!(target >= 1.0)) throw UsageError("target cluster count must be >= 1");
  const double band_lo = 0.8 * target;
  const double band_hi = 1.2 * target;

  // Above hi every edge is unprofitable and all nodes stay singletons.
  double max_ratio = 0.0;
  for (int i = 0; i < net.size(); ++i) {
    const auto nb = net.neighbors(i);
    const auto w = net.weights(i);
    for (std::size_t e = 0; e < nb.size(); ++e) {
      const double a = params.quality == QualityKind::kCPM
                           ? static_cast<double>(net.node_size(i))
                           : net.node_weight(i);
      const double b = params.quality == QualityKind::kCPM
                           ? static_cast<double>(net.node_size(nb[e]))
                           : net.node_weight(nb[e]);
      max_ratio = std::max(max_ratio, w[e] / (a * b));
    }
  }
  if (max_ratio == 0.0) max_ratio = 1.0;
  double hi = 2.0 * max_ratio * (params.quality == QualityKind::kCPM ? 1.0 : total_strength);
  double lo = hi * 1e-12;

  auto evaluate = [&](double resolution) {
    ClusterParams p = params;
    p.resolution = resolution;
    Partition part = smart_local_moving_with_strength(net, p, total_strength);
    return enforce_min_size(net, part, min_size);
  };

  Partition best;
  double best_miss = INFINITY;
  for (int step = 0; step < 60; ++step) {
    const double mid = std::sqrt(lo * hi);
    Partition part = evaluate(mid);
    const double count = std::max(part.n_clusters, 1);
    const double miss = std::abs(std::log(count / target));
    if (miss < best_miss) {
      best_miss = miss;
      best = part;
    }
    if (count >= band_lo && count <= band_hi) return part;
    if (count < band_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi / lo < 1.0 + 1e-9) break;
  }
  best.hit_max_iterations = true;
  return best;
}

}  // namespace

void ClusterParams::validate() const {
  if (!(resolution > 0.0)) throw UsageError("resolution must be positive");
  if (min_cluster_size < 1) throw UsageError("min cluster size must be >= 1");
  if (n_levels < 1) throw UsageError("n_levels must be >= 1");
  if (max_iterations < 1) throw UsageError("max_iterations must be >= 1");
  if (!(epsilon > 0.0)) throw UsageError("epsilon must be positive");
  if (!level_resolutions.empty()) {
    if (static_cast<int>(level_resolutions.size()) != n_levels) {
      throw UsageError("need one resolution per level");
    }
    for (std::size_t k = 0; k < level_resolutions.size(); ++k) {
      if (!(level_resolutions[k] > 0.0)) throw UsageError("resolutions must be positive");
      if (k > 0 && !(level_resolutions[k] < level_resolutions[k - 1])) {
        throw UsageError("level resolutions must be strictly decreasing (finest first)");
      }
    }
  }
  if (!level_min_sizes.empty() && static_cast<int>(level_min_sizes.size()) != n_levels) {
    throw UsageError("need one min size per level");
  }
  if (!level_targets.empty()) {
    if (static_cast<int>(level_targets.size()) != n_levels) {
      throw UsageError("need one target cluster count per level");
    }
    for (std::size_t k = 1; k < level_targets.size(); ++k) {
      if (!(level_targets[k] < level_targets[k - 1])) {
        throw UsageError("level targets must be strictly decreasing (finest first)");
      }
    }
  }
}

std::vector<std::int64_t> Partition::cluster_sizes(const Network& net) const {
  std::vector<std::int64_t> sizes(n_clusters, 0);
  for (int i = 0; i < static_cast<int>(cluster.size()); ++i) {
    if (cluster[i] != kNoCluster) sizes[cluster[i]] += net.node_size(i);
  }
  return sizes;
}

Partition smart_local_moving(const Network& net, const ClusterParams& params) {
  params.validate();
  return smart_local_moving_with_strength(net, params, resolved_strength(net, params));
}

double partition_quality(const Network& net, const Partition& partition, QualityKind kind,
                         double resolution) {
  return quality(net, partition.cluster, kind, resolution);
}

Partition enforce_min_size(const Network& net, const Partition& partition, int min_size) {
  Partition out = partition;
  const int k = partition.n_clusters;
  if (min_size <= 1 || k == 0) return out;

  std::vector<std::int64_t> size(k, 0);
  for (int i = 0; i < net.size(); ++i) {
    if (partition.cluster[i] != kNoCluster) size[partition.cluster[i]] += net.node_size(i);
  }
  std::vector<std::map<int, double>> adj(k);
  for (int i = 0; i < net.size(); ++i) {
    const int ci = partition.cluster[i];
    if (ci == kNoCluster) continue;
    const auto nb = net.neighbors(i);
    const auto w = net.weights(i);
    for (std::size_t e = 0; e < nb.size(); ++e) {
      const int cj = partition.cluster[nb[e]];
      if (cj != kNoCluster && cj != ci) adj[ci][cj] += w[e];
    }
  }

  // target[c]: c itself, the cluster it merged into, or kNoCluster.
  std::vector<int> target(k);
  std::iota(target.begin(), target.end(), 0);
  std::vector<char> alive(k, 1);
  using Item = std::pair<std::int64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> small;
  for (int c = 0; c < k; ++c) {
    if (size[c] < min_size) small.emplace(size[c], c);
  }
  while (!small.empty()) {
    auto [s, c] = small.top();
    small.pop();
    if (!alive[c] || s != size[c] || size[c] >= min_size) continue;
    int best = kNoCluster;
    double best_w = 0.0;
    for (const auto& [d, w] : adj[c]) {
      if (w > best_w) {
        best = d;
        best_w = w;
      }
    }
    alive[c] = 0;
    if (best == kNoCluster) {
      target[c] = kNoCluster;
      continue;
    }
    target[c] = best;
    size[best] += size[c];
    for (const auto& [d, w] : adj[c]) {
      adj[d].erase(c);
      if (d == best) continue;
      adj[best][d] += w;
      adj[d][best] += w;
    }
    adj[c].clear();
    if (size[best] < min_size) small.emplace(size[best], best);
  }

  auto resolve = [&](int c) {
    while (c != kNoCluster && target[c] != c) c = target[c];
    return c;
  };
  for (int i = 0; i < net.size(); ++i) {
    if (out.cluster[i] != kNoCluster) out.cluster[i] = resolve(out.cluster[i]);
  }
  out.n_clusters = canonical_labels(net, out.cluster);
  return out;
}

Partition cluster_to_target(const Network& net, const ClusterParams& params, double target,
                            int min_size) {
  params.validate();
  return target_search(net, params, target, min_size, resolved_strength(net, params));
}

std::vector<Partition> build_hierarchy(const Network& net, const ClusterParams& params) {
  params.validate();
  const int levels = params.n_levels;
  const double total_strength = resolved_strength(net, params);

  std::vector<Partition> finest_first;
  Network current = net;
  std::vector<int> node_of(net.size());
  std::iota(node_of.begin(), node_of.end(), 0);

  for (int idx = 0; idx < levels; ++idx) {
    const int min_size =
        params.level_min_sizes.empty() ? params.min_cluster_size : params.level_min_sizes[idx];
    Partition p;
    if (!params.level_targets.empty()) {
      p = target_search(current, params, params.level_targets[idx], min_size, total_strength);
    } else {
      ClusterParams lp = params;
      if (!params.level_resolutions.empty()) lp.resolution = params.level_resolutions[idx];
      p = smart_local_moving_with_strength(current, lp, total_strength);
      p = enforce_min_size(current, p, min_size);
    }
    if (p.n_clusters == 0) {
      throw DataError("hierarchy level " + std::to_string(levels - idx) + " has no clusters");
    }
    p.quality_value = surviving_quality(current, p.cluster, p.n_clusters, params.quality,
                                        p.resolution, total_strength);
    if (!finest_first.empty()) {
      auto& finer = finest_first.back();
      finer.parent_of.assign(finer.n_clusters, kNoCluster);
      for (int c = 0; c < finer.n_clusters; ++c) finer.parent_of[c] = p.cluster[c];
    }

    Partition expressed = p;
    expressed.level = levels - idx;
    expressed.cluster.assign(net.size(), kNoCluster);
    for (int i = 0; i < net.size(); ++i) {
      if (node_of[i] != kNoCluster) expressed.cluster[i] = p.cluster[node_of[i]];
    }
    for (int i = 0; i < net.size(); ++i) node_of[i] = expressed.cluster[i];
    finest_first.push_back(std::move(expressed));
    if (idx + 1 < levels) current = current.reduce(p.cluster, p.n_clusters);
  }
  std::reverse(finest_first.begin(), finest_first.end());
  return finest_first;
}

void write_partition(const std::vector<Partition>& levels, const SimilarityGraph& graph,
                     const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  for (const auto& p : levels) {
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
      if (p.cluster[i] == kNoCluster) continue;
      out << corpus.doc(graph.nodes[i]).doc_id << '\t' << p.level << '\t' << p.cluster[i]
          << '\n';
    }
  }
  if (!out) throw DataError("failed writing partition " + path.string());
}

void write_hierarchy(const std::vector<Partition>& levels, const std::filesystem::path& path) {
  std::ofstream out(path);
  for (const auto& p : levels) {
    for (std::size_t c = 0; c < p.parent_of.size(); ++c) {
      out << p.level << '\t' << c << '\t' << p.parent_of[c] << '\n';
    }
  }
  if (!out) throw DataError("failed writing hierarchy " + path.string());
}

}  // namespace citetax
