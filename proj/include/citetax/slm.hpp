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

#ifndef CITETAX_SLM_HPP_
#define CITETAX_SLM_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "citetax/network.hpp"

namespace citetax {

struct ClusterParams {
  QualityKind quality = QualityKind::kCPM;
  double resolution = 1.0;
  int min_cluster_size = 1;
  int n_levels = 1;
  // One entry per level, finest level first; must be strictly decreasing.
  // Empty means {resolution}.
  std::vector<double> level_resolutions;
  // Optional per-level minimum sizes, finest first. Empty means
  // min_cluster_size on every level.
  std::vector<int> level_min_sizes;
  // Target-count mode: desired cluster count per level, finest first. When
  // non-empty the resolution of each level is searched for instead of taken
  // from level_resolutions.
  std::vector<double> level_targets;
  std::uint64_t seed = 0;
  int max_iterations = 100;
  double epsilon = 1e-12;
  int restarts = 1;
  unsigned threads = 1;

  void validate() const;
};

// One clustering level. `cluster[i]` is the cluster of network node i, or
// kNoCluster if the node's cluster was dropped. Cluster ids are dense and
// ordered by size (descending), ties by lowest member index.
struct Partition {
  int level = 1;
  std::vector<int> cluster;
  int n_clusters = 0;
  double resolution = 0.0;
  double quality_value = 0.0;
  // parent_of[c] = cluster at level - 1, or kNoCluster (coarsest level or
  // dropped parent). Empty on the coarsest level.
  std::vector<int> parent_of;
  // Quality after each outer SLM pass (first entry: singletons).
  std::vector<double> trace;
  bool hit_max_iterations = false;

  std::vector<std::int64_t> cluster_sizes(const Network& net) const;
};

// Smart local moving from singletons: repeated passes of local moving,
// per-cluster subnetwork refinement and aggregation, until a pass gains no
// more than params.epsilon. With restarts > 1 the best run wins.
Partition smart_local_moving(const Network& net, const ClusterParams& params);

// Quality of a partition over every node of `net`.
double partition_quality(const Network& net, const Partition& partition,
                         QualityKind kind, double resolution);

// Repeatedly takes the smallest cluster below `min_size` and merges it into
// the neighbouring cluster with the largest connecting weight (ties: lower
// id); a small cluster without external edges is dropped.
Partition enforce_min_size(const Network& net, const Partition& partition, int min_size);

// Clusters `net` at a searched resolution so that the number of clusters
// surviving min-size enforcement lies within +-20% of `target`.
Partition cluster_to_target(const Network& net, const ClusterParams& params, double target,
                            int min_size);

// Hierarchical clustering. The finest level is clustered first; each coarser
// level clusters the network reduced to the surviving clusters of the level
// below. Result index 0 is level 1 (coarsest), back() is the finest level
// (level n_levels). Every partition's `cluster` is expressed over the nodes
// of `net`.
std::vector<Partition> build_hierarchy(const Network& net, const ClusterParams& params);

// Partition file rows `doc_id TAB level TAB cluster_id`.
void write_partition(const std::vector<Partition>& levels, const SimilarityGraph& graph,
                     const Corpus& corpus, const std::filesystem::path& path);
// Hierarchy file rows `level TAB cluster_id TAB parent_cluster_id`.
void write_hierarchy(const std::vector<Partition>& levels, const std::filesystem::path& path);

}  // namespace citetax

#endif  // CITETAX_SLM_HPP_
