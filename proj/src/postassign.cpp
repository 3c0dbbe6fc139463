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

#include "citetax/postassign.hpp"

#include <algorithm>
#include <map>

namespace citetax {
namespace {

enum class Outcome { kAssigned, kTooFew, kTied, kBelow };

Outcome decide(std::span<const int> citing_clusters, const AssignmentRule& rule, int& cluster) {
  const auto total = citing_clusters.size();
  if (total < static_cast<std::size_t>(rule.min_citations)) return Outcome::kTooFew;
  std::map<int, std::size_t> counts;
  for (int c : citing_clusters) ++counts[c];
  std::size_t top = 0;
  std::size_t n_top = 0;
  for (const auto& [c, n] : counts) {
    if (n > top) {
      top = n;
      n_top = 1;
      cluster = c;
    } else if (n == top) {
      ++n_top;
    }
  }
  if (n_top > 1) return Outcome::kTied;
  if (static_cast<double>(top) / static_cast<double>(total) < rule.dominance_threshold) {
    return Outcome::kBelow;
  }
  return Outcome::kAssigned;
}

}  // namespace

void AssignmentRule::validate() const {
  if (!(dominance_threshold > 0.0) || dominance_threshold > 1.0) {
    throw UsageError("dominance threshold must lie in (0, 1]");
  }
  if (min_citations < 1) throw UsageError("min citations must be >= 1");
}

std::optional<int> dominant_cluster(std::span<const int> citing_clusters,
                                    const AssignmentRule& rule) {
  int cluster = kNoCluster;
  if (decide(citing_clusters, rule, cluster) != Outcome::kAssigned) return std::nullopt;
  return cluster;
}

Taxonomy assign_cited_refs(const Taxonomy& partition, std::span<const CitationEdge> edges,
                           const AssignmentRule& rule, AssignmentStats* stats) {
  rule.validate();
  if (partition.kind != TaxonomyKind::kDocumentPartition) {
    throw UsageError("reference assignment needs a document partition");
  }
  Taxonomy out = partition;
  const std::size_t n = partition.membership.size();
  if (out.provenance.size() != n) {
    out.provenance.assign(n, Provenance::kNone);
    for (std::size_t d = 0; d < n; ++d) {
      if (partition.covers(static_cast<DocIndex>(d))) out.provenance[d] = Provenance::kClustered;
    }
  }

  // Edges are sorted by citing document; regroup by cited document.
  std::vector<std::vector<int>> citing_clusters(n);
  for (const auto& e : edges) {
    if (e.cited >= n || e.citing >= n) throw DataError("edge outside partition universe");
    if (partition.covers(e.cited) || !partition.covers(e.citing)) continue;
    citing_clusters[e.cited].push_back(partition.membership[e.citing].front().cluster);
  }

  AssignmentStats local;
  for (std::size_t d = 0; d < n; ++d) {
    if (citing_clusters[d].empty()) continue;
    ++local.candidates;
    int cluster = kNoCluster;
    switch (decide(citing_clusters[d], rule, cluster)) {
      case Outcome::kAssigned:
        out.membership[d] = {{cluster, 1.0}};
        out.provenance[d] = Provenance::kAssigned;
        ++local.assigned;
        break;
      case Outcome::kTooFew: ++local.too_few_citations; break;
      case Outcome::kTied: ++local.tied; break;
      case Outcome::kBelow: ++local.below_threshold; break;
    }
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace citetax
