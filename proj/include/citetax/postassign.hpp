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

#ifndef CITETAX_POSTASSIGN_HPP_
#define CITETAX_POSTASSIGN_HPP_

#include <optional>
#include <span>
#include <vector>

#include "citetax/taxonomy.hpp"

namespace citetax {

struct AssignmentRule {
  // Minimum share of citations the dominant cluster must hold (inclusive).
  double dominance_threshold = 0.40;
  // Minimum number of citations from clustered documents.
  int min_citations = 2;

  void validate() const;
};

// Decides the cluster for one cited reference given the clusters of the
// clustered documents citing it (one entry per citation). Returns nullopt
// when the reference is cited too rarely, the top count is tied, or the top
// share falls below the threshold.
std::optional<int> dominant_cluster(std::span<const int> citing_clusters,
                                    const AssignmentRule& rule);

struct AssignmentStats {
  std::size_t candidates = 0;
  std::size_t assigned = 0;
  std::size_t too_few_citations = 0;
  std::size_t tied = 0;
  std::size_t below_threshold = 0;
};

// Assigns every cited document not already in `partition` to its dominant
// cluster. Only citations from documents in the partition count. Clustered
// documents keep their cluster; provenance marks clustered vs assigned.
Taxonomy assign_cited_refs(const Taxonomy& partition, std::span<const CitationEdge> edges,
                           const AssignmentRule& rule, AssignmentStats* stats = nullptr);

}  // namespace citetax

#endif  // CITETAX_POSTASSIGN_HPP_
