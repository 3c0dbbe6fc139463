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

#ifndef CITETAX_GRAPHBUILD_HPP_
#define CITETAX_GRAPHBUILD_HPP_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "citetax/common.hpp"
#include "citetax/corpus.hpp"

namespace citetax {

enum class SimilarityMethod { kDC, kBC, kCC };

std::string_view to_string(SimilarityMethod method);
SimilarityMethod parse_similarity_method(std::string_view text);

struct WeightedEdge {
  DocIndex u = 0;
  DocIndex v = 0;
  double w = 0.0;
};

// Undirected weighted graph over corpus documents. Edges are stored with
// u < v, sorted by (u, v), with strictly positive weights.
struct SimilarityGraph {
  SimilarityMethod method = SimilarityMethod::kDC;
  YearRange window;
  // Documents incident to at least one edge, ascending.
  std::vector<DocIndex> nodes;
  std::vector<WeightedEdge> edges;
  // Candidate documents left without any edge.
  std::vector<DocIndex> uncovered;
  // Thresholds and options used to build the graph.
  std::map<std::string, std::string> params;
};

// Accumulates (u, v, w) triples and yields them merged (weights summed per
// pair) in (u, v) order. When the in-memory buffer fills it is sorted,
// collapsed and spilled to a temporary run file; merge() k-way merges the
// runs. Peak memory is bounded by the buffer plus one record per run.
class EdgeRunMerger {
 public:
  explicit EdgeRunMerger(std::size_t buffer_edges = std::size_t{1} << 22,
                         std::filesystem::path tmp_dir = {});
  ~EdgeRunMerger();
  EdgeRunMerger(const EdgeRunMerger&) = delete;
  EdgeRunMerger& operator=(const EdgeRunMerger&) = delete;

  void add(DocIndex u, DocIndex v, double w);
  // May be called repeatedly; every call visits the same merged stream.
  void merge(const std::function<void(const WeightedEdge&)>& visit);
  std::size_t n_runs() const { return runs_.size(); }

 private:
  void collapse_buffer();
  void spill();

  std::size_t capacity_;
  std::filesystem::path tmp_dir_;
  std::vector<WeightedEdge> buffer_;
  std::vector<std::filesystem::path> runs_;
};

struct BuildOptions {
  // Edge buffer size for the run merger.
  std::size_t buffer_edges = std::size_t{1} << 22;
  unsigned threads = 1;
};

// Direct citation: one unit-weight edge per citing-cited pair whose citing
// document was published in `years`. Non-source documents cited fewer than
// `min_nonsource_cites` times in that window are excluded.
SimilarityGraph build_dc(const Corpus& corpus, const YearRange& years,
                         int min_nonsource_cites = 2, const BuildOptions& opts = {});

enum class BcNormalization { kRaw, kCosine };

// Bibliographic coupling among source documents of `citing_year`. References
// cited more than `max_ref_popularity` times in that year are ignored.
SimilarityGraph build_bc(const Corpus& corpus, int citing_year,
                         int max_ref_popularity = 100,
                         BcNormalization norm = BcNormalization::kRaw,
                         const BuildOptions& opts = {});

enum class CcNormalization { kRaw, kAssociationStrength };

// Co-citation among documents cited at least twice by source documents
// published in `years`; keeps the union of every node's top_n edges.
SimilarityGraph build_cc(const Corpus& corpus, const YearRange& years, int top_n = 10,
                         CcNormalization norm = CcNormalization::kRaw,
                         const BuildOptions& opts = {});

// Keeps edge (u,v) iff it ranks among the top_n edges of u or of v. Ranking
// is by weight descending, then partner index ascending. `edges` must be
// sorted by (u, v) with u < v.
std::vector<WeightedEdge> retain_top_n_union(const std::vector<WeightedEdge>& edges,
                                             int top_n);

// Graph file: `u TAB v TAB w` in dense corpus indices, sorted by (u, v);
// sidecar `<path>.meta` holds `key=value` lines.
void write_graph(const SimilarityGraph& graph, const std::filesystem::path& path);
SimilarityGraph read_graph(const std::filesystem::path& path);

}  // namespace citetax

#endif  // CITETAX_GRAPHBUILD_HPP_
