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

#ifndef CITETAX_ORACLE_HPP_
#define CITETAX_ORACLE_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "citetax/corpus.hpp"
#include "citetax/network.hpp"
#include "citetax/taxonomy.hpp"

namespace citetax {

// Largest network exhaustive_best_partition accepts (Bell(10) = 115975).
inline constexpr int kMaxExhaustiveNodes = 10;

struct ExhaustiveResult {
  // Restricted growth string: node 0 is in cluster 0 and each node joins an
  // existing cluster or opens cluster max + 1.
  std::vector<int> cluster;
  double quality = 0.0;
  std::size_t n_evaluated = 0;
};

// Global optimum by enumerating every set partition. Among equal optima the
// lexicographically smallest assignment wins. Throws UsageError above
// kMaxExhaustiveNodes nodes.
ExhaustiveResult exhaustive_best_partition(const Network& net, QualityKind kind,
                                           double resolution);

// Connected network on n nodes: a random spanning tree plus each remaining
// pair with probability `extra_edge_p`, weights uniform in (0, 1].
Network random_connected_network(int n, double extra_edge_p, std::uint64_t seed,
                                 QualityKind kind = QualityKind::kCPM);

// Planted-topic citation corpus.
struct SynthSpec {
  int n_topics = 4;
  int docs_per_topic_per_year = 200;
  YearRange years{1999, 2013};
  // Relative weights of citing a given other topic vs one's own: a reference
  // stays within topic with probability p_in / (p_in + (n_topics - 1) p_out).
  double p_in = 0.20;
  double p_out = 0.01;
  // Fraction of documents emitted as review papers with review_refs
  // references, at least 90% of them within topic.
  double review_rate = 0.025;
  int review_refs = 120;
  // Mean reference count of a regular paper.
  int refs_per_doc = 20;
  // Mean age of a reference in years; ages are 1 + geometric.
  double mean_ref_age = 5.0;
  // Fraction of documents emitted as non-source items.
  double nonsource_rate = 0.05;
  int journals_per_topic = 3;
  // Share of source documents published in the multidisciplinary journal.
  double multidisciplinary_rate = 0.05;
  std::uint64_t seed = 7;

  void validate() const;
};

struct SynthCorpus {
  Corpus corpus;
  // Planted topic per DocIndex.
  std::vector<int> topic;
  // Rows of journal_scheme.tsv for scheme "SYN".
  JournalScheme scheme;
};

// Throws DataError when the requested corpus cannot be realised (for example too few
// earlier documents to give a review its references).
SynthCorpus generate_corpus(const SynthSpec& spec);

// docs.tsv, cites.tsv, truth.tsv and journal_scheme.tsv.
void write_synth(const SynthCorpus& synth, const std::filesystem::path& dir);

// Adjusted Rand index over the items labelled (>= 0) in both vectors.
// Throws DataError when no item is labelled in both.
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace citetax

#endif  // CITETAX_ORACLE_HPP_
