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

#ifndef CITETAX_GOLDSTD_HPP_
#define CITETAX_GOLDSTD_HPP_

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "citetax/corpus.hpp"
#include "citetax/taxonomy.hpp"

namespace citetax {

struct GoldStandard {
  DocIndex doc = 0;
  // All references of the gold document.
  std::size_t n_refs_total = 0;
  // References covered by the baseline taxonomy (the Herfindahl denominator).
  std::size_t n_refs_resolvable = 0;
  // References whose publication year lies inside the corpus year range.
  std::size_t n_refs_in_window = 0;
  // The resolvable references, ascending.
  std::vector<DocIndex> ref_ids;
};

struct GoldSelection {
  std::size_t min_refs = 100;
  double coverage_floor = 0.80;
  int citing_year = 2010;
};

// Articles and reviews of the citing year with at least min_refs references
// of which at least coverage_floor are covered by `baseline`. Both
// thresholds are inclusive.
std::vector<GoldStandard> select_gold_standards(const Corpus& corpus, const Taxonomy& baseline,
                                                const GoldSelection& selection);

// Rebuilds gold standards for the listed documents against `baseline`.
std::vector<GoldStandard> gold_standards_for(const Corpus& corpus, const Taxonomy& baseline,
                                             const std::vector<DocIndex>& docs);

// gold.tsv: `doc_id TAB n_refs TAB n_resolvable`.
void write_gold(const std::vector<GoldStandard>& golds, const Corpus& corpus,
                const std::filesystem::path& path);
std::vector<DocIndex> read_gold_ids(const std::filesystem::path& path, const Corpus& corpus);

struct BinRow {
  std::string label;
  std::size_t n_doc = 0;
  double mean_refs = 0.0;
  double mean_cited = 0.0;
  // Averages over documents with the field present; nullopt when none are.
  std::optional<double> mean_authors;
  std::optional<double> pct_core;
  double pct_uncited = 0.0;
  double pct_review = 0.0;
};

struct BinConfig {
  int citing_year = 2010;
  // Citations are counted from documents published in
  // [citing_year, citation_horizon].
  int citation_horizon = 2012;
};

// Reference-count bin label for a document with `n_refs` >= 1 references.
std::string reference_bin(std::size_t n_refs);

// Articles and reviews of the citing year with at least one reference,
// binned by reference count: 1-9, 10-19, ..., 90-99, 100-199, 200+. Empty
// bins are included with n_doc = 0; a final "Total" row covers all.
std::vector<BinRow> bin_statistics(const Corpus& corpus, const BinConfig& config);

enum class Stratum { kBelow, kAtOrAbove };

using CorrelationMatrix = std::array<std::array<double, 4>, 4>;

// Pearson correlations of log(cites + 1), log(refs), log(authors) and the
// core-author indicator over articles/reviews of the citing year with refs
// below (or at/above) ref_threshold. Rows lacking author count or core flag
// are skipped. Throws DataError with fewer than 3 rows.
CorrelationMatrix correlation_matrix(const Corpus& corpus, const BinConfig& config,
                                     std::size_t ref_threshold, Stratum side,
                                     std::size_t* n_rows = nullptr);

void write_bin_csv(const std::vector<BinRow>& rows, std::ostream& out);
void write_correlation_csv(const CorrelationMatrix& m, std::size_t n_rows, std::ostream& out);

}  // namespace citetax

#endif  // CITETAX_GOLDSTD_HPP_
