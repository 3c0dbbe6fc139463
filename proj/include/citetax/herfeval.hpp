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

#ifndef CITETAX_HERFEVAL_HPP_
#define CITETAX_HERFEVAL_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "citetax/goldstd.hpp"
#include "citetax/taxonomy.hpp"

namespace citetax {

// Reference shares of one gold paper over one taxonomy's clusters.
struct ShareVector {
  DocIndex paper = 0;
  std::string taxonomy;
  // Summed (possibly fractional) reference counts per real cluster, keyed by
  // cluster id.
  std::map<int, double> counts;
  // Resolvable references missing from the taxonomy; each is its own
  // singleton cluster with share 1 / N_p.
  std::size_t missing = 0;
  // Denominator: references resolvable in the baseline.
  std::size_t n_p = 0;

  // (cluster id, share) including one entry per missing reference, which
  // get synthetic ids -1, -2, ...
  std::vector<std::pair<int, double>> shares() const;
  double herfindahl() const;
};

// Resolvable refs of `gold` are those covered by `baseline`. Throws
// DataError when there are none.
ShareVector share_vector(const GoldStandard& gold, const Taxonomy& taxonomy,
                         const Taxonomy& baseline);

// Sum of squared shares; every missing reference contributes (1/N_p)^2.
double herfindahl_paper(const GoldStandard& gold, const Taxonomy& taxonomy,
                        const Taxonomy& baseline);

// Largest k cluster reference counts, descending, padded with zeros.
std::vector<double> top_cluster_table(const GoldStandard& gold, const Taxonomy& taxonomy,
                                      const Taxonomy& baseline, std::size_t k = 4);

// Population skewness m3 / m2^1.5 of the cluster sizes; nullopt with fewer
// than 3 clusters or zero variance.
std::optional<double> cluster_size_skewness(const Taxonomy& taxonomy);
std::optional<double> population_skewness(const std::vector<double>& values);

struct AgeDistribution {
  std::map<int, double> by_year;
  double unknown = 0.0;
  // Mean over covered documents with a known year.
  double mean_year = 0.0;
};

AgeDistribution age_distribution(const Taxonomy& taxonomy, const Corpus& corpus);

struct TaxonomyScore {
  std::string name;
  TaxonomyKind kind = TaxonomyKind::kDocumentPartition;
  int n_clusters = 0;
  double relative_coverage = 0.0;
  double mean_herfindahl = 0.0;
  std::size_t win_count = 0;
  double win_share = 0.0;
  // Papers where this taxonomy shares the maximum with another one.
  std::size_t tie_count = 0;
  std::optional<double> skewness;
};

struct PaperDetail {
  DocIndex paper = 0;
  std::string taxonomy;
  double herfindahl = 0.0;
  std::vector<double> top_counts;
};

struct EvalReport {
  std::vector<TaxonomyScore> scores;
  std::vector<PaperDetail> details;
  std::map<std::string, AgeDistribution> ages;
  std::size_t n_papers = 0;
  // Papers whose maximum was shared by two or more taxonomies.
  std::size_t tied_papers = 0;
  // Gold references covered by a compared taxonomy but not by the baseline.
  std::size_t baseline_warnings = 0;
};

struct EvalOptions {
  int coverage_year_cutoff = 2009;
  std::size_t top_k = 4;
  unsigned threads = 1;
};

// Scores every taxonomy on every gold paper. H_i is the unweighted mean of
// H_i^p; a paper's win goes to the taxonomy with the strictly largest
// value, and exact ties award no win.
EvalReport evaluate(const std::vector<GoldStandard>& golds,
                    const std::vector<const Taxonomy*>& taxonomies, const Taxonomy& baseline,
                    const Corpus& corpus, const EvalOptions& options = {});

// report.csv, detail.csv and ages.csv.
void write_report(const EvalReport& report, const Corpus& corpus,
                  const std::filesystem::path& dir);

}  // namespace citetax

#endif  // CITETAX_HERFEVAL_HPP_
