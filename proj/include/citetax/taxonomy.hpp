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

#ifndef CITETAX_TAXONOMY_HPP_
#define CITETAX_TAXONOMY_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "citetax/corpus.hpp"

namespace citetax {

enum class TaxonomyKind { kDocumentPartition, kJournalScheme, kJournalIdentity };

std::string_view to_string(TaxonomyKind kind);
TaxonomyKind parse_taxonomy_kind(std::string_view text);

struct Membership {
  int cluster = 0;
  double fraction = 1.0;
  friend bool operator==(const Membership&, const Membership&) = default;
};

// How a document entered a document partition.
enum class Provenance : std::uint8_t { kNone, kClustered, kAssigned };

// A labelled, possibly fractional partition of corpus documents. A document
// with no memberships is uncovered.
struct Taxonomy {
  std::string name;
  TaxonomyKind kind = TaxonomyKind::kDocumentPartition;
  // Indexed by DocIndex; size equals the corpus size.
  std::vector<std::vector<Membership>> membership;
  std::vector<std::string> cluster_labels;
  // Empty, or one entry per document.
  std::vector<Provenance> provenance;

  int n_clusters() const { return static_cast<int>(cluster_labels.size()); }
  bool covers(DocIndex doc) const { return !membership[doc].empty(); }
  std::size_t coverage_doc_count() const;
  // Summed membership fractions per cluster.
  std::vector<double> cluster_sizes() const;
  // Throws DataError if a covered document's fractions do not sum to 1.
  void validate() const;
};

// Builds a document partition from per-document cluster ids (kNoCluster for
// absent documents). Labels are the decimal cluster ids.
Taxonomy taxonomy_from_assignment(std::string name, const std::vector<int>& cluster_of_doc,
                                  int n_clusters);

struct SchemeEntry {
  std::string category;
  std::optional<double> fraction;
};

struct JournalScheme {
  std::string scheme_name;
  std::map<std::string, std::vector<SchemeEntry>> categories;
  // Top-level categories, used only for journals absent from `categories`.
  std::map<std::string, std::vector<SchemeEntry>> two_tier_fallback;
};

// Reads rows `journal_id TAB scheme TAB category_id TAB fraction TAB tier`
// for one scheme. Throws DataError if the file is unreadable or does not
// mention the scheme.
JournalScheme load_journal_scheme(const std::filesystem::path& path,
                                  const std::string& scheme_name);
JournalScheme parse_journal_scheme(std::istream& in, const std::string& scheme_name);

// Every document inherits the categories of its journal; fractions are
// equal unless the scheme supplies them.
Taxonomy project_journal_scheme(const Corpus& corpus, const JournalScheme& scheme);

// One cluster per distinct journal_id.
Taxonomy journal_identity_taxonomy(const Corpus& corpus);

// Documents with pub_year <= year_cutoff covered by both `taxonomy` and
// `baseline`, over those covered by `baseline`.
double relative_coverage(const Taxonomy& taxonomy, const Taxonomy& baseline,
                         const Corpus& corpus, int year_cutoff);

// Partition file rows `doc_id TAB level TAB cluster_id [TAB clustered|assigned]`.
// Returns one taxonomy per level present, ascending by level.
std::map<int, Taxonomy> read_partition_file(const std::filesystem::path& path,
                                            const Corpus& corpus, const std::string& name);
void write_partition_file(const Taxonomy& taxonomy, int level, const Corpus& corpus,
                          const std::filesystem::path& path);
void write_partition_file(const Taxonomy& taxonomy, int level, const Corpus& corpus,
                          std::ostream& out);

// Fractional taxonomy file: `doc_id TAB cluster_label TAB fraction`, with a
// sidecar `<path>.meta` naming the kind.
void write_taxonomy_file(const Taxonomy& taxonomy, const Corpus& corpus,
                         const std::filesystem::path& path);
Taxonomy read_taxonomy_file(const std::filesystem::path& path, const Corpus& corpus,
                            const std::string& name);

}  // namespace citetax

#endif  // CITETAX_TAXONOMY_HPP_
