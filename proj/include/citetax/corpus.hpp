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

#ifndef CITETAX_CORPUS_HPP_
#define CITETAX_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "citetax/common.hpp"

namespace citetax {

enum class DocType { kArticle, kReview, kOther };

std::string_view to_string(DocType type);
std::optional<DocType> parse_doc_type(std::string_view text);

struct Document {
  std::string doc_id;
  std::optional<int> pub_year;
  DocType doc_type = DocType::kOther;
  std::optional<std::string> journal_id;
  // Indexed source item, as opposed to an item known only as a reference.
  bool is_source = false;
  std::optional<int> n_authors;
  std::optional<bool> core_author_flag;
};

struct CitationEdge {
  DocIndex citing = 0;
  DocIndex cited = 0;
  friend auto operator<=>(const CitationEdge&, const CitationEdge&) = default;
};

struct IngestionConfig {
  int min_year = 1800;
  int max_year = 2100;
  bool has_header = false;
};

// Row-level outcome of ingestion.
struct IngestDiagnostics {
  std::size_t doc_rows = 0;
  std::size_t rejected_docs = 0;
  std::size_t cite_rows = 0;
  std::size_t rejected_edges = 0;
  std::size_t self_citations = 0;
  std::size_t duplicate_edges = 0;
  std::size_t malformed_ids = 0;
  std::size_t stubs_created = 0;
  std::vector<std::string> messages;

  std::string summary() const;
};

// Immutable, id-interned document index plus the deduplicated citation edge
// list. Dense ids follow lexicographic order of doc_id, so the index does
// not depend on input row order.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<Document> docs, std::vector<CitationEdge> edges);

  std::size_t size() const { return docs_.size(); }
  const Document& doc(DocIndex i) const { return docs_[i]; }
  const std::vector<Document>& docs() const { return docs_; }
  std::optional<DocIndex> find(std::string_view doc_id) const;
  DocIndex at(std::string_view doc_id) const;

  // Sorted by (citing, cited).
  std::span<const CitationEdge> edges() const { return edges_; }
  std::span<const DocIndex> refs(DocIndex i) const;
  std::span<const DocIndex> citers(DocIndex i) const;

  std::size_t n_source() const;
  // Min and max year over source documents.
  YearRange source_years() const;

  // In-degree counting only citing documents whose year lies in `window`.
  std::vector<std::uint32_t> citation_counts(const YearRange& window) const;

 private:
  std::vector<Document> docs_;
  std::vector<CitationEdge> edges_;
  std::unordered_map<std::string, DocIndex> index_;
  std::vector<std::size_t> ref_offsets_;
  std::vector<std::size_t> citer_offsets_;
  std::vector<DocIndex> citers_;
  std::vector<DocIndex> ref_targets_;
};

struct LoadedCorpus {
  Corpus corpus;
  IngestDiagnostics diagnostics;
};

// Parses docs.tsv and cites.tsv. Malformed rows are rejected with a
// diagnostic; an unreadable file throws DataError.
LoadedCorpus load_corpus(const std::filesystem::path& docs_path,
                         const std::filesystem::path& cites_path,
                         const IngestionConfig& config);
LoadedCorpus load_corpus(std::istream& docs, std::istream& cites,
                         const IngestionConfig& config);

// Loads a directory written by write_corpus.
Corpus load_corpus_dir(const std::filesystem::path& dir);

// Writes normalized docs.tsv/cites.tsv (stubs included) to `dir`.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);
void write_docs(const Corpus& corpus, std::ostream& out);
void write_cites(const Corpus& corpus, std::ostream& out);

// Documents that may take part in clustering: every source document, plus
// non-source documents cited at least `min_cites` times in `edges`.
std::vector<bool> filter_nonsource_by_citations(
    const Corpus& corpus, std::span<const CitationEdge> edges, int min_cites);

struct CorpusStats {
  std::size_t n_docs = 0;
  std::size_t n_source = 0;
  std::size_t n_nonsource = 0;
  std::size_t n_edges = 0;
  std::vector<std::uint32_t> refs_per_doc;
  std::vector<std::uint32_t> cites_per_doc;
};

CorpusStats compute_stats(const Corpus& corpus, const YearRange& citing_window);

}  // namespace citetax

#endif  // CITETAX_CORPUS_HPP_
