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

#include "citetax/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace citetax {
namespace {

bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  return std::none_of(id.begin(), id.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c < 0x20;
  });
}

std::optional<bool> parse_bool(std::string_view text) {
  if (text == "1" || text == "true" || text == "yes" || text == "TRUE") return true;
  if (text == "0" || text == "false" || text == "no" || text == "FALSE") return false;
  return std::nullopt;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  return in;
}

}  // namespace

std::string_view to_string(DocType type) {
  switch (type) {
    case DocType::kArticle: return "article";
    case DocType::kReview: return "review";
    case DocType::kOther: return "other";
  }
  return "other";
}

std::optional<DocType> parse_doc_type(std::string_view text) {
  if (text == "article") return DocType::kArticle;
  if (text == "review") return DocType::kReview;
  if (text == "other") return DocType::kOther;
  return std::nullopt;
}

std::string IngestDiagnostics::summary() const {
  std::ostringstream out;
  out << "doc_rows\t" << doc_rows << "\n"
      << "rejected_docs\t" << rejected_docs << "\n"
      << "cite_rows\t" << cite_rows << "\n"
      << "rejected_edges\t" << rejected_edges << "\n"
      << "self_citations\t" << self_citations << "\n"
      << "duplicate_edges\t" << duplicate_edges << "\n"
      << "malformed_ids\t" << malformed_ids << "\n"
      << "stubs_created\t" << stubs_created << "\n";
  return out.str();
}

Corpus::Corpus(std::vector<Document> docs, std::vector<CitationEdge> edges)
    : docs_(std::move(docs)), edges_(std::move(edges)) {
  index_.reserve(docs_.size());
  for (DocIndex i = 0; i < docs_.size(); ++i) {
    if (!index_.emplace(docs_[i].doc_id, i).second) {
      throw DataError("duplicate doc_id " + docs_[i].doc_id);
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  const std::size_t n = docs_.size();
  ref_offsets_.assign(n + 1, 0);
  citer_offsets_.assign(n + 1, 0);
  for (const auto& e : edges_) {
    if (e.citing >= n || e.cited >= n) throw DataError("edge references unknown document");
    ++ref_offsets_[e.citing + 1];
    ++citer_offsets_[e.cited + 1];
  }
  std::partial_sum(ref_offsets_.begin(), ref_offsets_.end(), ref_offsets_.begin());
  std::partial_sum(citer_offsets_.begin(), citer_offsets_.end(), citer_offsets_.begin());
  ref_targets_.resize(edges_.size());
  citers_.resize(edges_.size());
  std::vector<std::size_t> fill(citer_offsets_.begin(), citer_offsets_.end() - 1);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    ref_targets_[k] = edges_[k].cited;
    citers_[fill[edges_[k].cited]++] = edges_[k].citing;
  }
}

std::optional<DocIndex> Corpus::find(std::string_view doc_id) const {
  auto it = index_.find(std::string(doc_id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

DocIndex Corpus::at(std::string_view doc_id) const {
  auto found = find(doc_id);
  if (!found) throw DataError("unknown doc_id " + std::string(doc_id));
  return *found;
}

std::span<const DocIndex> Corpus::refs(DocIndex i) const {
  return std::span<const DocIndex>(ref_targets_).subspan(
      ref_offsets_[i], ref_offsets_[i + 1] - ref_offsets_[i]);
}

std::span<const DocIndex> Corpus::citers(DocIndex i) const {
  return std::span<const DocIndex>(citers_).subspan(
      citer_offsets_[i], citer_offsets_[i + 1] - citer_offsets_[i]);
}

std::size_t Corpus::n_source() const {
  return static_cast<std::size_t>(std::count_if(
      docs_.begin(), docs_.end(), [](const Document& d) { return d.is_source; }));
}

YearRange Corpus::source_years() const {
  YearRange range{1, 0};
  bool any = false;
  for (const auto& d : docs_) {
    if (!d.is_source || !d.pub_year) continue;
    if (!any) {
      range = {*d.pub_year, *d.pub_year};
      any = true;
    }
    range.first = std::min(range.first, *d.pub_year);
    range.last = std::max(range.last, *d.pub_year);
  }
  return range;
}

std::vector<std::uint32_t> Corpus::citation_counts(const YearRange& window) const {
  std::vector<std::uint32_t> counts(docs_.size(), 0);
  for (const auto& e : edges_) {
    if (window.contains(docs_[e.citing].pub_year)) ++counts[e.cited];
  }
  return counts;
}

LoadedCorpus load_corpus(std::istream& docs_in, std::istream& cites_in,
                         const IngestionConfig& config) {
  IngestDiagnostics diag;
  std::unordered_map<std::string, Document> accepted;
  std::unordered_set<std::string> rejected;
  auto reject_doc = [&](std::size_t line_no, const std::string& why) {
    ++diag.rejected_docs;
    diag.messages.push_back("docs:" + std::to_string(line_no) + ": " + why);
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(docs_in, line)) {
    ++line_no;
    if (line_no == 1 && config.has_header) continue;
    if (line.empty() || line == "\r") continue;
    ++diag.doc_rows;
    const auto f = split_tabs(line);
    if (f.size() < 5 || f.size() > 7) {
      reject_doc(line_no, "expected 5-7 columns, got " + std::to_string(f.size()));
      continue;
    }
    if (!valid_id(f[0])) {
      ++diag.malformed_ids;
      reject_doc(line_no, "malformed doc_id");
      continue;
    }
    std::string id(f[0]);
    if (accepted.contains(id) || rejected.contains(id)) {
      reject_doc(line_no, "duplicate doc_id " + id);
      continue;
    }
    Document doc;
    doc.doc_id = id;
    auto is_source = parse_bool(f[4]);
    auto type = parse_doc_type(f[2]);
    if (!is_source || !type) {
      reject_doc(line_no, "bad is_source or doc_type for " + id);
      rejected.insert(id);
      continue;
    }
    doc.is_source = *is_source;
    doc.doc_type = *type;
    if (!f[1].empty()) {
      auto year = parse_int(f[1]);
      if (!year) {
        reject_doc(line_no, "bad pub_year for " + id);
        rejected.insert(id);
        continue;
      }
      if (*year < config.min_year || *year > config.max_year) {
        reject_doc(line_no, "pub_year " + std::string(f[1]) + " outside window for " + id);
        rejected.insert(id);
        continue;
      }
      doc.pub_year = static_cast<int>(*year);
    } else if (doc.is_source) {
      reject_doc(line_no, "source document without pub_year: " + id);
      rejected.insert(id);
      continue;
    }
    if (!f[3].empty()) doc.journal_id = std::string(f[3]);
    if (f.size() > 5 && !f[5].empty()) {
      auto authors = parse_int(f[5]);
      if (!authors || *authors < 0) {
        reject_doc(line_no, "bad n_authors for " + id);
        rejected.insert(id);
        continue;
      }
      doc.n_authors = static_cast<int>(*authors);
    }
    if (f.size() > 6 && !f[6].empty()) {
      auto core = parse_bool(f[6]);
      if (!core) {
        reject_doc(line_no, "bad core_author_flag for " + id);
        rejected.insert(id);
        continue;
      }
      doc.core_author_flag = *core;
    }
    accepted.emplace(id, std::move(doc));
  }

  std::vector<std::pair<std::string, std::string>> raw_edges;
  std::unordered_set<std::string> stubs;
  auto reject_edge = [&](std::size_t n, const std::string& why) {
    ++diag.rejected_edges;
    diag.messages.push_back("cites:" + std::to_string(n) + ": " + why);
  };
  line_no = 0;
  while (std::getline(cites_in, line)) {
    ++line_no;
    if (line_no == 1 && config.has_header) continue;
    if (line.empty() || line == "\r") continue;
    ++diag.cite_rows;
    const auto f = split_tabs(line);
    if (f.size() != 2) {
      reject_edge(line_no, "expected 2 columns");
      continue;
    }
    if (!valid_id(f[0]) || !valid_id(f[1])) {
      ++diag.malformed_ids;
      reject_edge(line_no, "malformed identifier");
      continue;
    }
    std::string citing(f[0]), cited(f[1]);
    if (citing == cited) {
      ++diag.self_citations;
      reject_edge(line_no, "self-citation " + citing);
      continue;
    }
    auto it = accepted.find(citing);
    if (it == accepted.end() || !it->second.is_source) {
      reject_edge(line_no, "citing document " + citing + " is not a listed source");
      continue;
    }
    if (rejected.contains(cited)) {
      reject_edge(line_no, "cited document " + cited + " was rejected");
      continue;
    }
    if (!accepted.contains(cited) && stubs.insert(cited).second) {
      ++diag.stubs_created;
    }
    raw_edges.emplace_back(std::move(citing), std::move(cited));
  }

  std::vector<Document> docs;
  docs.reserve(accepted.size() + stubs.size());
  for (auto& [id, doc] : accepted) docs.push_back(std::move(doc));
  for (const auto& id : stubs) {
    Document stub;
    stub.doc_id = id;
    docs.push_back(std::move(stub));
  }
  std::sort(docs.begin(), docs.end(),
            [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
  std::unordered_map<std::string_view, DocIndex> dense;
  dense.reserve(docs.size());
  for (DocIndex i = 0; i < docs.size(); ++i) dense.emplace(docs[i].doc_id, i);

  std::vector<CitationEdge> edges;
  edges.reserve(raw_edges.size());
  for (const auto& [citing, cited] : raw_edges) {
    edges.push_back({dense.at(citing), dense.at(cited)});
  }
  std::sort(edges.begin(), edges.end());
  const auto before = edges.size();
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  diag.duplicate_edges = before - edges.size();

  return {Corpus(std::move(docs), std::move(edges)), std::move(diag)};
}

LoadedCorpus load_corpus(const std::filesystem::path& docs_path,
                         const std::filesystem::path& cites_path,
                         const IngestionConfig& config) {
  auto docs = open_or_throw(docs_path);
  auto cites = open_or_throw(cites_path);
  return load_corpus(docs, cites, config);
}

Corpus load_corpus_dir(const std::filesystem::path& dir) {
  IngestionConfig config;
  config.min_year = std::numeric_limits<int>::min();
  config.max_year = std::numeric_limits<int>::max();
  auto loaded = load_corpus(dir / "docs.tsv", dir / "cites.tsv", config);
  if (loaded.diagnostics.rejected_docs + loaded.diagnostics.rejected_edges > 0) {
    throw DataError("corpus directory " + dir.string() + " is not normalized");
  }
  return std::move(loaded.corpus);
}

void write_docs(const Corpus& corpus, std::ostream& out) {
  for (const auto& d : corpus.docs()) {
    out << d.doc_id << '\t' << (d.pub_year ? std::to_string(*d.pub_year) : "")
        << '\t' << to_string(d.doc_type) << '\t' << d.journal_id.value_or("")
        << '\t' << (d.is_source ? 1 : 0) << '\t'
        << (d.n_authors ? std::to_string(*d.n_authors) : "") << '\t'
        << (d.core_author_flag ? (*d.core_author_flag ? "1" : "0") : "") << '\n';
  }
}

void write_cites(const Corpus& corpus, std::ostream& out) {
  for (const auto& e : corpus.edges()) {
    out << corpus.doc(e.citing).doc_id << '\t' << corpus.doc(e.cited).doc_id << '\n';
  }
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream docs(dir / "docs.tsv");
  write_docs(corpus, docs);
  std::ofstream cites(dir / "cites.tsv");
  write_cites(corpus, cites);
  if (!docs || !cites) throw DataError("failed writing corpus to " + dir.string());
}

std::vector<bool> filter_nonsource_by_citations(
    const Corpus& corpus, std::span<const CitationEdge> edges, int min_cites) {
  std::vector<std::uint32_t> indegree(corpus.size(), 0);
  for (const auto& e : edges) ++indegree[e.cited];
  std::vector<bool> retained(corpus.size());
  for (DocIndex i = 0; i < corpus.size(); ++i) {
    retained[i] = corpus.doc(i).is_source ||
                  indegree[i] >= static_cast<std::uint32_t>(std::max(min_cites, 0));
  }
  return retained;
}

CorpusStats compute_stats(const Corpus& corpus, const YearRange& citing_window) {
  CorpusStats stats;
  stats.n_docs = corpus.size();
  stats.n_source = corpus.n_source();
  stats.n_nonsource = stats.n_docs - stats.n_source;
  stats.n_edges = corpus.edges().size();
  stats.refs_per_doc.resize(corpus.size());
  for (DocIndex i = 0; i < corpus.size(); ++i) {
    stats.refs_per_doc[i] = static_cast<std::uint32_t>(corpus.refs(i).size());
  }
  stats.cites_per_doc = corpus.citation_counts(citing_window);
  return stats;
}

}  // namespace citetax
