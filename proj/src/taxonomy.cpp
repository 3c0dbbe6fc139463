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

#include "citetax/taxonomy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace citetax {
namespace {

// Numeric labels sort numerically and before any non-numeric label.
bool label_less(const std::string& a, const std::string& b) {
  const auto na = parse_int(a);
  const auto nb = parse_int(b);
  if (na && nb) return *na < *nb;
  if (na != nb) return static_cast<bool>(na);
  return a < b;
}

std::map<std::string, int> intern_labels(const std::set<std::string>& labels,
                                         std::vector<std::string>& out) {
  out.assign(labels.begin(), labels.end());
  std::sort(out.begin(), out.end(), label_less);
  std::map<std::string, int> ids;
  for (std::size_t k = 0; k < out.size(); ++k) ids.emplace(out[k], static_cast<int>(k));
  return ids;
}

std::vector<std::pair<std::string, double>> resolve_fractions(
    const std::string& journal, const std::vector<SchemeEntry>& entries) {
  std::map<std::string, double> merged;
  const bool explicit_all = std::all_of(entries.begin(), entries.end(),
                                        [](const SchemeEntry& e) { return e.fraction.has_value(); });
  for (const auto& e : entries) {
    merged[e.category] += explicit_all ? *e.fraction : 1.0;
  }
  double total = 0.0;
  for (const auto& [cat, f] : merged) total += f;
  if (!(total > 0.0)) throw DataError("journal " + journal + " has non-positive fractions");
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [cat, f] : merged) out.emplace_back(cat, f / total);
  return out;
}

}  // namespace

std::string_view to_string(TaxonomyKind kind) {
  switch (kind) {
    case TaxonomyKind::kDocumentPartition: return "document_partition";
    case TaxonomyKind::kJournalScheme: return "journal_scheme";
    case TaxonomyKind::kJournalIdentity: return "journal_identity";
  }
  return "document_partition";
}

TaxonomyKind parse_taxonomy_kind(std::string_view text) {
  if (text == "document_partition") return TaxonomyKind::kDocumentPartition;
  if (text == "journal_scheme") return TaxonomyKind::kJournalScheme;
  if (text == "journal_identity") return TaxonomyKind::kJournalIdentity;
  throw DataError("unknown taxonomy kind '" + std::string(text) + "'");
}

std::size_t Taxonomy::coverage_doc_count() const {
  return static_cast<std::size_t>(std::count_if(
      membership.begin(), membership.end(), [](const auto& m) { return !m.empty(); }));
}

std::vector<double> Taxonomy::cluster_sizes() const {
  std::vector<double> sizes(cluster_labels.size(), 0.0);
  for (const auto& entries : membership) {
    for (const auto& m : entries) sizes[m.cluster] += m.fraction;
  }
  return sizes;
}

void Taxonomy::validate() const {
  for (std::size_t d = 0; d < membership.size(); ++d) {
    if (membership[d].empty()) continue;
    double total = 0.0;
    for (const auto& m : membership[d]) {
      if (m.cluster < 0 || m.cluster >= n_clusters() || !(m.fraction > 0.0)) {
        throw DataError("taxonomy " + name + ": bad membership for document " +
                        std::to_string(d));
      }
      total += m.fraction;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw DataError("taxonomy " + name + ": fractions of document " + std::to_string(d) +
                      " sum to " + format_number(total));
    }
    if (kind == TaxonomyKind::kDocumentPartition && membership[d].size() != 1) {
      throw DataError("taxonomy " + name + ": document partition with multiple memberships");
    }
  }
}

Taxonomy taxonomy_from_assignment(std::string name, const std::vector<int>& cluster_of_doc,
                                  int n_clusters) {
  Taxonomy t;
  t.name = std::move(name);
  t.kind = TaxonomyKind::kDocumentPartition;
  t.membership.resize(cluster_of_doc.size());
  t.provenance.assign(cluster_of_doc.size(), Provenance::kNone);
  for (std::size_t d = 0; d < cluster_of_doc.size(); ++d) {
    if (cluster_of_doc[d] == kNoCluster) continue;
    t.membership[d] = {{cluster_of_doc[d], 1.0}};
    t.provenance[d] = Provenance::kClustered;
  }
  for (int c = 0; c < n_clusters; ++c) t.cluster_labels.push_back(std::to_string(c));
  return t;
}

JournalScheme parse_journal_scheme(std::istream& in, const std::string& scheme_name) {
  JournalScheme scheme;
  scheme.scheme_name = scheme_name;
  bool seen = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_tabs(line);
    if (f.size() != 5) {
      throw DataError("journal scheme line " + std::to_string(line_no) + ": expected 5 columns");
    }
    if (f[1] != scheme_name) continue;
    seen = true;
    SchemeEntry entry{std::string(f[2]), std::nullopt};
    if (!f[3].empty()) {
      entry.fraction = parse_double(f[3]);
      if (!entry.fraction || !(*entry.fraction > 0.0) || *entry.fraction > 1.0) {
        throw DataError("journal scheme line " + std::to_string(line_no) + ": bad fraction");
      }
    }
    if (f[0].empty() || f[2].empty()) {
      throw DataError("journal scheme line " + std::to_string(line_no) + ": empty id");
    }
    if (f[4] == "bottom") {
      scheme.categories[std::string(f[0])].push_back(entry);
    } else if (f[4] == "top") {
      scheme.two_tier_fallback[std::string(f[0])].push_back(entry);
    } else {
      throw DataError("journal scheme line " + std::to_string(line_no) + ": tier must be bottom|top");
    }
  }
  if (!seen) throw DataError("unknown journal scheme '" + scheme_name + "'");
  return scheme;
}

JournalScheme load_journal_scheme(const std::filesystem::path& path,
                                  const std::string& scheme_name) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read journal scheme " + path.string());
  return parse_journal_scheme(in, scheme_name);
}

Taxonomy project_journal_scheme(const Corpus& corpus, const JournalScheme& scheme) {
  std::map<std::string, std::vector<std::pair<std::string, double>>> resolved;
  std::set<std::string> labels;
  auto add = [&](const auto& table, bool fallback) {
    for (const auto& [journal, entries] : table) {
      if (fallback && scheme.categories.contains(journal)) continue;
      auto fractions = resolve_fractions(journal, entries);
      for (const auto& [cat, f] : fractions) labels.insert(cat);
      resolved.emplace(journal, std::move(fractions));
    }
  };
  add(scheme.categories, false);
  add(scheme.two_tier_fallback, true);

  Taxonomy t;
  t.name = scheme.scheme_name;
  t.kind = TaxonomyKind::kJournalScheme;
  const auto ids = intern_labels(labels, t.cluster_labels);
  t.membership.resize(corpus.size());
  for (DocIndex d = 0; d < corpus.size(); ++d) {
    const auto& journal = corpus.doc(d).journal_id;
    if (!journal) continue;
    auto it = resolved.find(*journal);
    if (it == resolved.end()) continue;
    for (const auto& [cat, f] : it->second) t.membership[d].push_back({ids.at(cat), f});
  }
  return t;
}

Taxonomy journal_identity_taxonomy(const Corpus& corpus) {
  std::set<std::string> labels;
  for (const auto& doc : corpus.docs()) {
    if (doc.journal_id) labels.insert(*doc.journal_id);
  }
  Taxonomy t;
  t.name = "JID";
  t.kind = TaxonomyKind::kJournalIdentity;
  const auto ids = intern_labels(labels, t.cluster_labels);
  t.membership.resize(corpus.size());
  for (DocIndex d = 0; d < corpus.size(); ++d) {
    const auto& journal = corpus.doc(d).journal_id;
    if (journal) t.membership[d] = {{ids.at(*journal), 1.0}};
  }
  return t;
}

double relative_coverage(const Taxonomy& taxonomy, const Taxonomy& baseline,
                         const Corpus& corpus, int year_cutoff) {
  std::size_t both = 0;
  std::size_t base = 0;
  for (DocIndex d = 0; d < corpus.size(); ++d) {
    const auto& year = corpus.doc(d).pub_year;
    if (!year || *year > year_cutoff || !baseline.covers(d)) continue;
    ++base;
    if (taxonomy.covers(d)) ++both;
  }
  if (base == 0) throw DataError("baseline taxonomy covers no documents up to the year cutoff");
  return static_cast<double>(both) / static_cast<double>(base);
}

std::map<int, Taxonomy> read_partition_file(const std::filesystem::path& path,
                                            const Corpus& corpus, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read partition " + path.string());
  struct Row {
    DocIndex doc;
    std::string label;
    Provenance provenance;
  };
  std::map<int, std::vector<Row>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    const auto level = f.size() >= 3 ? parse_int(f[1]) : std::nullopt;
    if (!level || f.size() > 4 || f[2].empty()) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed partition row");
    }
    Provenance prov = Provenance::kClustered;
    if (f.size() == 4) {
      if (f[3] == "assigned") {
        prov = Provenance::kAssigned;
      } else if (f[3] != "clustered") {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad provenance");
      }
    }
    rows[static_cast<int>(*level)].push_back({corpus.at(f[0]), std::string(f[2]), prov});
  }
  std::map<int, Taxonomy> out;
  for (auto& [level, level_rows] : rows) {
    std::set<std::string> labels;
    for (const auto& r : level_rows) labels.insert(r.label);
    Taxonomy t;
    t.name = name;
    t.kind = TaxonomyKind::kDocumentPartition;
    const auto ids = intern_labels(labels, t.cluster_labels);
    t.membership.resize(corpus.size());
    t.provenance.assign(corpus.size(), Provenance::kNone);
    for (const auto& r : level_rows) {
      if (!t.membership[r.doc].empty()) {
        throw DataError(path.string() + ": document " + corpus.doc(r.doc).doc_id +
                        " listed twice at level " + std::to_string(level));
      }
      t.membership[r.doc] = {{ids.at(r.label), 1.0}};
      t.provenance[r.doc] = r.provenance;
    }
    out.emplace(level, std::move(t));
  }
  return out;
}

void write_partition_file(const Taxonomy& taxonomy, int level, const Corpus& corpus,
                          std::ostream& out) {
  const bool with_provenance = !taxonomy.provenance.empty();
  for (DocIndex d = 0; d < corpus.size(); ++d) {
    if (!taxonomy.covers(d)) continue;
    out << corpus.doc(d).doc_id << '\t' << level << '\t'
        << taxonomy.cluster_labels[taxonomy.membership[d].front().cluster];
    if (with_provenance) {
      out << '\t' << (taxonomy.provenance[d] == Provenance::kAssigned ? "assigned" : "clustered");
    }
    out << '\n';
  }
}

void write_partition_file(const Taxonomy& taxonomy, int level, const Corpus& corpus,
                          const std::filesystem::path& path) {
  std::ofstream out(path);
  write_partition_file(taxonomy, level, corpus, out);
  if (!out) throw DataError("failed writing partition " + path.string());
}

void write_taxonomy_file(const Taxonomy& taxonomy, const Corpus& corpus,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  for (DocIndex d = 0; d < corpus.size(); ++d) {
    for (const auto& m : taxonomy.membership[d]) {
      out << corpus.doc(d).doc_id << '\t' << taxonomy.cluster_labels[m.cluster] << '\t'
          << format_number(m.fraction) << '\n';
    }
  }
  std::ofstream meta(path.string() + ".meta");
  meta << "kind=" << to_string(taxonomy.kind) << "\nname=" << taxonomy.name
       << "\nn_clusters=" << taxonomy.n_clusters()
       << "\ncoverage_doc_count=" << taxonomy.coverage_doc_count() << '\n';
  if (!out || !meta) throw DataError("failed writing taxonomy " + path.string());
}

Taxonomy read_taxonomy_file(const std::filesystem::path& path, const Corpus& corpus,
                            const std::string& name) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read taxonomy " + path.string());
  Taxonomy t;
  t.name = name;
  t.kind = TaxonomyKind::kJournalScheme;
  std::ifstream meta(path.string() + ".meta");
  std::string line;
  while (meta && std::getline(meta, line)) {
    if (line.starts_with("kind=")) t.kind = parse_taxonomy_kind(line.substr(5));
  }
  std::vector<std::tuple<DocIndex, std::string, double>> rows;
  std::set<std::string> labels;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    const auto fraction = f.size() == 3 ? parse_double(f[2]) : std::nullopt;
    if (!fraction || f[1].empty()) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed taxonomy row");
    }
    rows.emplace_back(corpus.at(f[0]), std::string(f[1]), *fraction);
    labels.insert(std::string(f[1]));
  }
  const auto ids = intern_labels(labels, t.cluster_labels);
  t.membership.resize(corpus.size());
  for (const auto& [doc, label, fraction] : rows) {
    t.membership[doc].push_back({ids.at(label), fraction});
  }
  t.validate();
  return t;
}

}  // namespace citetax
