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

#include "citetax/goldstd.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

namespace citetax {
namespace {

bool is_article_or_review(const Document& d) {
  return d.is_source && (d.doc_type == DocType::kArticle || d.doc_type == DocType::kReview);
}

GoldStandard describe(const Corpus& corpus, const Taxonomy& baseline, DocIndex doc,
                      const YearRange& span) {
  GoldStandard g;
  g.doc = doc;
  const auto refs = corpus.refs(doc);
  g.n_refs_total = refs.size();
  for (DocIndex r : refs) {
    if (span.contains(corpus.doc(r).pub_year)) ++g.n_refs_in_window;
    if (baseline.covers(r)) g.ref_ids.push_back(r);
  }
  g.n_refs_resolvable = g.ref_ids.size();
  return g;
}

std::size_t count_citations(const Corpus& corpus, DocIndex doc, const BinConfig& config) {
  std::size_t n = 0;
  for (DocIndex c : corpus.citers(doc)) {
    const auto& y = corpus.doc(c).pub_year;
    if (y && *y >= config.citing_year && *y <= config.citation_horizon) ++n;
  }
  return n;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

std::vector<GoldStandard> select_gold_standards(const Corpus& corpus, const Taxonomy& baseline,
                                                const GoldSelection& selection) {
  const auto span = corpus.source_years();
  std::vector<GoldStandard> out;
  for (DocIndex d = 0; d < corpus.size(); ++d) {
    const auto& doc = corpus.doc(d);
    if (!is_article_or_review(doc) || doc.pub_year != selection.citing_year) continue;
    if (corpus.refs(d).size() < selection.min_refs) continue;
    auto g = describe(corpus, baseline, d, span);
    // Inclusive: resolvable / total >= floor.
    if (static_cast<double>(g.n_refs_resolvable) + 1e-9 <
        selection.coverage_floor * static_cast<double>(g.n_refs_total)) {
      continue;
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<GoldStandard> gold_standards_for(const Corpus& corpus, const Taxonomy& baseline,
                                             const std::vector<DocIndex>& docs) {
  const auto span = corpus.source_years();
  std::vector<GoldStandard> out;
  out.reserve(docs.size());
  for (DocIndex d : docs) out.push_back(describe(corpus, baseline, d, span));
  return out;
}

void write_gold(const std::vector<GoldStandard>& golds, const Corpus& corpus,
                const std::filesystem::path& path) {
  std::ofstream out(path);
  for (const auto& g : golds) {
    out << corpus.doc(g.doc).doc_id << '\t' << g.n_refs_total << '\t' << g.n_refs_resolvable
        << '\n';
  }
  if (!out) throw DataError("failed writing " + path.string());
}

std::vector<DocIndex> read_gold_ids(const std::filesystem::path& path, const Corpus& corpus) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read gold standards " + path.string());
  std::vector<DocIndex> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() != 3) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected 3 columns");
    }
    ids.push_back(corpus.at(f[0]));
  }
  return ids;
}

std::string reference_bin(std::size_t n_refs) {
  if (n_refs >= 200) return "200+";
  if (n_refs >= 100) return "100-199";
  const std::size_t lo = n_refs < 10 ? 1 : (n_refs / 10) * 10;
  return std::to_string(lo) + "-" + std::to_string(n_refs < 10 ? 9 : lo + 9);
}

std::vector<BinRow> bin_statistics(const Corpus& corpus, const BinConfig& config) {
  struct Acc {
    std::size_t n = 0, authors_n = 0, core_n = 0, core_yes = 0, uncited = 0, reviews = 0;
    double refs = 0, cited = 0, authors = 0;
  };
  std::vector<std::string> labels;
  for (int lo = 0; lo < 100; lo += 10) labels.push_back(reference_bin(lo == 0 ? 1 : lo));
  labels.push_back("100-199");
  labels.push_back("200+");
  std::vector<Acc> acc(labels.size() + 1);

  auto slot = [&](std::size_t n_refs) {
    if (n_refs >= 200) return labels.size() - 1;
    if (n_refs >= 100) return labels.size() - 2;
    return n_refs / 10;
  };
  for (DocIndex d = 0; d < corpus.size(); ++d) {
    const auto& doc = corpus.doc(d);
    if (!is_article_or_review(doc) || doc.pub_year != config.citing_year) continue;
    const std::size_t n_refs = corpus.refs(d).size();
    if (n_refs == 0) continue;
    const std::size_t cites = count_citations(corpus, d, config);
    for (Acc* a : {&acc[slot(n_refs)], &acc.back()}) {
      ++a->n;
      a->refs += static_cast<double>(n_refs);
      a->cited += static_cast<double>(cites);
      if (cites == 0) ++a->uncited;
      if (doc.doc_type == DocType::kReview) ++a->reviews;
      if (doc.n_authors) {
        ++a->authors_n;
        a->authors += *doc.n_authors;
      }
      if (doc.core_author_flag) {
        ++a->core_n;
        if (*doc.core_author_flag) ++a->core_yes;
      }
    }
  }
  labels.push_back("Total");
  std::vector<BinRow> rows;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const Acc& a = acc[k];
    BinRow row;
    row.label = labels[k];
    row.n_doc = a.n;
    if (a.n > 0) {
      const double n = static_cast<double>(a.n);
      row.mean_refs = a.refs / n;
      row.mean_cited = a.cited / n;
      row.pct_uncited = 100.0 * static_cast<double>(a.uncited) / n;
      row.pct_review = 100.0 * static_cast<double>(a.reviews) / n;
    }
    if (a.authors_n > 0) row.mean_authors = a.authors / static_cast<double>(a.authors_n);
    if (a.core_n > 0) {
      row.pct_core = 100.0 * static_cast<double>(a.core_yes) / static_cast<double>(a.core_n);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CorrelationMatrix correlation_matrix(const Corpus& corpus, const BinConfig& config,
                                     std::size_t ref_threshold, Stratum side,
                                     std::size_t* n_rows) {
  std::array<std::vector<double>, 4> cols;
  for (DocIndex d = 0; d < corpus.size(); ++d) {
    const auto& doc = corpus.doc(d);
    if (!is_article_or_review(doc) || doc.pub_year != config.citing_year) continue;
    const std::size_t n_refs = corpus.refs(d).size();
    if (n_refs == 0) continue;
    if ((side == Stratum::kBelow) != (n_refs < ref_threshold)) continue;
    if (!doc.n_authors || *doc.n_authors < 1 || !doc.core_author_flag) continue;
    cols[0].push_back(std::log(static_cast<double>(count_citations(corpus, d, config)) + 1.0));
    cols[1].push_back(std::log(static_cast<double>(n_refs)));
    cols[2].push_back(std::log(static_cast<double>(*doc.n_authors)));
    cols[3].push_back(*doc.core_author_flag ? 1.0 : 0.0);
  }
  if (n_rows) *n_rows = cols[0].size();
  if (cols[0].size() < 3) {
    throw DataError("correlation stratum has fewer than 3 complete rows");
  }
  CorrelationMatrix m{};
  for (int a = 0; a < 4; ++a) {
    m[a][a] = 1.0;
    for (int b = a + 1; b < 4; ++b) m[a][b] = m[b][a] = pearson(cols[a], cols[b]);
  }
  return m;
}

void write_bin_csv(const std::vector<BinRow>& rows, std::ostream& out) {
  out << "refs_bin,n_doc,mean_refs,mean_cited,mean_authors,pct_core,pct_uncited,pct_review\n";
  for (const auto& r : rows) {
    out << r.label << ',' << r.n_doc << ',' << format_fixed(r.mean_refs, 1) << ','
        << format_fixed(r.mean_cited, 1) << ','
        << (r.mean_authors ? format_fixed(*r.mean_authors, 1) : "") << ','
        << (r.pct_core ? format_fixed(*r.pct_core, 1) : "") << ','
        << format_fixed(r.pct_uncited, 1) << ',' << format_fixed(r.pct_review, 1) << '\n';
  }
}

void write_correlation_csv(const CorrelationMatrix& m, std::size_t n_rows, std::ostream& out) {
  static constexpr const char* kNames[4] = {"log_cites_plus_1", "log_refs", "log_authors",
                                            "core"};
  out << "variable";
  for (const char* name : kNames) out << ',' << name;
  out << ",n=" << n_rows << '\n';
  for (int a = 0; a < 4; ++a) {
    out << kNames[a];
    for (int b = 0; b < 4; ++b) out << ',' << format_fixed(m[a][b], 4);
    out << ",\n";
  }
}

}  // namespace citetax
