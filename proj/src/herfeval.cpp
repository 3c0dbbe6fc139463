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

#include "citetax/herfeval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>

namespace citetax {

std::vector<std::pair<int, double>> ShareVector::shares() const {
  std::vector<std::pair<int, double>> out;
  const double n = static_cast<double>(n_p);
  for (const auto& [cluster, count] : counts) out.emplace_back(cluster, count / n);
  for (std::size_t k = 0; k < missing; ++k) out.emplace_back(-1 - static_cast<int>(k), 1.0 / n);
  return out;
}

double ShareVector::herfindahl() const {
  const double n = static_cast<double>(n_p);
  double h = 0.0;
  for (const auto& [cluster, count] : counts) h += (count / n) * (count / n);
  return h + static_cast<double>(missing) / (n * n);
}

ShareVector share_vector(const GoldStandard& gold, const Taxonomy& taxonomy,
                         const Taxonomy& baseline) {
  ShareVector sv;
  sv.paper = gold.doc;
  sv.taxonomy = taxonomy.name;
  for (DocIndex r : gold.ref_ids) {
    if (!baseline.covers(r)) continue;
    ++sv.n_p;
    if (!taxonomy.covers(r)) {
      ++sv.missing;
      continue;
    }
    for (const auto& m : taxonomy.membership[r]) sv.counts[m.cluster] += m.fraction;
  }
  if (sv.n_p == 0) {
    throw DataError("gold paper " + std::to_string(gold.doc) + " has no resolvable references");
  }
  return sv;
}

double herfindahl_paper(const GoldStandard& gold, const Taxonomy& taxonomy,
                        const Taxonomy& baseline) {
  return share_vector(gold, taxonomy, baseline).herfindahl();
}

std::vector<double> top_cluster_table(const GoldStandard& gold, const Taxonomy& taxonomy,
                                      const Taxonomy& baseline, std::size_t k) {
  const auto sv = share_vector(gold, taxonomy, baseline);
  std::vector<double> counts;
  for (const auto& [cluster, count] : sv.counts) counts.push_back(count);
  std::sort(counts.begin(), counts.end(), std::greater<>());
  counts.resize(k, 0.0);
  return counts;
}

std::optional<double> population_skewness(const std::vector<double>& values) {
  if (values.size() < 3) return std::nullopt;
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (m2 <= 1e-12 * std::max(1.0, mean * mean)) return std::nullopt;
  return m3 / std::pow(m2, 1.5);
}

std::optional<double> cluster_size_skewness(const Taxonomy& taxonomy) {
  auto sizes = taxonomy.cluster_sizes();
  std::erase_if(sizes, [](double s) { return s <= 0.0; });
  return population_skewness(sizes);
}

AgeDistribution age_distribution(const Taxonomy& taxonomy, const Corpus& corpus) {
  AgeDistribution dist;
  std::map<int, std::size_t> counts;
  std::size_t unknown = 0, covered = 0;
  double year_sum = 0.0;
  for (DocIndex d = 0; d < corpus.size(); ++d) {
    if (!taxonomy.covers(d)) continue;
    ++covered;
    const auto& year = corpus.doc(d).pub_year;
    if (year) {
      ++counts[*year];
      year_sum += *year;
    } else {
      ++unknown;
    }
  }
  if (covered == 0) return dist;
  for (const auto& [year, n] : counts) {
    dist.by_year[year] = static_cast<double>(n) / static_cast<double>(covered);
  }
  dist.unknown = static_cast<double>(unknown) / static_cast<double>(covered);
  if (covered > unknown) dist.mean_year = year_sum / static_cast<double>(covered - unknown);
  return dist;
}

EvalReport evaluate(const std::vector<GoldStandard>& golds,
                    const std::vector<const Taxonomy*>& taxonomies, const Taxonomy& baseline,
                    const Corpus& corpus, const EvalOptions& options) {
  if (golds.empty()) throw DataError("no gold standard papers to evaluate");
  if (taxonomies.size() < 2) throw UsageError("evaluation needs at least two taxonomies");

  const std::size_t n_tax = taxonomies.size();
  const std::size_t n_papers = golds.size();
  // Cell (p, t) is computed independently; slot p * n_tax + t.
  std::vector<double> h(n_papers * n_tax);
  std::vector<std::vector<double>> tops(n_papers * n_tax);
  std::vector<std::size_t> warn(n_papers, 0);
  parallel_for(n_papers, options.threads, [&](std::size_t p) {
    for (std::size_t t = 0; t < n_tax; ++t) {
      const auto sv = share_vector(golds[p], *taxonomies[t], baseline);
      h[p * n_tax + t] = sv.herfindahl();
      std::vector<double> counts;
      for (const auto& [cluster, count] : sv.counts) counts.push_back(count);
      std::sort(counts.begin(), counts.end(), std::greater<>());
      counts.resize(options.top_k, 0.0);
      tops[p * n_tax + t] = std::move(counts);
      for (DocIndex r : corpus.refs(golds[p].doc)) {
        if (!baseline.covers(r) && taxonomies[t]->covers(r)) ++warn[p];
      }
    }
  });

  EvalReport report;
  report.n_papers = n_papers;
  report.scores.resize(n_tax);
  for (std::size_t t = 0; t < n_tax; ++t) {
    auto& s = report.scores[t];
    s.name = taxonomies[t]->name;
    s.kind = taxonomies[t]->kind;
    s.n_clusters = taxonomies[t]->n_clusters();
    s.relative_coverage =
        relative_coverage(*taxonomies[t], baseline, corpus, options.coverage_year_cutoff);
    s.skewness = cluster_size_skewness(*taxonomies[t]);
    report.ages[s.name] = age_distribution(*taxonomies[t], corpus);
  }
  for (std::size_t p = 0; p < n_papers; ++p) {
    report.baseline_warnings += warn[p];
    double best = -1.0;
    std::size_t n_best = 0, winner = 0;
    for (std::size_t t = 0; t < n_tax; ++t) {
      const double v = h[p * n_tax + t];
      report.scores[t].mean_herfindahl += v;
      if (v > best) {
        best = v;
        n_best = 1;
        winner = t;
      } else if (v == best) {
        ++n_best;
      }
      report.details.push_back({golds[p].doc, taxonomies[t]->name, v, tops[p * n_tax + t]});
    }
    if (n_best == 1) {
      ++report.scores[winner].win_count;
    } else {
      ++report.tied_papers;
      for (std::size_t t = 0; t < n_tax; ++t) {
        if (h[p * n_tax + t] == best) ++report.scores[t].tie_count;
      }
    }
  }
  for (auto& s : report.scores) {
    s.mean_herfindahl /= static_cast<double>(n_papers);
    s.win_share = static_cast<double>(s.win_count) / static_cast<double>(n_papers);
  }
  return report;
}

void write_report(const EvalReport& report, const Corpus& corpus,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream summary(dir / "report.csv");
  summary << "name,kind,n_clusters,coverage,mean_herf,win_share,tie_count,skewness_g1_population\n";
  for (const auto& s : report.scores) {
    summary << s.name << ',' << to_string(s.kind) << ',' << s.n_clusters << ','
            << format_fixed(s.relative_coverage, 6) << ',' << format_fixed(s.mean_herfindahl, 6)
            << ',' << format_fixed(s.win_share, 6) << ',' << s.tie_count << ','
            << (s.skewness ? format_fixed(*s.skewness, 6) : "undefined") << '\n';
  }

  std::ofstream detail(dir / "detail.csv");
  detail << "paper,taxonomy,herf";
  const std::size_t k = report.details.empty() ? 0 : report.details.front().top_counts.size();
  for (std::size_t i = 1; i <= k; ++i) detail << ",ref_" << i;
  detail << '\n';
  for (const auto& d : report.details) {
    detail << corpus.doc(d.paper).doc_id << ',' << d.taxonomy << ','
           << format_fixed(d.herfindahl, 6);
    for (double c : d.top_counts) detail << ',' << format_number(c);
    detail << '\n';
  }

  std::ofstream ages(dir / "ages.csv");
  ages << "taxonomy,year,fraction\n";
  for (const auto& s : report.scores) {
    const auto& dist = report.ages.at(s.name);
    for (const auto& [year, f] : dist.by_year) {
      ages << s.name << ',' << year << ',' << format_fixed(f, 6) << '\n';
    }
    if (dist.unknown > 0.0) ages << s.name << ",unknown," << format_fixed(dist.unknown, 6) << '\n';
  }
  if (!summary || !detail || !ages) throw DataError("failed writing report to " + dir.string());
}

}  // namespace citetax
