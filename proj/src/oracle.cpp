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

#include "citetax/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>

namespace citetax {
namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }
  bool bernoulli(double p) { return uniform() < p; }
  // Failures before the first success.
  int geometric(double p) {
    if (p >= 1.0) return 0;
    return static_cast<int>(std::floor(std::log1p(-uniform()) / std::log1p(-p)));
  }

 private:
  std::mt19937_64 engine_;
};

std::string padded_id(std::size_t i, int width) {
  std::string digits = std::to_string(i);
  return "S" + std::string(width - std::min<int>(width, static_cast<int>(digits.size())), '0') +
         digits;
}

std::string topic_journal(int topic, int j) {
  return "J" + std::to_string(topic) + "-" + std::to_string(j);
}

constexpr const char* kMultiJournal = "JMULTI";

}  // namespace

ExhaustiveResult exhaustive_best_partition(const Network& net, QualityKind kind,
                                           double resolution) {
  const int n = net.size();
  if (n > kMaxExhaustiveNodes) {
    throw UsageError("exhaustive search refuses networks above " +
                     std::to_string(kMaxExhaustiveNodes) + " nodes");
  }
  ExhaustiveResult best;
  if (n == 0) return best;

  std::vector<int> a(n, 0);
  // prefix_max[i] = max(a[0..i]).
  std::vector<int> prefix_max(n, 0);
  best.quality = -std::numeric_limits<double>::infinity();
  while (true) {
    const double q = quality(net, a, kind, resolution);
    ++best.n_evaluated;
    if (best.cluster.empty() || q > best.quality + 1e-12 * std::max(1.0, std::abs(best.quality))) {
      best.quality = q;
      best.cluster = a;
    }
    int i = n - 1;
    while (i > 0 && a[i] > prefix_max[i - 1]) --i;
    if (i == 0) break;
    ++a[i];
    prefix_max[i] = std::max(prefix_max[i - 1], a[i]);
    for (int k = i + 1; k < n; ++k) {
      a[k] = 0;
      prefix_max[k] = prefix_max[i];
    }
  }
  return best;
}

Network random_connected_network(int n, double extra_edge_p, std::uint64_t seed,
                                 QualityKind kind) {
  Rng rng(seed);
  std::vector<LocalEdge> edges;
  std::vector<std::vector<bool>> linked(n, std::vector<bool>(n, false));
  auto weight = [&] { return 1.0 - rng.uniform(); };
  for (int v = 1; v < n; ++v) {
    const int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(v)));
    edges.push_back({u, v, weight()});
    linked[u][v] = true;
  }
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (!linked[u][v] && rng.bernoulli(extra_edge_p)) edges.push_back({u, v, weight()});
    }
  }
  return Network::from_edges(n, edges, kind);
}

void SynthSpec::validate() const {
  if (n_topics < 1) throw UsageError("synth: n_topics must be >= 1");
  if (docs_per_topic_per_year < 1) throw UsageError("synth: docs per topic per year must be >= 1");
  if (years.empty()) throw UsageError("synth: empty year range");
  if (!(p_out >= 0.0) || !(p_in > p_out)) throw UsageError("synth: need p_in > p_out >= 0");
  if (!(review_rate >= 0.0) || review_rate > 1.0) throw UsageError("synth: review_rate in [0, 1]");
  if (review_refs < 100) throw UsageError("synth: review_refs must be >= 100");
  if (refs_per_doc < 1) throw UsageError("synth: refs_per_doc must be >= 1");
  if (!(mean_ref_age >= 1.0)) throw UsageError("synth: mean_ref_age must be >= 1");
  if (!(nonsource_rate >= 0.0) || nonsource_rate >= 1.0) {
    throw UsageError("synth: nonsource_rate in [0, 1)");
  }
  if (journals_per_topic < 1) throw UsageError("synth: journals_per_topic must be >= 1");
  if (!(multidisciplinary_rate >= 0.0) || multidisciplinary_rate > 1.0) {
    throw UsageError("synth: multidisciplinary_rate in [0, 1]");
  }
}

SynthCorpus generate_corpus(const SynthSpec& spec) {
  spec.validate();
  const int n_years = spec.years.last - spec.years.first + 1;
  const int per_cell = spec.docs_per_topic_per_year;
  const int n_topics = spec.n_topics;
  const int min_within = static_cast<int>(std::ceil(0.9 * spec.review_refs));
  // A review in year y can draw within topic from (y - first) * per_cell
  // earlier documents.
  const int first_review_offset = (spec.review_refs + per_cell - 1) / per_cell;
  if (spec.review_rate > 0.0 && first_review_offset >= n_years) {
    throw DataError("synth: a review needs " + std::to_string(spec.review_refs) +
                    " earlier within-topic documents but at most " +
                    std::to_string((n_years - 1) * per_cell) + " exist");
  }

  const std::size_t total = static_cast<std::size_t>(n_years) * n_topics * per_cell;
  const int width = std::max(6, static_cast<int>(std::to_string(total).size()));
  auto index_of = [&](int year_offset, int topic, int k) {
    return (static_cast<std::size_t>(year_offset) * n_topics + topic) * per_cell + k;
  };

  Rng rng(spec.seed);
  const double p_within =
      spec.p_in / (spec.p_in + static_cast<double>(n_topics - 1) * spec.p_out);
  const double p_age = 1.0 / spec.mean_ref_age;

  SynthCorpus out;
  std::vector<Document> docs(total);
  out.topic.assign(total, 0);
  std::vector<CitationEdge> edges;

  auto draw_age = [&](int year_offset) {
    for (int attempt = 0; attempt < 32; ++attempt) {
      const int age = 1 + rng.geometric(p_age);
      if (age <= year_offset) return age;
    }
    return 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(year_offset)));
  };
  // Skewed pick inside a (year, topic) cell so some documents become hubs.
  auto draw_in_cell = [&](int year_offset, int topic) {
    const double u = rng.uniform();
    const int k = std::min(per_cell - 1, static_cast<int>(per_cell * u * u));
    return static_cast<DocIndex>(index_of(year_offset, topic, k));
  };
  auto draw_other_topic = [&](int topic) {
    const int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_topics - 1)));
    return t >= topic ? t + 1 : t;
  };

  std::vector<DocIndex> refs;
  for (int yo = 0; yo < n_years; ++yo) {
    for (int topic = 0; topic < n_topics; ++topic) {
      for (int k = 0; k < per_cell; ++k) {
        const auto d = static_cast<DocIndex>(index_of(yo, topic, k));
        Document& doc = docs[d];
        doc.doc_id = padded_id(d, width);
        doc.pub_year = spec.years.first + yo;
        out.topic[d] = topic;
        const bool review = spec.review_rate > 0.0 && yo >= first_review_offset &&
                            rng.bernoulli(spec.review_rate);
        if (!review && rng.bernoulli(spec.nonsource_rate)) {
          doc.is_source = false;
          doc.doc_type = DocType::kOther;
          continue;
        }
        doc.is_source = true;
        doc.doc_type = review ? DocType::kReview
                              : (rng.bernoulli(0.9) ? DocType::kArticle : DocType::kOther);
        doc.journal_id = rng.bernoulli(spec.multidisciplinary_rate)
                             ? std::string(kMultiJournal)
                             : topic_journal(topic, static_cast<int>(rng.below(
                                                        static_cast<std::uint64_t>(
                                                            spec.journals_per_topic))));
        doc.n_authors = 1 + std::min(49, rng.geometric(0.3));
        doc.core_author_flag = rng.bernoulli(0.15 + 0.05 * std::min(*doc.n_authors, 6));
        if (yo == 0) continue;

        refs.clear();
        auto add_unique = [&](DocIndex r) {
          if (std::find(refs.begin(), refs.end(), r) != refs.end()) return false;
          refs.push_back(r);
          return true;
        };
        if (review) {
          int n_cross = 0;
          for (int i = 0; i < spec.review_refs; ++i) n_cross += rng.bernoulli(p_within) ? 0 : 1;
          n_cross = n_topics > 1 ? std::min(n_cross, spec.review_refs - min_within) : 0;
          const int n_within = spec.review_refs - n_cross;
          for (int i = 0; i < n_within; ++i) {
            bool placed = false;
            for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
              placed = add_unique(draw_in_cell(yo - draw_age(yo), topic));
            }
            // Dense sweep over earlier years once random draws keep colliding.
            for (int back = 1; back <= yo && !placed; ++back) {
              for (int kk = 0; kk < per_cell && !placed; ++kk) {
                placed = add_unique(static_cast<DocIndex>(index_of(yo - back, topic, kk)));
              }
            }
          }
          for (int i = 0; i < n_cross; ++i) {
            for (int attempt = 0; attempt < 64; ++attempt) {
              if (add_unique(draw_in_cell(yo - draw_age(yo), draw_other_topic(topic)))) break;
            }
          }
        } else {
          const int lo = std::max(1, spec.refs_per_doc / 2);
          const int hi = spec.refs_per_doc + spec.refs_per_doc / 2;
          const int n_refs = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
          for (int i = 0; i < n_refs; ++i) {
            const int t = n_topics > 1 && !rng.bernoulli(p_within) ? draw_other_topic(topic) : topic;
            for (int attempt = 0; attempt < 16; ++attempt) {
              if (add_unique(draw_in_cell(yo - draw_age(yo), t))) break;
            }
          }
        }
        for (DocIndex r : refs) edges.push_back({d, r});
      }
    }
  }

  out.corpus = Corpus(std::move(docs), std::move(edges));
  out.scheme.scheme_name = "SYN";
  for (int t = 0; t < n_topics; ++t) {
    for (int j = 0; j < spec.journals_per_topic; ++j) {
      out.scheme.categories[topic_journal(t, j)].push_back({"T" + std::to_string(t), std::nullopt});
    }
    out.scheme.categories[kMultiJournal].push_back({"T" + std::to_string(t), std::nullopt});
  }
  return out;
}

void write_synth(const SynthCorpus& synth, const std::filesystem::path& dir) {
  write_corpus(synth.corpus, dir);
  std::ofstream truth(dir / "truth.tsv");
  for (DocIndex d = 0; d < synth.corpus.size(); ++d) {
    truth << synth.corpus.doc(d).doc_id << '\t' << synth.topic[d] << '\n';
  }
  std::ofstream scheme(dir / "journal_scheme.tsv");
  auto emit = [&](const auto& table, const char* tier) {
    for (const auto& [journal, entries] : table) {
      for (const auto& e : entries) {
        scheme << journal << '\t' << synth.scheme.scheme_name << '\t' << e.category << '\t'
               << (e.fraction ? format_number(*e.fraction) : "") << '\t' << tier << '\n';
      }
    }
  };
  emit(synth.scheme.categories, "bottom");
  emit(synth.scheme.two_tier_fallback, "top");
  if (!truth || !scheme) throw DataError("failed writing synthetic corpus to " + dir.string());
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw DataError("ARI: labelings cover different universes");
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> rows, cols;
  double n = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || b[i] < 0) continue;
    joint[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
    n += 1.0;
  }
  if (n == 0.0) throw DataError("ARI: no item is labelled in both partitions");
  auto pairs = [](double x) { return x * (x - 1.0) / 2.0; };
  double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [key, c] : joint) index += pairs(c);
  for (const auto& [key, c] : rows) sum_rows += pairs(c);
  for (const auto& [key, c] : cols) sum_cols += pairs(c);
  const double total = pairs(n);
  const double expected = total > 0.0 ? sum_rows * sum_cols / total : 0.0;
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace citetax
