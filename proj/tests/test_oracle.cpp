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

#include <cmath>
#include <queue>
#include <random>

#include "citetax/goldstd.hpp"
#include "citetax/oracle.hpp"
#include "citetax/slm.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace citetax;
using namespace citetax::testing;

namespace {

SynthSpec small_spec(std::uint64_t seed = 7) {
  SynthSpec s;
  s.docs_per_topic_per_year = 40;
  s.years = {2000, 2009};
  s.seed = seed;
  return s;
}

bool connected(const Network& net) {
  if (net.size() == 0) return true;
  std::vector<bool> seen(net.size(), false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  int count = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : net.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        q.push(v);
      }
    }
  }
  return count == net.size();
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("exhaustive search on small fixtures") {
  auto path = network(3, {{0, 1, 1}, {1, 2, 1}});
  auto r = exhaustive_best_partition(path, QualityKind::kCPM, 0.4);
  CHECK(r.cluster == std::vector<int>{0, 0, 0});
  CHECK(r.quality == doctest::Approx(0.8));
  CHECK(r.n_evaluated == 5);

  auto tri = network(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  auto t = exhaustive_best_partition(tri, QualityKind::kCPM, 1.5);
  CHECK(t.cluster == std::vector<int>{0, 1, 2});
  CHECK(t.quality == 0.0);

  auto none = exhaustive_best_partition(network(0, {}), QualityKind::kCPM, 1.0);
  CHECK(none.cluster.empty());
  CHECK(none.quality == 0.0);

  auto edgeless = exhaustive_best_partition(network(4, {}), QualityKind::kCPM, 0.5);
  CHECK(edgeless.cluster == std::vector<int>{0, 1, 2, 3});
  CHECK(edgeless.quality == 0.0);
}

TEST_CASE("exhaustive search visits Bell(n) partitions") {
  const std::size_t bell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975};
  for (int n = 1; n <= 10; ++n) {
    auto r = exhaustive_best_partition(network(n, {}), QualityKind::kCPM, 1.0);
    CHECK(r.n_evaluated == bell[n]);
  }
}

TEST_CASE("exhaustive search refuses more than ten nodes") {
  CHECK_THROWS_AS(exhaustive_best_partition(network(11, {}), QualityKind::kCPM, 1.0),
                  UsageError);
}

TEST_CASE("equal optima resolve to the lexicographically smallest assignment") {
  // {0,1}{2}, {0}{1,2} and singletons all score 0 at gamma 1.
  auto path = network(3, {{0, 1, 1}, {1, 2, 1}});
  auto r = exhaustive_best_partition(path, QualityKind::kCPM, 1.0);
  CHECK(r.quality == doctest::Approx(0.0));
  CHECK(r.cluster == std::vector<int>{0, 0, 1});
}

TEST_CASE("local moving never beats the exhaustive optimum") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const int n = 3 + static_cast<int>(seed % 6);
    for (auto kind : {QualityKind::kCPM, QualityKind::kModularity}) {
      auto net = random_connected_network(n, 0.4, seed, kind);
      const double gamma = kind == QualityKind::kCPM ? 0.3 : 1.0;
      auto best = exhaustive_best_partition(net, kind, gamma);
      ClusterParams p;
      p.quality = kind;
      p.resolution = gamma;
      p.seed = seed;
      auto slm = smart_local_moving(net, p);
      CHECK(slm.quality_value <= best.quality + 1e-9);
      CHECK(quality(net, best.cluster, kind, gamma) == doctest::Approx(best.quality));
    }
  }
}

TEST_CASE("random connected networks") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const int n = 1 + static_cast<int>(seed % 9);
    auto net = random_connected_network(n, 0.3, seed);
    CHECK(net.size() == n);
    CHECK(connected(net));
    CHECK(net.n_edges() >= static_cast<std::size_t>(n - 1));
    for (int u = 0; u < n; ++u) {
      for (double w : net.weights(u)) {
        CHECK(w > 0.0);
        CHECK(w <= 1.0);
      }
    }
    auto again = random_connected_network(n, 0.3, seed);
    for (int u = 0; u < n; ++u) {
      CHECK(std::vector<int>(net.neighbors(u).begin(), net.neighbors(u).end()) ==
            std::vector<int>(again.neighbors(u).begin(), again.neighbors(u).end()));
      CHECK(std::vector<double>(net.weights(u).begin(), net.weights(u).end()) ==
            std::vector<double>(again.weights(u).begin(), again.weights(u).end()));
    }
  }
}

TEST_CASE("generator without cross-topic weight has no cross-topic citations") {
  auto spec = small_spec();
  spec.p_out = 0.0;
  auto s = generate_corpus(spec);
  REQUIRE(s.corpus.edges().size() > 1000);
  for (const auto& e : s.corpus.edges()) CHECK(s.topic[e.citing] == s.topic[e.cited]);
}

TEST_CASE("generator without reviews yields no gold standards") {
  auto spec = small_spec();
  spec.review_rate = 0.0;
  auto s = generate_corpus(spec);
  std::vector<int> all(s.corpus.size(), 0);
  auto base = taxonomy_from_assignment("all", all, 1);
  for (int year = 2000; year <= 2009; ++year) {
    CHECK(select_gold_standards(s.corpus, base, GoldSelection{100, 0.8, year}).empty());
  }
}

TEST_CASE("default generator: reviews have many mostly within-topic references") {
  SynthSpec spec;  // 4 topics x 200 docs x 15 years
  auto s = generate_corpus(spec);
  CHECK(s.corpus.size() == 4u * 200u * 15u);
  std::size_t reviews = 0;
  for (DocIndex d = 0; d < s.corpus.size(); ++d) {
    const auto& doc = s.corpus.doc(d);
    for (DocIndex r : s.corpus.refs(d)) {
      REQUIRE(s.corpus.doc(r).pub_year.has_value());
      CHECK(*s.corpus.doc(r).pub_year < *doc.pub_year);
    }
    if (doc.doc_type != DocType::kReview) continue;
    ++reviews;
    const auto refs = s.corpus.refs(d);
    std::size_t within = 0;
    for (DocIndex r : refs) within += s.topic[r] == s.topic[d];
    CHECK(refs.size() >= 100);
    CHECK(10 * within >= 9 * refs.size());
  }
  CHECK(reviews > 100);
  std::vector<int> all(s.corpus.size(), 0);
  auto base = taxonomy_from_assignment("all", all, 1);
  auto golds = select_gold_standards(s.corpus, base, GoldSelection{100, 0.8, 2010});
  CHECK_FALSE(golds.empty());
  for (const auto& g : golds) CHECK(s.corpus.doc(g.doc).doc_type == DocType::kReview);
}

TEST_CASE("generator is deterministic per seed") {
  TempDir tmp;
  write_synth(generate_corpus(small_spec(3)), tmp / "a");
  write_synth(generate_corpus(small_spec(3)), tmp / "b");
  write_synth(generate_corpus(small_spec(4)), tmp / "c");
  for (const char* f : {"docs.tsv", "cites.tsv", "truth.tsv", "journal_scheme.tsv"}) {
    CHECK(slurp(tmp / "a" / f) == slurp(tmp / "b" / f));
  }
  CHECK(slurp(tmp / "a/cites.tsv") != slurp(tmp / "c/cites.tsv"));
  // The written files load back as an ingestible corpus.
  auto loaded = load_corpus(tmp / "a/docs.tsv", tmp / "a/cites.tsv", {});
  CHECK(loaded.diagnostics.rejected_docs == 0);
  CHECK(loaded.diagnostics.rejected_edges == 0);
  CHECK(loaded.diagnostics.stubs_created == 0);
}

TEST_CASE("infeasible or invalid specs") {
  auto spec = small_spec();
  spec.years = {2000, 2001};
  spec.docs_per_topic_per_year = 20;
  CHECK_THROWS_AS(generate_corpus(spec), DataError);
  spec.review_rate = 0.0;
  CHECK_NOTHROW(generate_corpus(spec));

  auto bad = small_spec();
  bad.p_in = 0.01;
  bad.p_out = 0.02;
  CHECK_THROWS_AS(bad.validate(), UsageError);
  bad = small_spec();
  bad.review_refs = 50;
  CHECK_THROWS_AS(bad.validate(), UsageError);
  bad = small_spec();
  bad.n_topics = 0;
  CHECK_THROWS_AS(generate_corpus(bad), UsageError);
}

TEST_CASE("adjusted rand index") {
  const std::vector<int> a{0, 0, 0, 1, 1, 1};
  const std::vector<int> b{0, 0, 1, 1, 2, 2};
  CHECK(adjusted_rand_index(a, a) == 1.0);
  // Contingency: index 2, rows 6, cols 3, total 15.
  CHECK(adjusted_rand_index(a, b) == doctest::Approx((2 - 1.2) / (4.5 - 1.2)));
  CHECK(adjusted_rand_index(b, a) == doctest::Approx(adjusted_rand_index(a, b)));
  const std::vector<int> renamed{7, 7, 3, 3, 9, 9};
  CHECK(adjusted_rand_index(a, renamed) == doctest::Approx(adjusted_rand_index(a, b)));

  std::vector<int> truth, one;
  for (int i = 0; i < 400; ++i) {
    truth.push_back(i % 4);
    one.push_back(0);
  }
  CHECK(std::abs(adjusted_rand_index(one, truth)) < 1e-12);

  std::vector<int> with_gaps{0, 0, -1, 1, 1, -1};
  CHECK(adjusted_rand_index(with_gaps, {5, 5, 0, 6, 6, 1}) == 1.0);
  CHECK_THROWS_AS(adjusted_rand_index({0, 1}, {0, 1, 2}), DataError);
  CHECK_THROWS_AS(adjusted_rand_index({-1, 0}, {0, -1}), DataError);
}

}  // TEST_SUITE
