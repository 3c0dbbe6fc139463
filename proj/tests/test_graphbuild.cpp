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

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "citetax/graphbuild.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace citetax;
using namespace citetax::testing;

namespace {

using EdgeMap = std::map<std::pair<DocIndex, DocIndex>, double>;

EdgeMap as_map(const SimilarityGraph& g) {
  EdgeMap m;
  for (const auto& e : g.edges) m[{e.u, e.v}] = e.w;
  return m;
}

double weight(const Corpus& c, const SimilarityGraph& g, const std::string& a,
              const std::string& b) {
  DocIndex u = c.at(a), v = c.at(b);
  if (u > v) std::swap(u, v);
  auto m = as_map(g);
  auto it = m.find({u, v});
  return it == m.end() ? 0.0 : it->second;
}

// Random corpus: `n_src` source docs over 2000-2004, plus some stub refs.
Corpus random_corpus(std::uint64_t seed, int n_src, int max_refs) {
  std::mt19937_64 rng(seed);
  std::string docs, cites;
  for (int i = 0; i < n_src; ++i) {
    docs += article("s" + std::to_string(i), 2000 + static_cast<int>(rng() % 5));
  }
  for (int i = 0; i < n_src; ++i) {
    const int k = static_cast<int>(rng() % (max_refs + 1));
    for (int j = 0; j < k; ++j) {
      std::string target = rng() % 3 == 0 ? "r" + std::to_string(rng() % 40)
                                          : "s" + std::to_string(rng() % n_src);
      cites += "s" + std::to_string(i) + "\t" + target + "\n";
    }
  }
  return corpus_from(docs, cites);
}

EdgeMap brute_bc(const Corpus& c, int year, int cap) {
  const auto pop = c.citation_counts({year, year});
  std::vector<DocIndex> citing;
  for (DocIndex i = 0; i < c.size(); ++i) {
    if (c.doc(i).is_source && c.doc(i).pub_year == year && !c.refs(i).empty()) {
      citing.push_back(i);
    }
  }
  EdgeMap m;
  for (std::size_t a = 0; a < citing.size(); ++a) {
    for (std::size_t b = a + 1; b < citing.size(); ++b) {
      auto ra = c.refs(citing[a]);
      auto rb = c.refs(citing[b]);
      int shared = 0;
      for (DocIndex x : ra) {
        if (pop[x] <= static_cast<std::uint32_t>(cap) &&
            std::find(rb.begin(), rb.end(), x) != rb.end()) {
          ++shared;
        }
      }
      if (shared > 0) m[{citing[a], citing[b]}] = shared;
    }
  }
  return m;
}

EdgeMap brute_cc_raw(const Corpus& c, const YearRange& years) {
  const auto counts = c.citation_counts(years);
  EdgeMap m;
  for (DocIndex a = 0; a < c.size(); ++a) {
    if (counts[a] < 2) continue;
    for (DocIndex b = a + 1; b < c.size(); ++b) {
      if (counts[b] < 2) continue;
      int both = 0;
      for (DocIndex p = 0; p < c.size(); ++p) {
        if (!c.doc(p).is_source || !years.contains(c.doc(p).pub_year)) continue;
        auto r = c.refs(p);
        if (std::find(r.begin(), r.end(), a) != r.end() &&
            std::find(r.begin(), r.end(), b) != r.end()) {
          ++both;
        }
      }
      if (both > 0) m[{a, b}] = both;
    }
  }
  return m;
}

// Per-node full sort; an edge survives if it is in either endpoint's first n.
EdgeMap brute_top_n(const EdgeMap& all, int n) {
  std::map<DocIndex, std::vector<std::pair<double, DocIndex>>> lists;
  for (const auto& [uv, w] : all) {
    lists[uv.first].push_back({w, uv.second});
    lists[uv.second].push_back({w, uv.first});
  }
  std::set<std::pair<DocIndex, DocIndex>> keep;
  for (auto& [node, list] : lists) {
    std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (std::size_t k = 0; k < list.size() && k < static_cast<std::size_t>(n); ++k) {
      keep.insert({std::min(node, list[k].second), std::max(node, list[k].second)});
    }
  }
  EdgeMap out;
  for (const auto& uv : keep) out[uv] = all.at(uv);
  return out;
}

void check_graph_invariants(const SimilarityGraph& g) {
  std::set<DocIndex> incident;
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    CHECK(e.u < e.v);
    CHECK(e.w > 0.0);
    if (k > 0) {
      const auto& p = g.edges[k - 1];
      CHECK((p.u < e.u || (p.u == e.u && p.v < e.v)));
    }
    incident.insert(e.u);
    incident.insert(e.v);
  }
  CHECK(std::vector<DocIndex>(incident.begin(), incident.end()) == g.nodes);
  for (DocIndex u : g.uncovered) CHECK_FALSE(incident.contains(u));
}

}  // namespace

TEST_SUITE("graphbuild") {

TEST_CASE("direct citation gives one unit edge per pair") {
  auto c = corpus_from(article("A", 2000) + article("B", 1999) + article("C", 2000),
                       "A\tB\nC\tB\n");
  auto g = build_dc(c, {1990, 2010});
  CHECK(g.edges.size() == 2);
  CHECK(g.nodes.size() == 3);
  for (const auto& e : g.edges) CHECK(e.w == 1.0);
  check_graph_invariants(g);
}

TEST_CASE("direct citation drops non-source cited once") {
  auto c = corpus_from(article("A", 2000) + article("C", 2000) + "B\t\tother\t\t0\n",
                       "A\tB\nA\tC\n");
  auto g = build_dc(c, {1990, 2010}, 2);
  CHECK(g.edges.size() == 1);
  CHECK(std::find(g.uncovered.begin(), g.uncovered.end(), c.at("B")) != g.uncovered.end());
  auto g1 = build_dc(c, {1990, 2010}, 1);
  CHECK(g1.edges.size() == 2);
}

TEST_CASE("direct citation of a chain is a path") {
  std::string docs, cites;
  for (int i = 0; i < 10; ++i) {
    docs += article("n" + std::to_string(i), 2000 + i);
    if (i > 0) cites += "n" + std::to_string(i) + "\tn" + std::to_string(i - 1) + "\n";
  }
  auto c = corpus_from(docs, cites);
  auto g = build_dc(c, {2000, 2009});
  CHECK(g.edges.size() == 9);
  CHECK(g.nodes.size() == 10);
  std::map<DocIndex, int> degree;
  for (const auto& e : g.edges) {
    ++degree[e.u];
    ++degree[e.v];
  }
  int ends = 0;
  for (auto [n, d] : degree) {
    CHECK(d <= 2);
    ends += d == 1;
  }
  CHECK(ends == 2);
}

TEST_CASE("direct citation with mutual citation sums to two") {
  auto c = corpus_from(article("A", 2000) + article("B", 2000), "A\tB\nB\tA\n");
  auto g = build_dc(c, {2000, 2000});
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0].w == 2.0);
}

TEST_CASE("direct citation with an empty window is a data error") {
  auto c = corpus_from(article("A", 2000) + article("B", 2000), "A\tB\n");
  CHECK_THROWS_AS(build_dc(c, {1980, 1990}), DataError);
}

TEST_CASE("coupling counts shared references") {
  const std::string docs = article("X", 2010) + article("Y", 2010) + article("Z", 2010);
  auto c = corpus_from(docs, "X\ta\nX\tb\nX\tc\nX\td\nY\tb\nY\tc\nY\te\nZ\tq\n");
  auto g = build_bc(c, 2010);
  CHECK(weight(c, g, "X", "Y") == 2.0);
  CHECK(weight(c, g, "X", "Z") == 0.0);
  CHECK(g.edges.size() == 1);
  CHECK(g.uncovered == std::vector<DocIndex>{c.at("Z")});
}

TEST_CASE("coupling excludes references cited more than the cap") {
  std::string docs = article("X", 2010) + article("Y", 2010);
  std::string cites = "X\ta\nX\tb\nX\tc\nX\td\nY\tb\nY\tc\nY\te\n";
  // 148 more citers of b in 2010, total 150.
  for (int i = 0; i < 148; ++i) {
    docs += article("f" + std::to_string(i), 2010);
    cites += "f" + std::to_string(i) + "\tb\n";
  }
  auto c = corpus_from(docs, cites);
  CHECK(weight(c, build_bc(c, 2010, 100), "X", "Y") == 1.0);
  CHECK(weight(c, build_bc(c, 2010, 150), "X", "Y") == 2.0);  // 150 is not more than 150
  CHECK(weight(c, build_bc(c, 2010, 149), "X", "Y") == 1.0);
}

TEST_CASE("coupling cosine divides by eligible reference counts") {
  auto c = corpus_from(article("X", 2010) + article("Y", 2010),
                       "X\ta\nX\tb\nX\tc\nX\td\nY\tb\nY\tc\nY\te\n");
  auto g = build_bc(c, 2010, 100, BcNormalization::kCosine);
  CHECK(weight(c, g, "X", "Y") == doctest::Approx(2.0 / std::sqrt(12.0)).epsilon(1e-12));
}

TEST_CASE("coupling year outside the corpus is a data error") {
  auto c = corpus_from(article("X", 2010) + article("Y", 2010), "X\ta\nY\ta\n");
  CHECK_THROWS_AS(build_bc(c, 2020), DataError);
}

TEST_CASE("co-citation raw weight counts common citers") {
  const std::string docs =
      article("p1", 2011) + article("p2", 2011) + article("p3", 2012) + article("p4", 2012);
  auto c = corpus_from(docs, "p1\ta\np1\tb\np2\ta\np2\tb\np3\ta\np3\tb\np4\tz\n");
  auto g = build_cc(c, {2011, 2013});
  CHECK(weight(c, g, "a", "b") == 3.0);
  // z is cited once in the window and never becomes a node.
  CHECK(std::find(g.nodes.begin(), g.nodes.end(), c.at("z")) == g.nodes.end());
  CHECK(std::find(g.uncovered.begin(), g.uncovered.end(), c.at("z")) == g.uncovered.end());
}

TEST_CASE("co-citation association strength") {
  const std::string docs = article("p1", 2011) + article("p2", 2011) + article("p3", 2011);
  auto c = corpus_from(docs, "p1\ta\np1\tb\np2\ta\np2\tb\np3\ta\np3\tc\np2\tc\n");
  auto g = build_cc(c, {2011, 2011}, 10, CcNormalization::kAssociationStrength);
  // cites: a=3, b=2, c=2; 3 citing docs; co(a,b)=2.
  CHECK(weight(c, g, "a", "b") == doctest::Approx(2.0 * 3 / (3 * 2)));
}

TEST_CASE("co-citation rejects bad top_n and empty windows") {
  auto c = corpus_from(article("p1", 2011), "p1\ta\n");
  CHECK_THROWS_AS(build_cc(c, {2011, 2011}, 0), UsageError);
  CHECK_THROWS_AS(build_cc(c, {2011, 2011}, 51), UsageError);
  CHECK_THROWS_AS(build_cc(c, {1990, 1991}), DataError);
}

TEST_CASE("top-n union on a 25-node fixture matches an independent sort") {
  // Node 0 has 20 candidate edges of varied weight; the rest form a random mesh.
  std::mt19937_64 rng(5);
  std::vector<WeightedEdge> edges;
  std::map<std::pair<DocIndex, DocIndex>, double> all;
  for (DocIndex v = 1; v <= 20; ++v) all[{0, v}] = 1 + static_cast<double>(rng() % 6);
  for (DocIndex u = 1; u < 25; ++u) {
    for (DocIndex v = u + 1; v < 25; ++v) {
      if (rng() % 4 == 0) all[{u, v}] = 1 + static_cast<double>(rng() % 6);
    }
  }
  for (auto& [uv, w] : all) edges.push_back({uv.first, uv.second, w});
  auto kept = retain_top_n_union(edges, 10);
  EdgeMap got;
  for (const auto& e : kept) got[{e.u, e.v}] = e.w;
  CHECK(got == brute_top_n(all, 10));
  int at_zero = 0;
  for (const auto& e : kept) at_zero += e.u == 0;
  CHECK(at_zero >= 10);
}

TEST_CASE("top-n keeps every node that had an edge") {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 20; ++round) {
    std::map<std::pair<DocIndex, DocIndex>, double> all;
    for (int k = 0; k < 200; ++k) {
      DocIndex u = rng() % 60, v = rng() % 60;
      if (u == v) continue;
      all[{std::min(u, v), std::max(u, v)}] = 1 + static_cast<double>(rng() % 3);
    }
    std::vector<WeightedEdge> edges;
    std::set<DocIndex> before, after;
    for (auto& [uv, w] : all) {
      edges.push_back({uv.first, uv.second, w});
      before.insert(uv.first);
      before.insert(uv.second);
    }
    const int n = 1 + static_cast<int>(rng() % 3);
    for (const auto& e : retain_top_n_union(edges, n)) {
      after.insert(e.u);
      after.insert(e.v);
    }
    CHECK(before == after);
  }
}

TEST_CASE("coupling and co-citation equal brute force on random corpora") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto c = random_corpus(seed, 150, 12);
    for (int cap : {100, 3}) {
      auto g = build_bc(c, 2002, cap);
      CHECK(as_map(g) == brute_bc(c, 2002, cap));
      check_graph_invariants(g);
      for (const auto& e : g.edges) {
        CHECK(e.w <= std::min(c.refs(e.u).size(), c.refs(e.v).size()));
      }
    }
    const YearRange window{2001, 2003};
    const auto raw = brute_cc_raw(c, window);
    auto full = build_cc(c, window, 50);
    auto expected_full = brute_top_n(raw, 50);
    CHECK(as_map(full) == expected_full);
    auto g = build_cc(c, window, 3);
    CHECK(as_map(g) == brute_top_n(raw, 3));
    check_graph_invariants(g);
    const auto counts = c.citation_counts(window);
    for (const auto& e : g.edges) CHECK(e.w <= std::min(counts[e.u], counts[e.v]));
  }
}

TEST_CASE("small merge buffers and thread counts do not change graphs") {
  auto c = random_corpus(99, 300, 15);
  auto base_bc = build_bc(c, 2003);
  auto base_cc = build_cc(c, {2002, 2004}, 5);
  auto base_dc = build_dc(c, {2000, 2004});
  for (unsigned threads : {1u, 3u}) {
    BuildOptions opts{7, threads};
    CHECK(as_map(build_bc(c, 2003, 100, BcNormalization::kRaw, opts)) == as_map(base_bc));
    CHECK(as_map(build_cc(c, {2002, 2004}, 5, CcNormalization::kRaw, opts)) ==
          as_map(base_cc));
    CHECK(as_map(build_dc(c, {2000, 2004}, 2, opts)) == as_map(base_dc));
  }
}

TEST_CASE("run merger spills and merges") {
  std::mt19937_64 rng(3);
  EdgeRunMerger merger(16);
  EdgeMap expected;
  for (int k = 0; k < 1000; ++k) {
    DocIndex u = rng() % 30, v = rng() % 30;
    if (u == v) continue;
    const double w = 1 + static_cast<double>(rng() % 4);
    merger.add(u, v, w);
    expected[{std::min(u, v), std::max(u, v)}] += w;
  }
  CHECK(merger.n_runs() > 1);
  for (int pass = 0; pass < 2; ++pass) {
    EdgeMap got;
    std::pair<DocIndex, DocIndex> last{0, 0};
    bool first = true;
    merger.merge([&](const WeightedEdge& e) {
      if (!first) CHECK(last < std::make_pair(e.u, e.v));
      first = false;
      last = {e.u, e.v};
      got[{e.u, e.v}] = e.w;
    });
    CHECK(got == expected);
  }
}

TEST_CASE("graph file roundtrip") {
  auto c = random_corpus(4, 80, 8);
  auto g = build_bc(c, 2001, 100, BcNormalization::kCosine);
  TempDir tmp;
  write_graph(g, tmp / "g/graph.tsv");
  auto back = read_graph(tmp / "g/graph.tsv");
  CHECK(back.method == SimilarityMethod::kBC);
  CHECK(back.window == g.window);
  CHECK(back.nodes == g.nodes);
  CHECK(back.params.at("uncovered_count") == std::to_string(g.uncovered.size()));
  CHECK(as_map(back) == as_map(g));
  CHECK(back.params.at("normalization") == "cosine");
}

TEST_CASE("unsorted graph file is rejected") {
  TempDir tmp;
  {
    std::ofstream out(tmp / "graph.tsv");
    out << "2\t3\t1\n0\t1\t1\n";
    std::ofstream meta(tmp / "graph.tsv.meta");
    meta << "method=dc\nwindow=2000-2001\n";
  }
  CHECK_THROWS_AS(read_graph(tmp / "graph.tsv"), DataError);
}

}  // TEST_SUITE
