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

#include "citetax/graphbuild.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <queue>
#include <unistd.h>

namespace citetax {
namespace {

std::atomic<std::uint64_t> g_run_counter{0};

bool edge_less(const WeightedEdge& a, const WeightedEdge& b) {
  return a.u != b.u ? a.u < b.u : a.v < b.v;
}

// Ranking key of an edge as seen from one endpoint.
struct RankKey {
  double w;
  DocIndex partner;
};

// "a ranks above b": heavier first, then lower partner index.
bool ranks_above(const RankKey& a, const RankKey& b) {
  return a.w != b.w ? a.w > b.w : a.partner < b.partner;
}

// Two-pass top-n union filter. observe() every edge, then ask keep().
class TopNUnion {
 public:
  TopNUnion(std::size_t n_nodes, int top_n)
      : top_n_(static_cast<std::size_t>(top_n)), heaps_(n_nodes) {}

  void observe(const WeightedEdge& e) {
    push(e.u, {e.w, e.v});
    push(e.v, {e.w, e.u});
  }

  bool keep(const WeightedEdge& e) const {
    return in_top(e.u, {e.w, e.v}) || in_top(e.v, {e.w, e.u});
  }

 private:
  // Heap ordered so that front() is the lowest-ranked kept edge.
  static bool heap_cmp(const RankKey& a, const RankKey& b) { return ranks_above(a, b); }

  void push(DocIndex node, RankKey key) {
    auto& heap = heaps_[node];
    if (heap.size() < top_n_) {
      heap.push_back(key);
      std::push_heap(heap.begin(), heap.end(), heap_cmp);
    } else if (ranks_above(key, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), heap_cmp);
      heap.back() = key;
      std::push_heap(heap.begin(), heap.end(), heap_cmp);
    }
  }

  bool in_top(DocIndex node, RankKey key) const {
    const auto& heap = heaps_[node];
    if (heap.size() < top_n_) return true;
    return !ranks_above(heap.front(), key);
  }

  std::size_t top_n_;
  std::vector<std::vector<RankKey>> heaps_;
};

void finalize_nodes(SimilarityGraph& graph, const std::vector<DocIndex>& candidates) {
  std::vector<DocIndex> nodes;
  nodes.reserve(graph.edges.size() * 2);
  for (const auto& e : graph.edges) {
    nodes.push_back(e.u);
    nodes.push_back(e.v);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  graph.nodes = std::move(nodes);
  graph.uncovered.clear();
  for (DocIndex c : candidates) {
    if (!std::binary_search(graph.nodes.begin(), graph.nodes.end(), c)) {
      graph.uncovered.push_back(c);
    }
  }
  graph.params["node_count"] = std::to_string(graph.nodes.size());
  graph.params["edge_count"] = std::to_string(graph.edges.size());
  graph.params["uncovered_count"] = std::to_string(graph.uncovered.size());
}

// Emits all unordered pairs of each group into the merger. Groups are
// generated in parallel blocks and appended in group order.
template <typename GroupFn>
void emit_group_pairs(std::size_t n_groups, GroupFn&& group_members,
                      EdgeRunMerger& merger, unsigned threads) {
  constexpr std::size_t kBlock = 2048;
  std::vector<std::vector<std::pair<DocIndex, DocIndex>>> pairs;
  for (std::size_t begin = 0; begin < n_groups; begin += kBlock) {
    const std::size_t end = std::min(n_groups, begin + kBlock);
    pairs.assign(end - begin, {});
    parallel_for(end - begin, threads, [&](std::size_t k) {
      const std::vector<DocIndex> members = group_members(begin + k);
      auto& out = pairs[k];
      for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
          out.emplace_back(members[a], members[b]);
        }
      }
    });
    for (const auto& block : pairs) {
      for (const auto& [u, v] : block) merger.add(u, v, 1.0);
    }
  }
}

}  // namespace

std::string_view to_string(SimilarityMethod method) {
  switch (method) {
    case SimilarityMethod::kDC: return "dc";
    case SimilarityMethod::kBC: return "bc";
    case SimilarityMethod::kCC: return "cc";
  }
  return "dc";
}

SimilarityMethod parse_similarity_method(std::string_view text) {
  if (text == "dc" || text == "DC") return SimilarityMethod::kDC;
  if (text == "bc" || text == "BC") return SimilarityMethod::kBC;
  if (text == "cc" || text == "CC") return SimilarityMethod::kCC;
  throw UsageError("unknown similarity method '" + std::string(text) + "'");
}

EdgeRunMerger::EdgeRunMerger(std::size_t buffer_edges, std::filesystem::path tmp_dir)
    : capacity_(std::max<std::size_t>(buffer_edges, 1)), tmp_dir_(std::move(tmp_dir)) {
  if (tmp_dir_.empty()) tmp_dir_ = std::filesystem::temp_directory_path();
  buffer_.reserve(std::min<std::size_t>(capacity_, std::size_t{1} << 16));
}

EdgeRunMerger::~EdgeRunMerger() {
  std::error_code ec;
  for (const auto& run : runs_) std::filesystem::remove(run, ec);
}

void EdgeRunMerger::add(DocIndex u, DocIndex v, double w) {
  if (u > v) std::swap(u, v);
  buffer_.push_back({u, v, w});
  if (buffer_.size() >= capacity_) spill();
}

void EdgeRunMerger::collapse_buffer() {
  std::stable_sort(buffer_.begin(), buffer_.end(), edge_less);
  std::size_t out = 0;
  for (std::size_t i = 0; i < buffer_.size(); ++i) {
    if (out > 0 && buffer_[out - 1].u == buffer_[i].u && buffer_[out - 1].v == buffer_[i].v) {
      buffer_[out - 1].w += buffer_[i].w;
    } else {
      buffer_[out++] = buffer_[i];
    }
  }
  buffer_.resize(out);
}

void EdgeRunMerger::spill() {
  if (buffer_.empty()) return;
  collapse_buffer();
  auto path = tmp_dir_ / ("citetax-run-" + std::to_string(::getpid()) + "-" +
                          std::to_string(g_run_counter.fetch_add(1)) + ".bin");
  std::ofstream out(path, std::ios::binary);
  for (const auto& e : buffer_) {
    out.write(reinterpret_cast<const char*>(&e.u), sizeof e.u);
    out.write(reinterpret_cast<const char*>(&e.v), sizeof e.v);
    out.write(reinterpret_cast<const char*>(&e.w), sizeof e.w);
  }
  if (!out) throw DataError("failed writing edge run " + path.string());
  runs_.push_back(std::move(path));
  buffer_.clear();
}

void EdgeRunMerger::merge(const std::function<void(const WeightedEdge&)>& visit) {
  if (runs_.empty()) {
    collapse_buffer();
    for (const auto& e : buffer_) visit(e);
    return;
  }
  spill();

  struct Cursor {
    std::ifstream in;
    WeightedEdge cur;
    bool next() {
      in.read(reinterpret_cast<char*>(&cur.u), sizeof cur.u);
      in.read(reinterpret_cast<char*>(&cur.v), sizeof cur.v);
      in.read(reinterpret_cast<char*>(&cur.w), sizeof cur.w);
      return static_cast<bool>(in);
    }
  };
  std::vector<Cursor> cursors(runs_.size());
  using Item = std::pair<WeightedEdge, std::size_t>;
  auto greater = [](const Item& a, const Item& b) {
    if (a.first.u != b.first.u) return a.first.u > b.first.u;
    if (a.first.v != b.first.v) return a.first.v > b.first.v;
    return a.second > b.second;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(greater)> heap(greater);
  for (std::size_t r = 0; r < runs_.size(); ++r) {
    cursors[r].in.open(runs_[r], std::ios::binary);
    if (!cursors[r].in) throw DataError("cannot reopen edge run " + runs_[r].string());
    if (cursors[r].next()) heap.emplace(cursors[r].cur, r);
  }
  bool have = false;
  WeightedEdge acc;
  while (!heap.empty()) {
    auto [e, r] = heap.top();
    heap.pop();
    if (have && acc.u == e.u && acc.v == e.v) {
      acc.w += e.w;
    } else {
      if (have) visit(acc);
      acc = e;
      have = true;
    }
    if (cursors[r].next()) heap.emplace(cursors[r].cur, r);
  }
  if (have) visit(acc);
}

SimilarityGraph build_dc(const Corpus& corpus, const YearRange& years,
                         int min_nonsource_cites, const BuildOptions& opts) {
  std::vector<CitationEdge> window_edges;
  for (const auto& e : corpus.edges()) {
    if (years.contains(corpus.doc(e.citing).pub_year)) window_edges.push_back(e);
  }
  const auto retained = filter_nonsource_by_citations(corpus, window_edges, min_nonsource_cites);

  std::vector<bool> candidate(corpus.size(), false);
  for (DocIndex i = 0; i < corpus.size(); ++i) {
    const auto& d = corpus.doc(i);
    if (d.is_source && years.contains(d.pub_year)) candidate[i] = true;
  }
  EdgeRunMerger merger(opts.buffer_edges);
  for (const auto& e : window_edges) {
    candidate[e.cited] = true;
    if (retained[e.cited]) merger.add(e.citing, e.cited, 1.0);
  }

  SimilarityGraph graph;
  graph.method = SimilarityMethod::kDC;
  graph.window = years;
  merger.merge([&](const WeightedEdge& e) { graph.edges.push_back(e); });
  if (graph.edges.empty()) {
    throw DataError("direct-citation graph is empty for window " + to_string(years));
  }
  std::vector<DocIndex> candidates;
  for (DocIndex i = 0; i < corpus.size(); ++i) {
    if (candidate[i]) candidates.push_back(i);
  }
  graph.params["method"] = "dc";
  graph.params["window"] = to_string(years);
  graph.params["min_nonsource_cites"] = std::to_string(min_nonsource_cites);
  finalize_nodes(graph, candidates);
  return graph;
}

SimilarityGraph build_bc(const Corpus& corpus, int citing_year, int max_ref_popularity,
                         BcNormalization norm, const BuildOptions& opts) {
  const auto span = corpus.source_years();
  if (span.empty() || !span.contains(citing_year)) {
    throw DataError("citing year " + std::to_string(citing_year) +
                    " is outside the corpus window " + to_string(span));
  }
  const YearRange year{citing_year, citing_year};
  auto is_citing = [&](DocIndex i) {
    const auto& d = corpus.doc(i);
    return d.is_source && d.pub_year == citing_year;
  };
  const auto popularity = corpus.citation_counts(year);

  std::vector<DocIndex> candidates;
  std::vector<std::uint32_t> eligible_refs(corpus.size(), 0);
  for (DocIndex i = 0; i < corpus.size(); ++i) {
    if (!is_citing(i) || corpus.refs(i).empty()) continue;
    candidates.push_back(i);
    for (DocIndex r : corpus.refs(i)) {
      if (popularity[r] <= static_cast<std::uint32_t>(max_ref_popularity)) ++eligible_refs[i];
    }
  }
  std::vector<DocIndex> shared_refs;
  for (DocIndex r = 0; r < corpus.size(); ++r) {
    if (popularity[r] >= 2 && popularity[r] <= static_cast<std::uint32_t>(max_ref_popularity)) {
      shared_refs.push_back(r);
    }
  }

  EdgeRunMerger merger(opts.buffer_edges);
  emit_group_pairs(
      shared_refs.size(),
      [&](std::size_t k) {
        std::vector<DocIndex> members;
        for (DocIndex c : corpus.citers(shared_refs[k])) {
          if (is_citing(c)) members.push_back(c);
        }
        std::sort(members.begin(), members.end());
        return members;
      },
      merger, opts.threads);

  SimilarityGraph graph;
  graph.method = SimilarityMethod::kBC;
  graph.window = year;
  merger.merge([&](const WeightedEdge& e) {
    WeightedEdge out = e;
    if (norm == BcNormalization::kCosine) {
      out.w = e.w / std::sqrt(static_cast<double>(eligible_refs[e.u]) * eligible_refs[e.v]);
    }
    graph.edges.push_back(out);
  });
  graph.params["method"] = "bc";
  graph.params["window"] = to_string(year);
  graph.params["max_ref_popularity"] = std::to_string(max_ref_popularity);
  graph.params["normalization"] = norm == BcNormalization::kCosine ? "cosine" : "raw";
  finalize_nodes(graph, candidates);
  return graph;
}

SimilarityGraph build_cc(const Corpus& corpus, const YearRange& years, int top_n,
                         CcNormalization norm, const BuildOptions& opts) {
  if (top_n < 1 || top_n > 50) throw UsageError("cc top_n must be in [1, 50]");
  std::vector<DocIndex> citing;
  for (DocIndex i = 0; i < corpus.size(); ++i) {
    const auto& d = corpus.doc(i);
    if (d.is_source && years.contains(d.pub_year) && !corpus.refs(i).empty()) {
      citing.push_back(i);
    }
  }
  if (citing.empty()) {
    throw DataError("co-citation window " + to_string(years) + " has no citing documents");
  }
  const auto counts = corpus.citation_counts(years);
  std::vector<DocIndex> candidates;
  for (DocIndex r = 0; r < corpus.size(); ++r) {
    if (counts[r] >= 2) candidates.push_back(r);
  }

  EdgeRunMerger merger(opts.buffer_edges);
  emit_group_pairs(
      citing.size(),
      [&](std::size_t k) {
        std::vector<DocIndex> members;
        for (DocIndex r : corpus.refs(citing[k])) {
          if (counts[r] >= 2) members.push_back(r);
        }
        return members;
      },
      merger, opts.threads);

  const double n_citing = static_cast<double>(citing.size());
  auto weight_of = [&](const WeightedEdge& e) {
    if (norm == CcNormalization::kRaw) return e.w;
    return e.w * n_citing / (static_cast<double>(counts[e.u]) * counts[e.v]);
  };
  TopNUnion selector(corpus.size(), top_n);
  merger.merge([&](const WeightedEdge& e) {
    selector.observe({e.u, e.v, weight_of(e)});
  });

  SimilarityGraph graph;
  graph.method = SimilarityMethod::kCC;
  graph.window = years;
  merger.merge([&](const WeightedEdge& e) {
    const WeightedEdge out{e.u, e.v, weight_of(e)};
    if (selector.keep(out)) graph.edges.push_back(out);
  });
  graph.params["method"] = "cc";
  graph.params["window"] = to_string(years);
  graph.params["top_n"] = std::to_string(top_n);
  graph.params["normalization"] = norm == CcNormalization::kRaw ? "raw" : "association";
  finalize_nodes(graph, candidates);
  return graph;
}

std::vector<WeightedEdge> retain_top_n_union(const std::vector<WeightedEdge>& edges,
                                             int top_n) {
  DocIndex max_id = 0;
  for (const auto& e : edges) max_id = std::max({max_id, e.u, e.v});
  TopNUnion selector(edges.empty() ? 0 : max_id + 1, top_n);
  for (const auto& e : edges) selector.observe(e);
  std::vector<WeightedEdge> kept;
  for (const auto& e : edges) {
    if (selector.keep(e)) kept.push_back(e);
  }
  return kept;
}

void write_graph(const SimilarityGraph& graph, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  for (const auto& e : graph.edges) {
    out << e.u << '\t' << e.v << '\t' << format_number(e.w) << '\n';
  }
  std::ofstream meta(path.string() + ".meta");
  for (const auto& [key, value] : graph.params) meta << key << '=' << value << '\n';
  if (!out || !meta) throw DataError("failed writing graph " + path.string());
}

SimilarityGraph read_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read graph " + path.string());
  SimilarityGraph graph;
  std::ifstream meta(path.string() + ".meta");
  std::string line;
  while (meta && std::getline(meta, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    graph.params[line.substr(0, eq)] = line.substr(eq + 1);
  }
  if (auto it = graph.params.find("method"); it != graph.params.end()) {
    graph.method = parse_similarity_method(it->second);
  }
  if (auto it = graph.params.find("window"); it != graph.params.end()) {
    graph.window = parse_year_range(it->second);
  }
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    const auto bad = [&] {
      return DataError(path.string() + ":" + std::to_string(line_no) + ": malformed edge");
    };
    if (f.size() != 3) throw bad();
    const auto u = parse_int(f[0]);
    const auto v = parse_int(f[1]);
    const auto w = parse_double(f[2]);
    if (!u || !v || !w || *u < 0 || *v < 0 || *u >= *v || !(*w > 0)) throw bad();
    graph.edges.push_back({static_cast<DocIndex>(*u), static_cast<DocIndex>(*v), *w});
  }
  if (!std::is_sorted(graph.edges.begin(), graph.edges.end(), edge_less)) {
    throw DataError(path.string() + ": edges not sorted by (u, v)");
  }
  for (const auto& e : graph.edges) {
    graph.nodes.push_back(e.u);
    graph.nodes.push_back(e.v);
  }
  std::sort(graph.nodes.begin(), graph.nodes.end());
  graph.nodes.erase(std::unique(graph.nodes.begin(), graph.nodes.end()), graph.nodes.end());
  return graph;
}

}  // namespace citetax
