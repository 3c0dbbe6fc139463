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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any of them fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "citetax/goldstd.hpp"
#include "citetax/graphbuild.hpp"
#include "citetax/herfeval.hpp"
#include "citetax/network.hpp"
#include "citetax/oracle.hpp"
#include "citetax/postassign.hpp"
#include "citetax/slm.hpp"
#include "citetax/taxonomy.hpp"

using namespace citetax;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

fs::path g_work;

// Runs the command-line tool; output goes to a log under the work directory.
int run_tool(const std::string& args, const std::string& log) {
  const std::string cmd =
      std::string("\"") + CITETAX_BIN + "\" " + args + " > \"" + (g_work / log).string() + "\" 2>&1";
  return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// name -> (n_clusters, mean_herf) from report.csv
std::map<std::string, std::pair<int, double>> read_report(const fs::path& path) {
  std::map<std::string, std::pair<int, double>> rows;
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    if (f.size() < 5) continue;
    rows[f[0]] = {std::stoi(f[2]), std::stod(f[4])};
  }
  return rows;
}

// ---------------------------------------------------------------- 1

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  int match1 = 0, match5 = 0;
  const double gamma = 0.3;
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t s = mix64(1000 + static_cast<std::uint64_t>(i));
    const int n = 2 + static_cast<int>(s % 7);
    const auto net = random_connected_network(n, 0.4, s);
    const auto best = exhaustive_best_partition(net, QualityKind::kCPM, gamma);
    ClusterParams p;
    p.resolution = gamma;
    p.seed = s;
    if (std::abs(smart_local_moving(net, p).quality_value - best.quality) <= 1e-9) ++match1;
    p.restarts = 5;
    if (std::abs(smart_local_moving(net, p).quality_value - best.quality) <= 1e-9) ++match5;
  }
  const double secs = seconds_since(t0);
  return {match1 >= 98 && match5 == 100 && secs < 30.0,
          "1 restart " + std::to_string(match1) + "/100, 5 restarts " + std::to_string(match5) +
              "/100, " + fmt(secs, 2) + " s"};
}

// ---------------------------------------------------------------- 2

// Gold paper 0 citing refs 1..n; baseline covers every ref.
GoldStandard gold_over(int n) {
  GoldStandard g;
  g.doc = 0;
  g.n_refs_total = g.n_refs_resolvable = g.n_refs_in_window = static_cast<std::size_t>(n);
  for (int r = 1; r <= n; ++r) g.ref_ids.push_back(static_cast<DocIndex>(r));
  return g;
}

Taxonomy taxonomy_of(const std::string& name, const std::vector<int>& cl) {
  int k = 0;
  for (int c : cl) k = std::max(k, c + 1);
  return taxonomy_from_assignment(name, cl, k);
}

Outcome table_arithmetic() {
  const auto gold = gold_over(92);
  const auto baseline = taxonomy_of("base", std::vector<int>(93, 0));
  std::vector<int> cl(93, kNoCluster);
  int next = 1;
  auto fill = [&](int count, int id) {
    for (int i = 0; i < count; ++i) cl[next++] = id;
  };
  fill(44, 0);
  fill(8, 1);
  fill(4, 2);
  fill(2, 3);
  for (int id = 4; next <= 92; ++id) fill(1, id);
  const double h = herfindahl_paper(gold, taxonomy_of("t", cl), baseline);
  const bool ok = std::abs(h - 0.2427) <= 0.0001 && std::abs(h - 0.244) <= 0.002;
  return {ok, "H = " + fmt(h, 6) + " (reported 0.244)"};
}

// ---------------------------------------------------------------- 3

Outcome herfindahl_fuzz() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(3);
  int violations = 0, splits = 0;
  for (int round = 0; round < 1000; ++round) {
    const int n = 1 + static_cast<int>(rng() % 80);
    const auto gold = gold_over(n);
    const auto baseline = taxonomy_of("base", std::vector<int>(n + 1, 0));
    const int k = 1 + static_cast<int>(rng() % 10);
    std::vector<int> cl(n + 1, kNoCluster);
    for (int r = 1; r <= n; ++r) {
      cl[r] = rng() % 5 == 0 ? kNoCluster : static_cast<int>(rng() % k);
    }
    const double h = herfindahl_paper(gold, taxonomy_of("t", cl), baseline);
    if (h < 1.0 / n - 1e-12 || h > 1.0 + 1e-12) ++violations;
    // Split one cluster into two non-empty parts.
    const int target = static_cast<int>(rng() % k);
    std::vector<int> members;
    for (int r = 1; r <= n; ++r) {
      if (cl[r] == target) members.push_back(r);
    }
    if (members.size() < 2) continue;
    std::shuffle(members.begin(), members.end(), rng);
    const std::size_t cut = 1 + rng() % (members.size() - 1);
    auto split = cl;
    for (std::size_t i = 0; i < cut; ++i) split[members[i]] = k;
    const double hs = herfindahl_paper(gold, taxonomy_of("s", split), baseline);
    ++splits;
    if (hs > h + 1e-12) ++violations;
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && secs < 10.0, std::to_string(violations) + " violations, " +
                                              std::to_string(splits) + " splits, " +
                                              fmt(secs, 2) + " s"};
}

// ------------------------------------------------------------- 4, 5, 8

const fs::path& synthetic_run(bool* ok) {
  static const fs::path dir = g_work / "seed7";
  static const int code = run_tool("pipeline --out \"" + dir.string() + "\" --seed 7", "seed7.log");
  *ok = code == 0;
  return dir;
}

Outcome granularity_trend() {
  bool ok = false;
  const auto& dir = synthetic_run(&ok);
  if (!ok) return {false, "pipeline failed, see seed7.log"};
  auto rows = read_report(dir / "report/report.csv");
  std::vector<std::pair<int, double>> dc;
  for (const char* name : {"dc-L1", "dc-L2", "dc-L3"}) {
    if (!rows.contains(name)) return {false, std::string("missing ") + name};
    dc.push_back(rows[name]);
  }
  std::sort(dc.begin(), dc.end());
  std::string detail;
  bool pass = true;
  for (std::size_t i = 0; i < dc.size(); ++i) {
    detail += (i ? ", " : "") + std::to_string(dc[i].first) + " clusters H " + fmt(dc[i].second);
    if (i > 0 && !(dc[i].first > dc[i - 1].first && dc[i].second < dc[i - 1].second)) pass = false;
  }
  // The three levels should sit near 16, 64 and 256 clusters.
  const int targets[] = {16, 64, 256};
  for (int i = 0; i < 3; ++i) {
    if (std::abs(dc[i].first - targets[i]) > 0.2 * targets[i]) pass = false;
  }
  return {pass, detail};
}

Outcome method_ordering() {
  bool ok = false;
  const auto& dir = synthetic_run(&ok);
  if (!ok) return {false, "pipeline failed, see seed7.log"};
  auto rows = read_report(dir / "report/report.csv");
  int pairs = 0;
  bool pass = true;
  std::string detail;
  for (const auto& [dname, d] : rows) {
    if (!dname.starts_with("dc-")) continue;
    for (const auto& [cname, c] : rows) {
      if (!cname.starts_with("cc-")) continue;
      if (std::abs(c.first - d.first) > 0.2 * d.first) continue;
      ++pairs;
      pass = pass && d.second > c.second;
      detail += (pairs > 1 ? "; " : "") + dname + " " + fmt(d.second) + " vs " + cname + " " +
                fmt(c.second);
    }
  }
  for (const auto& [name, r] : rows) {
    if (name.starts_with("bc-")) detail += "; " + name + " " + fmt(r.second) + " (not asserted)";
  }
  return {pass && pairs > 0, pairs == 0 ? "no matched dc/cc pair" : detail};
}

Outcome age_contrast() {
  bool ok = false;
  const auto& dir = synthetic_run(&ok);
  if (!ok) return {false, "pipeline failed, see seed7.log"};
  const auto corpus = load_corpus_dir(dir / "corpus");
  auto dc = read_partition_file(dir / "runs/dc/partition.tsv", corpus, "dc");
  auto bc = read_partition_file(dir / "runs/bc/partition.tsv", corpus, "bc");
  if (!dc.contains(1) || !bc.contains(1)) return {false, "missing level 1"};
  const double dc_year = age_distribution(dc.at(1), corpus).mean_year;
  const double bc_year = age_distribution(bc.at(1), corpus).mean_year;
  return {bc_year - dc_year >= 1.0, "BC " + fmt(bc_year, 2) + ", DC " + fmt(dc_year, 2) +
                                        ", difference " + fmt(bc_year - dc_year, 2)};
}

// ---------------------------------------------------------------- 6

struct Recovery {
  double ari = 0.0;
  int n_clusters = 0;
  double clustered_share = 0.0;
};

Recovery recover_topics(const SynthSpec& spec) {
  const auto s = generate_corpus(spec);
  const unsigned threads = default_thread_count();
  const auto graph = build_dc(s.corpus, s.corpus.source_years(), 2, BuildOptions{1u << 22, threads});
  const auto net = network_from_graph(graph, QualityKind::kCPM);
  ClusterParams p;
  p.threads = threads;
  p.seed = spec.seed;
  const auto part = cluster_to_target(net, p, 4.0, 5);
  std::vector<int> found, truth;
  int clustered = 0;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    found.push_back(part.cluster[i]);
    truth.push_back(s.topic[graph.nodes[i]]);
    clustered += part.cluster[i] != kNoCluster;
  }
  return {adjusted_rand_index(found, truth), part.n_clusters,
          static_cast<double>(clustered) / static_cast<double>(s.corpus.size())};
}

Outcome planted_recovery() {
  SynthSpec spec;
  const auto small = recover_topics(spec);
  SynthSpec big;
  big.docs_per_topic_per_year = 834;  // 4 x 834 x 15 = 50,040 documents
  const auto t0 = Clock::now();
  const auto large = recover_topics(big);
  const double secs = seconds_since(t0);
  return {small.ari >= 0.9 && secs < 60.0,
          "ARI " + fmt(small.ari) + " with " + std::to_string(small.n_clusters) +
              " clusters over " + fmt(100 * small.clustered_share, 1) + "% of docs; 50k run " +
              fmt(secs, 1) + " s (ARI " + fmt(large.ari) + ", " + std::to_string(default_thread_count()) +
              " threads)"};
}

// ---------------------------------------------------------------- 7

// Dominance rule coded from its definition with integer arithmetic:
// share >= 2/5 <=> 5 * top >= 2 * total.
std::optional<int> dominance_oracle(const std::vector<int>& cites) {
  if (cites.size() < 2) return std::nullopt;
  std::map<int, int> count;
  for (int c : cites) ++count[c];
  int top = 0;
  for (const auto& [c, n] : count) top = std::max(top, n);
  std::optional<int> winner;
  for (const auto& [c, n] : count) {
    if (n != top) continue;
    if (winner) return std::nullopt;
    winner = c;
  }
  if (5 * top < 2 * static_cast<int>(cites.size())) return std::nullopt;
  return winner;
}

Outcome rule_fidelity() {
  std::mt19937_64 rng(11);
  const int n_cases = 10000;
  int mismatches = 0, boundary = 0, single = 0;
  std::vector<std::vector<int>> multisets;
  for (int i = 0; i < n_cases; ++i) {
    std::vector<int> m;
    switch (i % 4) {
      case 0: {  // exactly 40% for one cluster
        const int total = 5 * (1 + static_cast<int>(rng() % 4));
        const int top = 2 * total / 5;
        m.assign(top, 0);
        for (int k = top; k < total; ++k) m.push_back(1 + k % 3);
        ++boundary;
        break;
      }
      case 1:
        m.push_back(static_cast<int>(rng() % 6));
        ++single;
        break;
      default: {
        const int k = static_cast<int>(rng() % 15);
        const int clusters = 1 + static_cast<int>(rng() % 6);
        for (int j = 0; j < k; ++j) m.push_back(static_cast<int>(rng() % clusters));
      }
    }
    std::shuffle(m.begin(), m.end(), rng);
    multisets.push_back(std::move(m));
  }
  // One taxonomy over all cases: citers first, then one reference per case.
  std::size_t n_citers = 0;
  for (const auto& m : multisets) n_citers += m.size();
  const std::size_t n = n_citers + multisets.size();
  std::vector<int> cl(n, kNoCluster);
  std::vector<CitationEdge> edges;
  int max_cluster = 0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < multisets.size(); ++i) {
    for (int c : multisets[i]) {
      cl[next] = c;
      max_cluster = std::max(max_cluster, c);
      edges.push_back({static_cast<DocIndex>(next), static_cast<DocIndex>(n_citers + i)});
      ++next;
    }
  }
  const auto part = taxonomy_from_assignment("fuzz", cl, max_cluster + 1);
  const auto out = assign_cited_refs(part, edges, AssignmentRule{0.40, 2});
  for (std::size_t i = 0; i < multisets.size(); ++i) {
    const DocIndex ref = static_cast<DocIndex>(n_citers + i);
    const auto expected = dominance_oracle(multisets[i]);
    std::optional<int> got;
    if (out.covers(ref)) got = out.membership[ref][0].cluster;
    if (got != expected) ++mismatches;
  }
  return {mismatches == 0, std::to_string(n_cases) + " multisets (" + std::to_string(boundary) +
                               " at 40%, " + std::to_string(single) + " single citation), " +
                               std::to_string(mismatches) + " mismatches"};
}

// ---------------------------------------------------------------- 9

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file() || e.path().filename() == "manifest.json") continue;
    files[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
  }
  return files;
}

Outcome determinism() {
  const fs::path a = g_work / "seed42a", b = g_work / "seed42b";
  if (run_tool("pipeline --out \"" + a.string() + "\" --seed 42", "seed42a.log") != 0 ||
      run_tool("pipeline --out \"" + b.string() + "\" --seed 42", "seed42b.log") != 0) {
    return {false, "pipeline failed"};
  }
  const auto ta = tree(a), tb = tree(b);
  std::size_t differ = 0;
  for (const auto& [path, content] : ta) {
    auto it = tb.find(path);
    if (it == tb.end() || it->second != content) ++differ;
  }
  differ += tb.size() > ta.size() ? tb.size() - ta.size() : 0;
  return {differ == 0 && !ta.empty(),
          std::to_string(ta.size()) + " files compared, " + std::to_string(differ) + " differ"};
}

}  // namespace

int main(int argc, char** argv) {
  g_work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "citetax_acceptance";
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 oracle equivalence", oracle_equivalence},
      {"2 table arithmetic", table_arithmetic},
      {"3 herfindahl bounds and splits", herfindahl_fuzz},
      {"4 granularity trend", granularity_trend},
      {"5 dc over cc", method_ordering},
      {"6 planted recovery", planted_recovery},
      {"7 dominance rule fuzz", rule_fidelity},
      {"8 bc younger than dc", age_contrast},
      {"9 pipeline determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << "  (" << o.detail << ")"
              << std::endl;
  }
  if (failed == 0) fs::remove_all(g_work);
  return failed == 0 ? 0 : 1;
}
