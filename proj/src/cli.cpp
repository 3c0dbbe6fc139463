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

#include "citetax/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "citetax/corpus.hpp"
#include "citetax/goldstd.hpp"
#include "citetax/graphbuild.hpp"
#include "citetax/herfeval.hpp"
#include "citetax/manifest.hpp"
#include "citetax/oracle.hpp"
#include "citetax/postassign.hpp"
#include "citetax/slm.hpp"
#include "citetax/taxonomy.hpp"

namespace citetax {
namespace {

namespace fs = std::filesystem;

struct Context {
  std::string command;
  std::map<std::string, std::string> config;
  unsigned threads = 1;
  std::chrono::system_clock::time_point started = std::chrono::system_clock::now();
  std::ostream* log = &std::cout;
};

void finish(const fs::path& dir, const Context& ctx, std::vector<fs::path> inputs,
            std::optional<std::uint64_t> seed = std::nullopt) {
  RunManifest m;
  m.command = ctx.command;
  m.config = ctx.config;
  m.inputs = std::move(inputs);
  m.seed = seed;
  m.started_at = ctx.started;
  write_manifest(dir, m);
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = parse_double(item);
    if (!v) throw UsageError(std::string("invalid ") + what + ": '" + item + "'");
    out.push_back(*v);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  for (double v : parse_double_list(text, what)) {
    if (v != static_cast<double>(static_cast<int>(v))) {
      throw UsageError(std::string("invalid ") + what + ": expected integers");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void require_file(const fs::path& path, const std::string& what) {
  if (!fs::is_regular_file(path)) throw DataError(what + " not found: " + path.string());
}

Corpus open_corpus(const fs::path& dir) {
  require_file(dir / "docs.tsv", "corpus documents");
  require_file(dir / "cites.tsv", "corpus citations");
  return load_corpus_dir(dir);
}

std::string dir_name(const fs::path& dir) {
  auto p = dir;
  if (!p.has_filename()) p = p.parent_path();
  return p.filename().string();
}

// "DIR" or "DIR:LEVEL"; the default level is the finest one present.
Taxonomy load_baseline(const std::string& spec, const Corpus& corpus) {
  fs::path dir = spec;
  std::optional<int> level;
  if (const auto colon = spec.rfind(':'); colon != std::string::npos) {
    if (const auto v = parse_int(std::string_view(spec).substr(colon + 1))) {
      dir = spec.substr(0, colon);
      level = static_cast<int>(*v);
    }
  }
  require_file(dir / "partition.tsv", "baseline partition");
  auto levels = read_partition_file(dir / "partition.tsv", corpus, dir_name(dir));
  if (levels.empty()) throw DataError("baseline partition is empty: " + dir.string());
  const int chosen = level.value_or(levels.rbegin()->first);
  auto it = levels.find(chosen);
  if (it == levels.end()) {
    throw UsageError("baseline has no level " + std::to_string(chosen) + ": " + dir.string());
  }
  it->second.name = dir_name(dir) + "-L" + std::to_string(chosen);
  return std::move(it->second);
}

// ---------------------------------------------------------------- ingest

struct IngestArgs {
  fs::path docs, cites, out;
  int min_year = 1800;
  int max_year = 2100;
  bool header = false;
};

void run_ingest(const IngestArgs& a, const Context& ctx) {
  if (a.min_year > a.max_year) throw UsageError("min-year exceeds max-year");
  require_file(a.docs, "documents file");
  require_file(a.cites, "citations file");
  auto loaded = load_corpus(a.docs, a.cites, {a.min_year, a.max_year, a.header});
  if (loaded.corpus.n_source() == 0) throw DataError("no source documents accepted");
  fs::create_directories(a.out);
  write_corpus(loaded.corpus, a.out);
  std::ofstream diag(a.out / "diagnostics.txt");
  diag << loaded.diagnostics.summary();
  for (const auto& m : loaded.diagnostics.messages) diag << "# " << m << '\n';
  *ctx.log << "ingest: " << loaded.corpus.size() << " documents ("
           << loaded.corpus.n_source() << " source), " << loaded.corpus.edges().size()
           << " citations\n";
  finish(a.out, ctx, {a.docs, a.cites});
}

// ------------------------------------------------------------- build-sim

struct BuildArgs {
  std::string method;
  fs::path corpus, out;
  std::string years;
  int citing_year = 2010;
  int bc_popularity_cap = 100;
  std::string bc_norm = "raw";
  int cc_top_n = 10;
  std::string cc_norm = "raw";
  int nonsource_min_cites = 2;
  std::size_t buffer_edges = std::size_t{1} << 22;
};

void run_build_sim(const BuildArgs& a, const Context& ctx) {
  const auto method = parse_similarity_method(a.method);
  if (a.bc_norm != "raw" && a.bc_norm != "cosine") throw UsageError("bc-norm must be raw|cosine");
  if (a.cc_norm != "raw" && a.cc_norm != "association") {
    throw UsageError("cc-norm must be raw|association");
  }
  if (a.bc_popularity_cap < 1) throw UsageError("bc-popularity-cap must be >= 1");
  if (a.nonsource_min_cites < 1) throw UsageError("nonsource-min-cites must be >= 1");
  if (a.buffer_edges < 1024) throw UsageError("buffer-edges must be >= 1024");
  const auto corpus = open_corpus(a.corpus);
  const YearRange years = a.years.empty() ? corpus.source_years() : parse_year_range(a.years);
  const BuildOptions opts{a.buffer_edges, ctx.threads};
  SimilarityGraph graph;
  switch (method) {
    case SimilarityMethod::kDC:
      graph = build_dc(corpus, years, a.nonsource_min_cites, opts);
      break;
    case SimilarityMethod::kBC:
      graph = build_bc(corpus, a.citing_year, a.bc_popularity_cap,
                       a.bc_norm == "cosine" ? BcNormalization::kCosine : BcNormalization::kRaw,
                       opts);
      break;
    case SimilarityMethod::kCC:
      graph = build_cc(corpus, years, a.cc_top_n,
                       a.cc_norm == "association" ? CcNormalization::kAssociationStrength
                                                  : CcNormalization::kRaw,
                       opts);
      break;
  }
  fs::create_directories(a.out);
  write_graph(graph, a.out / "graph.tsv");
  *ctx.log << "build-sim " << to_string(method) << ": " << graph.nodes.size() << " nodes, "
           << graph.edges.size() << " edges, " << graph.uncovered.size() << " uncovered\n";
  finish(a.out, ctx, {a.corpus});
}

// --------------------------------------------------------------- cluster

struct ClusterArgs {
  fs::path graph, corpus, out;
  std::string method;
  std::string quality = "cpm";
  double resolution = 1.0;
  std::string resolutions;
  std::string targets;
  std::string min_size = "1";
  int levels = 0;
  std::uint64_t seed = 0;
  int restarts = 1;
  int max_iterations = 100;
  double epsilon = 1e-12;
};

void run_cluster(const ClusterArgs& a, const Context& ctx) {
  ClusterParams p;
  p.quality = parse_quality_kind(a.quality);
  p.resolution = a.resolution;
  p.level_resolutions = parse_double_list(a.resolutions, "resolutions");
  p.level_targets = parse_double_list(a.targets, "target cluster counts");
  const auto mins = parse_int_list(a.min_size, "min sizes");
  if (mins.empty()) throw UsageError("min-size must not be empty");
  const std::size_t n_levels =
      std::max({p.level_resolutions.size(), p.level_targets.size(), mins.size(),
                static_cast<std::size_t>(std::max(a.levels, 1))});
  p.n_levels = static_cast<int>(n_levels);
  if (mins.size() == 1) {
    p.min_cluster_size = mins[0];
  } else {
    p.level_min_sizes = mins;
  }
  for (double t : p.level_targets) {
    if (!(t >= 1.0)) throw UsageError("target cluster counts must be >= 1");
  }
  if (!p.level_resolutions.empty() && !p.level_targets.empty()) {
    throw UsageError("give either resolutions or target cluster counts, not both");
  }
  if (p.level_resolutions.empty() && p.level_targets.empty() && n_levels > 1) {
    throw UsageError("several levels need per-level resolutions or targets");
  }
  p.seed = a.seed;
  p.restarts = a.restarts;
  p.max_iterations = a.max_iterations;
  p.epsilon = a.epsilon;
  p.threads = ctx.threads;
  if (p.restarts < 1) throw UsageError("restarts must be >= 1");
  p.validate();

  require_file(a.graph / "graph.tsv", "similarity graph");
  const auto graph = read_graph(a.graph / "graph.tsv");
  if (!a.method.empty() && parse_similarity_method(a.method) != graph.method) {
    throw UsageError("graph was built with method " + std::string(to_string(graph.method)));
  }
  const auto corpus = open_corpus(a.corpus);
  if (!graph.nodes.empty() && graph.nodes.back() >= corpus.size()) {
    throw DataError("graph refers to documents outside the corpus");
  }
  const auto net = network_from_graph(graph, p.quality);
  if (net.size() == 0) throw DataError("graph has no nodes");
  const auto levels = build_hierarchy(net, p);

  fs::create_directories(a.out);
  write_partition(levels, graph, corpus, a.out / "partition.tsv");
  write_hierarchy(levels, a.out / "hierarchy.tsv");
  std::ofstream summary(a.out / "summary.tsv");
  summary << "level\tn_clusters\tresolution\tquality\tn_docs\thit_max_iterations\n";
  for (const auto& level : levels) {
    const auto n_docs = std::count_if(level.cluster.begin(), level.cluster.end(),
                                      [](int c) { return c != kNoCluster; });
    summary << level.level << '\t' << level.n_clusters << '\t' << format_number(level.resolution)
            << '\t' << format_number(level.quality_value) << '\t' << n_docs << '\t'
            << (level.hit_max_iterations ? 1 : 0) << '\n';
    *ctx.log << "cluster level " << level.level << ": " << level.n_clusters << " clusters over "
             << n_docs << " documents" << (level.hit_max_iterations ? " (iteration cap hit)" : "")
             << '\n';
  }
  finish(a.out, ctx, {a.graph / "graph.tsv", a.corpus}, p.seed);
}

// ----------------------------------------------------------- assign-refs

struct AssignArgs {
  fs::path corpus, partition, out;
  double dominance = 0.40;
  int min_citations = 2;
};

void run_assign(const AssignArgs& a, const Context& ctx) {
  const AssignmentRule rule{a.dominance, a.min_citations};
  rule.validate();
  require_file(a.partition / "partition.tsv", "partition");
  const auto corpus = open_corpus(a.corpus);
  const auto levels = read_partition_file(a.partition / "partition.tsv", corpus, "partition");
  if (levels.empty()) throw DataError("partition is empty: " + a.partition.string());
  std::vector<std::pair<int, Taxonomy>> assigned;
  std::vector<AssignmentStats> stats;
  for (const auto& [level, t] : levels) {
    AssignmentStats s;
    assigned.emplace_back(level, assign_cited_refs(t, corpus.edges(), rule, &s));
    stats.push_back(s);
  }
  fs::create_directories(a.out);
  std::ofstream part(a.out / "partition.tsv");
  std::ofstream report(a.out / "assignment.tsv");
  report << "level\tcandidates\tassigned\ttoo_few_citations\ttied\tbelow_threshold\n";
  for (std::size_t k = 0; k < assigned.size(); ++k) {
    write_partition_file(assigned[k].second, assigned[k].first, corpus, part);
    const auto& s = stats[k];
    report << assigned[k].first << '\t' << s.candidates << '\t' << s.assigned << '\t'
           << s.too_few_citations << '\t' << s.tied << '\t' << s.below_threshold << '\n';
    *ctx.log << "assign-refs level " << assigned[k].first << ": " << s.assigned << " of "
             << s.candidates << " cited references assigned\n";
  }
  if (!part || !report) throw DataError("failed writing to " + a.out.string());
  if (fs::is_regular_file(a.partition / "hierarchy.tsv")) {
    fs::copy_file(a.partition / "hierarchy.tsv", a.out / "hierarchy.tsv",
                  fs::copy_options::overwrite_existing);
  }
  finish(a.out, ctx, {a.partition / "partition.tsv", a.corpus});
}

// ----------------------------------------------------------- journal-tax

struct JournalArgs {
  fs::path corpus, scheme_file, out;
  std::string scheme;
  bool jid = false;
};

void run_journal_tax(const JournalArgs& a, const Context& ctx) {
  if (a.jid == !a.scheme.empty()) throw UsageError("give exactly one of --scheme or --jid");
  if (!a.jid) require_file(a.scheme_file, "journal scheme file");
  const auto corpus = open_corpus(a.corpus);
  const Taxonomy t = a.jid ? journal_identity_taxonomy(corpus)
                           : project_journal_scheme(corpus, load_journal_scheme(a.scheme_file, a.scheme));
  fs::create_directories(a.out);
  write_taxonomy_file(t, corpus, a.out / "taxonomy.tsv");
  *ctx.log << "journal-tax " << t.name << ": " << t.n_clusters() << " categories covering "
           << t.coverage_doc_count() << " documents\n";
  std::vector<fs::path> inputs{a.corpus};
  if (!a.jid) inputs.push_back(a.scheme_file);
  finish(a.out, ctx, inputs);
}

// ----------------------------------------------------------- gold-select

struct GoldArgs {
  fs::path corpus, out;
  std::string baseline;
  int citing_year = 2010;
  int min_refs = 100;
  double coverage_floor = 0.80;
};

void run_gold_select(const GoldArgs& a, const Context& ctx) {
  if (a.min_refs < 1) throw UsageError("min-refs must be >= 1");
  if (!(a.coverage_floor >= 0.0) || a.coverage_floor > 1.0) {
    throw UsageError("coverage-floor must lie in [0, 1]");
  }
  const auto corpus = open_corpus(a.corpus);
  const auto baseline = load_baseline(a.baseline, corpus);
  const auto golds = select_gold_standards(
      corpus, baseline,
      {static_cast<std::size_t>(a.min_refs), a.coverage_floor, a.citing_year});
  fs::create_directories(a.out);
  write_gold(golds, corpus, a.out / "gold.tsv");
  *ctx.log << "gold-select: " << golds.size() << " gold standard papers\n";
  finish(a.out, ctx, {a.corpus, fs::path(a.baseline.substr(0, a.baseline.rfind(':')))});
}

// ----------------------------------------------------------------- stats

struct StatsArgs {
  fs::path corpus, out;
  int citing_year = 2010;
  int horizon = 2012;
  int ref_threshold = 100;
};

void run_stats(const StatsArgs& a, const Context& ctx) {
  if (a.horizon < a.citing_year) throw UsageError("horizon precedes citing year");
  if (a.ref_threshold < 1) throw UsageError("ref-threshold must be >= 1");
  const auto corpus = open_corpus(a.corpus);
  const BinConfig config{a.citing_year, a.horizon};
  const auto rows = bin_statistics(corpus, config);
  std::vector<std::pair<std::string, std::string>> corr;
  for (const auto side : {Stratum::kBelow, Stratum::kAtOrAbove}) {
    const std::string name = side == Stratum::kBelow ? "correlation_below.csv"
                                                     : "correlation_at_or_above.csv";
    try {
      std::size_t n = 0;
      const auto m = correlation_matrix(corpus, config, a.ref_threshold, side, &n);
      std::ostringstream text;
      write_correlation_csv(m, n, text);
      corr.emplace_back(name, text.str());
    } catch (const DataError& e) {
      *ctx.log << "stats: skipping " << name << ": " << e.what() << '\n';
    }
  }
  const auto cs = compute_stats(corpus, YearRange{a.citing_year, a.horizon});
  fs::create_directories(a.out);
  std::ofstream bins(a.out / "bins.csv");
  write_bin_csv(rows, bins);
  for (const auto& [name, text] : corr) std::ofstream(a.out / name) << text;
  std::ofstream totals(a.out / "corpus_stats.tsv");
  totals << "n_docs\t" << cs.n_docs << "\nn_source\t" << cs.n_source << "\nn_nonsource\t"
         << cs.n_nonsource << "\nn_edges\t" << cs.n_edges << '\n';
  *ctx.log << "stats: " << rows.back().n_doc << " citing-year documents binned\n";
  finish(a.out, ctx, {a.corpus});
}

// ------------------------------------------------------------------ eval

struct EvalArgs {
  fs::path corpus, gold, out;
  std::string baseline;
  std::vector<std::string> taxonomies;
  int coverage_cutoff = 2009;
  int top_k = 4;
};

void run_eval(const EvalArgs& a, const Context& ctx) {
  if (a.top_k < 1) throw UsageError("top-k must be >= 1");
  require_file(a.gold, "gold standard file");
  const auto corpus = open_corpus(a.corpus);
  const auto baseline = load_baseline(a.baseline, corpus);
  std::vector<Taxonomy> taxonomies;
  std::set<std::string> names;
  std::vector<fs::path> inputs{a.corpus, a.gold};
  for (const auto& spec : a.taxonomies) {
    const fs::path dir = spec;
    const std::string name = dir_name(dir);
    if (fs::is_regular_file(dir / "partition.tsv")) {
      for (auto& [level, t] : read_partition_file(dir / "partition.tsv", corpus, name)) {
        t.name = name + "-L" + std::to_string(level);
        taxonomies.push_back(std::move(t));
      }
      inputs.push_back(dir / "partition.tsv");
    } else if (fs::is_regular_file(dir / "taxonomy.tsv")) {
      taxonomies.push_back(read_taxonomy_file(dir / "taxonomy.tsv", corpus, name));
      inputs.push_back(dir / "taxonomy.tsv");
    } else {
      throw DataError("no partition.tsv or taxonomy.tsv in " + dir.string());
    }
  }
  for (const auto& t : taxonomies) {
    if (!names.insert(t.name).second) throw UsageError("duplicate taxonomy name " + t.name);
  }
  if (taxonomies.size() < 2) throw UsageError("eval needs at least two taxonomies");
  const auto golds = gold_standards_for(corpus, baseline, read_gold_ids(a.gold, corpus));
  std::vector<const Taxonomy*> ptrs;
  for (const auto& t : taxonomies) ptrs.push_back(&t);
  EvalOptions options;
  options.coverage_year_cutoff = a.coverage_cutoff;
  options.top_k = static_cast<std::size_t>(a.top_k);
  options.threads = ctx.threads;
  const auto report = evaluate(golds, ptrs, baseline, corpus, options);

  fs::create_directories(a.out);
  write_report(report, corpus, a.out);
  *ctx.log << "eval: " << report.n_papers << " papers, " << report.tied_papers
           << " tied, baseline " << baseline.name << '\n';
  if (report.baseline_warnings > 0) {
    *ctx.log << "eval: warning: " << report.baseline_warnings
             << " gold references are covered by a compared taxonomy but not by the baseline\n";
  }
  finish(a.out, ctx, inputs);
}

// ----------------------------------------------------------------- synth

struct SynthArgs {
  fs::path out;
  SynthSpec spec;
  std::string years = "1999-2013";
};

void run_synth(SynthArgs a, const Context& ctx) {
  a.spec.years = parse_year_range(a.years);
  a.spec.validate();
  const auto synth = generate_corpus(a.spec);
  fs::create_directories(a.out);
  write_synth(synth, a.out);
  *ctx.log << "synth: " << synth.corpus.size() << " documents, " << synth.corpus.edges().size()
           << " citations\n";
  finish(a.out, ctx, {}, a.spec.seed);
}

// ---------------------------------------------------------- oracle-check

struct OracleArgs {
  int instances = 100;
  int max_nodes = 8;
  std::uint64_t seed = 1;
  int restarts = 1;
  double resolution = 0.3;
  double extra_edge_p = 0.4;
};

void run_oracle_check(const OracleArgs& a, const Context& ctx) {
  if (a.instances < 1) throw UsageError("instances must be >= 1");
  if (a.max_nodes < 2 || a.max_nodes > kMaxExhaustiveNodes) {
    throw UsageError("max-nodes must lie in [2, " + std::to_string(kMaxExhaustiveNodes) + "]");
  }
  if (a.restarts < 1) throw UsageError("restarts must be >= 1");
  int matched = 0;
  for (int i = 0; i < a.instances; ++i) {
    const std::uint64_t s = mix64(a.seed + static_cast<std::uint64_t>(i));
    const int n = 2 + static_cast<int>(s % static_cast<std::uint64_t>(a.max_nodes - 1));
    const auto net = random_connected_network(n, a.extra_edge_p, s);
    const auto best = exhaustive_best_partition(net, QualityKind::kCPM, a.resolution);
    ClusterParams p;
    p.resolution = a.resolution;
    p.seed = s;
    p.restarts = a.restarts;
    p.threads = ctx.threads;
    const auto slm = smart_local_moving(net, p);
    if (slm.quality_value >= best.quality - 1e-9) ++matched;
  }
  *ctx.log << "oracle-check: " << matched << " of " << a.instances
           << " instances reach the exhaustive optimum\n";
}

// -------------------------------------------------------------- pipeline

struct PipelineArgs {
  fs::path out;
  std::uint64_t seed = 42;
  fs::path docs, cites, scheme_file;
  std::string scheme;
  SynthArgs synth;
  int citing_year = 2010;
  std::string cc_years;
  std::string dc_targets = "256,64,16";
  std::string bc_targets = "16";
  std::string cc_targets = "64,16";
  std::string min_size = "5";
  int restarts = 1;
  int min_refs = 100;
  double coverage_floor = 0.80;
  double dominance = 0.40;
  int coverage_cutoff = 2009;
};

void run_pipeline(const PipelineArgs& a, const Context& ctx) {
  if (a.docs.empty() != a.cites.empty()) throw UsageError("give both --docs and --cites");
  if (a.scheme.empty() != a.scheme_file.empty() && !a.docs.empty()) {
    throw UsageError("give both --scheme-file and --scheme");
  }
  const bool synthetic = a.docs.empty();
  const fs::path out = a.out;
  auto stage = [&](const std::string& name) {
    Context c = ctx;
    c.command = ctx.command + " [" + name + "]";
    c.started = std::chrono::system_clock::now();
    return c;
  };

  fs::path docs = a.docs, cites = a.cites, scheme_file = a.scheme_file;
  std::string scheme = a.scheme;
  if (synthetic) {
    SynthArgs s = a.synth;
    s.spec.seed = a.seed;
    s.out = out / "synth";
    run_synth(s, stage("synth"));
    docs = s.out / "docs.tsv";
    cites = s.out / "cites.tsv";
    scheme_file = s.out / "journal_scheme.tsv";
    scheme = "SYN";
  }
  run_ingest({docs, cites, out / "corpus"}, stage("ingest"));
  const fs::path corpus = out / "corpus";

  BuildArgs dc{.method = "dc", .corpus = corpus, .out = out / "graphs" / "dc", .years = {}};
  run_build_sim(dc, stage("build-sim dc"));
  BuildArgs bc{.method = "bc", .corpus = corpus, .out = out / "graphs" / "bc", .years = {}};
  bc.citing_year = a.citing_year;
  run_build_sim(bc, stage("build-sim bc"));
  BuildArgs cc{.method = "cc", .corpus = corpus, .out = out / "graphs" / "cc", .years = {}};
  cc.years = a.cc_years.empty()
                 ? std::to_string(a.citing_year + 1) + "-" + std::to_string(a.citing_year + 3)
                 : a.cc_years;
  run_build_sim(cc, stage("build-sim cc"));

  auto cluster = [&](const std::string& method, const fs::path& dest, const std::string& targets) {
    ClusterArgs c;
    c.graph = out / "graphs" / method;
    c.corpus = corpus;
    c.out = dest;
    c.targets = targets;
    c.min_size = a.min_size;
    c.seed = a.seed;
    c.restarts = a.restarts;
    run_cluster(c, stage("cluster " + method));
  };
  cluster("dc", out / "runs" / "dc", a.dc_targets);
  cluster("bc", out / "work" / "bc", a.bc_targets);
  cluster("cc", out / "runs" / "cc", a.cc_targets);
  // Only the coupling taxonomy is extended to the references of its papers.
  AssignArgs as{corpus, out / "work" / "bc", out / "runs" / "bc"};
  as.dominance = a.dominance;
  run_assign(as, stage("assign-refs bc"));
  std::vector<std::string> taxonomies{(out / "runs" / "dc").string(),
                                      (out / "runs" / "bc").string(),
                                      (out / "runs" / "cc").string()};
  if (!scheme.empty()) {
    JournalArgs j{corpus, scheme_file, out / "runs" / "journal", scheme};
    run_journal_tax(j, stage("journal-tax"));
    taxonomies.push_back(j.out.string());
  }
  JournalArgs jid{corpus, {}, out / "runs" / "jid", {}, true};
  run_journal_tax(jid, stage("journal-tax jid"));
  taxonomies.push_back(jid.out.string());

  GoldArgs g{corpus, out / "gold", (out / "runs" / "dc").string(), a.citing_year, a.min_refs,
             a.coverage_floor};
  run_gold_select(g, stage("gold-select"));
  run_stats({corpus, out / "stats", a.citing_year, a.citing_year + 2}, stage("stats"));
  EvalArgs e{corpus, out / "gold" / "gold.tsv", out / "report", g.baseline, taxonomies,
             a.coverage_cutoff};
  run_eval(e, stage("eval"));
  finish(out, ctx, synthetic ? std::vector<fs::path>{} : std::vector<fs::path>{docs, cites}, a.seed);
}

// ---------------------------------------------------------------- config

std::string long_flag(const std::string& arg) {
  if (!arg.starts_with("--")) return {};
  return arg.substr(2, arg.find('=') == std::string::npos ? std::string::npos : arg.find('=') - 2);
}

// Appends `--key=value` for every config entry whose flag is absent from
// the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  std::set<std::string> given;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto flag = long_flag(args[i]);
    if (flag.empty()) continue;
    given.insert(flag);
    if (flag == "config") {
      if (const auto eq = args[i].find('='); eq != std::string::npos) {
        path = args[i].substr(eq + 1);
      } else if (i + 1 < args.size()) {
        path = args[i + 1];
      }
    }
  }
  if (!path) return args;
  std::ifstream in(*path);
  if (!in) throw UsageError("cannot read config file " + *path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(*path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config") {
      throw UsageError(*path + ":" + std::to_string(line_no) + ": invalid key");
    }
    if (given.contains(key)) continue;
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

std::map<std::string, std::string> snapshot(const CLI::App& app, const CLI::App& sub) {
  std::map<std::string, std::string> config;
  for (const CLI::App* a : {&app, &sub}) {
    for (const CLI::Option* opt : a->get_options()) {
      const std::string name = opt->get_name(false, true);
      if (name.empty() || name.find("help") != std::string::npos || name == "--version" ||
          name == "--config") {
        continue;
      }
      std::string value;
      if (opt->count() > 0) {
        for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
      } else {
        value = opt->get_default_str();
      }
      config[name.starts_with("--") ? name.substr(2) : name] = value;
    }
  }
  return config;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Citation-based taxonomy construction and Herfindahl evaluation", "citetax"};
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", std::string("citetax ") + kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 0;
  std::string config_path;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");
  app.add_option("--config", config_path, "key = value file; explicit flags win");

  IngestArgs ingest;
  auto* s_ingest = app.add_subcommand("ingest", "Load and validate docs/cites TSV files");
  s_ingest->add_option("--docs", ingest.docs, "Documents TSV")->required();
  s_ingest->add_option("--cites", ingest.cites, "Citations TSV")->required();
  s_ingest->add_option("--out", ingest.out, "Output corpus directory")->required();
  s_ingest->add_option("--min-year", ingest.min_year);
  s_ingest->add_option("--max-year", ingest.max_year);
  s_ingest->add_flag("--header", ingest.header, "Input files start with a header row");

  BuildArgs build;
  auto* s_build = app.add_subcommand("build-sim", "Build a DC, BC or CC similarity graph");
  s_build->add_option("method", build.method, "dc|bc|cc")->required();
  s_build->add_option("--corpus", build.corpus)->required();
  s_build->add_option("--out", build.out)->required();
  s_build->add_option("--years", build.years, "Citing-year window, e.g. 1996-2012");
  s_build->add_option("--citing-year", build.citing_year);
  s_build->add_option("--bc-popularity-cap", build.bc_popularity_cap);
  s_build->add_option("--bc-norm", build.bc_norm, "raw|cosine");
  s_build->add_option("--cc-top-n", build.cc_top_n);
  s_build->add_option("--cc-norm", build.cc_norm, "raw|association");
  s_build->add_option("--nonsource-min-cites", build.nonsource_min_cites);
  s_build->add_option("--buffer-edges", build.buffer_edges);

  ClusterArgs clus;
  auto* s_cluster = app.add_subcommand("cluster", "Cluster a similarity graph with SLM");
  s_cluster->add_option("--graph", clus.graph, "Directory holding graph.tsv")->required();
  s_cluster->add_option("--corpus", clus.corpus)->required();
  s_cluster->add_option("--out", clus.out)->required();
  s_cluster->add_option("--method", clus.method, "Expected graph method");
  s_cluster->add_option("--quality", clus.quality, "cpm|modularity");
  s_cluster->add_option("--resolution", clus.resolution);
  s_cluster->add_option("--resolutions", clus.resolutions, "Per-level, finest first");
  s_cluster->add_option("--target-clusters", clus.targets, "Per-level, finest first");
  s_cluster->add_option("--min-size", clus.min_size, "One value or per-level list");
  s_cluster->add_option("--levels", clus.levels);
  s_cluster->add_option("--seed", clus.seed);
  s_cluster->add_option("--restarts", clus.restarts);
  s_cluster->add_option("--max-iterations", clus.max_iterations);
  s_cluster->add_option("--epsilon", clus.epsilon);

  AssignArgs assign;
  auto* s_assign = app.add_subcommand("assign-refs", "Assign cited references by dominance");
  s_assign->add_option("--corpus", assign.corpus)->required();
  s_assign->add_option("--partition", assign.partition, "Cluster output directory")->required();
  s_assign->add_option("--out", assign.out)->required();
  s_assign->add_option("--dominance", assign.dominance);
  s_assign->add_option("--min-citations", assign.min_citations);

  JournalArgs journal;
  auto* s_journal = app.add_subcommand("journal-tax", "Project a journal category scheme");
  s_journal->add_option("--corpus", journal.corpus)->required();
  s_journal->add_option("--scheme-file", journal.scheme_file);
  s_journal->add_option("--scheme", journal.scheme, "Scheme name inside the file");
  s_journal->add_flag("--jid", journal.jid, "Every journal is its own category");
  s_journal->add_option("--out", journal.out)->required();

  GoldArgs gold;
  auto* s_gold = app.add_subcommand("gold-select", "Select gold standard papers");
  s_gold->add_option("--corpus", gold.corpus)->required();
  s_gold->add_option("--baseline", gold.baseline, "Partition directory[:level]")->required();
  s_gold->add_option("--out", gold.out)->required();
  s_gold->add_option("--citing-year", gold.citing_year);
  s_gold->add_option("--min-refs", gold.min_refs);
  s_gold->add_option("--coverage-floor", gold.coverage_floor);

  StatsArgs stats;
  auto* s_stats = app.add_subcommand("stats", "Reference-bin statistics and correlations");
  s_stats->add_option("--corpus", stats.corpus)->required();
  s_stats->add_option("--out", stats.out)->required();
  s_stats->add_option("--citing-year", stats.citing_year);
  s_stats->add_option("--horizon", stats.horizon, "Last citing year counted");
  s_stats->add_option("--ref-threshold", stats.ref_threshold);

  EvalArgs eval;
  auto* s_eval = app.add_subcommand("eval", "Herfindahl evaluation of taxonomies");
  s_eval->add_option("--corpus", eval.corpus)->required();
  s_eval->add_option("--baseline", eval.baseline, "Partition directory[:level]")->required();
  s_eval->add_option("--taxonomies", eval.taxonomies, "Partition or taxonomy directories")
      ->required();
  s_eval->add_option("--gold", eval.gold)->required();
  s_eval->add_option("--out", eval.out)->required();
  s_eval->add_option("--coverage-cutoff", eval.coverage_cutoff);
  s_eval->add_option("--top-k", eval.top_k);

  SynthArgs synth;
  auto add_synth_options = [](CLI::App* s, SynthArgs& a) {
    s->add_option("--topics", a.spec.n_topics);
    s->add_option("--docs-per-topic-year", a.spec.docs_per_topic_per_year);
    s->add_option("--years", a.years);
    s->add_option("--p-in", a.spec.p_in);
    s->add_option("--p-out", a.spec.p_out);
    s->add_option("--review-rate", a.spec.review_rate);
    s->add_option("--review-refs", a.spec.review_refs);
    s->add_option("--refs-per-doc", a.spec.refs_per_doc);
    s->add_option("--mean-ref-age", a.spec.mean_ref_age);
    s->add_option("--nonsource-rate", a.spec.nonsource_rate);
  };
  auto* s_synth = app.add_subcommand("synth", "Generate a planted-topic corpus");
  s_synth->add_option("--out", synth.out)->required();
  s_synth->add_option("--seed", synth.spec.seed);
  add_synth_options(s_synth, synth);

  OracleArgs oracle;
  auto* s_oracle = app.add_subcommand("oracle-check", "Compare SLM with exhaustive search");
  s_oracle->add_option("--instances", oracle.instances);
  s_oracle->add_option("--max-nodes", oracle.max_nodes);
  s_oracle->add_option("--seed", oracle.seed);
  s_oracle->add_option("--restarts", oracle.restarts);
  s_oracle->add_option("--resolution", oracle.resolution);

  PipelineArgs pipe;
  auto* s_pipe = app.add_subcommand("pipeline", "Run every stage into one run directory");
  s_pipe->add_option("--out", pipe.out)->required();
  s_pipe->add_option("--seed", pipe.seed);
  s_pipe->add_option("--docs", pipe.docs, "Use real input instead of a synthetic corpus");
  s_pipe->add_option("--cites", pipe.cites);
  s_pipe->add_option("--scheme-file", pipe.scheme_file);
  s_pipe->add_option("--scheme", pipe.scheme);
  s_pipe->add_option("--citing-year", pipe.citing_year);
  s_pipe->add_option("--cc-years", pipe.cc_years);
  s_pipe->add_option("--dc-targets", pipe.dc_targets);
  s_pipe->add_option("--bc-targets", pipe.bc_targets);
  s_pipe->add_option("--cc-targets", pipe.cc_targets);
  s_pipe->add_option("--min-size", pipe.min_size);
  s_pipe->add_option("--restarts", pipe.restarts);
  s_pipe->add_option("--min-refs", pipe.min_refs);
  s_pipe->add_option("--coverage-floor", pipe.coverage_floor);
  s_pipe->add_option("--dominance", pipe.dominance);
  s_pipe->add_option("--coverage-cutoff", pipe.coverage_cutoff);
  add_synth_options(s_pipe, pipe.synth);

  try {
    auto args = merge_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  Context ctx;
  for (const auto& a : raw_args) ctx.command += (ctx.command.empty() ? "" : " ") + a;
  ctx.command = "citetax " + ctx.command;
  ctx.threads = threads == 0 ? default_thread_count() : threads;
  ctx.log = &out;
  try {
    const CLI::App* sub = app.get_subcommands().front();
    ctx.config = snapshot(app, *sub);
    ctx.config["threads"] = std::to_string(ctx.threads);
    if (sub == s_ingest) run_ingest(ingest, ctx);
    else if (sub == s_build) run_build_sim(build, ctx);
    else if (sub == s_cluster) run_cluster(clus, ctx);
    else if (sub == s_assign) run_assign(assign, ctx);
    else if (sub == s_journal) run_journal_tax(journal, ctx);
    else if (sub == s_gold) run_gold_select(gold, ctx);
    else if (sub == s_stats) run_stats(stats, ctx);
    else if (sub == s_eval) run_eval(eval, ctx);
    else if (sub == s_synth) run_synth(synth, ctx);
    else if (sub == s_oracle) run_oracle_check(oracle, ctx);
    else if (sub == s_pipe) run_pipeline(pipe, ctx);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace citetax
