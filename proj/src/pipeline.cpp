// Copyright 2026 The Cocite Authors.
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

#include "cocite/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "cocite/agglomerate.hpp"
#include "cocite/cocitation.hpp"
#include "cocite/corpus.hpp"
#include "cocite/error.hpp"
#include "cocite/io.hpp"
#include "cocite/metrics.hpp"
#include "cocite/reconcile.hpp"
#include "cocite/render.hpp"

namespace cocite {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Config

void PipelineConfig::validate() const {
  if (pubs.empty() || edges.empty() || taxonomy.empty()) {
    throw ConfigError("--pubs, --edges and --taxonomy are required");
  }
  if (out.empty()) throw ConfigError("--out is required");
  if (!(percentile >= 0.0 && percentile <= 1.0)) {
    throw ConfigError(fmt::format("percentile {} outside [0, 1]", percentile));
  }
  vlc.validate();
  if (thresholds.empty()) throw ConfigError("at least one reconcile threshold is required");
  for (double t : thresholds) {
    if (!(t > 0.0 && t <= 1.0)) throw ConfigError(fmt::format("threshold {} outside (0, 1]", t));
  }
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (pair_memory_cap < 1) throw ConfigError("pair_memory_cap must be at least 1");
}

ordered_json PipelineConfig::to_json() const {
  ordered_json j;
  j["pubs"] = pubs.string();
  j["edges"] = edges.string();
  j["taxonomy"] = taxonomy.string();
  j["out"] = out.string();
  j["assignment"] = assignment.string();
  j["percentile"] = percentile;
  ordered_json v;
  v["t0"] = vlc.t0;
  v["schedule"] = ordered_json::array();
  for (const auto& phase : vlc.schedule) {
    v["schedule"].push_back(ordered_json{{"from", phase.from}, {"to", phase.to}, {"step", phase.step}});
  }
  v["final_t"] = vlc.final_t;
  v["mcs"] = vlc.mcs;
  v["retain_below"] = vlc.retain_below;
  v["min_size"] = vlc.min_size;
  j["vlc"] = v;
  j["rounds"] = rounds;
  j["min_input_size"] = min_input_size;
  j["thresholds"] = thresholds;
  j["threads"] = threads;
  j["pair_memory_cap"] = pair_memory_cap;
  return j;
}

PipelineConfig PipelineConfig::from_json(const json& j, PipelineConfig base) {
  try {
    auto path = [&](const char* key, fs::path& target) {
      if (j.contains(key)) target = j.at(key).get<std::string>();
    };
    path("pubs", base.pubs);
    path("edges", base.edges);
    path("taxonomy", base.taxonomy);
    path("out", base.out);
    path("assignment", base.assignment);
    if (j.contains("percentile")) base.percentile = j.at("percentile").get<double>();
    if (j.contains("vlc")) {
      const auto& v = j.at("vlc");
      if (v.contains("t0")) base.vlc.t0 = v.at("t0").get<double>();
      if (v.contains("schedule")) {
        base.vlc.schedule.clear();
        for (const auto& phase : v.at("schedule")) {
          base.vlc.schedule.push_back(
              {phase.at("from").get<double>(), phase.at("to").get<double>(), phase.at("step").get<double>()});
        }
      }
      if (v.contains("final_t")) base.vlc.final_t = v.at("final_t").get<double>();
      if (v.contains("mcs")) base.vlc.mcs = v.at("mcs").get<std::size_t>();
      if (v.contains("retain_below")) base.vlc.retain_below = v.at("retain_below").get<std::size_t>();
      if (v.contains("min_size")) base.vlc.min_size = v.at("min_size").get<std::size_t>();
    }
    if (j.contains("rounds")) base.rounds = j.at("rounds").get<std::size_t>();
    if (j.contains("min_input_size")) base.min_input_size = j.at("min_input_size").get<std::size_t>();
    if (j.contains("thresholds")) base.thresholds = j.at("thresholds").get<std::vector<double>>();
    if (j.contains("threads")) base.threads = j.at("threads").get<unsigned>();
    if (j.contains("pair_memory_cap")) base.pair_memory_cap = j.at("pair_memory_cap").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return base;
}

namespace {

constexpr std::array<std::pair<Stage, std::string_view>, 7> kStageNames{{
    {Stage::kIngest, "ingest"},
    {Stage::kCocite, "cocite"},
    {Stage::kVlc, "vlc"},
    {Stage::kAgglomerate, "agglomerate"},
    {Stage::kConductance, "conductance"},
    {Stage::kReconcile, "reconcile"},
    {Stage::kReport, "report"},
}};

}  // namespace

std::optional<Stage> parse_stage(std::string_view name) {
  for (const auto& [stage, text] : kStageNames) {
    if (text == name) return stage;
  }
  return std::nullopt;
}

std::string_view to_string(Stage stage) {
  for (const auto& [s, text] : kStageNames) {
    if (s == stage) return text;
  }
  return "unknown";
}

std::string heatmap_stem(std::string_view prefix, double threshold) {
  return fmt::format("{}_{}", prefix, std::lround(threshold * 100.0));
}

// ---------------------------------------------------------------------------
// Stages

namespace {

class StageContext {
 public:
  explicit StageContext(const PipelineConfig& config) : config_(config) {
    config_.validate();
    std::error_code ec;
    fs::create_directories(config_.out, ec);
    if (ec) throw IoError("cannot create output directory " + config_.out.string() + ": " + ec.message());
    write(artifact::kConfig, config_.to_json().dump(2) + "\n");
  }

  const PipelineConfig& config() const { return config_; }

  fs::path path(std::string_view name) const { return config_.out / name; }

  fs::path require(std::string_view name) const {
    const fs::path p = path(name);
    if (!fs::exists(p)) throw MissingArtifactError(p);
    return p;
  }

  void write(std::string_view name, std::string_view contents) const { write_text_file(path(name), contents); }

  const LoadedCorpus& corpus() {
    if (!loaded_) loaded_ = load_corpus(config_.pubs, config_.edges, config_.taxonomy);
    return *loaded_;
  }

  CocitationGraph cocitation() {
    const auto retained = require(artifact::kRetained);
    const auto pairs = require(artifact::kPairs);
    return read_cocitation(retained, pairs, corpus().corpus);
  }

 private:
  PipelineConfig config_;
  std::optional<LoadedCorpus> loaded_;
};

void ingest(StageContext& ctx) {
  const auto& [corpus, graph, taxonomy] = ctx.corpus();
  std::size_t seeds = 0;
  std::size_t labeled = 0;
  for (const auto& r : corpus.records()) {
    if (r.pub_type != PubType::kExternalReference) ++seeds;
    if (r.is_labeled()) ++labeled;
  }
  ordered_json summary;
  summary["publications"] = corpus.size();
  summary["seed_publications"] = seeds;
  summary["external_references"] = corpus.size() - seeds;
  summary["labeled_publications"] = labeled;
  summary["directed_edges"] = graph.num_directed_edges();
  summary["undirected_edges"] = graph.num_undirected_edges();
  summary["minor_areas"] = taxonomy.size();
  ctx.write(artifact::kCorpusSummary, summary.dump(2) + "\n");
  if (graph.num_nodes() > 0) export_metis(graph, ctx.path(artifact::kMetis));
  std::string index = "metis_index\tpub_id\n";
  for (NodeIndex v = 0; v < corpus.size(); ++v) {
    fmt::format_to(std::back_inserter(index), "{}\t{}\n", v + 1, corpus.pub_id(v));
  }
  ctx.write(artifact::kNodeIndex, index);
}

void cocite(StageContext& ctx) {
  const auto& [corpus, graph, taxonomy] = ctx.corpus();
  const auto counts = citation_counts(graph);
  const auto retained = percentile_filter(counts, ctx.config().percentile);
  PairGenerationOptions options;
  options.threads = ctx.config().threads;
  options.memory_cap_pairs = ctx.config().pair_memory_cap;
  auto pairs = generate_pairs(graph, retained, options);
  std::uint64_t instances = 0;
  for (const auto& p : pairs) instances += p.raw;
  const auto cocitation = normalize_salton(graph.num_nodes(), retained, std::move(pairs), counts);

  std::string count_file = "pub_id\tcitations\n";
  for (NodeIndex v = 0; v < corpus.size(); ++v) {
    fmt::format_to(std::back_inserter(count_file), "{}\t{}\n", corpus.pub_id(v), counts[v]);
  }
  ctx.write(artifact::kCitationCounts, count_file);
  ctx.write(artifact::kRetained, format_retained(cocitation, corpus, counts));
  ctx.write(artifact::kPairs, format_pair_dump(cocitation, corpus));
  ordered_json summary;
  summary["percentile"] = ctx.config().percentile;
  summary["cited_publications"] =
      std::count_if(counts.begin(), counts.end(), [](std::uint64_t c) { return c > 0; });
  summary["retained"] = retained.size();
  summary["unique_pairs"] = cocitation.edges().size();
  summary["pair_instances"] = instances;
  ctx.write(artifact::kCocitationSummary, summary.dump(2) + "\n");
}

void vlc(StageContext& ctx) {
  const auto graph = ctx.cocitation();
  const auto result = run_vlc(graph, ctx.config().vlc);
  ctx.write(artifact::kVlcClusters, format_cluster_file(ctx.corpus().corpus, result.clusters));
  ctx.write(artifact::kVlcTrace, format_trace_jsonl(result));
  ordered_json summary;
  summary["clusters"] = result.clusters.clusters().size();
  summary["retained_nodes"] = result.retained_nodes;
  summary["dropped_small_nodes"] = result.dropped_small_nodes;
  summary["dropped_oversized_nodes"] = result.dropped_oversized_nodes;
  summary["clusters_below_retain"] = result.clusters_below_retain;
  summary["rounds"] = result.trace.size();
  ctx.write(artifact::kVlcSummary, summary.dump(2) + "\n");
}

void agglomerate(StageContext& ctx) {
  const auto vlc_file = ctx.require(artifact::kVlcClusters);
  const auto graph = ctx.cocitation();
  const auto& corpus = ctx.corpus().corpus;
  const auto vlc_clusters = read_cluster_file(vlc_file, corpus, ClusterMethod::kCocitation);
  auto cluster_graph = build_cluster_graph(graph, vlc_clusters, ctx.config().min_input_size);
  std::size_t largest = 0;
  for (const auto& [id, m] : cluster_graph.members) largest = std::max(largest, m.size());
  const std::size_t initial = cluster_graph.members.size();
  const auto result = merge_rounds(std::move(cluster_graph), ctx.config().rounds);
  ctx.write(artifact::kCocitationClusters, format_cluster_file(corpus, result.clusters));
  ctx.write(artifact::kMergeLog, format_merge_log_jsonl(result));
  std::string sizes = fmt::format("round,clusters,largest_cluster\n0,{},{}\n", initial, largest);
  for (const auto& e : result.log) {
    fmt::format_to(std::back_inserter(sizes), "{},{},{}\n", e.round, e.clusters_remaining, e.largest_cluster);
  }
  ctx.write(artifact::kAgglomerationSizes, sizes);
}

void conductance_stage(StageContext& ctx) {
  if (ctx.config().assignment.empty()) {
    throw ConfigError("conductance needs --assignment with an external direct-citation partition");
  }
  const auto& [corpus, graph, taxonomy] = ctx.corpus();
  const auto clusters = import_assignment(graph, ctx.config().assignment, ClusterMethod::kDirect);
  const auto summary = clustering_summary(graph, clusters, corpus);
  ctx.write(artifact::kDirectClusters, format_cluster_file(corpus, clusters));
  ctx.write(artifact::kTable2, format_summary_csv(summary));
  ctx.write(artifact::kTable2Global, format_summary_json(summary));
}

void reconcile(StageContext& ctx) {
  const auto cocit_file = ctx.require(artifact::kCocitationClusters);
  const auto vlc_file = ctx.require(artifact::kVlcClusters);
  const auto graph = ctx.cocitation();
  const auto& [corpus, citation_graph, taxonomy] = ctx.corpus();
  const auto cocit = read_cluster_file(cocit_file, corpus, ClusterMethod::kCocitation);
  const auto vlc_clusters = read_cluster_file(vlc_file, corpus, ClusterMethod::kCocitation);
  const auto& thresholds = ctx.config().thresholds;

  for (double t : thresholds) {
    const auto matrix = label_share_matrix(cocit, corpus, taxonomy, t);
    const auto stem = heatmap_stem("fig5_cocitation_heatmap", t);
    ctx.write(stem + ".csv", format_label_share_csv(matrix, taxonomy));
    ctx.write(stem + ".svg",
              render_heatmap_svg(matrix, taxonomy, fmt::format("Co-citation clusters, labels >= {:.0f}%", t * 100)));
  }

  const auto direct_file = ctx.path(artifact::kDirectClusters);
  if (fs::exists(direct_file)) {
    const auto direct = read_cluster_file(direct_file, corpus, ClusterMethod::kDirect);
    const double t = thresholds.front();
    const auto matrix = label_share_matrix(direct, corpus, taxonomy, t);
    const auto stem = heatmap_stem("fig4_direct_heatmap", t);
    ctx.write(stem + ".csv", format_label_share_csv(matrix, taxonomy));
    ctx.write(stem + ".svg",
              render_heatmap_svg(matrix, taxonomy, fmt::format("Direct-citation clusters, labels >= {:.0f}%", t * 100)));
    if (cocit.num_assigned() > 0) {
      const auto map = cross_map(cocit, direct, t);
      ctx.write(artifact::kCrossMapCsv, format_cross_map_csv(map));
      ctx.write(artifact::kCrossMapSvg, render_dotplot_svg(map, "Co-citation clusters vs direct-citation clusters"));
    }
  } else {
    spdlog::info("no {} found; skipping direct-citation heatmap and cross map", direct_file.string());
  }

  const auto fractional = fractional_top_area_counts(vlc_clusters, corpus, taxonomy);
  ctx.write(artifact::kFractional, format_fractional_csv(fractional));
  ctx.write(artifact::kVenn, format_venn_csv(fractional));

  const auto pairs = nucleating_pairs(graph, cocit, corpus);
  ctx.write(artifact::kTable3, format_nucleating_csv(pairs, corpus));
  ctx.write(artifact::kTable4, format_dominant_area_csv(pairs, corpus, taxonomy));
}

void report(StageContext& ctx) {
  ctx.require(artifact::kTable3);
  const auto& [corpus, graph, taxonomy] = ctx.corpus();
  ctx.write(artifact::kTable1, format_label_profile_csv(corpus_label_profile(corpus), taxonomy));
  ctx.write(artifact::kFig1, format_major_area_csv(major_area_type_counts(corpus, taxonomy)));

  const fs::path dir = ctx.path(artifact::kReportDir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(ctx.config().out)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    const bool figure_or_table = name.starts_with("table") || name.starts_with("fig");
    if (figure_or_table) names.push_back(name);
  }
  std::sort(names.begin(), names.end());
  ordered_json manifest;
  manifest["artifacts"] = ordered_json::array();
  for (const auto& name : names) {
    const std::string contents = read_text_file(ctx.path(name));
    write_text_file(dir / name, contents);
    manifest["artifacts"].push_back(ordered_json{{"file", name}, {"bytes", contents.size()}});
  }
  write_text_file(dir / artifact::kManifest, manifest.dump(2) + "\n");
}

}  // namespace

namespace {

void execute(Stage stage, StageContext& ctx) {
  spdlog::info("stage {}", to_string(stage));
  switch (stage) {
    case Stage::kIngest: ingest(ctx); break;
    case Stage::kCocite: cocite(ctx); break;
    case Stage::kVlc: vlc(ctx); break;
    case Stage::kAgglomerate: agglomerate(ctx); break;
    case Stage::kConductance: conductance_stage(ctx); break;
    case Stage::kReconcile: reconcile(ctx); break;
    case Stage::kReport: report(ctx); break;
  }
}

}  // namespace

void run_stage(Stage stage, const PipelineConfig& config) {
  StageContext ctx(config);
  execute(stage, ctx);
}

void run_pipeline(const PipelineConfig& config) {
  StageContext ctx(config);
  for (const auto& [stage, name] : kStageNames) {
    if (stage == Stage::kConductance && config.assignment.empty()) continue;
    execute(stage, ctx);
  }
}

}  // namespace cocite
