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

// Stage-by-stage pipeline: each stage reads the artifacts of the previous one
// from the output directory and writes its own.

#ifndef COCITE_PIPELINE_HPP_
#define COCITE_PIPELINE_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cocite/vlc.hpp"
#include "json.hpp"

namespace cocite {

struct PipelineConfig {
  std::filesystem::path pubs;
  std::filesystem::path edges;
  std::filesystem::path taxonomy;
  std::filesystem::path out;
  // External direct-citation partition, one cluster id per line.
  std::filesystem::path assignment;

  double percentile = 0.9;
  VlcParams vlc;
  std::size_t rounds = 600;
  std::size_t min_input_size = 10;
  std::vector<double> thresholds{0.15, 0.10};
  unsigned threads = 1;
  std::size_t pair_memory_cap = 100'000'000;

  // Throws ConfigError.
  void validate() const;
  nlohmann::ordered_json to_json() const;
  // Keys absent from `j` keep the values already in `base`.
  static PipelineConfig from_json(const nlohmann::json& j, PipelineConfig base);
  static PipelineConfig from_json(const nlohmann::json& j) { return from_json(j, PipelineConfig{}); }
};

enum class Stage { kIngest, kCocite, kVlc, kAgglomerate, kConductance, kReconcile, kReport };

std::optional<Stage> parse_stage(std::string_view name);
std::string_view to_string(Stage stage);

// Artifact file names inside the output directory.
namespace artifact {
inline constexpr std::string_view kConfig = "config.json";
inline constexpr std::string_view kCorpusSummary = "corpus_summary.json";
inline constexpr std::string_view kMetis = "graph.metis";
inline constexpr std::string_view kNodeIndex = "node_index.tsv";
inline constexpr std::string_view kCitationCounts = "citation_counts.tsv";
inline constexpr std::string_view kRetained = "retained.tsv";
inline constexpr std::string_view kPairs = "cocitation_pairs.tsv";
inline constexpr std::string_view kCocitationSummary = "cocitation_summary.json";
inline constexpr std::string_view kVlcClusters = "vlc_clusters.tsv";
inline constexpr std::string_view kVlcTrace = "vlc_trace.jsonl";
inline constexpr std::string_view kVlcSummary = "vlc_summary.json";
inline constexpr std::string_view kCocitationClusters = "cocitation_clusters.tsv";
inline constexpr std::string_view kMergeLog = "merge_log.jsonl";
inline constexpr std::string_view kAgglomerationSizes = "fig3d_agglomeration_sizes.csv";
inline constexpr std::string_view kDirectClusters = "direct_clusters.tsv";
inline constexpr std::string_view kTable2 = "table2_direct_summary.csv";
inline constexpr std::string_view kTable2Global = "table2_direct_summary.json";
inline constexpr std::string_view kFractional = "fig3b_fractional_counts.csv";
inline constexpr std::string_view kVenn = "fig3c_venn.csv";
inline constexpr std::string_view kTable3 = "table3_nucleating_pairs.csv";
inline constexpr std::string_view kTable4 = "table4_dominant_areas.csv";
inline constexpr std::string_view kCrossMapCsv = "fig6_cross_map.csv";
inline constexpr std::string_view kCrossMapSvg = "fig6_cross_map.svg";
inline constexpr std::string_view kTable1 = "table1_label_profile.csv";
inline constexpr std::string_view kFig1 = "fig1_major_areas.csv";
inline constexpr std::string_view kReportDir = "report";
inline constexpr std::string_view kManifest = "manifest.json";
}  // namespace artifact

// Heatmap file stem for a threshold, e.g. "fig5_cocitation_heatmap_15".
std::string heatmap_stem(std::string_view prefix, double threshold);

// Throws MissingArtifactError for absent inputs and ConfigError for bad parameters.
void run_stage(Stage stage, const PipelineConfig& config);

// ingest, cocite, vlc, agglomerate, conductance (only with an assignment), reconcile, report.
void run_pipeline(const PipelineConfig& config);

}  // namespace cocite

#endif  // COCITE_PIPELINE_HPP_
