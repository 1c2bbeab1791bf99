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

#include "cocite/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>

#include "cocite/error.hpp"
#include "cocite/io.hpp"
#include "json.hpp"

namespace cocite {

namespace {

Conductance finish(std::uint64_t boundary, std::uint64_t volume, std::uint64_t two_m) {
  Conductance c;
  c.boundary = boundary;
  c.volume = volume;
  c.denominator = std::min(volume, two_m - volume);
  if (c.denominator == 0) {
    throw DomainError(fmt::format("conductance undefined: vol(S)={} and 2m-vol(S)={}", volume, two_m - volume));
  }
  c.value = static_cast<double>(boundary) / static_cast<double>(c.denominator);
  return c;
}

}  // namespace

Conductance conductance(const CitationGraph& graph, std::span<const NodeIndex> members) {
  std::vector<bool> in_set(graph.num_nodes(), false);
  for (NodeIndex v : members) in_set.at(v) = true;
  std::uint64_t boundary = 0;
  std::uint64_t volume = 0;
  for (NodeIndex v = 0; v < graph.num_nodes(); ++v) {
    if (!in_set[v]) continue;
    volume += graph.degree(v);
    for (NodeIndex w : graph.neighbors(v)) {
      if (!in_set[w]) ++boundary;
    }
  }
  return finish(boundary, volume, 2 * static_cast<std::uint64_t>(graph.num_undirected_edges()));
}

ClusteringSummary clustering_summary(const CitationGraph& graph, const ClusterSet& clusters, const Corpus& corpus) {
  if (clusters.num_nodes() != graph.num_nodes() || !clusters.is_total()) {
    throw InputError("clustering summary needs an assignment covering every graph node");
  }
  struct Accum {
    std::size_t size = 0;
    std::uint64_t boundary = 0;
    std::uint64_t volume = 0;
    std::size_t total_labels = 0;
    std::set<MinorCode> labels;
  };
  std::map<ClusterId, Accum> acc;
  for (NodeIndex v = 0; v < graph.num_nodes(); ++v) {
    const ClusterId c = *clusters.cluster_of(v);
    auto& a = acc[c];
    ++a.size;
    a.volume += graph.degree(v);
    for (NodeIndex w : graph.neighbors(v)) {
      if (*clusters.cluster_of(w) != c) ++a.boundary;
    }
    if (v < corpus.size()) {
      const auto& codes = corpus.record(v).minor_codes;
      a.total_labels += codes.size();
      a.labels.insert(codes.begin(), codes.end());
    }
  }
  const std::uint64_t two_m = 2 * static_cast<std::uint64_t>(graph.num_undirected_edges());
  ClusteringSummary summary;
  std::vector<double> phis;
  std::size_t smallest = SIZE_MAX;
  std::size_t largest = 0;
  for (const auto& [id, a] : acc) {
    ClusterSummaryRow row;
    row.cluster = id;
    row.publications = a.size;
    row.conductance = finish(a.boundary, a.volume, two_m);
    row.total_labels = a.total_labels;
    row.unique_labels = a.labels.size();
    phis.push_back(row.conductance.value);
    smallest = std::min(smallest, a.size);
    largest = std::max(largest, a.size);
    summary.rows.push_back(row);
  }
  if (summary.rows.empty()) return summary;
  summary.size_ratio = static_cast<double>(largest) / static_cast<double>(smallest);
  summary.size_ratio_ok = summary.size_ratio <= kMaxSizeRatio;
  std::sort(phis.begin(), phis.end());
  const std::size_t k = phis.size();
  summary.median_conductance = k % 2 == 1 ? phis[k / 2] : 0.5 * (phis[k / 2 - 1] + phis[k / 2]);
  summary.min_conductance = phis.front();
  summary.max_conductance = phis.back();
  return summary;
}

std::string format_summary_csv(const ClusteringSummary& summary) {
  std::string out = "cluster,publications,conductance,total_labels,unique_labels\n";
  for (const auto& r : summary.rows) {
    fmt::format_to(std::back_inserter(out), "{},{},{},{},{}\n", r.cluster, r.publications,
                   format_fixed(r.conductance.value, 6), r.total_labels, r.unique_labels);
  }
  return out;
}

std::string format_summary_json(const ClusteringSummary& summary) {
  nlohmann::ordered_json j;
  j["clusters"] = summary.rows.size();
  j["size_ratio"] = summary.size_ratio;
  j["size_ratio_ok"] = summary.size_ratio_ok;
  j["median_conductance"] = summary.median_conductance;
  j["min_conductance"] = summary.min_conductance;
  j["max_conductance"] = summary.max_conductance;
  return j.dump(2) + "\n";
}

}  // namespace cocite
