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

#ifndef COCITE_METRICS_HPP_
#define COCITE_METRICS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cocite/corpus.hpp"

namespace cocite {

// phi(S) = |boundary(S)| / min(vol(S), 2m - vol(S)) on the undirected view.
struct Conductance {
  std::uint64_t boundary = 0;
  std::uint64_t volume = 0;
  std::uint64_t denominator = 0;
  double value = 0.0;
};

// Throws DomainError ("conductance undefined") when the denominator is zero,
// which covers S = V and vol(S) = 0.
Conductance conductance(const CitationGraph& graph, std::span<const NodeIndex> members);

struct ClusterSummaryRow {
  ClusterId cluster = 0;
  std::size_t publications = 0;
  Conductance conductance;
  // Every minor code on every member publication.
  std::size_t total_labels = 0;
  std::size_t unique_labels = 0;
};

struct ClusteringSummary {
  std::vector<ClusterSummaryRow> rows;  // ascending cluster id
  double size_ratio = 0.0;              // largest / smallest
  bool size_ratio_ok = false;           // largest is at most 10x the smallest
  double median_conductance = 0.0;
  double min_conductance = 0.0;
  double max_conductance = 0.0;
};

inline constexpr double kMaxSizeRatio = 10.0;

// Requires a total clustering. Conductance errors propagate.
ClusteringSummary clustering_summary(const CitationGraph& graph, const ClusterSet& clusters, const Corpus& corpus);

// cluster,publications,conductance,total_labels,unique_labels
std::string format_summary_csv(const ClusteringSummary& summary);
// Global figures (size ratio, median/min/max conductance) as a JSON object.
std::string format_summary_json(const ClusteringSummary& summary);

}  // namespace cocite

#endif  // COCITE_METRICS_HPP_
