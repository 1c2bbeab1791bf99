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

// Variable-level clustering: a cascade of rising edge-weight thresholds that
// emits size-bounded connected components and re-thresholds oversized ones.

#ifndef COCITE_VLC_HPP_
#define COCITE_VLC_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cocite/cocitation.hpp"
#include "cocite/corpus.hpp"

namespace cocite {

// Quantiles from..to (inclusive) in increments of step.
struct VlcPhase {
  double from = 0.0;
  double to = 0.0;
  double step = 0.0;
};

struct VlcParams {
  double t0 = 0.5;
  std::vector<VlcPhase> schedule{{0.5, 0.9, 0.1}, {0.9, 0.99, 0.01}};
  double final_t = 0.999;
  std::size_t mcs = 200;
  // Reporting boundary only; every component of size <= mcs is retained.
  std::size_t retain_below = 100;
  std::size_t min_size = 3;

  // Throws ConfigError on a violated parameter invariant.
  void validate() const;
  // The quantile of every round in order: t0, the phase grid above t0, final_t.
  std::vector<double> quantiles() const;
};

// Nearest-rank quantile lookups against a fixed weight distribution.
class WeightDistribution {
 public:
  // Throws DomainError when `weights` is empty.
  explicit WeightDistribution(std::vector<double> weights);

  double quantile(double q) const;
  std::size_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

double quantile_threshold(std::span<const double> weights, double q);

struct Component {
  std::vector<NodeIndex> members;  // ascending
  // Heaviest surviving internal edge; -inf for a singleton.
  double max_weight = 0.0;
};

// Connected components of the subgraph induced on `nodes` that keeps edges with
// ncf >= threshold. Ordered by descending max_weight, then smallest member.
std::vector<Component> components_at(const CocitationGraph& graph, double threshold,
                                     std::span<const NodeIndex> nodes);

struct VlcRound {
  double quantile = 0.0;
  double threshold_value = 0.0;
  std::size_t emitted = 0;
  std::size_t carried_over_nodes = 0;
};

struct VlcResult {
  ClusterSet clusters;  // method = cocitation, ids in emission order from 0
  std::vector<VlcRound> trace;
  std::size_t retained_nodes = 0;
  std::size_t dropped_small_nodes = 0;
  std::size_t dropped_oversized_nodes = 0;
  // Retained clusters smaller than retain_below.
  std::size_t clusters_below_retain = 0;
};

// Throws DomainError when the graph has no edges.
VlcResult run_vlc(const CocitationGraph& graph, const VlcParams& params);

// One JSON object per round: {quantile, threshold_value, emitted, carried_over_nodes}.
std::string format_trace_jsonl(const VlcResult& result);

}  // namespace cocite

#endif  // COCITE_VLC_HPP_
