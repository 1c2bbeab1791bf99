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

#include "cocite/vlc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>
#include "json.hpp"
#include <spdlog/spdlog.h>

#include "cocite/error.hpp"
#include "cocite/quantile.hpp"

namespace cocite {

namespace {

constexpr double kQuantileGrid = 1e9;

double snap(double q) { return std::round(q * kQuantileGrid) / kQuantileGrid; }

}  // namespace

void VlcParams::validate() const {
  if (!(0.0 <= t0 && t0 < final_t && final_t <= 1.0)) {
    throw ConfigError(fmt::format("need 0 <= t0 < final_t <= 1, got t0={} final_t={}", t0, final_t));
  }
  if (min_size < 1 || !(min_size <= retain_below && retain_below <= mcs)) {
    throw ConfigError(fmt::format("need 1 <= min_size <= retain_below <= mcs, got {} / {} / {}", min_size,
                                  retain_below, mcs));
  }
  for (const auto& phase : schedule) {
    if (!(phase.step > 0.0) || phase.from > phase.to || phase.from < 0.0 || phase.to > 1.0) {
      throw ConfigError(fmt::format("bad schedule phase {}-{} step {}", phase.from, phase.to, phase.step));
    }
  }
}

std::vector<double> VlcParams::quantiles() const {
  std::vector<double> grid{snap(t0)};
  for (const auto& phase : schedule) {
    const auto steps = static_cast<long>(std::floor((phase.to - phase.from) / phase.step + 1e-9));
    for (long k = 0; k <= steps; ++k) grid.push_back(snap(phase.from + static_cast<double>(k) * phase.step));
  }
  const double lo = snap(t0);
  const double hi = snap(final_t);
  std::erase_if(grid, [&](double q) { return q < lo || q >= hi; });
  grid.push_back(hi);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

WeightDistribution::WeightDistribution(std::vector<double> weights) : sorted_(std::move(weights)) {
  if (sorted_.empty()) throw DomainError("quantile of an empty weight distribution");
  std::sort(sorted_.begin(), sorted_.end());
}

double WeightDistribution::quantile(double q) const { return sorted_[nearest_rank(sorted_.size(), q) - 1]; }

double quantile_threshold(std::span<const double> weights, double q) {
  return WeightDistribution(std::vector<double>(weights.begin(), weights.end())).quantile(q);
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }

  NodeIndex find(NodeIndex x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller index stays root so roots are deterministic.
  void unite(NodeIndex a, NodeIndex b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<NodeIndex> parent_;
};

}  // namespace

std::vector<Component> components_at(const CocitationGraph& graph, double threshold,
                                     std::span<const NodeIndex> nodes) {
  const std::size_t universe = graph.universe_size();
  std::vector<bool> active(universe, false);
  for (NodeIndex v : nodes) active.at(v) = true;

  DisjointSets sets(universe);
  for (NodeIndex v : nodes) {
    for (std::uint32_t e : graph.incident(v)) {
      const auto& edge = graph.edges()[e];
      if (edge.a == v && active[edge.b] && edge.ncf >= threshold) sets.unite(edge.a, edge.b);
    }
  }

  // Roots are the smallest member of each component.
  std::vector<std::size_t> slot(universe, std::numeric_limits<std::size_t>::max());
  std::vector<Component> comps;
  std::vector<NodeIndex> sorted_nodes(nodes.begin(), nodes.end());
  std::sort(sorted_nodes.begin(), sorted_nodes.end());
  for (NodeIndex v : sorted_nodes) {
    const NodeIndex root = sets.find(v);
    if (slot[root] == std::numeric_limits<std::size_t>::max()) {
      slot[root] = comps.size();
      comps.push_back({{}, -std::numeric_limits<double>::infinity()});
    }
    comps[slot[root]].members.push_back(v);
  }
  for (NodeIndex v : sorted_nodes) {
    for (std::uint32_t e : graph.incident(v)) {
      const auto& edge = graph.edges()[e];
      if (edge.a == v && active[edge.b] && edge.ncf >= threshold) {
        auto& c = comps[slot[sets.find(v)]];
        c.max_weight = std::max(c.max_weight, edge.ncf);
      }
    }
  }
  std::stable_sort(comps.begin(), comps.end(), [](const Component& x, const Component& y) {
    if (x.max_weight != y.max_weight) return x.max_weight > y.max_weight;
    return x.members.front() < y.members.front();
  });
  return comps;
}

VlcResult run_vlc(const CocitationGraph& graph, const VlcParams& params) {
  params.validate();
  std::vector<double> weights;
  weights.reserve(graph.edges().size());
  for (const auto& e : graph.edges()) weights.push_back(e.ncf);
  if (weights.empty()) throw DomainError("variable-level clustering needs at least one co-citation edge");
  const WeightDistribution distribution(std::move(weights));

  VlcResult result;
  result.clusters = ClusterSet(graph.universe_size(), ClusterMethod::kCocitation);
  ClusterId next_id = 0;
  std::vector<NodeIndex> in_play = graph.nodes();
  for (double q : params.quantiles()) {
    if (in_play.empty()) break;
    VlcRound round;
    round.quantile = q;
    round.threshold_value = distribution.quantile(q);
    std::vector<NodeIndex> carried;
    for (auto& comp : components_at(graph, round.threshold_value, in_play)) {
      const std::size_t size = comp.members.size();
      if (size > params.mcs) {
        carried.insert(carried.end(), comp.members.begin(), comp.members.end());
      } else if (size < params.min_size) {
        result.dropped_small_nodes += size;
      } else {
        for (NodeIndex v : comp.members) result.clusters.assign(v, next_id);
        ++next_id;
        ++round.emitted;
        result.retained_nodes += size;
        if (size < params.retain_below) ++result.clusters_below_retain;
      }
    }
    std::sort(carried.begin(), carried.end());
    round.carried_over_nodes = carried.size();
    spdlog::debug("vlc round q={} threshold={} emitted={} carried={}", q, round.threshold_value, round.emitted,
                  round.carried_over_nodes);
    result.trace.push_back(round);
    in_play = std::move(carried);
  }
  if (!in_play.empty()) {
    spdlog::warn("vlc schedule exhausted; dropping {} nodes in oversized components", in_play.size());
    result.dropped_oversized_nodes = in_play.size();
  }
  return result;
}

std::string format_trace_jsonl(const VlcResult& result) {
  std::string out;
  for (const auto& round : result.trace) {
    nlohmann::ordered_json j;
    j["quantile"] = round.quantile;
    j["threshold_value"] = round.threshold_value;
    j["emitted"] = round.emitted;
    j["carried_over_nodes"] = round.carried_over_nodes;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace cocite
