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

#include "cocite/agglomerate.hpp"

#include <algorithm>

#include "json.hpp"

namespace cocite {

ClusterGraph build_cluster_graph(const CocitationGraph& graph, const ClusterSet& clusters,
                                 std::size_t min_input_size) {
  ClusterGraph out;
  out.universe_size = clusters.num_nodes();
  for (auto& [id, members] : clusters.clusters()) {
    if (members.size() >= min_input_size) out.members.emplace(id, std::move(members));
  }
  for (const auto& e : graph.edges()) {
    const auto ca = clusters.cluster_of(e.a);
    const auto cb = clusters.cluster_of(e.b);
    if (!ca || !cb || *ca == *cb) continue;
    if (!out.members.contains(*ca) || !out.members.contains(*cb)) continue;
    const ClusterPair key{std::min(*ca, *cb), std::max(*ca, *cb)};
    auto [it, inserted] = out.edges.emplace(key, e.ncf);
    if (!inserted) it->second = std::max(it->second, e.ncf);
  }
  return out;
}

Agglomerator::Agglomerator(ClusterGraph graph)
    : universe_size_(graph.universe_size), members_(std::move(graph.members)) {
  for (const auto& [key, w] : graph.edges) {
    adjacency_[key.first][key.second] = w;
    adjacency_[key.second][key.first] = w;
    queue_.push({w, key.first, key.second});
  }
}

std::optional<double> Agglomerator::weight(ClusterId a, ClusterId b) const {
  const auto it = adjacency_.find(a);
  if (it == adjacency_.end()) return std::nullopt;
  const auto jt = it->second.find(b);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

std::map<ClusterPair, double> Agglomerator::edges() const {
  std::map<ClusterPair, double> out;
  for (const auto& [a, row] : adjacency_) {
    for (const auto& [b, w] : row) {
      if (a < b) out.emplace(ClusterPair{a, b}, w);
    }
  }
  return out;
}

std::optional<MergeEvent> Agglomerator::step() {
  // Lazy deletion: an entry is live only if it still matches the adjacency.
  while (!queue_.empty()) {
    const Candidate top = queue_.top();
    queue_.pop();
    const auto current = weight(top.a, top.b);
    if (!current || *current != top.weight) continue;

    const ClusterId keep = top.a;
    const ClusterId gone = top.b;
    auto gone_row = std::move(adjacency_[gone]);
    adjacency_.erase(gone);
    auto& keep_row = adjacency_[keep];
    keep_row.erase(gone);
    for (const auto& [other, w_gone] : gone_row) {
      if (other == keep) continue;
      auto& other_row = adjacency_[other];
      other_row.erase(gone);
      const auto existing = keep_row.find(other);
      if (existing != keep_row.end() && existing->second >= w_gone) continue;
      keep_row[other] = w_gone;
      other_row[keep] = w_gone;
      queue_.push({w_gone, std::min(keep, other), std::max(keep, other)});
    }
    if (keep_row.empty()) adjacency_.erase(keep);

    auto& kept_members = members_[keep];
    auto& gone_members = members_[gone];
    std::vector<NodeIndex> merged;
    merged.reserve(kept_members.size() + gone_members.size());
    std::merge(kept_members.begin(), kept_members.end(), gone_members.begin(), gone_members.end(),
               std::back_inserter(merged));
    kept_members = std::move(merged);
    members_.erase(gone);

    ++rounds_;
    MergeEvent event{rounds_, keep, gone, top.weight, members_.size(), 0};
    for (const auto& [id, m] : members_) event.largest_cluster = std::max(event.largest_cluster, m.size());
    return event;
  }
  return std::nullopt;
}

ClusterSet Agglomerator::to_cluster_set() const {
  ClusterSet out(universe_size_, ClusterMethod::kCocitation);
  for (const auto& [id, members] : members_) {
    for (NodeIndex v : members) out.assign(v, id);
  }
  return out;
}

MergeResult merge_rounds(ClusterGraph graph, std::size_t rounds) {
  Agglomerator merger(std::move(graph));
  MergeResult result;
  while (merger.rounds_done() < rounds) {
    auto event = merger.step();
    if (!event) break;
    result.log.push_back(*event);
  }
  result.clusters = merger.to_cluster_set();
  return result;
}

std::string format_merge_log_jsonl(const MergeResult& result) {
  std::string out;
  for (const auto& e : result.log) {
    nlohmann::ordered_json j;
    j["round"] = e.round;
    j["merged_a"] = e.merged_a;
    j["merged_b"] = e.merged_b;
    j["weight"] = e.weight;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace cocite
