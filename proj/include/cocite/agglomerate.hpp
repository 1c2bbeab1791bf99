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

// Max-linkage agglomeration of clusters: the cluster pair joined by the
// heaviest co-citation edge merges first, and the merged cluster's weight to
// any third cluster is the larger of the two it replaces.

#ifndef COCITE_AGGLOMERATE_HPP_
#define COCITE_AGGLOMERATE_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cocite/cocitation.hpp"
#include "cocite/corpus.hpp"

namespace cocite {

using ClusterPair = std::pair<ClusterId, ClusterId>;  // first < second

struct ClusterGraph {
  std::size_t universe_size = 0;
  std::map<ClusterId, std::vector<NodeIndex>> members;
  // Maximum co-citation weight over all pairs crossing the two clusters.
  std::map<ClusterPair, double> edges;
};

// Clusters with fewer than min_input_size members are left out.
ClusterGraph build_cluster_graph(const CocitationGraph& graph, const ClusterSet& clusters,
                                 std::size_t min_input_size = 10);

struct MergeEvent {
  std::size_t round = 0;  // 1-based
  ClusterId merged_a = 0;  // survivor, the smaller id
  ClusterId merged_b = 0;
  double weight = 0.0;
  std::size_t clusters_remaining = 0;
  std::size_t largest_cluster = 0;
};

// Incremental merger. Ties on weight go to the smallest (first, second) id pair.
class Agglomerator {
 public:
  explicit Agglomerator(ClusterGraph graph);

  // Performs one merge; nullopt once no inter-cluster edge is left.
  std::optional<MergeEvent> step();

  std::size_t num_clusters() const { return members_.size(); }
  std::size_t rounds_done() const { return rounds_; }
  const std::map<ClusterId, std::vector<NodeIndex>>& members() const { return members_; }
  std::optional<double> weight(ClusterId a, ClusterId b) const;
  std::map<ClusterPair, double> edges() const;
  ClusterSet to_cluster_set() const;

 private:
  struct Candidate {
    double weight;
    ClusterId a;
    ClusterId b;
  };
  struct Lighter {
    bool operator()(const Candidate& x, const Candidate& y) const {
      if (x.weight != y.weight) return x.weight < y.weight;
      if (x.a != y.a) return x.a > y.a;
      return x.b > y.b;
    }
  };

  std::size_t universe_size_;
  std::map<ClusterId, std::vector<NodeIndex>> members_;
  std::unordered_map<ClusterId, std::unordered_map<ClusterId, double>> adjacency_;
  std::priority_queue<Candidate, std::vector<Candidate>, Lighter> queue_;
  std::size_t rounds_ = 0;
};

struct MergeResult {
  ClusterSet clusters;
  std::vector<MergeEvent> log;
};

// Runs min(rounds, available merges) merges.
MergeResult merge_rounds(ClusterGraph graph, std::size_t rounds = 600);

// One JSON object per merge: {round, merged_a, merged_b, weight}.
std::string format_merge_log_jsonl(const MergeResult& result);

}  // namespace cocite

#endif  // COCITE_AGGLOMERATE_HPP_
