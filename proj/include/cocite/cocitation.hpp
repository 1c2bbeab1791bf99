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

// Citation counts, the highly-cited filter and the Salton-normalized
// co-citation graph.

#ifndef COCITE_COCITATION_HPP_
#define COCITE_COCITATION_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cocite/corpus.hpp"

namespace cocite {

// In-corpus citation count (in-degree) per node.
using CitationCounts = std::vector<std::uint64_t>;

CitationCounts citation_counts(const CitationGraph& graph);

// Nodes whose count is at least the nearest-rank q-quantile of the nonzero
// counts. Zero-count nodes never qualify. Result is ascending.
// Throws DomainError when every count is zero or q lies outside [0, 1].
std::vector<NodeIndex> percentile_filter(const CitationCounts& counts, double q);

struct PairCount {
  NodeIndex a = 0;  // a < b
  NodeIndex b = 0;
  std::uint64_t raw = 0;

  friend bool operator==(const PairCount&, const PairCount&) = default;
};

struct PairGenerationOptions {
  // Pairs buffered in memory across all workers before runs spill to disk.
  std::size_t memory_cap_pairs = 100'000'000;
  unsigned threads = 1;
  // Where spill files go; defaults to the system temp directory.
  std::filesystem::path spill_dir;
};

// For every citing publication, all C(r, 2) pairs among its r retained
// references, reduced to one PairCount per distinct pair, sorted by (a, b).
// `retained` must be ascending.
std::vector<PairCount> generate_pairs(const CitationGraph& graph, std::span<const NodeIndex> retained,
                                      const PairGenerationOptions& options = {});

struct CocitationEdge {
  NodeIndex a = 0;  // a < b
  NodeIndex b = 0;
  std::uint64_t raw = 0;
  double ncf = 0.0;

  friend bool operator==(const CocitationEdge&, const CocitationEdge&) = default;
};

// Undirected weighted graph over the retained nodes. Edges are sorted by (a, b).
class CocitationGraph {
 public:
  CocitationGraph() = default;
  // `nodes` ascending; every edge endpoint must be in `nodes`.
  CocitationGraph(std::size_t universe_size, std::vector<NodeIndex> nodes, std::vector<CocitationEdge> edges);

  // Number of node indices in the underlying corpus (nodes are a subset of [0, universe)).
  std::size_t universe_size() const { return universe_size_; }
  const std::vector<NodeIndex>& nodes() const { return nodes_; }
  const std::vector<CocitationEdge>& edges() const { return edges_; }
  bool contains(NodeIndex v) const { return v < is_node_.size() && is_node_[v]; }

  // Edge ids incident to v.
  std::span<const std::uint32_t> incident(NodeIndex v) const {
    return {incident_.data() + offsets_[v], incident_.data() + offsets_[v + 1]};
  }

  friend bool operator==(const CocitationGraph& x, const CocitationGraph& y) {
    return x.universe_size_ == y.universe_size_ && x.nodes_ == y.nodes_ && x.edges_ == y.edges_;
  }

 private:
  std::size_t universe_size_ = 0;
  std::vector<NodeIndex> nodes_;
  std::vector<CocitationEdge> edges_;
  std::vector<bool> is_node_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> incident_;
};

// ncf = raw / sqrt(count(a) * count(b)). Throws DomainError when an endpoint has count 0.
CocitationGraph normalize_salton(std::size_t universe_size, std::span<const NodeIndex> retained,
                                 std::vector<PairCount> pairs, const CitationCounts& counts);

// Pair dump: a_pub_id<TAB>b_pub_id<TAB>raw<TAB>ncf, sorted by (a, b).
std::string format_pair_dump(const CocitationGraph& graph, const Corpus& corpus);
// Retained node list with counts: pub_id<TAB>citations.
std::string format_retained(const CocitationGraph& graph, const Corpus& corpus, const CitationCounts& counts);
// Rebuilds the graph from the retained list and pair dump written above.
CocitationGraph read_cocitation(const std::filesystem::path& retained_file,
                                const std::filesystem::path& pairs_file, const Corpus& corpus);

}  // namespace cocite

#endif  // COCITE_COCITATION_HPP_
