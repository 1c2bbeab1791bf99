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

// Publications, the citation graph over them, the subject taxonomy and
// cluster assignments. Everything here is immutable once constructed.

#ifndef COCITE_CORPUS_HPP_
#define COCITE_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cocite {

using NodeIndex = std::uint32_t;
using ClusterId = std::int64_t;
using MinorCode = std::uint16_t;
using DirectedEdge = std::pair<NodeIndex, NodeIndex>;

enum class PubType { kArticle, kProceedings, kExternalReference };

std::string_view to_string(PubType type);
std::optional<PubType> parse_pub_type(std::string_view text);

struct PublicationRecord {
  std::string pub_id;
  std::optional<std::string> doi;
  PubType pub_type = PubType::kArticle;
  std::vector<MinorCode> minor_codes;  // sorted, unique

  bool is_labeled() const { return !minor_codes.empty(); }
};

// Records indexed densely in lexicographic pub_id order.
class Corpus {
 public:
  Corpus() = default;
  // Throws InputError on a duplicate pub_id.
  explicit Corpus(std::vector<PublicationRecord> records);

  std::size_t size() const { return records_.size(); }
  const PublicationRecord& record(NodeIndex i) const { return records_[i]; }
  const std::vector<PublicationRecord>& records() const { return records_; }
  const std::string& pub_id(NodeIndex i) const { return records_[i].pub_id; }
  std::optional<NodeIndex> index_of(std::string_view pub_id) const;

  // DOI when present, pub_id otherwise.
  const std::string& display_id(NodeIndex i) const;

 private:
  std::vector<PublicationRecord> records_;
};

// Directed citing -> cited graph with an undirected view for clustering.
// Reference lists are stored in CSR form, sorted per citing node.
class CitationGraph {
 public:
  CitationGraph() = default;
  // Duplicate directed edges collapse; a self-loop or out-of-range endpoint throws InputError.
  CitationGraph(std::size_t num_nodes, std::vector<DirectedEdge> edges);

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_directed_edges() const { return ref_targets_.size(); }
  // m: undirected edges after collapsing A->B and B->A.
  std::size_t num_undirected_edges() const { return undirected_targets_.size() / 2; }

  std::span<const NodeIndex> references(NodeIndex citing) const {
    return {ref_targets_.data() + ref_offsets_[citing],
            ref_targets_.data() + ref_offsets_[citing + 1]};
  }
  std::span<const NodeIndex> neighbors(NodeIndex v) const {
    return {undirected_targets_.data() + undirected_offsets_[v],
            undirected_targets_.data() + undirected_offsets_[v + 1]};
  }
  std::size_t degree(NodeIndex v) const {
    return undirected_offsets_[v + 1] - undirected_offsets_[v];
  }
  std::size_t in_degree(NodeIndex v) const { return in_degree_[v]; }

  std::vector<DirectedEdge> directed_edges() const;

  friend bool operator==(const CitationGraph&, const CitationGraph&) = default;

 private:
  std::size_t num_nodes_ = 0;
  std::vector<std::size_t> ref_offsets_{0};
  std::vector<NodeIndex> ref_targets_;
  std::vector<std::size_t> undirected_offsets_{0};
  std::vector<NodeIndex> undirected_targets_;
  std::vector<std::uint32_t> in_degree_;
};

enum class TopArea : std::uint8_t {
  kPhysicalSciences = 0,
  kLifeSciences = 1,
  kHealthSciences = 2,
  kSocialSciences = 3,
};
inline constexpr std::size_t kNumTopAreas = 4;

std::string_view to_string(TopArea area);
std::optional<TopArea> parse_top_area(std::string_view text);

struct MinorArea {
  MinorCode code = 0;
  std::string name;
  std::string major_area;
  TopArea top_area = TopArea::kPhysicalSciences;
};

// minor code -> (name, major area, top area).
class LabelTaxonomy {
 public:
  // Throws InputError if the code is already present.
  void add(MinorArea area);

  const MinorArea* find(MinorCode code) const;
  const MinorArea& at(MinorCode code) const;
  bool contains(MinorCode code) const { return find(code) != nullptr; }
  std::size_t size() const { return areas_.size(); }
  const std::map<MinorCode, MinorArea>& areas() const { return areas_; }

 private:
  std::map<MinorCode, MinorArea> areas_;
};

enum class ClusterMethod { kDirect, kCocitation };

std::string_view to_string(ClusterMethod method);

// Disjoint assignment of node indices to non-negative cluster ids.
class ClusterSet {
 public:
  static constexpr ClusterId kUnassigned = -1;

  ClusterSet() = default;
  ClusterSet(std::size_t num_nodes, ClusterMethod method)
      : assignment_(num_nodes, kUnassigned), method_(method) {}
  // Negative entries other than kUnassigned throw InputError.
  ClusterSet(std::vector<ClusterId> assignment, ClusterMethod method);

  // Throws InputError when `node` already carries a cluster id or `id` is negative.
  void assign(NodeIndex node, ClusterId id);

  std::optional<ClusterId> cluster_of(NodeIndex node) const {
    const ClusterId id = assignment_[node];
    if (id == kUnassigned) return std::nullopt;
    return id;
  }
  bool is_assigned(NodeIndex node) const { return assignment_[node] != kUnassigned; }
  std::size_t num_nodes() const { return assignment_.size(); }
  std::size_t num_assigned() const;
  bool is_total() const { return num_assigned() == num_nodes(); }
  ClusterMethod method() const { return method_; }
  const std::vector<ClusterId>& assignment() const { return assignment_; }

  // Cluster id -> ascending member list.
  std::map<ClusterId, std::vector<NodeIndex>> clusters() const;

  friend bool operator==(const ClusterSet&, const ClusterSet&) = default;

 private:
  std::vector<ClusterId> assignment_;
  ClusterMethod method_ = ClusterMethod::kDirect;
};

struct LoadedCorpus {
  Corpus corpus;
  CitationGraph graph;
  LabelTaxonomy taxonomy;
};

// Stream readers. `source` names the input in error messages.
Corpus read_publications(std::istream& in, const std::string& source);
std::vector<DirectedEdge> read_edges(std::istream& in, const std::string& source,
                                     const Corpus& corpus);
LabelTaxonomy read_taxonomy(std::istream& in, const std::string& source);

// Loads the three TSV inputs. Every minor code on a publication must be in the taxonomy.
LoadedCorpus load_corpus(const std::filesystem::path& pubs_file,
                         const std::filesystem::path& edges_file,
                         const std::filesystem::path& taxonomy_file);

// METIS / Graclus graph format: "n m" header, then one line of 1-based
// neighbors per node.
std::string format_metis(const CitationGraph& graph);
void export_metis(const CitationGraph& graph, const std::filesystem::path& out);

// Parsed METIS file: an undirected graph as ascending adjacency lists (0-based).
struct MetisGraph {
  std::size_t num_edges = 0;
  std::vector<std::vector<NodeIndex>> adjacency;

  friend bool operator==(const MetisGraph&, const MetisGraph&) = default;
};
MetisGraph parse_metis(std::istream& in, const std::string& source);
MetisGraph read_metis(const std::filesystem::path& file);
// The undirected view of `graph` in MetisGraph form.
MetisGraph undirected_view(const CitationGraph& graph);

// One cluster id per line; line k is node k.
ClusterSet parse_assignment(std::istream& in, const std::string& source,
                            std::size_t num_nodes, ClusterMethod method);
ClusterSet import_assignment(const CitationGraph& graph, const std::filesystem::path& file,
                             ClusterMethod method);

// Stage artifact: `pub_id<TAB>cluster_id` for every assigned node, in index order.
std::string format_cluster_file(const Corpus& corpus, const ClusterSet& clusters);
ClusterSet read_cluster_file(const std::filesystem::path& file, const Corpus& corpus,
                             ClusterMethod method);

}  // namespace cocite

#endif  // COCITE_CORPUS_HPP_
