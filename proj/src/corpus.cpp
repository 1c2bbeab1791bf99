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

#include "cocite/corpus.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "cocite/error.hpp"
#include "cocite/io.hpp"

namespace cocite {

std::string_view to_string(PubType type) {
  switch (type) {
    case PubType::kArticle: return "article";
    case PubType::kProceedings: return "proceedings";
    case PubType::kExternalReference: return "external-reference";
  }
  return "article";
}

std::optional<PubType> parse_pub_type(std::string_view text) {
  if (text == "article" || text == "ar") return PubType::kArticle;
  if (text == "proceedings" || text == "cp") return PubType::kProceedings;
  if (text == "external-reference") return PubType::kExternalReference;
  return std::nullopt;
}

std::string_view to_string(TopArea area) {
  switch (area) {
    case TopArea::kPhysicalSciences: return "Physical Sciences";
    case TopArea::kLifeSciences: return "Life Sciences";
    case TopArea::kHealthSciences: return "Health Sciences";
    case TopArea::kSocialSciences: return "Social Sciences";
  }
  return "Physical Sciences";
}

std::optional<TopArea> parse_top_area(std::string_view text) {
  for (std::size_t i = 0; i < kNumTopAreas; ++i) {
    const auto area = static_cast<TopArea>(i);
    if (text == to_string(area)) return area;
  }
  return std::nullopt;
}

std::string_view to_string(ClusterMethod method) {
  return method == ClusterMethod::kDirect ? "direct" : "cocitation";
}

// ---------------------------------------------------------------------------
// Corpus

Corpus::Corpus(std::vector<PublicationRecord> records) : records_(std::move(records)) {
  std::sort(records_.begin(), records_.end(),
            [](const auto& a, const auto& b) { return a.pub_id < b.pub_id; });
  const auto dup = std::adjacent_find(records_.begin(), records_.end(),
                                      [](const auto& a, const auto& b) { return a.pub_id == b.pub_id; });
  if (dup != records_.end()) throw InputError("duplicate pub_id: " + dup->pub_id);
  for (auto& r : records_) {
    std::sort(r.minor_codes.begin(), r.minor_codes.end());
    r.minor_codes.erase(std::unique(r.minor_codes.begin(), r.minor_codes.end()), r.minor_codes.end());
  }
}

std::optional<NodeIndex> Corpus::index_of(std::string_view pub_id) const {
  const auto it = std::lower_bound(records_.begin(), records_.end(), pub_id,
                                   [](const PublicationRecord& r, std::string_view id) { return r.pub_id < id; });
  if (it == records_.end() || it->pub_id != pub_id) return std::nullopt;
  return static_cast<NodeIndex>(it - records_.begin());
}

const std::string& Corpus::display_id(NodeIndex i) const {
  const auto& r = records_[i];
  return r.doi ? *r.doi : r.pub_id;
}

// ---------------------------------------------------------------------------
// CitationGraph

namespace {

void build_csr(std::size_t num_nodes, const std::vector<DirectedEdge>& sorted_edges,
               std::vector<std::size_t>& offsets, std::vector<NodeIndex>& targets) {
  offsets.assign(num_nodes + 1, 0);
  targets.clear();
  targets.reserve(sorted_edges.size());
  for (const auto& [from, to] : sorted_edges) {
    ++offsets[from + 1];
    targets.push_back(to);
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
}

}  // namespace

CitationGraph::CitationGraph(std::size_t num_nodes, std::vector<DirectedEdge> edges)
    : num_nodes_(num_nodes), in_degree_(num_nodes, 0) {
  for (const auto& [from, to] : edges) {
    if (from >= num_nodes || to >= num_nodes) {
      throw InputError(fmt::format("edge ({}, {}) out of range for {} nodes", from, to, num_nodes));
    }
    if (from == to) throw InputError(fmt::format("self-loop on node {}", from));
  }
  std::sort(edges.begin(), edges.end());
  const std::size_t before = edges.size();
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (edges.size() != before) {
    spdlog::debug("collapsed {} duplicate citation edges", before - edges.size());
  }
  build_csr(num_nodes, edges, ref_offsets_, ref_targets_);
  for (const auto& e : edges) ++in_degree_[e.second];

  std::vector<DirectedEdge> both;
  both.reserve(edges.size() * 2);
  for (const auto& [from, to] : edges) {
    both.emplace_back(from, to);
    both.emplace_back(to, from);
  }
  std::sort(both.begin(), both.end());
  both.erase(std::unique(both.begin(), both.end()), both.end());
  build_csr(num_nodes, both, undirected_offsets_, undirected_targets_);
}

std::vector<DirectedEdge> CitationGraph::directed_edges() const {
  std::vector<DirectedEdge> out;
  out.reserve(num_directed_edges());
  for (NodeIndex v = 0; v < num_nodes_; ++v) {
    for (NodeIndex w : references(v)) out.emplace_back(v, w);
  }
  return out;
}

// ---------------------------------------------------------------------------
// LabelTaxonomy

void LabelTaxonomy::add(MinorArea area) {
  const MinorCode code = area.code;
  if (!areas_.emplace(code, std::move(area)).second) {
    throw InputError(fmt::format("duplicate minor code {}", code));
  }
}

const MinorArea* LabelTaxonomy::find(MinorCode code) const {
  const auto it = areas_.find(code);
  return it == areas_.end() ? nullptr : &it->second;
}

const MinorArea& LabelTaxonomy::at(MinorCode code) const {
  const MinorArea* area = find(code);
  if (area == nullptr) throw InputError(fmt::format("unknown minor code {}", code));
  return *area;
}

// ---------------------------------------------------------------------------
// ClusterSet

ClusterSet::ClusterSet(std::vector<ClusterId> assignment, ClusterMethod method)
    : assignment_(std::move(assignment)), method_(method) {
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    if (assignment_[i] < kUnassigned) {
      throw InputError(fmt::format("negative cluster id {} for node {}", assignment_[i], i));
    }
  }
}

void ClusterSet::assign(NodeIndex node, ClusterId id) {
  if (id < 0) throw InputError(fmt::format("negative cluster id {}", id));
  if (assignment_.at(node) != kUnassigned) {
    throw InputError(fmt::format("node {} already assigned to cluster {}", node, assignment_[node]));
  }
  assignment_[node] = id;
}

std::size_t ClusterSet::num_assigned() const {
  return static_cast<std::size_t>(
      std::count_if(assignment_.begin(), assignment_.end(), [](ClusterId c) { return c != kUnassigned; }));
}

std::map<ClusterId, std::vector<NodeIndex>> ClusterSet::clusters() const {
  std::map<ClusterId, std::vector<NodeIndex>> out;
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    if (assignment_[i] != kUnassigned) out[assignment_[i]].push_back(static_cast<NodeIndex>(i));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Readers

namespace {

std::optional<MinorCode> parse_minor_code(std::string_view text) {
  if (text.size() != 4 || text.front() == '0') return std::nullopt;
  return parse_integer<MinorCode>(text);
}

}  // namespace

Corpus read_publications(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  std::string_view line;
  if (!reader.next(line)) throw ParseError(source, 1, "missing header row");
  if (split_tabs(line).size() != 4 || split_tabs(line).front() != "pub_id") {
    reader.fail("expected header pub_id<TAB>doi<TAB>pub_type<TAB>minor_codes");
  }
  std::vector<PublicationRecord> records;
  std::vector<std::size_t> line_of;
  while (reader.next(line)) {
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 4) reader.fail(fmt::format("expected 4 fields, found {}", fields.size()));
    PublicationRecord rec;
    if (fields[0].empty()) reader.fail("empty pub_id");
    rec.pub_id = std::string(fields[0]);
    if (!fields[1].empty()) rec.doi = std::string(fields[1]);
    const auto type = parse_pub_type(fields[2]);
    if (!type) reader.fail(fmt::format("unknown pub_type '{}'", fields[2]));
    rec.pub_type = *type;
    std::string_view codes = fields[3];
    while (!codes.empty()) {
      const std::size_t semi = codes.find(';');
      const std::string_view token = codes.substr(0, semi);
      const auto code = parse_minor_code(token);
      if (!code) reader.fail(fmt::format("invalid minor code '{}'", token));
      rec.minor_codes.push_back(*code);
      if (semi == std::string_view::npos) break;
      codes.remove_prefix(semi + 1);
    }
    records.push_back(std::move(rec));
    line_of.push_back(reader.line_number());
  }
  // Report duplicates with the line of the second occurrence.
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return records[a].pub_id < records[b].pub_id; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (records[order[k]].pub_id == records[order[k - 1]].pub_id) {
      throw InputError(fmt::format("{}:{}: duplicate pub_id {}", source, line_of[order[k]],
                                   records[order[k]].pub_id));
    }
  }
  return Corpus(std::move(records));
}

std::vector<DirectedEdge> read_edges(std::istream& in, const std::string& source,
                                     const Corpus& corpus) {
  LineReader reader(in, source);
  std::vector<DirectedEdge> edges;
  std::string_view line;
  while (reader.next(line)) {
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2) reader.fail(fmt::format("expected 2 fields, found {}", fields.size()));
    if (reader.line_number() == 1 && fields[0] == "citing_pub_id") continue;
    const auto citing = corpus.index_of(fields[0]);
    if (!citing) {
      throw InputError(fmt::format("{}:{}: unknown pub_id {}", source, reader.line_number(), fields[0]));
    }
    const auto cited = corpus.index_of(fields[1]);
    if (!cited) {
      throw InputError(fmt::format("{}:{}: unknown pub_id {}", source, reader.line_number(), fields[1]));
    }
    if (*citing == *cited) {
      throw InputError(fmt::format("{}:{}: self-loop on {}", source, reader.line_number(), fields[0]));
    }
    edges.emplace_back(*citing, *cited);
  }
  return edges;
}

LabelTaxonomy read_taxonomy(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  LabelTaxonomy taxonomy;
  std::string_view line;
  while (reader.next(line)) {
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 4) reader.fail(fmt::format("expected 4 fields, found {}", fields.size()));
    if (reader.line_number() == 1 && fields[0] == "minor_code") continue;
    const auto code = parse_minor_code(fields[0]);
    if (!code) reader.fail(fmt::format("invalid minor code '{}'", fields[0]));
    const auto top = parse_top_area(fields[3]);
    if (!top) reader.fail(fmt::format("unknown top area '{}'", fields[3]));
    if (taxonomy.contains(*code)) reader.fail(fmt::format("duplicate minor code {}", *code));
    taxonomy.add(MinorArea{*code, std::string(fields[1]), std::string(fields[2]), *top});
  }
  return taxonomy;
}

LoadedCorpus load_corpus(const std::filesystem::path& pubs_file,
                         const std::filesystem::path& edges_file,
                         const std::filesystem::path& taxonomy_file) {
  LoadedCorpus loaded;
  {
    auto in = open_input(taxonomy_file);
    loaded.taxonomy = read_taxonomy(in, taxonomy_file.string());
  }
  {
    auto in = open_input(pubs_file);
    loaded.corpus = read_publications(in, pubs_file.string());
  }
  for (const auto& rec : loaded.corpus.records()) {
    for (MinorCode code : rec.minor_codes) {
      if (!loaded.taxonomy.contains(code)) {
        throw InputError(fmt::format("{}: publication {} carries minor code {} absent from taxonomy",
                                     pubs_file.string(), rec.pub_id, code));
      }
    }
  }
  auto in = open_input(edges_file);
  auto edges = read_edges(in, edges_file.string(), loaded.corpus);
  loaded.graph = CitationGraph(loaded.corpus.size(), std::move(edges));
  return loaded;
}

// ---------------------------------------------------------------------------
// METIS

std::string format_metis(const CitationGraph& graph) {
  std::string out = fmt::format("{} {}\n", graph.num_nodes(), graph.num_undirected_edges());
  out.reserve(out.size() + graph.num_undirected_edges() * 16 + graph.num_nodes());
  for (NodeIndex v = 0; v < graph.num_nodes(); ++v) {
    bool first = true;
    for (NodeIndex w : graph.neighbors(v)) {
      if (!first) out.push_back(' ');
      fmt::format_to(std::back_inserter(out), "{}", w + 1);
      first = false;
    }
    out.push_back('\n');
  }
  return out;
}

void export_metis(const CitationGraph& graph, const std::filesystem::path& out) {
  if (graph.num_nodes() == 0) throw DomainError("cannot export an empty graph");
  write_text_file(out, format_metis(graph));
}

MetisGraph parse_metis(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  std::string_view line;
  if (!reader.next(line)) throw ParseError(source, 1, "missing header line");
  std::istringstream header{std::string(line)};
  std::size_t n = 0;
  std::size_t m = 0;
  if (!(header >> n >> m)) reader.fail("expected 'n m' header");
  MetisGraph graph;
  graph.num_edges = m;
  graph.adjacency.resize(n);
  std::size_t endpoint_total = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (!reader.next(line)) throw ParseError(source, reader.line_number() + 1, "missing adjacency line");
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && line[pos] == ' ') ++pos;
      if (pos == line.size()) break;
      std::size_t end = line.find(' ', pos);
      if (end == std::string_view::npos) end = line.size();
      const auto w = parse_integer<std::size_t>(line.substr(pos, end - pos));
      if (!w || *w == 0 || *w > n) reader.fail(fmt::format("bad neighbor '{}'", line.substr(pos, end - pos)));
      graph.adjacency[v].push_back(static_cast<NodeIndex>(*w - 1));
      pos = end;
    }
    endpoint_total += graph.adjacency[v].size();
  }
  if (endpoint_total != 2 * m) {
    throw ParseError(source, 1, fmt::format("header claims {} edges but adjacency lists hold {} endpoints", m,
                                            endpoint_total));
  }
  return graph;
}

MetisGraph read_metis(const std::filesystem::path& file) {
  auto in = open_input(file);
  return parse_metis(in, file.string());
}

MetisGraph undirected_view(const CitationGraph& graph) {
  MetisGraph out;
  out.num_edges = graph.num_undirected_edges();
  out.adjacency.resize(graph.num_nodes());
  for (NodeIndex v = 0; v < graph.num_nodes(); ++v) {
    const auto nb = graph.neighbors(v);
    out.adjacency[v].assign(nb.begin(), nb.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Assignments

ClusterSet parse_assignment(std::istream& in, const std::string& source, std::size_t num_nodes,
                            ClusterMethod method) {
  LineReader reader(in, source);
  std::vector<ClusterId> ids;
  ids.reserve(num_nodes);
  std::string_view line;
  while (reader.next(line)) {
    // A trailing empty line is the file terminator, not a row.
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    const auto id = parse_integer<ClusterId>(line);
    if (!id || *id < 0) reader.fail(fmt::format("expected a non-negative integer, found '{}'", line));
    ids.push_back(*id);
  }
  if (ids.size() != num_nodes) {
    throw InputError(fmt::format("{}: expected {} lines (one per node), found {}", source, num_nodes, ids.size()));
  }
  return ClusterSet(std::move(ids), method);
}

ClusterSet import_assignment(const CitationGraph& graph, const std::filesystem::path& file,
                             ClusterMethod method) {
  auto in = open_input(file);
  return parse_assignment(in, file.string(), graph.num_nodes(), method);
}

std::string format_cluster_file(const Corpus& corpus, const ClusterSet& clusters) {
  std::string out = "pub_id\tcluster_id\n";
  for (NodeIndex v = 0; v < clusters.num_nodes(); ++v) {
    if (const auto c = clusters.cluster_of(v)) {
      fmt::format_to(std::back_inserter(out), "{}\t{}\n", corpus.pub_id(v), *c);
    }
  }
  return out;
}

ClusterSet read_cluster_file(const std::filesystem::path& file, const Corpus& corpus, ClusterMethod method) {
  auto in = open_input(file);
  LineReader reader(in, file.string());
  ClusterSet clusters(corpus.size(), method);
  std::string_view line;
  while (reader.next(line)) {
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2) reader.fail("expected pub_id<TAB>cluster_id");
    if (reader.line_number() == 1 && fields[0] == "pub_id") continue;
    const auto node = corpus.index_of(fields[0]);
    if (!node) reader.fail(fmt::format("unknown pub_id {}", fields[0]));
    const auto id = parse_integer<ClusterId>(fields[1]);
    if (!id || *id < 0) reader.fail(fmt::format("bad cluster id '{}'", fields[1]));
    if (clusters.is_assigned(*node)) reader.fail(fmt::format("pub_id {} assigned twice", fields[0]));
    clusters.assign(*node, *id);
  }
  return clusters;
}

}  // namespace cocite
