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

#include "cocite/reconcile.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "cocite/error.hpp"
#include "cocite/io.hpp"

namespace cocite {

namespace {

bool only_unlabeled_references(const std::vector<NodeIndex>& members, const Corpus& corpus) {
  return std::all_of(members.begin(), members.end(), [&](NodeIndex v) {
    const auto& r = corpus.record(v);
    return r.pub_type == PubType::kExternalReference && !r.is_labeled();
  });
}

constexpr double kShareSlack = 1e-12;

}  // namespace

LabelShareMatrix label_share_matrix(const ClusterSet& clusters, const Corpus& corpus, const LabelTaxonomy& taxonomy,
                                    double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw DomainError(fmt::format("label-share threshold {} outside (0, 1]", threshold));
  }
  LabelShareMatrix matrix;
  matrix.threshold = threshold;
  std::vector<std::map<MinorCode, std::size_t>> counts;
  for (const auto& [id, members] : clusters.clusters()) {
    if (members.empty()) {
      spdlog::warn("cluster {} is empty; excluded from label shares", id);
      continue;
    }
    if (only_unlabeled_references(members, corpus)) {
      spdlog::warn("cluster {} holds only unlabeled external references; excluded from label shares", id);
      continue;
    }
    std::map<MinorCode, std::size_t> per_code;
    for (NodeIndex v : members) {
      for (MinorCode code : corpus.record(v).minor_codes) ++per_code[code];
    }
    matrix.columns.push_back(id);
    matrix.column_sizes.push_back(members.size());
    counts.push_back(std::move(per_code));
  }
  std::set<MinorCode> candidates;
  for (const auto& per_code : counts) {
    for (const auto& [code, n] : per_code) candidates.insert(code);
  }
  for (MinorCode code : candidates) {
    std::vector<double> row(matrix.columns.size(), 0.0);
    bool keep = false;
    for (std::size_t c = 0; c < matrix.columns.size(); ++c) {
      const auto it = counts[c].find(code);
      if (it == counts[c].end()) continue;
      row[c] = static_cast<double>(it->second) / static_cast<double>(matrix.column_sizes[c]);
      keep = keep || row[c] >= threshold - kShareSlack;
    }
    if (keep) {
      (void)taxonomy.at(code);
      matrix.rows.push_back(code);
      matrix.cells.push_back(std::move(row));
    }
  }
  return matrix;
}

double CrossMap::row_total(std::size_t row) const {
  double total = 0.0;
  for (double p : percent[row]) total += p;
  return total;
}

CrossMap cross_map(const ClusterSet& rows, const ClusterSet& columns, double threshold) {
  if (rows.num_nodes() != columns.num_nodes()) {
    throw InputError("cross map needs clusterings over the same node indexing");
  }
  std::map<ClusterId, std::map<ClusterId, std::size_t>> overlap;
  std::map<ClusterId, std::size_t> row_sizes;
  std::set<ClusterId> column_ids;
  for (NodeIndex v = 0; v < rows.num_nodes(); ++v) {
    const auto r = rows.cluster_of(v);
    const auto c = columns.cluster_of(v);
    if (!r || !c) continue;
    ++overlap[*r][*c];
    ++row_sizes[*r];
    column_ids.insert(*c);
  }
  if (row_sizes.empty()) throw InputError("cross map: the two clusterings share no assigned node");
  CrossMap map;
  map.threshold = threshold;
  map.columns.assign(column_ids.begin(), column_ids.end());
  for (const auto& [r, per_column] : overlap) {
    map.rows.push_back(r);
    map.row_sizes.push_back(row_sizes[r]);
    std::vector<double> pct(map.columns.size(), 0.0);
    std::vector<bool> shown(map.columns.size(), false);
    for (std::size_t j = 0; j < map.columns.size(); ++j) {
      const auto it = per_column.find(map.columns[j]);
      if (it == per_column.end()) continue;
      pct[j] = 100.0 * static_cast<double>(it->second) / static_cast<double>(row_sizes[r]);
      shown[j] = pct[j] >= 100.0 * threshold - kShareSlack;
    }
    map.percent.push_back(std::move(pct));
    map.shown.push_back(std::move(shown));
  }
  return map;
}

std::string area_mask_name(AreaMask mask) {
  std::string out;
  for (std::size_t i = 0; i < kNumTopAreas; ++i) {
    if ((mask >> i) & 1u) {
      if (!out.empty()) out += '+';
      out += to_string(static_cast<TopArea>(i));
    }
  }
  return out;
}

FractionalCounts fractional_top_area_counts(const ClusterSet& clusters, const Corpus& corpus,
                                            const LabelTaxonomy& taxonomy) {
  FractionalCounts out;
  auto add = [](TopAreaCounts& counts, AreaMask mask) {
    if (mask == 0) {
      ++counts.unlabeled_publications;
      return;
    }
    const int k = std::popcount(mask);
    for (std::size_t i = 0; i < kNumTopAreas; ++i) {
      if ((mask >> i) & 1u) counts.totals[i] += 1.0 / k;
    }
    counts.combinations[mask] += 1.0;
    ++counts.labeled_publications;
  };
  for (NodeIndex v = 0; v < clusters.num_nodes(); ++v) {
    const auto c = clusters.cluster_of(v);
    if (!c) continue;
    AreaMask mask = 0;
    for (MinorCode code : corpus.record(v).minor_codes) {
      mask |= static_cast<AreaMask>(1u << static_cast<unsigned>(taxonomy.at(code).top_area));
    }
    add(out.overall, mask);
    add(out.per_cluster[*c], mask);
  }
  return out;
}

std::vector<NucleatingPair> nucleating_pairs(const CocitationGraph& graph, const ClusterSet& clusters,
                                             const Corpus& corpus) {
  std::map<ClusterId, std::size_t> best;  // cluster -> edge index
  for (std::size_t i = 0; i < graph.edges().size(); ++i) {
    const auto& e = graph.edges()[i];
    const auto ca = clusters.cluster_of(e.a);
    if (!ca || ca != clusters.cluster_of(e.b)) continue;
    // Edges are in (a, b) order, so the first edge seen at a given weight wins ties.
    auto [it, inserted] = best.emplace(*ca, i);
    if (!inserted && e.ncf > graph.edges()[it->second].ncf) it->second = i;
  }
  std::vector<NucleatingPair> out;
  for (const auto& [id, members] : clusters.clusters()) {
    const auto it = best.find(id);
    if (it == best.end()) {
      spdlog::warn("cluster {} has no internal co-citation edge; no nucleating pair", id);
      continue;
    }
    const auto& e = graph.edges()[it->second];
    NucleatingPair pair{id, e.a, e.b, e.ncf, members.size(), {}, 0.0};
    std::map<MinorCode, std::size_t> per_code;
    for (NodeIndex v : members) {
      for (MinorCode code : corpus.record(v).minor_codes) ++per_code[code];
    }
    std::size_t top = 0;
    for (const auto& [code, n] : per_code) top = std::max(top, n);
    if (top > 0) {
      for (const auto& [code, n] : per_code) {
        if (n == top) pair.dominant_codes.push_back(code);
      }
      pair.dominant_share = static_cast<double>(top) / static_cast<double>(members.size());
    }
    out.push_back(std::move(pair));
  }
  return out;
}

std::vector<LabelProfileRow> corpus_label_profile(const Corpus& corpus) {
  std::map<MinorCode, std::size_t> per_code;
  std::size_t seeds = 0;
  for (const auto& r : corpus.records()) {
    if (r.pub_type == PubType::kExternalReference) continue;
    ++seeds;
    for (MinorCode code : r.minor_codes) ++per_code[code];
  }
  std::vector<LabelProfileRow> rows;
  if (seeds == 0) return rows;
  for (const auto& [code, n] : per_code) {
    rows.push_back({code, 100.0 * static_cast<double>(n) / static_cast<double>(seeds)});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const LabelProfileRow& x, const LabelProfileRow& y) { return x.percent > y.percent; });
  return rows;
}

std::vector<MajorAreaTypeCounts> major_area_type_counts(const Corpus& corpus, const LabelTaxonomy& taxonomy) {
  std::map<std::string, MajorAreaTypeCounts> by_area;
  for (const auto& r : corpus.records()) {
    if (r.pub_type == PubType::kExternalReference) continue;
    std::set<std::string> majors;
    for (MinorCode code : r.minor_codes) majors.insert(taxonomy.at(code).major_area);
    for (const auto& major : majors) {
      auto& row = by_area[major];
      row.major_area = major;
      if (r.pub_type == PubType::kArticle) {
        ++row.articles;
      } else {
        ++row.proceedings;
      }
    }
  }
  std::vector<MajorAreaTypeCounts> rows;
  for (auto& [name, row] : by_area) rows.push_back(std::move(row));
  std::stable_sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
    return x.articles + x.proceedings > y.articles + y.proceedings;
  });
  return rows;
}

// ---------------------------------------------------------------------------
// CSV

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string format_label_share_csv(const LabelShareMatrix& matrix, const LabelTaxonomy& taxonomy) {
  std::string out = "minor_subject_area";
  for (ClusterId c : matrix.columns) fmt::format_to(std::back_inserter(out), ",{}", c);
  out += '\n';
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
    out += csv_field(taxonomy.at(matrix.rows[r]).name);
    for (double cell : matrix.cells[r]) {
      out += ',';
      out += format_fixed(cell, 4);
    }
    out += '\n';
  }
  return out;
}

std::string format_cross_map_csv(const CrossMap& map) {
  std::string out = "cluster";
  for (ClusterId c : map.columns) fmt::format_to(std::back_inserter(out), ",{}", c);
  out += '\n';
  for (std::size_t r = 0; r < map.rows.size(); ++r) {
    fmt::format_to(std::back_inserter(out), "{}", map.rows[r]);
    for (std::size_t j = 0; j < map.columns.size(); ++j) {
      out += ',';
      if (map.shown[r][j]) out += format_fixed(map.percent[r][j], 2);
    }
    out += '\n';
  }
  return out;
}

namespace {

void append_area_header(std::string& out) {
  for (std::size_t i = 0; i < kNumTopAreas; ++i) {
    out += ',';
    out += to_string(static_cast<TopArea>(i));
  }
  out += ",labeled,unlabeled\n";
}

void append_area_row(std::string& out, const std::string& label, const TopAreaCounts& counts) {
  out += label;
  for (double t : counts.totals) {
    out += ',';
    out += format_fixed(t, 4);
  }
  fmt::format_to(std::back_inserter(out), ",{},{}\n", counts.labeled_publications, counts.unlabeled_publications);
}

}  // namespace

std::string format_fractional_csv(const FractionalCounts& counts) {
  std::string out = "cluster";
  append_area_header(out);
  append_area_row(out, "all", counts.overall);
  for (const auto& [id, c] : counts.per_cluster) append_area_row(out, std::to_string(id), c);
  return out;
}

std::string format_venn_csv(const FractionalCounts& counts) {
  std::string out = "top_areas,publications\n";
  for (const auto& [mask, mass] : counts.overall.combinations) {
    fmt::format_to(std::back_inserter(out), "{},{}\n", csv_field(area_mask_name(mask)), format_fixed(mass, 4));
  }
  return out;
}

std::string format_nucleating_csv(const std::vector<NucleatingPair>& pairs, const Corpus& corpus) {
  std::string out = "cluster,nucleating_pair,ncf\n";
  for (const auto& p : pairs) {
    fmt::format_to(std::back_inserter(out), "{},{},{}\n", p.cluster,
                   csv_field(corpus.display_id(p.a) + " " + corpus.display_id(p.b)), format_fixed(p.ncf, 4));
  }
  return out;
}

std::string format_dominant_area_csv(const std::vector<NucleatingPair>& pairs, const Corpus& corpus,
                                     const LabelTaxonomy& taxonomy) {
  static constexpr std::array<std::string_view, 6> kRoman{"i", "ii", "iii", "iv", "v", "vi"};
  std::string out = "cluster,nucleating_pair,minor_subject_area\n";
  for (const auto& p : pairs) {
    const auto pct = static_cast<long>(std::lround(100.0 * p.dominant_share));
    std::string areas;
    for (std::size_t k = 0; k < p.dominant_codes.size(); ++k) {
      const std::string& name = taxonomy.at(p.dominant_codes[k]).name;
      if (p.dominant_codes.size() == 1) {
        areas = fmt::format("{} ({})", name, pct);
      } else {
        if (!areas.empty()) areas += ' ';
        const std::string numeral = k < kRoman.size() ? std::string(kRoman[k]) : std::to_string(k + 1);
        areas += fmt::format("({}) {} ({})", numeral, name, pct);
      }
    }
    fmt::format_to(std::back_inserter(out), "{},{},{}\n", p.cluster,
                   csv_field(corpus.display_id(p.a) + " " + corpus.display_id(p.b)), csv_field(areas));
  }
  return out;
}

std::string format_label_profile_csv(const std::vector<LabelProfileRow>& rows, const LabelTaxonomy& taxonomy) {
  std::string out = "minor_subject_area,percent_of_publications\n";
  for (const auto& r : rows) {
    fmt::format_to(std::back_inserter(out), "{},{}\n", csv_field(taxonomy.at(r.code).name), format_fixed(r.percent, 1));
  }
  return out;
}

std::string format_major_area_csv(const std::vector<MajorAreaTypeCounts>& rows) {
  std::string out = "major_subject_area,articles,proceedings\n";
  for (const auto& r : rows) {
    fmt::format_to(std::back_inserter(out), "{},{},{}\n", csv_field(r.major_area), r.articles, r.proceedings);
  }
  return out;
}

}  // namespace cocite
