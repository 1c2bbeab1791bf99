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

// Reconciliation of clusterings against the subject taxonomy and against
// each other.

#ifndef COCITE_RECONCILE_HPP_
#define COCITE_RECONCILE_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cocite/cocitation.hpp"
#include "cocite/corpus.hpp"

namespace cocite {

// Fraction of each cluster's publications carrying each minor code. Labels are
// non-exclusive. Unlabeled publications count in the denominator, except that
// a cluster made up only of unlabeled external references is left out.
struct LabelShareMatrix {
  double threshold = 0.0;
  std::vector<ClusterId> columns;
  std::vector<std::size_t> column_sizes;
  std::vector<MinorCode> rows;  // only codes with some cell >= threshold
  std::vector<std::vector<double>> cells;  // [row][column]
};

// Throws DomainError unless 0 < threshold <= 1.
LabelShareMatrix label_share_matrix(const ClusterSet& clusters, const Corpus& corpus, const LabelTaxonomy& taxonomy,
                                    double threshold);

// Percentage of each cluster of `rows` that falls in each cluster of `columns`,
// measured over nodes assigned in both clusterings.
struct CrossMap {
  double threshold = 0.0;
  std::vector<ClusterId> rows;
  std::vector<std::size_t> row_sizes;
  std::vector<ClusterId> columns;
  std::vector<std::vector<double>> percent;  // unsuppressed values
  std::vector<std::vector<bool>> shown;      // percent >= 100 * threshold

  double row_total(std::size_t row) const;
};

// Throws InputError when no node is assigned in both clusterings.
CrossMap cross_map(const ClusterSet& rows, const ClusterSet& columns, double threshold);

using AreaMask = std::uint8_t;  // bit i set for TopArea i

struct TopAreaCounts {
  std::array<double, kNumTopAreas> totals{};
  // Publications per exact combination of top areas.
  std::map<AreaMask, double> combinations;
  std::size_t labeled_publications = 0;
  std::size_t unlabeled_publications = 0;
};

struct FractionalCounts {
  TopAreaCounts overall;
  std::map<ClusterId, TopAreaCounts> per_cluster;
};

// A publication whose labels span k top areas contributes 1/k to each.
FractionalCounts fractional_top_area_counts(const ClusterSet& clusters, const Corpus& corpus,
                                            const LabelTaxonomy& taxonomy);

std::string area_mask_name(AreaMask mask);

struct NucleatingPair {
  ClusterId cluster = 0;
  NodeIndex a = 0;  // a < b, so pub_id(a) < pub_id(b)
  NodeIndex b = 0;
  double ncf = 0.0;
  std::size_t cluster_size = 0;
  // Minor codes covering the largest share of the cluster; several on a tie.
  std::vector<MinorCode> dominant_codes;
  double dominant_share = 0.0;
};

// Heaviest internal co-citation edge per cluster; clusters with no internal
// edge are skipped with a warning.
std::vector<NucleatingPair> nucleating_pairs(const CocitationGraph& graph, const ClusterSet& clusters,
                                             const Corpus& corpus);

struct LabelProfileRow {
  MinorCode code = 0;
  double percent = 0.0;
};

// Percent of seed publications (articles and proceedings) carrying each minor code,
// largest first.
std::vector<LabelProfileRow> corpus_label_profile(const Corpus& corpus);

struct MajorAreaTypeCounts {
  std::string major_area;
  std::size_t articles = 0;
  std::size_t proceedings = 0;
};

// Seed publications per major area, split by publication type.
std::vector<MajorAreaTypeCounts> major_area_type_counts(const Corpus& corpus, const LabelTaxonomy& taxonomy);

// CSV writers.
std::string csv_field(std::string_view text);
std::string format_label_share_csv(const LabelShareMatrix& matrix, const LabelTaxonomy& taxonomy);
std::string format_cross_map_csv(const CrossMap& map);
std::string format_fractional_csv(const FractionalCounts& counts);
std::string format_venn_csv(const FractionalCounts& counts);
// cluster,nucleating_pair,ncf
std::string format_nucleating_csv(const std::vector<NucleatingPair>& pairs, const Corpus& corpus);
// cluster,nucleating_pair,minor_subject_area
std::string format_dominant_area_csv(const std::vector<NucleatingPair>& pairs, const Corpus& corpus,
                                     const LabelTaxonomy& taxonomy);
std::string format_label_profile_csv(const std::vector<LabelProfileRow>& rows, const LabelTaxonomy& taxonomy);
std::string format_major_area_csv(const std::vector<MajorAreaTypeCounts>& rows);

}  // namespace cocite

#endif  // COCITE_RECONCILE_HPP_
