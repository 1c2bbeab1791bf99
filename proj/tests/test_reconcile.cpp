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

#include <numeric>
#include <random>
#include <sstream>

#include "cocite/error.hpp"
#include "cocite/reconcile.hpp"
#include "doctest.h"
#include "graphs.hpp"

using namespace cocite;
using testing_graphs::weighted;

namespace {

LabelTaxonomy taxonomy() {
  LabelTaxonomy t;
  t.add({1303, "Biochemistry", "Biochemistry, Genetics and Molecular Biology", TopArea::kLifeSciences});
  t.add({1702, "Artificial Intelligence", "Computer Science", TopArea::kPhysicalSciences});
  t.add({1712, "Software", "Computer Science", TopArea::kPhysicalSciences});
  t.add({2718, "Health Informatics", "Medicine", TopArea::kHealthSciences});
  t.add({3309, "Library and Information Sciences", "Social Sciences", TopArea::kSocialSciences});
  return t;
}

struct Pub {
  PubType type;
  std::vector<MinorCode> codes;
  std::string doi;
};

// Publications p00, p01, ... in order, so index i is pub "p%02d".
Corpus corpus_of(const std::vector<Pub>& pubs) {
  std::vector<PublicationRecord> recs;
  for (std::size_t i = 0; i < pubs.size(); ++i) {
    char id[8];
    std::snprintf(id, sizeof id, "p%02zu", i);
    std::optional<std::string> doi;
    if (!pubs[i].doi.empty()) doi = pubs[i].doi;
    recs.push_back({id, doi, pubs[i].type, pubs[i].codes});
  }
  return Corpus(recs);
}

Corpus plain_corpus(std::size_t n) { return corpus_of(std::vector<Pub>(n, Pub{PubType::kArticle, {}, ""})); }

}  // namespace

TEST_CASE("label shares against a threshold") {
  // Ten publications: two labeled Software, one labeled Biochemistry.
  std::vector<Pub> pubs(10, Pub{PubType::kArticle, {}, ""});
  pubs[0].codes = {1712};
  pubs[1].codes = {1712};
  pubs[2].codes = {1303};
  const auto corpus = corpus_of(pubs);
  const ClusterSet cs(std::vector<ClusterId>(10, 3), ClusterMethod::kCocitation);
  const auto at15 = label_share_matrix(cs, corpus, taxonomy(), 0.15);
  REQUIRE(at15.rows == std::vector<MinorCode>{1712});
  CHECK(at15.cells[0][0] == 0.2);
  const auto at10 = label_share_matrix(cs, corpus, taxonomy(), 0.10);
  CHECK(at10.rows == std::vector<MinorCode>{1303, 1712});
  CHECK(at10.cells[0][0] == 0.1);
  CHECK(format_label_share_csv(at10, taxonomy()) == "minor_subject_area,3\nBiochemistry,0.1000\nSoftware,0.2000\n");
}

TEST_CASE("labels count non-exclusively") {
  const auto corpus = corpus_of({{PubType::kArticle, {1303, 1702, 1712}, ""}});
  const ClusterSet cs(std::vector<ClusterId>{0}, ClusterMethod::kCocitation);
  const auto m = label_share_matrix(cs, corpus, taxonomy(), 0.15);
  REQUIRE(m.rows.size() == 3);
  for (const auto& row : m.cells) CHECK(row[0] == 1.0);
}

TEST_CASE("unlabeled references stay in the denominator unless they are the whole cluster") {
  const auto corpus = corpus_of({{PubType::kArticle, {1712}, ""},
                                 {PubType::kExternalReference, {}, ""},
                                 {PubType::kExternalReference, {}, ""},
                                 {PubType::kExternalReference, {}, ""}});
  const ClusterSet cs(std::vector<ClusterId>{0, 0, 1, 1}, ClusterMethod::kCocitation);
  const auto m = label_share_matrix(cs, corpus, taxonomy(), 0.15);
  CHECK(m.columns == std::vector<ClusterId>{0});
  CHECK(m.cells[0][0] == 0.5);
}

TEST_CASE("threshold validation and row monotonicity") {
  const auto corpus = plain_corpus(2);
  const ClusterSet cs(std::vector<ClusterId>{0, 0}, ClusterMethod::kCocitation);
  CHECK_THROWS_AS(label_share_matrix(cs, corpus, taxonomy(), 0.0), DomainError);
  CHECK_THROWS_AS(label_share_matrix(cs, corpus, taxonomy(), 1.5), DomainError);

  std::mt19937_64 rng(4);
  const std::vector<MinorCode> codes{1303, 1702, 1712, 2718, 3309};
  std::vector<Pub> pubs;
  std::vector<ClusterId> assign;
  for (int i = 0; i < 90; ++i) {
    Pub p{PubType::kArticle, {}, ""};
    for (auto c : codes) {
      if (rng() % 6 == 0) p.codes.push_back(c);
    }
    pubs.push_back(p);
    assign.push_back(static_cast<ClusterId>(rng() % 7));
  }
  const auto big = corpus_of(pubs);
  const ClusterSet random(assign, ClusterMethod::kCocitation);
  const auto hi = label_share_matrix(random, big, taxonomy(), 0.15);
  const auto lo = label_share_matrix(random, big, taxonomy(), 0.10);
  CHECK(std::includes(lo.rows.begin(), lo.rows.end(), hi.rows.begin(), hi.rows.end()));
  for (const auto& row : lo.cells) {
    for (double cell : row) {
      CHECK(cell >= 0.0);
      CHECK(cell <= 1.0);
    }
  }
}

TEST_CASE("cross map percentages") {
  SUBCASE("nine of ten nodes in one direct cluster") {
    std::vector<ClusterId> cocit(10, 5);
    std::vector<ClusterId> direct(10, 8);
    direct[9] = 2;
    const auto map = cross_map(ClusterSet(cocit, ClusterMethod::kCocitation),
                               ClusterSet(direct, ClusterMethod::kDirect), 0.15);
    CHECK(map.columns == std::vector<ClusterId>{2, 8});
    CHECK(map.percent[0][1] == 90.0);
    CHECK(map.shown[0][1]);
    CHECK_FALSE(map.shown[0][0]);
    CHECK(map.row_total(0) == doctest::Approx(100.0));
    CHECK(format_cross_map_csv(map) == "cluster,2,8\n5,,90.00\n");
  }
  SUBCASE("identical clusterings give a 100 percent diagonal") {
    const std::vector<ClusterId> a{0, 0, 1, 1, 2, 2, 2};
    const auto map = cross_map(ClusterSet(a, ClusterMethod::kCocitation), ClusterSet(a, ClusterMethod::kDirect), 0.15);
    for (std::size_t i = 0; i < map.rows.size(); ++i) {
      for (std::size_t j = 0; j < map.columns.size(); ++j) CHECK(map.percent[i][j] == (i == j ? 100.0 : 0.0));
    }
  }
  SUBCASE("unassigned nodes are left out of both sides") {
    ClusterSet a(4, ClusterMethod::kCocitation);
    a.assign(0, 1);
    a.assign(1, 1);
    a.assign(2, 1);
    const ClusterSet b(std::vector<ClusterId>{0, 0, 3, 3}, ClusterMethod::kDirect);
    const auto map = cross_map(a, b, 0.15);
    CHECK(map.row_sizes == std::vector<std::size_t>{3});
    CHECK(map.percent[0][0] == doctest::Approx(200.0 / 3.0));
  }
  SUBCASE("no shared node") {
    ClusterSet a(2, ClusterMethod::kCocitation);
    ClusterSet b(2, ClusterMethod::kDirect);
    a.assign(0, 0);
    b.assign(1, 0);
    CHECK_THROWS_AS(cross_map(a, b, 0.15), InputError);
  }
}

TEST_CASE("fractional top-area counts") {
  const auto corpus = corpus_of({{PubType::kArticle, {1303, 1712}, ""},
                                 {PubType::kArticle, {1702}, ""},
                                 {PubType::kArticle, {1702, 1712}, ""},
                                 {PubType::kExternalReference, {}, ""}});
  const ClusterSet cs(std::vector<ClusterId>{0, 0, 1, 1}, ClusterMethod::kCocitation);
  const auto counts = fractional_top_area_counts(cs, corpus, taxonomy());
  const auto& all = counts.overall;
  CHECK(all.totals[0] == 2.5);
  CHECK(all.totals[1] == 0.5);
  CHECK(all.labeled_publications == 3);
  CHECK(all.unlabeled_publications == 1);
  CHECK(all.combinations.at(0b11) == 1.0);
  CHECK(all.combinations.at(0b01) == 2.0);
  CHECK(counts.per_cluster.at(1).totals[0] == 1.0);
  CHECK(area_mask_name(0b11) == "Physical Sciences+Life Sciences");
  CHECK(format_venn_csv(counts) == "top_areas,publications\nPhysical Sciences,2.0000\nPhysical Sciences+Life Sciences,1.0000\n");
  const auto csv = format_fractional_csv(counts);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "cluster,Physical Sciences,Life Sciences,Health Sciences,Social Sciences,labeled,unlabeled");
}

TEST_CASE("fractional counting conserves mass") {
  std::mt19937_64 rng(21);
  const std::vector<MinorCode> codes{1303, 1702, 1712, 2718, 3309};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Pub> pubs;
    std::vector<ClusterId> assign;
    std::size_t labeled = 0;
    for (int i = 0; i < 80; ++i) {
      Pub p{PubType::kArticle, {}, ""};
      for (auto c : codes) {
        if (rng() % 4 == 0) p.codes.push_back(c);
      }
      labeled += !p.codes.empty();
      pubs.push_back(p);
      assign.push_back(static_cast<ClusterId>(rng() % 5));
    }
    const auto counts = fractional_top_area_counts(ClusterSet(assign, ClusterMethod::kCocitation), corpus_of(pubs),
                                                   taxonomy());
    const double total = std::accumulate(counts.overall.totals.begin(), counts.overall.totals.end(), 0.0);
    CHECK(total == doctest::Approx(static_cast<double>(labeled)).epsilon(1e-12));
    double venn = 0.0;
    for (const auto& [mask, mass] : counts.overall.combinations) venn += mass;
    CHECK(venn == static_cast<double>(labeled));
    CHECK(counts.overall.labeled_publications == labeled);
  }
}

TEST_CASE("nucleating pairs") {
  // Cluster 0: {0,1,2} with edges 0.41 and 0.63; cluster 1: {3,4} with a single edge;
  // cluster 2: {5} with none.
  const auto g = weighted(6, {{0, 1, 0.41}, {1, 2, 0.63}, {3, 4, 0.3}, {2, 3, 0.9}});
  const auto corpus = corpus_of({{PubType::kArticle, {1712}, "10.1/x"},
                                 {PubType::kArticle, {1712, 1702}, ""},
                                 {PubType::kArticle, {1702}, "10.1/z"},
                                 {PubType::kArticle, {1303}, ""},
                                 {PubType::kArticle, {}, ""},
                                 {PubType::kArticle, {}, ""}});
  const ClusterSet cs(std::vector<ClusterId>{0, 0, 0, 1, 1, 2}, ClusterMethod::kCocitation);
  const auto pairs = nucleating_pairs(g, cs, corpus);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].a == 1);
  CHECK(pairs[0].b == 2);
  CHECK(pairs[0].ncf == 0.63);
  CHECK(pairs[0].dominant_codes == std::vector<MinorCode>{1702, 1712});
  CHECK(pairs[1].a == 3);
  CHECK(pairs[1].b == 4);
  CHECK(pairs[1].dominant_share == 0.5);
  CHECK(format_nucleating_csv(pairs, corpus) == "cluster,nucleating_pair,ncf\n0,p01 10.1/z,0.6300\n1,p03 p04,0.3000\n");
  CHECK(format_dominant_area_csv(pairs, corpus, taxonomy()) ==
        "cluster,nucleating_pair,minor_subject_area\n"
        "0,p01 10.1/z,(i) Artificial Intelligence (67) (ii) Software (67)\n"
        "1,p03 p04,Biochemistry (50)\n");
}

TEST_CASE("nucleating pair ties go to the lexicographically first pair") {
  const auto g = weighted(4, {{0, 3, 0.5}, {1, 2, 0.5}, {0, 1, 0.5}});
  const ClusterSet cs(std::vector<ClusterId>{0, 0, 0, 0}, ClusterMethod::kCocitation);
  const auto pairs = nucleating_pairs(g, cs, plain_corpus(4));
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].a == 0);
  CHECK(pairs[0].b == 1);
}

TEST_CASE("corpus label profile and major area counts") {
  const auto corpus = corpus_of({{PubType::kArticle, {1712}, ""},
                                 {PubType::kProceedings, {1712, 1702}, ""},
                                 {PubType::kProceedings, {1303}, ""},
                                 {PubType::kExternalReference, {1303}, ""}});
  const auto profile = corpus_label_profile(corpus);
  REQUIRE(profile.size() == 3);
  CHECK(profile[0].code == 1712);
  CHECK(profile[0].percent == doctest::Approx(200.0 / 3.0));
  const auto majors = major_area_type_counts(corpus, taxonomy());
  const auto csv = format_major_area_csv(majors);
  CHECK(csv.find("Computer Science,1,1\n") != std::string::npos);
  CHECK(csv.find("\"Biochemistry, Genetics and Molecular Biology\",0,1\n") != std::string::npos);
}

TEST_CASE("csv quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}
