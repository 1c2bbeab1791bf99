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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "cocite/cocitation.hpp"
#include "cocite/error.hpp"
#include "cocite/io.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

using namespace cocite;

namespace {

std::vector<NodeIndex> all_nodes(std::size_t n) {
  std::vector<NodeIndex> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::vector<oracle::Edge> to_oracle(const std::vector<DirectedEdge>& edges) {
  return {edges.begin(), edges.end()};
}

}  // namespace

TEST_CASE("citation counts") {
  // A=0, B=1, X=2, Y=3
  const CitationGraph g(4, {{2, 0}, {3, 0}, {3, 1}});
  CHECK(citation_counts(g) == CitationCounts{2, 1, 0, 0});
  CHECK(citation_counts(CitationGraph(3, {})) == CitationCounts{0, 0, 0});
}

TEST_CASE("citation counts match a dense column-sum oracle") {
  std::mt19937_64 rng(3);
  for (std::size_t n : {1, 17, 250, 1000}) {
    const auto raw = synthetic::random_digraph(n, 3.0 / static_cast<double>(n), rng);
    std::vector<DirectedEdge> edges(raw.begin(), raw.end());
    const CitationGraph g(n, edges);
    CHECK(citation_counts(g) == oracle::in_degree_dense(n, to_oracle(edges)));
  }
}

TEST_CASE("percentile filter") {
  SUBCASE("counts 1..10 at q=0.9 keep 9 and 10") {
    CitationCounts c{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    CHECK(percentile_filter(c, 0.9) == std::vector<NodeIndex>{8, 9});
  }
  SUBCASE("zeros are discarded first and q=0 keeps every cited node") {
    CitationCounts c{0, 3, 0, 1, 2};
    CHECK(percentile_filter(c, 0.0) == std::vector<NodeIndex>{1, 3, 4});
  }
  SUBCASE("single nonzero node") {
    CHECK(percentile_filter({0, 0, 4}, 0.9) == std::vector<NodeIndex>{2});
  }
  SUBCASE("ties at the threshold are all kept") {
    CHECK(percentile_filter({5, 5, 5, 1}, 0.9) == std::vector<NodeIndex>{0, 1, 2});
  }
  SUBCASE("all zero") {
    CHECK_THROWS_WITH_AS(percentile_filter({0, 0}, 0.9), doctest::Contains("empty after zero-discard"),
                         DomainError);
    CHECK_THROWS_AS(percentile_filter({}, 0.9), DomainError);
  }
  SUBCASE("q out of range") {
    CHECK_THROWS_AS(percentile_filter({1}, 1.5), DomainError);
    CHECK_THROWS_AS(percentile_filter({1}, -0.1), DomainError);
  }
}

TEST_CASE("percentile filter agrees with an integer nearest-rank oracle and is monotone in q") {
  std::mt19937_64 rng(90);
  std::uniform_int_distribution<std::uint64_t> value(0, 40);
  for (int trial = 0; trial < 200; ++trial) {
    CitationCounts c(1 + rng() % 300);
    for (auto& x : c) x = value(rng);
    std::vector<std::uint64_t> nonzero;
    for (auto x : c) if (x) nonzero.push_back(x);
    if (nonzero.empty()) continue;
    std::vector<NodeIndex> previous;
    bool first = true;
    for (std::uint64_t pct = 0; pct <= 100; pct += 5) {
      const auto kept = percentile_filter(c, static_cast<double>(pct) / 100.0);
      const auto threshold = oracle::nearest_rank_percent(nonzero, pct);
      std::vector<NodeIndex> expect;
      for (NodeIndex i = 0; i < c.size(); ++i) if (c[i] && c[i] >= threshold) expect.push_back(i);
      REQUIRE(kept == expect);
      if (!first) CHECK(std::includes(previous.begin(), previous.end(), kept.begin(), kept.end()));
      previous = kept;
      first = false;
    }
  }
}

TEST_CASE("pair generation") {
  SUBCASE("one citer, three retained references") {
    const CitationGraph g(4, {{0, 1}, {0, 2}, {0, 3}});
    const std::vector<NodeIndex> retained{1, 2, 3};
    CHECK(generate_pairs(g, retained) == std::vector<PairCount>{{1, 2, 1}, {1, 3, 1}, {2, 3, 1}});
  }
  SUBCASE("restricted to the retained set") {
    const CitationGraph g(4, {{0, 1}, {0, 2}, {0, 3}});
    const std::vector<NodeIndex> retained{1, 3};
    CHECK(generate_pairs(g, retained) == std::vector<PairCount>{{1, 3, 1}});
  }
  SUBCASE("two citers of the same pair") {
    const CitationGraph g(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
    const std::vector<NodeIndex> retained{2, 3};
    CHECK(generate_pairs(g, retained) == std::vector<PairCount>{{2, 3, 2}});
  }
  SUBCASE("empty retained set") {
    const CitationGraph g(2, {{0, 1}});
    CHECK(generate_pairs(g, {}).empty());
  }
}

TEST_CASE("pair generation matches brute force, thread count and spilling do not matter") {
  std::mt19937_64 rng(200);
  TempDir spill("spill");
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 20 + rng() % 181;
    const auto raw = synthetic::random_digraph(n, 0.08, rng);
    std::vector<DirectedEdge> edges(raw.begin(), raw.end());
    const CitationGraph g(n, edges);
    std::vector<NodeIndex> retained;
    std::set<std::uint32_t> retained_set;
    for (NodeIndex v = 0; v < n; ++v) {
      if (rng() % 3) {
        retained.push_back(v);
        retained_set.insert(v);
      }
    }
    const auto expect = oracle::cocited_pairs(to_oracle(edges), retained_set);
    const auto pairs = generate_pairs(g, retained);
    REQUIRE(pairs.size() == expect.size());
    auto it = expect.begin();
    for (const auto& p : pairs) {
      CHECK(p.a < p.b);
      CHECK(p.a == it->first.first);
      CHECK(p.b == it->first.second);
      CHECK(p.raw == it->second);
      ++it;
    }
    for (unsigned threads : {2u, 4u, 8u}) {
      PairGenerationOptions opts;
      opts.threads = threads;
      opts.memory_cap_pairs = 64;  // forces many spill runs
      opts.spill_dir = spill.path();
      CHECK(generate_pairs(g, retained, opts) == pairs);
    }
  }
  CHECK(std::filesystem::is_empty(spill.path()));
}

TEST_CASE("shuffling citation input order leaves the co-citation graph unchanged") {
  std::mt19937_64 rng(77);
  const std::size_t n = 150;
  const auto raw = synthetic::random_digraph(n, 0.06, rng);
  std::vector<DirectedEdge> edges(raw.begin(), raw.end());
  auto build = [&](std::vector<DirectedEdge> e) {
    const CitationGraph g(n, std::move(e));
    const auto counts = citation_counts(g);
    const auto retained = percentile_filter(counts, 0.5);
    return normalize_salton(n, retained, generate_pairs(g, retained), counts);
  };
  const auto reference = build(edges);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(edges.begin(), edges.end(), rng);
    CHECK(build(edges) == reference);
  }
}

TEST_CASE("Salton normalization") {
  // raw=3 between nodes with counts 9 and 16.
  CitationCounts counts{9, 16, 5, 5};
  const std::vector<NodeIndex> retained{0, 1, 2, 3};
  const auto g = normalize_salton(4, retained, {{0, 1, 3}, {2, 3, 5}}, counts);
  REQUIRE(g.edges().size() == 2);
  CHECK(g.edges()[0].ncf == 0.25);
  CHECK(g.edges()[1].ncf == 1.0);
  CHECK_THROWS_AS(normalize_salton(4, retained, {{0, 1, 1}}, CitationCounts{0, 1, 1, 1}), DomainError);
}

TEST_CASE("Salton normalization matches a 50-digit decimal oracle") {
  using Big = boost::multiprecision::cpp_dec_float_50;
  std::mt19937_64 rng(12);
  const std::size_t n = 2000;
  CitationCounts counts(n);
  for (auto& c : counts) c = 1 + rng() % 5000;
  std::set<std::pair<NodeIndex, NodeIndex>> seen;
  std::vector<PairCount> pairs;
  while (pairs.size() < 1000) {
    NodeIndex a = rng() % n, b = rng() % n;
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) continue;
    pairs.push_back({a, b, 1 + rng() % std::min(counts[a], counts[b])});
  }
  std::sort(pairs.begin(), pairs.end(), [](auto& x, auto& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  const auto g = normalize_salton(n, all_nodes(n), pairs, counts);
  for (const auto& e : g.edges()) {
    const Big exact = Big(e.raw) / boost::multiprecision::sqrt(Big(counts[e.a]) * Big(counts[e.b]));
    CHECK(std::abs(static_cast<double>(exact - Big(e.ncf))) <= 1e-12);
    CHECK(e.ncf > 0.0);
    CHECK(e.ncf <= 1.0);
  }
}

TEST_CASE("double counting identity and bounds on random corpora") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 50 + rng() % 150;
    const auto raw = synthetic::random_digraph(n, 0.05, rng);
    const CitationGraph g(n, {raw.begin(), raw.end()});
    const auto counts = citation_counts(g);
    if (std::all_of(counts.begin(), counts.end(), [](auto c) { return c == 0; })) continue;
    const auto retained = percentile_filter(counts, 0.3);
    std::vector<bool> keep(n, false);
    for (auto v : retained) keep[v] = true;
    std::uint64_t expected = 0;
    for (NodeIndex c = 0; c < n; ++c) {
      std::uint64_t r = 0;
      for (auto ref : g.references(c)) r += keep[ref];
      expected += r * (r - (r > 0)) / 2;
    }
    const auto pairs = generate_pairs(g, retained);
    std::uint64_t total = 0;
    for (const auto& p : pairs) {
      total += p.raw;
      CHECK(p.raw <= std::min(counts[p.a], counts[p.b]));
    }
    CHECK(total == expected);
    const auto cocited = normalize_salton(n, retained, pairs, counts);
    for (const auto& e : cocited.edges()) {
      CHECK(e.ncf > 0.0);
      CHECK(e.ncf <= 1.0);
    }
  }
}

TEST_CASE("pair dump and retained list round trip") {
  std::vector<PublicationRecord> recs;
  for (const char* id : {"p1", "p2", "p3", "p4"}) recs.push_back({id, std::nullopt, PubType::kArticle, {}});
  const Corpus corpus(recs);
  const CitationCounts counts{0, 2, 2, 2};
  const std::vector<NodeIndex> retained{1, 2, 3};
  const auto g = normalize_salton(4, retained, {{1, 2, 2}, {2, 3, 1}}, counts);
  const auto dump = format_pair_dump(g, corpus);
  CHECK(dump == "a_pub_id\tb_pub_id\traw\tncf\np2\tp3\t2\t1\np3\tp4\t1\t0.5\n");
  CHECK(format_retained(g, corpus, counts) == "pub_id\tcitations\np2\t2\np3\t2\np4\t2\n");
  TempDir dir("dump");
  write_text_file(dir / "pairs.tsv", dump);
  write_text_file(dir / "retained.tsv", format_retained(g, corpus, counts));
  CHECK(read_cocitation(dir / "retained.tsv", dir / "pairs.tsv", corpus) == g);
}
