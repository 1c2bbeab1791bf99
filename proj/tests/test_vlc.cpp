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
#include <map>
#include <random>
#include <set>

#include "cocite/error.hpp"
#include "cocite/vlc.hpp"
#include "doctest.h"
#include "graphs.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace cocite;
using testing_graphs::weighted;
using testing_graphs::WeightedEdge;

namespace {

// Two triangles (internal 0.9 and 0.8) joined by a 0.1 bridge between nodes 2 and 3.
CocitationGraph two_triangles() {
  return weighted(6, {{0, 1, 0.9}, {0, 2, 0.9}, {1, 2, 0.9}, {3, 4, 0.8}, {3, 5, 0.8}, {4, 5, 0.8}, {2, 3, 0.1}});
}

CocitationGraph random_weighted(std::size_t n, double p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.01, 1.0);
  std::vector<WeightedEdge> edges;
  for (auto [u, v] : synthetic::random_graph(n, p, rng)) edges.emplace_back(u, v, w(rng));
  return weighted(n, edges);
}

std::vector<NodeIndex> iota_nodes(std::size_t n) {
  std::vector<NodeIndex> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<NodeIndex>(i);
  return v;
}

// Node -> component position, for partition comparisons.
std::vector<std::size_t> labels_of(const std::vector<Component>& comps, std::size_t n) {
  std::vector<std::size_t> label(n, SIZE_MAX);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    for (NodeIndex v : comps[i].members) label[v] = i;
  }
  return label;
}

}  // namespace

TEST_CASE("quantile thresholds use nearest rank") {
  const std::vector<double> w{0.3, 0.1, 0.2, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  CHECK(quantile_threshold(w, 0.5) == 0.5);
  CHECK(quantile_threshold(w, 1.0) == 1.0);
  CHECK(quantile_threshold(w, 1e-12) == 0.1);
  CHECK(quantile_threshold(w, 0.0) == 0.1);
  CHECK(quantile_threshold(w, 0.9) == 0.9);
  CHECK(quantile_threshold(w, 0.99) == 1.0);
  CHECK_THROWS_AS(quantile_threshold(std::vector<double>{}, 0.5), DomainError);
}

TEST_CASE("default schedule") {
  const auto q = VlcParams{}.quantiles();
  REQUIRE(q.size() == 15);
  CHECK(q.front() == 0.5);
  CHECK(q[4] == doctest::Approx(0.9));
  CHECK(q[5] == doctest::Approx(0.91));
  CHECK(q[13] == doctest::Approx(0.99));
  CHECK(q.back() == doctest::Approx(0.999));
  CHECK(std::is_sorted(q.begin(), q.end()));
  CHECK(std::adjacent_find(q.begin(), q.end()) == q.end());
}

TEST_CASE("parameter invariants") {
  VlcParams p;
  CHECK_NOTHROW(p.validate());
  p.t0 = 0.999;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.final_t = 1.2;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.retain_below = 300;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.min_size = 101;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.schedule = {{0.5, 0.9, 0.0}};
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("components at a threshold") {
  // Triangle 0-1-2 at 0.9, pendant edge 2-3 at 0.1.
  const auto g = weighted(4, {{0, 1, 0.9}, {0, 2, 0.9}, {1, 2, 0.9}, {2, 3, 0.1}});
  const auto nodes = iota_nodes(4);
  SUBCASE("pendant edge removed") {
    const auto comps = components_at(g, 0.5, nodes);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].members == std::vector<NodeIndex>{0, 1, 2});
    CHECK(comps[0].max_weight == 0.9);
    CHECK(comps[1].members == std::vector<NodeIndex>{3});
    CHECK(std::isinf(comps[1].max_weight));
  }
  SUBCASE("threshold zero keeps the connected parts") {
    const auto comps = components_at(g, 0.0, nodes);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].members.size() == 4);
  }
  SUBCASE("edges exactly at the threshold survive") {
    CHECK(components_at(g, 0.1, nodes).size() == 1);
  }
  SUBCASE("restricted node subset") {
    const std::vector<NodeIndex> subset{1, 2, 3};
    const auto comps = components_at(g, 0.0, subset);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].members == subset);
  }
  SUBCASE("ordering by max weight then smallest member") {
    const auto h = weighted(7, {{5, 6, 0.7}, {0, 1, 0.3}, {2, 3, 0.7}});
    const auto comps = components_at(h, 0.0, iota_nodes(7));
    REQUIRE(comps.size() == 4);
    CHECK(comps[0].members == std::vector<NodeIndex>{2, 3});
    CHECK(comps[1].members == std::vector<NodeIndex>{5, 6});
    CHECK(comps[2].members == std::vector<NodeIndex>{0, 1});
    CHECK(comps[3].members == std::vector<NodeIndex>{4});
  }
}

TEST_CASE("components match a label propagation oracle and refine as the threshold rises") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng() % 999;
    const auto g = random_weighted(n, 1.5 / static_cast<double>(n), rng);
    std::vector<std::pair<oracle::Edge, double>> edges;
    for (const auto& e : g.edges()) edges.push_back({{e.a, e.b}, e.ncf});
    std::vector<bool> active(n, true);
    std::vector<std::size_t> previous;
    for (double t : {0.0, 0.25, 0.5, 0.75, 0.95}) {
      const auto comps = components_at(g, t, iota_nodes(n));
      const auto label = oracle::component_labels(n, edges, t, active);
      const auto mine = labels_of(comps, n);
      for (NodeIndex u = 0; u < n; ++u) {
        REQUIRE(mine[u] != SIZE_MAX);
        // Same partition: equal labels in one iff equal in the other (checked against each node's root).
        CHECK((mine[u] == mine[label[u]]));
      }
      std::size_t distinct = std::set<std::uint32_t>(label.begin(), label.end()).size();
      CHECK(comps.size() == distinct);
      if (!previous.empty()) {
        // Nodes sharing a component at the higher threshold shared one before.
        for (const auto& c : comps) {
          for (NodeIndex v : c.members) CHECK(previous[v] == previous[c.members.front()]);
        }
      }
      previous = mine;
    }
  }
}

TEST_CASE("two triangles joined by a weak bridge") {
  const auto result = run_vlc(two_triangles(), VlcParams{});
  REQUIRE(!result.trace.empty());
  CHECK(result.trace[0].threshold_value == 0.8);
  CHECK(result.trace[0].emitted == 2);
  CHECK(result.trace.size() == 1);
  const auto clusters = result.clusters.clusters();
  REQUIRE(clusters.size() == 2);
  CHECK(clusters.at(0) == std::vector<NodeIndex>{0, 1, 2});
  CHECK(clusters.at(1) == std::vector<NodeIndex>{3, 4, 5});
  CHECK(result.retained_nodes == 6);
}

TEST_CASE("a single pair yields no cluster") {
  const auto result = run_vlc(weighted(2, {{0, 1, 1.0}}), VlcParams{});
  CHECK(result.clusters.num_assigned() == 0);
  CHECK(result.dropped_small_nodes == 2);
}

TEST_CASE("an edgeless graph is rejected") {
  CHECK_THROWS_AS(run_vlc(weighted(3, {}), VlcParams{}), DomainError);
}

TEST_CASE("chaining control on a 500-node chain") {
  std::vector<WeightedEdge> chain;
  for (NodeIndex i = 0; i + 1 < 500; ++i) chain.emplace_back(i, i + 1, (i + 1) / 499.0);
  const auto g = weighted(500, chain);
  for (std::size_t mcs : {10, 50, 200}) {
    VlcParams p;
    p.mcs = mcs;
    p.retain_below = std::min<std::size_t>(p.retain_below, mcs);
    const auto result = run_vlc(g, p);
    for (const auto& [id, members] : result.clusters.clusters()) {
      CHECK(members.size() >= 3);
      CHECK(members.size() <= mcs);
    }
    CHECK(result.retained_nodes + result.dropped_small_nodes + result.dropped_oversized_nodes == 500);
    CHECK(result.clusters.num_assigned() == result.retained_nodes);
  }
}

TEST_CASE("node conservation, disjointness and size bounds on random graphs") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 50 + rng() % 600;
    const auto g = random_weighted(n, 4.0 / static_cast<double>(n), rng);
    if (g.edges().empty()) continue;
    VlcParams p;
    p.mcs = 5 + rng() % 60;
    p.retain_below = std::min<std::size_t>(p.retain_below, p.mcs);
    const auto result = run_vlc(g, p);
    CHECK(result.retained_nodes + result.dropped_small_nodes + result.dropped_oversized_nodes == n);
    std::size_t total = 0;
    for (const auto& [id, members] : result.clusters.clusters()) {
      total += members.size();
      CHECK(members.size() >= p.min_size);
      CHECK(members.size() <= p.mcs);
    }
    CHECK(total == result.retained_nodes);
    std::size_t emitted = 0;
    for (const auto& r : result.trace) emitted += r.emitted;
    CHECK(emitted == result.clusters.clusters().size());
    CHECK(run_vlc(g, p).clusters == result.clusters);
  }
}

TEST_CASE("oversized leftovers after the last round are dropped") {
  // A 6-clique with identical weights never splits; mcs=4 forces a drop.
  std::vector<WeightedEdge> clique;
  for (NodeIndex a = 0; a < 6; ++a)
    for (NodeIndex b = a + 1; b < 6; ++b) clique.emplace_back(a, b, 0.5);
  VlcParams p;
  p.mcs = 4;
  p.retain_below = 4;
  const auto result = run_vlc(weighted(6, clique), p);
  CHECK(result.dropped_oversized_nodes == 6);
  CHECK(result.clusters.num_assigned() == 0);
  CHECK(result.trace.size() == p.quantiles().size());
  CHECK(result.trace.back().carried_over_nodes == 6);
}

TEST_CASE("trace lines carry the four round fields") {
  const auto text = format_trace_jsonl(run_vlc(two_triangles(), VlcParams{}));
  const auto j = nlohmann::json::parse(text.substr(0, text.find('\n')));
  CHECK(j.size() == 4);
  CHECK(j.at("quantile") == 0.5);
  CHECK(j.at("threshold_value") == 0.8);
  CHECK(j.at("emitted") == 2);
  CHECK(j.at("carried_over_nodes") == 0);
}
