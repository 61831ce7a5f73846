#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "netsel/modsearch.hpp"
#include "netsel/netgraph.hpp"

using namespace netsel;

namespace {

bool induced_connected(const WeightedNetwork& g, const std::vector<Index>& nodes) {
  const std::set<Index> in(nodes.begin(), nodes.end());
  std::set<Index> seen{nodes.front()};
  std::vector<Index> stack{nodes.front()};
  while (!stack.empty()) {
    const Index u = stack.back();
    stack.pop_back();
    for (const auto& nb : g.neighbors(u)) {
      if (in.count(nb.node) && seen.insert(nb.node).second) stack.push_back(nb.node);
    }
  }
  return seen.size() == in.size();
}

/// Star with center 0 and `leaves` leaves.
WeightedNetwork star(Index leaves) {
  std::vector<Edge> edges;
  for (Index k = 1; k <= leaves; ++k) edges.push_back({0, k, 1.0});
  return WeightedNetwork::anonymous(leaves + 1, edges);
}

}  // namespace

TEST(ModuleScore, Examples) {
  const std::vector<double> one{2.3}, four{1, 1, 1, 1}, two{3, -1};
  EXPECT_DOUBLE_EQ(module_score(one), 2.3);
  EXPECT_DOUBLE_EQ(module_score(four), 2.0);
  EXPECT_NEAR(module_score(two), 1.4142135623730951, 1e-15);
  EXPECT_THROW(module_score(std::span<const double>{}), Error);
}

TEST(GreedyModuleSearch, StarCenterStaysAlone) {
  const auto g = star(5);
  Vector z = Vector::Constant(6, 0.1);
  z[0] = 3.0;
  const auto modules = greedy_module_search(g, z, {0.1, 2, 1});
  ASSERT_FALSE(modules.empty());
  // best growth 3.1 / sqrt(2) = 2.19 does not beat 3 * 1.1
  EXPECT_EQ(modules.front().genes, std::vector<Index>{0});
  EXPECT_DOUBLE_EQ(modules.front().score, 3.0);
}

TEST(GreedyModuleSearch, HugeGrowthFactorGivesSingletons) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  std::vector<Edge> edges;
  for (Index i = 0; i + 1 < 12; ++i) edges.push_back({i, i + 1, 1.0});
  const auto g = WeightedNetwork::anonymous(12, edges);
  Vector z(12);
  for (Index i = 0; i < 12; ++i) z[i] = std::abs(normal(rng)) + 0.5;
  const auto modules = greedy_module_search(g, z, {1e9, 2, 1});
  EXPECT_EQ(modules.size(), 12u);
  for (const auto& m : modules) EXPECT_EQ(m.genes.size(), 1u);
}

TEST(GreedyModuleSearch, NonPositiveScoresNeedStrictImprovement) {
  // seed at -1 with neighbor at -0.2: (-1.2)/sqrt(2) = -0.85 > -1 accepted
  const auto g = WeightedNetwork::anonymous(2, {{0, 1, 1.0}});
  Vector z(2);
  z << -1.0, -0.2;
  const auto modules = greedy_module_search(g, z, {0.1, 2, 1});
  std::set<std::vector<Index>> sets;
  for (const auto& m : modules) sets.insert(m.genes);
  EXPECT_TRUE(sets.count({0, 1}));
  EXPECT_TRUE(sets.count({1}));  // -0.2 alone beats -0.85
}

TEST(GreedyModuleSearch, InvariantsOnRandomGraphs) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 25;
    std::bernoulli_distribution coin(0.12);
    std::vector<Edge> edges;
    for (Index u = 0; u < n; ++u) {
      for (Index v = u + 1; v < n; ++v) {
        if (coin(rng)) edges.push_back({u, v, 1.0});
      }
    }
    const auto g = WeightedNetwork::anonymous(n, edges);
    Vector z(n);
    for (Index i = 0; i < n; ++i) z[i] = normal(rng) + 0.5;
    const auto modules = greedy_module_search(g, z, {0.05, 2, 1});
    std::set<std::vector<Index>> seen;
    for (std::size_t k = 0; k < modules.size(); ++k) {
      const auto& m = modules[k];
      EXPECT_TRUE(induced_connected(g, m.genes));
      EXPECT_TRUE(seen.insert(m.genes).second);
      std::vector<double> zs;
      for (const Index p : m.genes) zs.push_back(z[p]);
      EXPECT_DOUBLE_EQ(m.score, module_score(zs));
      if (k > 0) {
        EXPECT_GE(modules[k - 1].score, m.score);
      }
    }
    // schedule independence
    const auto again = greedy_module_search(g, z, {0.05, 2, 4});
    ASSERT_EQ(again.size(), modules.size());
    for (std::size_t k = 0; k < modules.size(); ++k) {
      EXPECT_EQ(again[k].genes, modules[k].genes);
    }
  }
}

TEST(GreedyModuleSearch, MonotoneGrowthTrajectory) {
  // path 0-1-2-3 with rising scores: each accepted step beats (1+r)x
  std::vector<Edge> edges{{0, 1, 1}, {1, 2, 1}, {2, 3, 1}};
  const auto g = WeightedNetwork::anonymous(4, edges);
  Vector z(4);
  z << 1.0, 2.0, 3.0, 0.0;
  const auto modules = greedy_module_search(g, z, {0.1, 3, 1});
  // from seed 0: {0}=1 -> {0,1}=2.12 -> {0,1,2}=3.46; adding 3 gives 3.0
  std::set<std::vector<Index>> sets;
  for (const auto& m : modules) sets.insert(m.genes);
  EXPECT_TRUE(sets.count({0, 1, 2}));
  EXPECT_FALSE(sets.count({0, 1, 2, 3}));
}

TEST(GreedyModuleSearch, MaxDepthLimitsReach) {
  // path of 5 equal positive z: from an end, growth is capped at 1 hop
  std::vector<Edge> edges{{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}};
  const auto g = WeightedNetwork::anonymous(5, edges);
  const Vector z = Vector::Constant(5, 2.0);
  const auto modules = greedy_module_search(g, z, {0.0, 1, 1});
  for (const auto& m : modules) EXPECT_LE(m.genes.size(), 3u);
}

TEST(GreedyModuleSearch, PlantedCliqueOnSmallInstance) {
  // 4-clique with z=4 attached to a 10-node path with z=0
  std::vector<Edge> edges;
  for (Index a = 0; a < 4; ++a) {
    for (Index b = a + 1; b < 4; ++b) edges.push_back({a, b, 1.0});
  }
  for (Index i = 4; i + 1 < 14; ++i) edges.push_back({i, i + 1, 1.0});
  edges.push_back({3, 4, 1.0});
  const auto g = WeightedNetwork::anonymous(14, edges);
  Vector z = Vector::Zero(14);
  z.head(4).setConstant(4.0);
  const auto modules = greedy_module_search(g, z, {0.1, 2, 1});
  EXPECT_EQ(modules.front().genes, (std::vector<Index>{0, 1, 2, 3}));
  EXPECT_DOUBLE_EQ(modules.front().score, 8.0);
}

TEST(GreedyModuleSearch, MissingScoreIsError) {
  const auto g = WeightedNetwork({"A", "B"}, {{0, 1, 1.0}});
  GeneScores s;
  s.gene_ids = {"A"};
  s.p_values = {0.1};
  s.z_scores = {1.28};
  EXPECT_THROW(greedy_module_search(g, s), Error);
}
