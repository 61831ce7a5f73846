#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "netsel/netgraph.hpp"
#include "oracles.hpp"

using namespace netsel;
using netsel::testing::dense_laplacian;
using netsel::testing::random_network;

TEST(LaplacianQuadratic, ConstantVectorIsZero) {
  std::mt19937_64 rng(1);
  const auto g = random_network(8, 0.4, rng);
  EXPECT_DOUBLE_EQ(laplacian_quadratic(Vector::Constant(8, 3.7), g), 0.0);
}

TEST(LaplacianQuadratic, TwoNodes) {
  const auto g = WeightedNetwork::anonymous(2, {{0, 1, 1.0}});
  Vector b(2);
  b << 1, 0;
  // L = [[1,-1],[-1,1]], b'Lb = 1
  EXPECT_DOUBLE_EQ(laplacian_quadratic(b, g), 1.0);
  EXPECT_DOUBLE_EQ(laplacian_ordered_pair_sum(b, g), 2.0);
}

TEST(LaplacianQuadratic, Triangle) {
  const auto g =
      WeightedNetwork::anonymous(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  Vector b(3);
  b << 1, 2, 3;
  // L = [[2,-1,-1],[-1,2,-1],[-1,-1,2]]; Lb = (-3, 0, 3); b'Lb = 6
  EXPECT_DOUBLE_EQ(laplacian_quadratic(b, g), 6.0);
}

TEST(LaplacianQuadratic, MatchesDenseMatrixOnRandomGraphs) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 2 + trial % 19;
    const auto g = random_network(n, 0.3, rng);
    Vector b(n);
    for (Index i = 0; i < n; ++i) b[i] = normal(rng);
    const double dense = b.dot(dense_laplacian(g) * b);
    const double sparse = laplacian_quadratic(b, g);
    EXPECT_NEAR(sparse, dense, 1e-12 * std::max(1.0, std::abs(dense)));
    EXPECT_GE(sparse, 0.0);
    const Vector lb = laplacian_apply(g, b);
    EXPECT_LE((lb - dense_laplacian(g) * b).norm(), 1e-12 * (1 + lb.norm()));
  }
}

TEST(LaplacianQuadratic, ZeroIffConstantPerComponent) {
  const auto g = WeightedNetwork::anonymous(5, {{0, 1, 1.0}, {1, 2, 2.0}, {3, 4, 1.0}});
  Vector b(5);
  b << 2, 2, 2, -1, -1;
  EXPECT_DOUBLE_EQ(laplacian_quadratic(b, g), 0.0);
  b[4] = 0;
  EXPECT_GT(laplacian_quadratic(b, g), 0.0);
}

TEST(LaplacianQuadratic, DimensionMismatch) {
  const auto g = WeightedNetwork::anonymous(2, {{0, 1, 1.0}});
  EXPECT_THROW(laplacian_quadratic(Vector::Zero(3), g), Error);
}

TEST(CutValue, Basics) {
  const auto path = WeightedNetwork::anonymous(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  const std::vector<Index> all{0, 1, 2}, middle{1}, none{};
  EXPECT_DOUBLE_EQ(cut_value(all, path), 0.0);
  EXPECT_DOUBLE_EQ(cut_value(none, path), 0.0);
  EXPECT_DOUBLE_EQ(cut_value(middle, path), 2.0);
  const std::vector<Index> bad{3};
  EXPECT_THROW(cut_value(bad, path), Error);
}

TEST(CutValue, SubmodularAndSymmetricExhaustive) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = random_network(6, 0.5, rng);
    std::vector<double> phi(64);
    for (std::uint64_t s = 0; s < 64; ++s) {
      phi[s] = cut_value(netsel::testing::mask_to_set(s, 6), g);
    }
    for (std::uint64_t s = 0; s < 64; ++s) {
      EXPECT_NEAR(phi[s], phi[63 ^ s], 1e-12);
      for (std::uint64_t t = 0; t < 64; ++t) {
        EXPECT_GE(phi[s] + phi[t] + 1e-12, phi[s | t] + phi[s & t]);
      }
    }
  }
}

TEST(ConnectedComponents, Cases) {
  const auto edgeless = WeightedNetwork::anonymous(3, {});
  EXPECT_EQ(connected_components(edgeless),
            (std::vector<std::vector<Index>>{{0}, {1}, {2}}));
  const auto path = WeightedNetwork::anonymous(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
  EXPECT_EQ(connected_components(path).size(), 1u);
  const auto two = WeightedNetwork::anonymous(
      6, {{0, 3, 1}, {3, 5, 1}, {0, 5, 1}, {1, 2, 1}, {2, 4, 1}, {1, 4, 1}});
  EXPECT_EQ(connected_components(two),
            (std::vector<std::vector<Index>>{{0, 3, 5}, {1, 2, 4}}));
}

namespace {

std::set<std::pair<Index, Index>> edge_set(const WeightedNetwork& g) {
  std::set<std::pair<Index, Index>> s;
  for (const auto& e : g.edges()) s.emplace(e.u, e.v);
  return s;
}

bool has_edge(const WeightedNetwork& g, Index a, Index b) {
  return edge_set(g).count(std::minmax(a, b)) > 0;
}

}  // namespace

TEST(BuildFeatureNetwork, SameGeneClique) {
  const GenomicPositions pos{{"f1", "1", 100}, {"f2", "1", 50'000}, {"f3", "1", 200}};
  const GeneIntervals genes{{"A", "1", 150, 300}};
  const auto none = WeightedNetwork({"A"}, {});
  const auto seq = build_feature_network(pos, genes, none, 0, NetworkMode::sequence);
  // sorted by position: f1(100), f3(200), f2(50000)
  EXPECT_EQ(edge_set(seq), (std::set<std::pair<Index, Index>>{{0, 2}, {1, 2}}));
  const auto gene = build_feature_network(pos, genes, none, 100, NetworkMode::gene);
  // f1 at 100 and f3 at 200 both map to A with window 100
  EXPECT_TRUE(has_edge(gene, 0, 2));
  EXPECT_EQ(gene.edges().size(), 2u);  // clique edge coincides with sequence edge
}

TEST(BuildFeatureNetwork, InteractingGenes) {
  const GenomicPositions pos{{"f1", "1", 1000}, {"f2", "2", 1000}, {"f3", "3", 5}};
  const GeneIntervals genes{{"A", "1", 900, 1100}, {"B", "2", 900, 1100}};
  const auto gene_net = WeightedNetwork({"A", "B"}, {{0, 1, 5.0}});
  const auto gene = build_feature_network(pos, genes, gene_net, 0, NetworkMode::gene);
  EXPECT_FALSE(has_edge(gene, 0, 1));
  const auto inter =
      build_feature_network(pos, genes, gene_net, 0, NetworkMode::interaction);
  ASSERT_TRUE(has_edge(inter, 0, 1));
  for (const auto& e : inter.edges()) EXPECT_EQ(e.w, 1.0);
}

TEST(BuildFeatureNetwork, WindowBoundaryInclusive) {
  const GeneIntervals genes{{"A", "1", 1000, 2000}};
  const GenomicPositions at{{"x", "1", 2000 + 10'000}, {"y", "1", 1500}};
  const GenomicPositions past{{"x", "1", 2000 + 10'001}, {"y", "1", 1500}};
  EXPECT_EQ(map_features_to_genes(at, genes, 10'000)[0],
            (std::vector<Index>{0, 1}));
  EXPECT_EQ(map_features_to_genes(past, genes, 10'000)[0],
            (std::vector<Index>{1}));
  const GeneIntervals far{{"A", "1", 50'000, 60'000}};
  const GenomicPositions before{{"x", "1", 50'000 - 10'000}, {"z", "1", 50'000 - 10'001}};
  EXPECT_EQ(map_features_to_genes(before, far, 10'000)[0],
            (std::vector<Index>{0}));
}

TEST(BuildFeatureNetwork, ModesNested) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long long> where(0, 200'000);
  GenomicPositions pos;
  for (int i = 0; i < 60; ++i) {
    pos.push_back({"f" + std::to_string(i), i % 2 ? "1" : "2", where(rng)});
  }
  GeneIntervals genes;
  for (int k = 0; k < 10; ++k) {
    const long long s = where(rng);
    genes.push_back({"g" + std::to_string(k), k % 2 ? "1" : "2", s, s + 5000});
  }
  std::vector<std::string> gids;
  for (const auto& g : genes) gids.push_back(g.gene_id);
  const auto gene_net = WeightedNetwork(gids, {{0, 1, 1}, {2, 5, 1}, {3, 8, 2}});
  const auto a = edge_set(build_feature_network(pos, genes, gene_net, 2000, NetworkMode::sequence));
  const auto b = edge_set(build_feature_network(pos, genes, gene_net, 2000, NetworkMode::gene));
  const auto c = edge_set(build_feature_network(pos, genes, gene_net, 2000, NetworkMode::interaction));
  EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
  EXPECT_TRUE(std::includes(c.begin(), c.end(), b.begin(), b.end()));
  EXPECT_GT(c.size(), a.size());
}

TEST(BuildFeatureNetwork, UnknownChromosomeMapsNowhere) {
  const GenomicPositions pos{{"f1", "X", 10}, {"f2", "1", 10}};
  const GeneIntervals genes{{"A", "1", 0, 100}};
  EXPECT_EQ(map_features_to_genes(pos, genes, 0)[0], (std::vector<Index>{1}));
}

TEST(BuildFeatureNetwork, GeneNetworkNodeWithoutIntervalIsError) {
  const GenomicPositions pos{{"f1", "1", 10}};
  const GeneIntervals genes{{"A", "1", 0, 100}};
  const auto gene_net = WeightedNetwork({"A", "B"}, {{0, 1, 1}});
  EXPECT_THROW(build_feature_network(pos, genes, gene_net, 0, NetworkMode::interaction),
               Error);
}
