#include <gtest/gtest.h>

#include <boost/math/distributions/normal.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <random>

#include "netsel/relevance.hpp"

using namespace netsel;

namespace {

/// 50-digit inverse normal CDF from Boost: Phi^{-1}(1 - p).
double oracle_z(double p) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  const boost::math::normal_distribution<Big> standard;
  return static_cast<double>(
      boost::math::quantile(boost::math::complement(standard, Big(p))));
}

Matrix random_matrix(Index n, Index m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix x(n, m);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  return x;
}

}  // namespace

TEST(SkatLinearScore, HandComputedExample) {
  Matrix x(4, 1);
  x << 1, 2, 3, 4;
  Vector y(4);
  y << 1, 1, 2, 2;
  // x~ = (-1.5,-0.5,0.5,1.5), y~ = (-0.5,-0.5,0.5,0.5), x~'y~ = 2
  EXPECT_NEAR(skat_linear_score(x, y)[0], 4.0, 1e-12);
}

TEST(SkatLinearScore, PerfectCorrelationAndConstantColumn) {
  Vector y(5);
  y << 0.3, -1, 2, 5, 1;
  Matrix x(5, 2);
  x.col(0) = y.array() - y.mean();
  x.col(1).setConstant(0.1);
  const auto c = skat_linear_score(x, y, true);
  EXPECT_NEAR(c[0], 1.0, 1e-12);
  EXPECT_EQ(c[1], 0.0);
  EXPECT_EQ(skat_linear_score(x, y, false)[1], 0.0);
}

TEST(SkatLinearScore, ConstantPhenotypeIsError) {
  EXPECT_THROW(skat_linear_score(Matrix::Ones(3, 2), Vector::Ones(3)), Error);
}

TEST(SkatLinearScore, Invariances) {
  std::mt19937_64 rng(21);
  const Matrix x = random_matrix(30, 6, rng);
  Vector y = random_matrix(30, 1, rng).col(0);
  const Vector base = skat_linear_score(x, y).scores();
  const Vector base_n = skat_linear_score(x, y, true).scores();
  EXPECT_TRUE((base.array() >= 0).all());

  // shift y and a column
  Matrix xs = x;
  xs.col(2).array() += 7.5;
  const Vector shifted = skat_linear_score(xs, y.array() + 3.0).scores();
  EXPECT_LE((shifted - base).cwiseAbs().maxCoeff(), 1e-9 * base.maxCoeff());

  // scaling y by s
  const double s = 2.5;
  const Vector scaled = skat_linear_score(x, s * y).scores();
  EXPECT_LE((scaled - s * s * base).cwiseAbs().maxCoeff(), 1e-9 * scaled.maxCoeff());
  const Vector scaled_n = skat_linear_score(x, s * y, true).scores();
  EXPECT_LE((scaled_n - base_n).cwiseAbs().maxCoeff(), 1e-12);

  // joint row permutation
  std::vector<Index> perm(30);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix xp(30, 6);
  Vector yp(30);
  for (Index i = 0; i < 30; ++i) {
    xp.row(i) = x.row(perm[i]);
    yp[i] = y[perm[i]];
  }
  EXPECT_LE((skat_linear_score(xp, yp).scores() - base).cwiseAbs().maxCoeff(),
            1e-9 * base.maxCoeff());
}

TEST(SummarizeGenePvalues, Methods) {
  const std::unordered_map<std::string, double> p{
      {"s1", 0.01}, {"s2", 0.5}, {"s3", 0.2}, {"s4", 0.3}};
  const FeatureGeneMap map({{"s1", "A"}, {"s2", "A"}, {"s1", "B"},
                            {"s3", "B"}, {"s2", "B"}, {"s4", "C"},
                            {"missing", "D"}});
  const auto mn = summarize_gene_pvalues(p, map, SummaryMethod::min);
  const auto mx = summarize_gene_pvalues(p, map, SummaryMethod::max);
  const auto av = summarize_gene_pvalues(p, map, SummaryMethod::mean);
  ASSERT_EQ(mn.gene_ids, (std::vector<std::string>{"A", "B", "C"}));
  EXPECT_EQ(mn.omitted, std::vector<std::string>{"D"});
  EXPECT_DOUBLE_EQ(mn.p_values[0], 0.01);
  EXPECT_DOUBLE_EQ(mx.p_values[0], 0.5);
  EXPECT_NEAR(av.p_values[1], (0.01 + 0.2 + 0.5) / 3.0, 1e-15);
  EXPECT_NEAR(av.p_values[1], 0.2366666666666667, 1e-15);
  for (const auto* s : {&mn, &mx, &av}) EXPECT_DOUBLE_EQ(s->p_values[2], 0.3);
  for (std::size_t g = 0; g < 3; ++g) {
    EXPECT_LE(mn.p_values[g], av.p_values[g]);
    EXPECT_LE(av.p_values[g], mx.p_values[g]);
    EXPECT_DOUBLE_EQ(av.z_scores[g], z_from_p(av.p_values[g]));
  }
}

TEST(SummarizeGenePvalues, RejectsOutOfRange) {
  const FeatureGeneMap map(std::vector<FeatureGeneMap::Pair>{{"s1", "A"}});
  EXPECT_THROW(summarize_gene_pvalues({{"s1", 0.0}}, map, SummaryMethod::min), Error);
  EXPECT_THROW(summarize_gene_pvalues({{"s1", 1.5}}, map, SummaryMethod::min), Error);
}

TEST(ZFromP, KnownValues) {
  EXPECT_EQ(z_from_p(0.5), 0.0);
  EXPECT_NEAR(z_from_p(0.025), 1.959963984540054, 1e-8);
  EXPECT_NEAR(z_from_p(0.158655), 1.0, 1e-4);
  EXPECT_NEAR(z_from_p(0.025), oracle_z(0.025), 1e-12);
}

TEST(ZFromP, Clamping) {
  EXPECT_NO_THROW(z_from_p(1.0));
  EXPECT_NEAR(z_from_p(1.0), oracle_z(1.0 - 1e-16), 1e-8);
  EXPECT_LT(z_from_p(1.0), -8.0);
  EXPECT_DOUBLE_EQ(z_from_p(1e-320), z_from_p(1e-300));
  EXPECT_THROW(z_from_p(0.0), Error);
  EXPECT_THROW(z_from_p(-0.1), Error);
  EXPECT_THROW(z_from_p(1.0000001), Error);
  EXPECT_THROW(z_from_p(std::nan("")), Error);
}

TEST(ZFromP, MonotoneAndAntisymmetric) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 2000; ++i) {
    double a = u(rng), b = u(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    EXPECT_GT(z_from_p(a), z_from_p(b));
    EXPECT_NEAR(z_from_p(a), -z_from_p(1.0 - a), 1e-8);
  }
}

TEST(ZFromP, AgainstHighPrecisionOracleInTails) {
  for (const double p : {1e-12, 3.7e-9, 1e-5, 0.02425, 0.0242, 0.3, 0.97575,
                         0.999, 1.0 - 1e-9, 1.0 - 1e-12}) {
    EXPECT_NEAR(z_from_p(p), oracle_z(p), 1e-8) << p;
  }
}
