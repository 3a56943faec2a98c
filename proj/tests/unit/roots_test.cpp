#include "rootflow/roots.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "rootflow/align.hpp"

namespace rootflow {
namespace {

std::vector<int> multiplicities(const RootSet& rs) {
  std::vector<int> m;
  for (const auto& c : rs.clusters) m.push_back(c.multiplicity);
  std::sort(m.begin(), m.end());
  return m;
}

TEST(FindRoots, PerfectSquareIsOneDoubleRoot) {
  const auto rs = find_roots(CPoly({1.0, -2.0, 1.0}));
  ASSERT_EQ(rs.clusters.size(), 1u);
  EXPECT_EQ(rs.clusters[0].multiplicity, 2);
  EXPECT_LT(std::abs(rs.clusters[0].center - 1.0), 1e-7);
}

TEST(FindRoots, Wilkinson5) {
  const CPoly p({-120.0, 274.0, -225.0, 85.0, -15.0, 1.0});
  const auto rs = find_roots(p);
  ASSERT_EQ(rs.clusters.size(), 5u);
  const std::vector<Complex> expected{1.0, 2.0, 3.0, 4.0, 5.0};
  EXPECT_LT(align_bottleneck(rs.expanded(), expected).max_distance, 1e-9);
  EXPECT_LT(align_bottleneck(rs, roots_oracle(p)).max_distance, 1e-9);
}

TEST(FindRoots, SmallSquareRootSplit) {
  const auto rs = find_roots(CPoly({-1e-8, 0.0, 1.0}));
  const auto [r1, r2] = testing::quadratic_roots(1.0, 0.0, -1e-8);
  ASSERT_EQ(rs.clusters.size(), 2u);
  EXPECT_LT(align_bottleneck(rs.expanded(), std::vector<Complex>{r1, r2}).max_distance, 1e-16);
}

TEST(FindRoots, PowersOfZ) {
  for (int n = 1; n <= 8; ++n) {
    std::vector<Complex> c(static_cast<std::size_t>(n) + 1, 0.0);
    c.back() = 1.0;
    const auto rs = find_roots(CPoly(c));
    EXPECT_EQ(rs.total_multiplicity(), n);
    for (Complex z : rs.expanded()) EXPECT_LT(std::abs(z), 1e-12);
  }
}

TEST(FindRoots, ConstantIsRejected) {
  EXPECT_THROW(find_roots(CPoly({3.0})), InvalidArgument);
}

TEST(RootsOracle, CubeRootsOfUnityAndLinear) {
  const auto rs = roots_oracle(CPoly({-1.0, 0.0, 0.0, 1.0}));
  std::vector<Complex> expected;
  for (int k = 0; k < 3; ++k) expected.push_back(std::polar(1.0, 2.0 * M_PI * k / 3.0));
  EXPECT_LT(align_bottleneck(rs.expanded(), expected).max_distance, 1e-12);

  const Complex b0(2.0, -1.0), b1(0.5, 3.0);
  const auto lin = roots_oracle(CPoly({b0, b1}));
  ASSERT_EQ(lin.clusters.size(), 1u);
  EXPECT_LT(std::abs(lin.clusters[0].center - (-b0 / b1)), 1e-15);
  EXPECT_LT(std::abs(find_roots(CPoly({b0, b1})).clusters[0].center - (-b0 / b1)), 1e-15);
}

TEST(ClusterRoots, SymmetricMerge) {
  RootSet rs{{{1.0 + 1e-12, 1, 0.0}, {1.0 - 1e-12, 1, 0.0}}, 0.0};
  const auto merged = cluster_roots(rs, 1e-9);
  ASSERT_EQ(merged.clusters.size(), 1u);
  EXPECT_EQ(merged.clusters[0].multiplicity, 2);
  EXPECT_LT(std::abs(merged.clusters[0].center - 1.0), 1e-15);
}

TEST(ClusterRoots, SeparatedUnchanged) {
  RootSet rs{{{0.0, 1, 0.0}, {1.0, 1, 0.0}}, 0.25};
  const auto out = cluster_roots(rs, 0.5);
  ASSERT_EQ(out.clusters.size(), 2u);
  EXPECT_EQ(out.residual_bound, 0.25);
  EXPECT_THROW(cluster_roots(rs, -1.0), InvalidArgument);
}

TEST(ClusterRoots, DoubleAndSimpleRoot) {
  const CPoly p(testing::expand_roots({1.0, 1.0, 2.0}));
  RootFinderConfig cfg;
  cfg.merge_radius = 0.0;  // keep raw approximations
  const auto raw = find_roots(p, cfg);
  const auto clustered = cluster_roots(raw, 1e-6);
  EXPECT_EQ(multiplicities(clustered), (std::vector<int>{1, 2}));
  EXPECT_EQ(multiplicities(find_roots(p)), (std::vector<int>{1, 2}));
}

TEST(RootSetProperty, InvariantsOnRandomPolynomials) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 150; ++k) {
    const int n = 1 + static_cast<int>(rng() % 10);
    std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
    for (auto& x : c) x = {u(rng), u(rng)};
    if (std::abs(c.back()) < 0.1) c.back() = 1.0;
    const CPoly p(c);
    const auto rs = find_roots(p);
    EXPECT_EQ(rs.total_multiplicity(), n);
    EXPECT_GE(rs.residual_bound, 0.0);
    EXPECT_LT(rs.residual_bound, 1e-10);
    // residual_bound covers |p(c)| relative to the polynomial scale at c.
    for (const auto& cl : rs.clusters) {
      const double scale = abs_scale(c, 1.0) * std::pow(std::max(1.0, std::abs(cl.center)), n);
      EXPECT_LE(std::abs(testing::evaluate(c, cl.center)), rs.residual_bound * scale * 1.0001 + 1e-300);
    }
    EXPECT_DOUBLE_EQ(residual_bound(p, rs), rs.residual_bound);
  }
}

}  // namespace
}  // namespace rootflow
