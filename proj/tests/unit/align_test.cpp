#include "rootflow/align.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

namespace rootflow {
namespace {

CPoly power_minus(int n, double delta) {
  std::vector<Complex> c(static_cast<std::size_t>(n) + 1, 0.0);
  c.front() = -delta;
  c.back() = 1.0;
  return CPoly(c);
}

CPoly power(int n) { return power_minus(n, 0.0); }

CPoly perturb(const CPoly& f, std::mt19937_64& rng, double size) {
  const auto h = testing::unit_direction(rng, f.coeffs().size());
  std::vector<Complex> c(f.coeffs().begin(), f.coeffs().end());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += size * h[i];
  return CPoly(c);
}

TEST(AlignDeflation, LinearBaseCase) {
  const auto a = align_by_deflation(CPoly({-1.0, 1.0}), CPoly({-1.001, 1.0}));
  ASSERT_EQ(a.pairs.size(), 1u);
  EXPECT_EQ(a.pairs[0], (std::pair<std::size_t, std::size_t>{0, 0}));
  EXPECT_NEAR(a.max_distance, 1e-3, 1e-15);
  EXPECT_EQ(a.method, AlignMethod::deflation);
}

TEST(AlignDeflation, SimpleRootsMoveByHalfDelta) {
  const double delta = 1e-8;
  const auto a = align_by_deflation(CPoly({-1.0, 0.0, 1.0}), CPoly({-1.0 - delta, 0.0, 1.0}));
  const double expected = std::sqrt(1.0 + delta) - 1.0;
  ASSERT_EQ(a.distances.size(), 2u);
  for (double d : a.distances) EXPECT_NEAR(d, expected, 1e-15);
}

TEST(AlignDeflation, DoubleRootSplitsBySquareRoot) {
  const auto a = align_by_deflation(power(2), power_minus(2, 1e-8));
  EXPECT_NEAR(a.max_distance, 1e-4, 1e-14);
  EXPECT_EQ(a.pairs.size(), 2u);
}

TEST(AlignDeflation, DegreeMismatchIsAnError) {
  try {
    align_by_deflation(CPoly({-1.0, 1.0}), CPoly({-1.0, 0.0, 1.0}));
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("degree mismatch"), std::string::npos);
  }
}

TEST(AlignBottleneck, Examples) {
  const std::vector<Complex> f{0.0, 1.0}, g{0.1, 0.9};
  const auto a = align_bottleneck(f, g);
  EXPECT_EQ(a.as_permutation(), (std::vector<std::size_t>{0, 1}));
  EXPECT_NEAR(a.max_distance, 0.1, 1e-15);

  const std::vector<Complex> same{Complex(1, 2), Complex(-3, 0.5), 0.0};
  const auto id = align_bottleneck(same, same);
  EXPECT_EQ(id.as_permutation(), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(alignment_distance(id), 0.0);

  const std::vector<Complex> zz{0.0, 0.0}, pm{-1e-4, 1e-4};
  EXPECT_EQ(align_bottleneck(zz, pm).max_distance, 1e-4);

  const std::vector<Complex> one{0.0};
  EXPECT_THROW(align_bottleneck(one, pm), InvalidArgument);
}

TEST(AlignProperty, PowerLaw) {
  const double delta = 1e-8;
  for (int n = 2; n <= 5; ++n) {
    const double expected = std::pow(delta, 1.0 / n);
    const auto a = align_by_deflation(power(n), power_minus(n, delta));
    EXPECT_NEAR(a.max_distance / expected, 1.0, 1e-10) << "n = " << n;
    const auto b = align_bottleneck(find_roots(power(n)), find_roots(power_minus(n, delta)));
    EXPECT_NEAR(b.max_distance / expected, 1.0, 1e-10) << "n = " << n;
  }
}

TEST(AlignProperty, DistanceMonotoneInDelta) {
  double previous = 0.0;
  for (double delta = 1e-14; delta < 1.0; delta *= 3.0) {
    const double d = align_by_deflation(power(2), power_minus(2, delta)).max_distance;
    EXPECT_GE(d, previous);
    previous = d;
  }
}

TEST(AlignProperty, BottleneckMatchesExhaustiveSearch) {
  std::mt19937_64 rng(404);
  for (int k = 0; k < 60; ++k) {
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<Complex> a, b;
    for (int i = 0; i < n; ++i) {
      a.push_back(testing::random_in_disk(rng, 1.0));
      b.push_back(testing::random_in_disk(rng, 1.0));
    }
    const auto al = align_bottleneck(a, b);
    EXPECT_DOUBLE_EQ(al.max_distance, testing::brute_force_bottleneck(a, b));
    // The reported bijection achieves the reported distance.
    double worst = 0.0;
    for (auto [i, j] : al.pairs) worst = std::max(worst, std::abs(a[i] - b[j]));
    EXPECT_EQ(worst, al.max_distance);
  }
}

TEST(AlignProperty, DeflationAgreesWithBottleneckOnSeparatedRoots) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 40; ++k) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const CPoly f(testing::expand_roots(testing::separated_points(rng, n, 0.5, 2.0)));
    const CPoly g = perturb(f, rng, 1e-6);
    const auto trace = align_by_deflation_traced(f, g);
    const auto bott = align_bottleneck(trace.roots_f, trace.roots_g);
    EXPECT_EQ(trace.alignment.as_permutation(), bott.as_permutation());
    EXPECT_LE(trace.alignment.max_distance, 1e-4);
    for (const auto& level : trace.levels) EXPECT_LE(level.identity_residual, 1e-9);
  }
}

TEST(AlignProperty, UnimodularScalingLeavesDistancesUnchanged) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const CPoly f(testing::expand_roots(testing::separated_points(rng, n, 0.5, 2.0)));
    const CPoly g = perturb(f, rng, 1e-6);
    const Complex c = std::polar(1.0, 0.7 + k);
    std::vector<Complex> cf, cg;
    for (Complex x : f.coeffs()) cf.push_back(c * x);
    for (Complex x : g.coeffs()) cg.push_back(c * x);
    const double d0 = align_by_deflation(f, g).max_distance;
    const double d1 = align_by_deflation(CPoly(cf), CPoly(cg)).max_distance;
    EXPECT_NEAR(d1, d0, 1e-6 * d0);
  }
}

TEST(AlignProperty, DilationScalesDistances) {
  const double lambda = 2.0, delta = 1e-8;
  for (int n = 2; n <= 5; ++n) {
    // f(z/λ)·λⁿ for f = zⁿ − δ is zⁿ − δλⁿ.
    const double d0 = align_by_deflation(power(n), power_minus(n, delta)).max_distance;
    const double d1 =
        align_by_deflation(power(n), power_minus(n, delta * std::pow(lambda, n))).max_distance;
    EXPECT_NEAR(d1 / d0, lambda, 1e-9);
  }
}

}  // namespace
}  // namespace rootflow
