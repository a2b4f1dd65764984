#include <stratspace/random.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using stratspace::RandomStream;

TEST(RandomStream, SameIdentitySameDraws) {
  RandomStream a(42, {3, 7});
  RandomStream b(42, {3, 7});
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomStream, ChildIgnoresParentConsumption) {
  RandomStream parent(9, {1});
  const RandomStream fresh = parent.child(5);
  for (int i = 0; i < 17; ++i) parent.next_u64();
  RandomStream late = parent.child(5);
  RandomStream early = fresh;
  for (int i = 0; i < 100; ++i) ASSERT_EQ(early.next_u64(), late.next_u64());
}

TEST(RandomStream, ChildEqualsExplicitPath) {
  RandomStream a = RandomStream(5, {1, 2}).child(3);
  RandomStream b(5, {1, 2, 3});
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomStream, DistinctPathsDiffer) {
  RandomStream a(1, {0});
  RandomStream b(1, {0, 0});
  RandomStream c(1, {1});
  RandomStream d(2, {0});
  const auto x = a.next_u64();
  EXPECT_NE(x, b.next_u64());
  EXPECT_NE(x, c.next_u64());
  EXPECT_NE(x, d.next_u64());
}

TEST(RandomStream, UniformMoments) {
  RandomStream s(123);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  EXPECT_NEAR(mean, 0.5, 3.0 * std::sqrt(1.0 / 12.0 / n) * 1.5);
  EXPECT_NEAR(var, 1.0 / 12.0, 2e-3);
}

TEST(RandomStream, BelowIsUniform) {
  RandomStream s(77, {4});
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto v = s.below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
  EXPECT_LT(chi2, 22.46);  // chi-square(6) upper 0.001 point
  EXPECT_EQ(s.below(0), 0u);
}

TEST(RandomStream, AdjacentChildrenUncorrelated) {
  const RandomStream root(2024);
  const int n = 20000;
  double sxy = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    RandomStream a = root.child(2 * i), b = root.child(2 * i + 1);
    const double x = a.uniform(), y = b.uniform();
    sx += x;
    sy += y;
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
  }
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double r = cov / std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n));
  EXPECT_LT(std::abs(r), 4.0 / std::sqrt(n));
}
