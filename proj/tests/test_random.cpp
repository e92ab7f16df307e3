#include <gtest/gtest.h>

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <set>

#include "rvkit/random.hpp"

using namespace rvkit;

// Known-answer vectors of the Random123 reference implementation.
TEST(Philox, KnownAnswers) {
  using W = std::array<std::uint32_t, 4>;
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (W{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (W{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (W{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(NormalQuantile, MatchesBoost) {
  const boost::math::normal_distribution<double> nd;
  for (const double p : {1e-300, 1e-100, 1e-20, 1e-10, 1e-5, 0.001, 0.02425, 0.1, 0.3, 0.425, 0.5,
                         0.575, 0.7, 0.9, 0.97575, 0.999, 1 - 1e-10, 1 - 1e-16}) {
    const double want = boost::math::quantile(nd, p);
    EXPECT_NEAR(normal_quantile(p), want, 1e-14 * std::max(1.0, std::abs(want))) << p;
  }
  EXPECT_EQ(normal_quantile(0.5), 0.0);
}

TEST(CounterRng, Deterministic) {
  CounterRng a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
  CounterRng c(42, 7), d(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(c.normal(), d.normal());
}

TEST(CounterRng, StreamsAndSeedsDiffer) {
  CounterRng a(42, 1), b(42, 2), c(43, 1);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    seen.insert(a.next_u64());
    seen.insert(b.next_u64());
    seen.insert(c.next_u64());
  }
  EXPECT_EQ(seen.size(), 3000u);
}

TEST(CounterRng, StreamsUncorrelated) {
  CounterRng a(5, 100), b(5, 101);
  const int n = 200'000;
  double sab = 0;
  for (int i = 0; i < n; ++i) sab += a.normal() * b.normal();
  EXPECT_NEAR(sab / n, 0.0, 4.0 / std::sqrt(n));
}

TEST(CounterRng, UniformOnOpenInterval) {
  CounterRng r(1, 0);
  const int n = 1'000'000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
  }
  EXPECT_NEAR(s / n, 0.5, 3 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(s2 / n, 1.0 / 3, 3 * std::sqrt(4.0 / 45 / n));
}

TEST(CounterRng, NormalMoments) {
  CounterRng r(2, 0);
  const int n = 1'000'000;
  double s = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 3 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 3 * std::sqrt(2.0 / n));
  EXPECT_NEAR(s4 / n, 3.0, 3 * std::sqrt(96.0 / n));
}

TEST(CounterRng, GammaMeanAndVariance) {
  for (const double shape : {0.5, 1.0, 4.0, 30.0}) {
    CounterRng r(3, static_cast<std::uint64_t>(shape * 10));
    const int n = 400'000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
      const double g = r.gamma(shape);
      ASSERT_GT(g, 0.0);
      s += g;
      s2 += g * g;
    }
    const double mean = s / n;
    EXPECT_NEAR(mean, shape, 3.5 * std::sqrt(shape / n)) << shape;
    EXPECT_NEAR(s2 / n - mean * mean, shape, 0.03 * shape) << shape;
  }
}
