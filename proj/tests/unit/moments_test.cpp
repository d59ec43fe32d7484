#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "srchart/error.hpp"
#include "srchart/moments.hpp"
#include "srchart/tie_model.hpp"

using namespace srchart;

namespace {

std::int64_t sum(const PowerSums& s, PowerSum which) { return s[static_cast<std::size_t>(which)]; }

}  // namespace

TEST(UntiedMoments, Examples) {
  auto m = untied_moments(20, 0.5);
  EXPECT_EQ(m.m1, 0.0);
  EXPECT_DOUBLE_EQ(m.mu2, 2870.0);
  EXPECT_DOUBLE_EQ(untied_moments(50, 0.5).mu2, 42925.0);
  m = untied_moments(3, 1.0);
  EXPECT_DOUBLE_EQ(m.m1, 6.0);
  EXPECT_EQ(m.mu2, 0.0);
  EXPECT_EQ(untied_moments(9, 0.0).mu2, 0.0);
  EXPECT_THROW(untied_moments(0, 0.5), DomainError);
  EXPECT_THROW(untied_moments(5, 1.5), DomainError);
}

TEST(UntiedMoments, MatchEnumeration) {
  for (int n : {1, 4, 9}) {
    for (double p : {0.1, 0.5, 0.83}) {
      const auto pmf = oracle::untied_pmf(n, p);
      const double mean = oracle::moment(pmf, 1);
      const auto m = untied_moments(n, p);
      EXPECT_NEAR(m.m1, mean, 1e-10);
      EXPECT_NEAR(m.mu2, oracle::moment(pmf, 2, mean), 1e-9);
    }
  }
}

TEST(PowerSums, Examples) {
  EXPECT_EQ(sum(power_sum_identities(4), PowerSum::k4), 354);
  EXPECT_EQ(sum(power_sum_identities(3), PowerSum::k2j), 48);
  EXPECT_EQ(sum(power_sum_identities(4), PowerSum::ijkl), 24);
  EXPECT_EQ(sum(power_sum_identities(3), PowerSum::ijkl), 0);
  EXPECT_EQ(sum(power_sum_identities(1), PowerSum::kj), 0);
}

TEST(PowerSums, MatchLoops) {
  for (int n = 1; n <= 24; ++n) {
    std::int64_t k1 = 0, k2 = 0, k3 = 0, k4 = 0, kj = 0, k2j = 0, k2j2 = 0, k3j = 0;
    std::int64_t ijk = 0, i2jk = 0, ijkl = 0;
    for (std::int64_t k = 1; k <= n; ++k) {
      k1 += k;
      k2 += k * k;
      k3 += k * k * k;
      k4 += k * k * k * k;
      for (std::int64_t j = 1; j <= n; ++j) {
        if (j == k) continue;
        kj += k * j;
        k2j += k * k * j;
        k3j += k * k * k * j;
        if (j < k) k2j2 += k * k * j * j;
        for (std::int64_t i = 1; i <= n; ++i) {
          if (i == j || i == k) continue;
          i2jk += i * i * j * k;
        }
      }
    }
    for (std::int64_t i = 1; i <= n; ++i)
      for (std::int64_t j = i + 1; j <= n; ++j)
        for (std::int64_t k = j + 1; k <= n; ++k) {
          ijk += i * j * k;
          for (std::int64_t l = k + 1; l <= n; ++l) ijkl += i * j * k * l;
        }
    const auto s = power_sum_identities(n);
    EXPECT_EQ(sum(s, PowerSum::k), k1) << n;
    EXPECT_EQ(sum(s, PowerSum::k2), k2) << n;
    EXPECT_EQ(sum(s, PowerSum::k3), k3) << n;
    EXPECT_EQ(sum(s, PowerSum::k4), k4) << n;
    EXPECT_EQ(sum(s, PowerSum::kj), kj) << n;
    EXPECT_EQ(sum(s, PowerSum::k2j), k2j) << n;
    EXPECT_EQ(sum(s, PowerSum::k2j2), k2j2) << n;
    EXPECT_EQ(sum(s, PowerSum::k3j), k3j) << n;
    EXPECT_EQ(sum(s, PowerSum::ijk), ijk) << n;
    EXPECT_EQ(sum(s, PowerSum::i2jk), i2jk) << n;
    EXPECT_EQ(sum(s, PowerSum::ijkl), ijkl) << n;
  }
}

TEST(PowerSums, LimitsAndLargeN) {
  EXPECT_THROW(power_sum_identities(0), DomainError);
  EXPECT_THROW(power_sum_identities(201), ResourceLimit);
  // the biggest term still fits at the documented limit
  const auto s = power_sum_identities(200);
  EXPECT_EQ(sum(s, PowerSum::k), 20100);
  EXPECT_GT(sum(s, PowerSum::ijkl), 0);
}

TEST(BinomialMoments, Examples) {
  const auto full = binomial_raw_moments(20, 0.0);
  for (int k = 1; k <= 8; ++k) EXPECT_DOUBLE_EQ(full.moment(k), std::pow(20.0, k)) << k;
  const auto half = binomial_raw_moments(2, 0.5);
  EXPECT_DOUBLE_EQ(half.moment(1), 1.0);
  EXPECT_DOUBLE_EQ(half.moment(2), 1.5);
  const auto none = binomial_raw_moments(7, 1.0);
  for (int k = 1; k <= 8; ++k) EXPECT_EQ(none.moment(k), 0.0);
  EXPECT_EQ(none.moment(0), 1.0);
  EXPECT_THROW(half.moment(9), DomainError);
}

TEST(BinomialMoments, MatchDirectSummation) {
  for (int n : {1, 5, 23, 60}) {
    for (double p0 : {0.0, 0.1, 0.45, 0.9}) {
      const auto table = binomial_raw_moments(n, p0);
      for (int k = 1; k <= 8; ++k) {
        double direct = 0.0;
        for (int m = 0; m <= n; ++m) direct += std::pow(m, k) * oracle::binomial_pmf(n, m, 1.0 - p0);
        EXPECT_NEAR(table.moment(k) / direct, 1.0, 1e-10) << n << " " << p0 << " " << k;
      }
    }
  }
}

TEST(BinomialMoments, StirlingCoefficients) {
  // E(N^k) = (N)_k - sum_{j<k} s(k, j) E(N^j)
  EXPECT_EQ(stirling_first_kind(2, 1), 1);
  EXPECT_EQ(stirling_first_kind(3, 1), -2);
  EXPECT_EQ(stirling_first_kind(3, 2), 3);
  EXPECT_EQ(stirling_first_kind(4, 1), 6);
}

TEST(TiedMoments, ReduceToUntied) {
  const auto m = tied_moments(20, 0.0, 0.5);
  EXPECT_NEAR(m.m1p, 0.0, 1e-12);
  EXPECT_NEAR(m.mu2p, 2870.0, 1e-9);
  ASSERT_TRUE(m.gamma1);
  EXPECT_NEAR(*m.gamma1, 0.0, 1e-12);
  EXPECT_NEAR(m.mu3p, 0.0, 1e-6);

  const auto one = tied_moments(1, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(one.m1p, 1.0);
  EXPECT_NEAR(one.mu2p, 0.0, 1e-14);
}

TEST(TiedMoments, MatchExactOracle) {
  const double pi_plus = 0.6554 / 0.9297;
  const double p0 = 0.0802;
  const auto m = tied_moments(20, p0, pi_plus);
  // Enumeration is out of reach at n = 20; build the p.m.f. by conditioning on
  // N and convolving independently of the library.
  std::map<std::int64_t, double> pmf;
  for (int big_n = 0; big_n <= 20; ++big_n) {
    const double w = oracle::binomial_pmf(20, big_n, 1.0 - p0);
    std::map<std::int64_t, double> g = {{0, 1.0}};
    for (int k = 1; k <= big_n; ++k) {
      std::map<std::int64_t, double> next;
      for (const auto& [s, q] : g) {
        next[s + k] += q * pi_plus;
        next[s - k] += q * (1.0 - pi_plus);
      }
      g.swap(next);
    }
    for (const auto& [s, q] : g) pmf[s] += w * q;
  }
  const double mean = oracle::moment(pmf, 1);
  EXPECT_NEAR(m.m1p / mean, 1.0, 1e-8);
  EXPECT_NEAR(m.m2p / oracle::moment(pmf, 2), 1.0, 1e-8);
  EXPECT_NEAR(m.m3p / oracle::moment(pmf, 3), 1.0, 1e-8);
  EXPECT_NEAR(m.m4p / oracle::moment(pmf, 4), 1.0, 1e-8);
  EXPECT_NEAR(m.mu2p / oracle::moment(pmf, 2, mean), 1.0, 1e-8);
  EXPECT_NEAR(m.mu3p / oracle::moment(pmf, 3, mean), 1.0, 1e-8);
  EXPECT_NEAR(m.mu4p / oracle::moment(pmf, 4, mean), 1.0, 1e-8);
  ASSERT_TRUE(m.gamma1 && m.gamma2);
  EXPECT_NEAR(*m.gamma1, m.mu3p / std::pow(m.mu2p, 1.5), 1e-12);
  EXPECT_NEAR(*m.gamma2, m.mu4p / (m.mu2p * m.mu2p), 1e-12);
}

TEST(TiedMoments, MatchEnumerationSmallN) {
  for (int n : {1, 3, 6}) {
    for (double p0 : {0.0, 0.2, 0.6}) {
      for (double pm : {0.5, 0.3}) {
        const double p_minus = (1.0 - p0) * pm;
        const double p_plus = (1.0 - p0) - p_minus;
        const auto pmf = oracle::tied_pmf(n, p_minus, p0, p_plus);
        const auto m = tied_moments(n, p0, 1.0 - pm);
        const double mean = oracle::moment(pmf, 1);
        EXPECT_NEAR(m.m1p, mean, 1e-10);
        EXPECT_NEAR(m.mu2p, oracle::moment(pmf, 2, mean), 1e-9);
        EXPECT_NEAR(m.mu3p, oracle::moment(pmf, 3, mean), 1e-8);
        EXPECT_NEAR(m.mu4p, oracle::moment(pmf, 4, mean), 1e-7);
      }
    }
  }
}

TEST(TiedMoments, Properties) {
  for (double p0 : {0.0, 0.05, 0.3, 0.9}) {
    for (double pi : {0.0, 0.2, 0.5, 0.9}) {
      const auto m = tied_moments(15, p0, pi);
      EXPECT_GE(m.mu2p, -1e-9);
      if (m.gamma2) EXPECT_GE(*m.gamma2, 0.0);
    }
  }
  const auto sym = tied_moments(30, 0.2, 0.5);
  EXPECT_NEAR(sym.m1p, 0.0, 1e-9);
  EXPECT_NEAR(sym.mu3p, 0.0, 1e-4);
  EXPECT_THROW(tied_moments(10, 1.0, 0.5), DomainError);
}
