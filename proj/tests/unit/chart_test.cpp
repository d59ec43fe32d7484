#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "srchart/chart.hpp"
#include "srchart/error.hpp"
#include "srchart/log.hpp"
#include "srchart/mc_sim.hpp"
#include "srchart/snd_fit.hpp"

using namespace srchart;

TEST(ControlLimit, PublishedUntiedLimits) {
  const auto m20 = untied_moments(20, 0.5);
  const auto l20 = find_control_limit(20, m20.m1, m20.mu2);
  EXPECT_EQ(l20.c_value, 162);
  EXPECT_GE(1.0 / l20.alpha_achieved, 370.370);
  const auto m50 = untied_moments(50, 0.5);
  const auto l50 = find_control_limit(50, m50.m1, m50.mu2);
  EXPECT_EQ(l50.c_value, 623);
  EXPECT_GE(1.0 / l50.alpha_achieved, 370.370);
}

TEST(ControlLimit, Properties) {
  for (int n : {10, 20, 33, 50, 80}) {
    const auto m = untied_moments(n, 0.5);
    const auto l = find_control_limit(n, m.m1, m.mu2, 0.01);
    EXPECT_LE(l.c_value, max_rank_sum(n));
    EXPECT_LE(l.alpha_achieved, 0.01);
    // the next smaller admissible C misses the target
    if (l.c_value > 2) EXPECT_GT(normal_alpha(l.c_value - 2, n, m.m1, m.mu2, ChartMode::untied), 0.01);
  }
}

TEST(ControlLimit, Unreachable) {
  const auto m = untied_moments(2, 0.5);
  EXPECT_THROW(find_control_limit(2, m.m1, m.mu2), UnreachableConfidence);
}

TEST(ControlLimit, TiedModeSearchesEveryInteger) {
  const auto probs = sign_probabilities(Scenario(2, 0.2, 0.0, 20));
  const auto m = tied_moments(20, probs.p_zero, probs.pi_plus);
  const auto l = find_control_limit(20, m.m1p, m.mu2p, 0.0027, ChartMode::tied);
  EXPECT_LE(l.alpha_achieved, 0.0027);
  EXPECT_GT(normal_alpha(l.c_value - 1, 20, m.m1p, m.mu2p, ChartMode::tied), 0.0027);
  EXPECT_EQ(l.mode, ChartMode::tied);
}

TEST(ErrorRates, NoShiftGivesComplement) {
  const auto r = error_rates_untied(162, 20, 0.5, 0.5);
  EXPECT_NEAR(r.beta, 1.0 - r.alpha, 1e-15);
  const auto arl = arl_from_errors(r.alpha, r.beta);
  EXPECT_NEAR(arl.arl1, arl.arl0, 1e-9);
}

// Expected to fail: with the +0.5 continuity correction the normal beta is
// 0.669 against the exact 0.640 at this p (the law is skewed near the upper
// end of the support). Kept at the required 0.01.
TEST(ErrorRates, NormalBetaAgreesWithExact) {
  const auto approx = error_rates_untied(162, 20, 0.5, 0.8413);
  const auto exact = error_rates_untied_exact(162, 20, 0.5, 0.8413);
  EXPECT_NEAR(approx.beta, exact.beta, 0.01);
}

TEST(ErrorRates, ExactAlphaAtPublishedLimit) {
  // Direct count over all 2^20 sign patterns: 1502 of them reach |SR| >= 162.
  const auto exact = error_rates_untied_exact(162, 20, 0.5, 0.5);
  EXPECT_DOUBLE_EQ(exact.alpha, 1502.0 / 1048576.0);
}

TEST(ErrorRates, ExactMatchesEnumeration) {
  const auto pmf0 = oracle::untied_pmf(12, 0.5);
  const auto pmf1 = oracle::untied_pmf(12, 0.7);
  for (std::int64_t c : {20, 40, 60}) {
    double alpha = 0.0, beta = 0.0;
    for (const auto& [s, w] : pmf0) alpha += (s <= -c || s >= c) ? w : 0.0;
    for (const auto& [s, w] : pmf1) beta += (s > -c && s < c) ? w : 0.0;
    const auto r = error_rates_untied_exact(c, 12, 0.5, 0.7);
    EXPECT_NEAR(r.alpha, alpha, 1e-14) << c;
    EXPECT_NEAR(r.beta, beta, 1e-14) << c;
  }
}

TEST(ErrorRates, BeyondSupport) {
  const std::int64_t c = max_rank_sum(20) + 2;
  EXPECT_EQ(error_rates_untied_exact(c, 20, 0.5, 0.6).alpha, 0.0);
  EXPECT_NEAR(error_rates_untied(c, 20, 0.5, 0.6).alpha, 0.0, 1e-15);
  const auto arl = arl_from_errors(0.0, 0.3);
  EXPECT_TRUE(arl.arl0_infinite);
  EXPECT_TRUE(std::isinf(arl.arl0));
}

TEST(ErrorRates, TiedIdentities) {
  const auto d = exact_pmf_tied(20, sign_probabilities(Scenario(4, 0.1, 0.0, 20)));
  for (std::int64_t c : {10, 60, 120, 150}) {
    const auto r = error_rates_tied(c, d, d);
    EXPECT_NEAR(r.alpha + r.beta, 1.0 - d.mass_at(c) - d.mass_at(c - 1), 1e-12) << c;
    // symmetric in-control law
    EXPECT_NEAR(d.cdf(-c), 1.0 - d.cdf(c - 1), 1e-12) << c;
  }
}

TEST(ErrorRates, TiedClampsWithWarning) {
  std::vector<std::string> seen;
  const auto previous = set_warning_sink([&](std::string_view m) { seen.emplace_back(m); });
  const auto d = exact_pmf_tied(5, 0.2, 0.5);
  const auto r = error_rates_tied(400, d, d);
  set_warning_sink(previous);
  EXPECT_TRUE(r.clamped);
  EXPECT_NEAR(r.alpha, 0.0, 1e-15);
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_NE(seen[0].find("clamped"), std::string::npos);
}

TEST(ErrorRates, TiedBetaMatchesSimulation) {
  const Scenario s(3, 0.2, 1.0, 20);
  const auto p0 = sign_probabilities(Scenario(3, 0.2, 0.0, 20));
  const auto m0 = tied_moments(20, p0.p_zero, p0.pi_plus);
  const auto c = find_control_limit(20, m0.m1p, m0.mu2p, 0.0027, ChartMode::tied).c_value;
  const auto exact = exact_pmf_tied(20, sign_probabilities(s));
  const auto empirical = simulate_statistic(s, 1'000'000, 99);
  const auto r = error_rates_tied(c, exact_pmf_tied(20, p0), exact);
  const auto rmc = error_rates_tied(c, exact_pmf_tied(20, p0), empirical);
  EXPECT_NEAR(r.beta, rmc.beta, 0.005);
}

TEST(Arl, FromErrors) {
  EXPECT_NEAR(arl_from_errors(0.0027, 0.0).arl0, 370.37037037, 1e-6);
  EXPECT_DOUBLE_EQ(arl_from_errors(0.01, 0.0).arl1, 1.0);
  EXPECT_DOUBLE_EQ(arl_from_errors(0.01, 0.5).arl1, 2.0);
  EXPECT_THROW(arl_from_errors(0.01, 1.0), DomainError);
  EXPECT_THROW(arl_from_errors(-0.1, 0.1), DomainError);
}

TEST(Arl, SourceNames) {
  EXPECT_EQ(parse_arl_source("exact"), ArlSource::exact);
  EXPECT_EQ(parse_arl_source("snd"), ArlSource::snd);
  EXPECT_EQ(parse_arl_source("snd-predicted"), ArlSource::snd_predicted);
  EXPECT_EQ(to_string(ArlSource::snd_predicted), "snd-predicted");
  EXPECT_THROW(parse_arl_source("bogus"), DomainError);
}

TEST(ArlTable, LayoutAndTiesDetectFaster) {
  const std::vector<int> cases = {1, 2, 3, 4, 5, 6};
  const std::vector<double> taus = {0.0, 0.05, 0.1, 0.2};
  const std::vector<double> deltas = {-1.0, -0.5, -0.2, -0.1, 0.0, 0.1, 0.2, 0.5, 1.0};
  const auto table = arl_table(20, cases, taus, deltas, ArlSource::exact);
  ASSERT_EQ(table.rows.size(), 24u);
  for (const auto& row : table.rows) {
    ASSERT_EQ(row.arl.size(), deltas.size());
    EXPECT_EQ(row.arl[4], row.arl0);
    for (double a : row.arl) EXPECT_GE(a, 1.0);
    EXPECT_EQ(row.mode, row.tau == 0.0 ? ChartMode::untied : ChartMode::tied);
    if (row.mode == ChartMode::untied) EXPECT_EQ(row.c_value, 162);
  }
  for (const auto& row : table.rows) {
    if (row.mode != ChartMode::tied) continue;
    const auto& uo = table.rows[static_cast<std::size_t>(row.case_id - 1) * 4];
    ASSERT_EQ(uo.mode, ChartMode::untied);
    EXPECT_LE(row.arl[3], uo.arl[3]);
    EXPECT_LE(row.arl[5], uo.arl[5]);
  }
}

TEST(ArlTable, PredictedSourceNeedsProvider) {
  const std::vector<int> cases = {3};
  const std::vector<double> taus = {0.2};
  const std::vector<double> deltas = {0.0, 0.5};
  EXPECT_THROW(arl_table(20, cases, taus, deltas, ArlSource::snd_predicted), DomainError);
  int calls = 0;
  const SndProvider provider = [&](const Scenario& s, const TiedMoments& m) {
    ++calls;
    return fit_snd_params(exact_pmf_tied(s.n, sign_probabilities(s)), m);
  };
  const auto predicted = arl_table(20, cases, taus, deltas, ArlSource::snd_predicted, provider);
  const auto fitted = arl_table(20, cases, taus, deltas, ArlSource::snd);
  EXPECT_EQ(calls, 1);
  EXPECT_DOUBLE_EQ(predicted.rows[0].arl[1], fitted.rows[0].arl[1]);
}

TEST(TiedLimits, OneRowPerCaseAndTau) {
  const std::vector<double> taus = {0.05, 0.1, 0.2};
  const auto rows = tied_limits(20, taus);
  ASSERT_EQ(rows.size(), 18u);
  for (const auto& r : rows) {
    EXPECT_LE(r.limits.alpha_achieved, 0.0027);
    EXPECT_GT(r.p_zero, 0.0);
  }
}
