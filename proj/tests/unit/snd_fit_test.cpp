#include <gtest/gtest.h>

#include <set>

#include "srchart/error.hpp"
#include "srchart/snd_fit.hpp"

using namespace srchart;

namespace {

struct Setup {
  SignProbabilities probs;
  TiedMoments moments;
  RankDistribution exact;
};

Setup setup(const Scenario& s) {
  const auto probs = sign_probabilities(s);
  return {probs, tied_moments(s.n, probs.p_zero, probs.pi_plus), exact_pmf_tied(s.n, probs)};
}

}  // namespace

TEST(SndFit, RecoversKnownParameters) {
  for (const auto& scenario : {Scenario(3, 0.2, 0.5, 20), Scenario(6, 0.05, -0.2, 20)}) {
    const auto st = setup(scenario);
    const auto truth = fit_snd_params(st.exact, st.moments);
    const auto target = snd_pmf(truth, st.moments, st.exact.support);
    const auto fit = fit_snd(target, st.moments);
    const auto recovered = snd_pmf(fit.params, st.moments, target.support);
    EXPECT_LE(total_variation(recovered, target), 1e-6);
  }
}

TEST(SndFit, SymmetricScenarioRejected) {
  const auto st = setup(Scenario(3, 0.1, 0.0, 20));
  EXPECT_THROW(fit_snd(st.exact, st.moments), UseNormalApproximation);
}

TEST(SndFit, LabelSigns) {
  // location follows the shift and the width sign follows the skew
  const auto up = setup(Scenario(3, 0.2, 0.5, 20));
  const auto down = setup(Scenario(3, 0.2, -0.5, 20));
  const auto pu = fit_snd_params(up.exact, up.moments);
  const auto pd = fit_snd_params(down.exact, down.moments);
  EXPECT_GT(pu.b, 0.0);
  EXPECT_LT(pd.b, 0.0);
  EXPECT_LT(pd.c, 0.0);
  EXPECT_GT(pu.a, 0.0);
}

TEST(SndFit, FitIsDeterministic) {
  const auto st = setup(Scenario(4, 0.1, 0.2, 50));
  const auto a = fit_snd(st.exact, st.moments);
  const auto b = fit_snd(st.exact, st.moments);
  EXPECT_EQ(a.params.a, b.params.a);
  EXPECT_EQ(a.params.b, b.params.b);
  EXPECT_EQ(a.params.c, b.params.c);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Features, OrderAndValues) {
  const Scenario s(5, 0.1, -0.2, 50);
  const auto st = setup(s);
  const auto f = feature_vector(st.probs.pi_plus, st.moments, s.n);
  ASSERT_EQ(f.size(), 11u);
  EXPECT_EQ(kFeatureNames.front(), "pi_plus");
  EXPECT_EQ(kFeatureNames.back(), "n");
  EXPECT_EQ(f[0], st.probs.pi_plus);
  EXPECT_EQ(f[1], st.moments.m1p);
  EXPECT_EQ(f[5], st.moments.mu2p);
  EXPECT_EQ(f[8], *st.moments.gamma1);
  EXPECT_EQ(f[9], *st.moments.gamma2);
  EXPECT_EQ(f[10], 50.0);
}

TEST(Dataset, ScenarioGrid) {
  const auto scenarios = dataset_scenarios();
  ASSERT_EQ(scenarios.size(), 288u);
  std::set<std::tuple<int, double, double, int>> unique;
  for (const auto& s : scenarios) {
    EXPECT_NE(s.delta, 0.0);
    EXPECT_GT(s.tau, 0.0);
    unique.insert({s.case_id, s.tau, s.delta, s.n});
  }
  EXPECT_EQ(unique.size(), 288u);
}

TEST(Dataset, CsvAndJsonRoundTrip) {
  std::vector<LabeledSample> samples;
  for (const auto& s : {Scenario(3, 0.2, 0.5, 20), Scenario(1, 0.05, -1.0, 50)}) {
    samples.push_back(label_scenario(s));
  }
  EXPECT_EQ(samples[0].flagged, samples[0].fit_quality > kFitTolerance);
  for (const auto& text : {dataset_to_csv(samples), dataset_to_json(samples)}) {
    const auto back = dataset_from_text(text);
    ASSERT_EQ(back.size(), samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      EXPECT_EQ(back[i].features, samples[i].features);
      EXPECT_EQ(back[i].targets.a, samples[i].targets.a);
      EXPECT_EQ(back[i].targets.b, samples[i].targets.b);
      EXPECT_EQ(back[i].targets.c, samples[i].targets.c);
      EXPECT_EQ(back[i].scenario.case_id, samples[i].scenario.case_id);
      EXPECT_EQ(back[i].flagged, samples[i].flagged);
    }
  }
}

TEST(Dataset, RejectsMalformedInput) {
  EXPECT_THROW(dataset_from_text(""), SchemaError);
  EXPECT_THROW(dataset_from_text("a,b,c\n1,2,3\n"), SchemaError);
  EXPECT_THROW(dataset_from_text("{\"samples\": 3}"), SchemaError);
}
