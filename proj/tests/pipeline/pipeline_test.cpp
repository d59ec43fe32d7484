// End-to-end pipeline: dataset build, training on the released seed, and
// prediction. Everything shares one dataset, so this binary runs as a single
// ctest entry.
#include <gtest/gtest.h>

#include <algorithm>

#include "srchart/chart.hpp"
#include "srchart/nnreg.hpp"
#include "srchart/snd_fit.hpp"
#include "srchart/verification.hpp"

using namespace srchart;

namespace {

class Pipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dataset_ = new std::vector<LabeledSample>(build_training_dataset());
    TrainConfig cfg;
    cfg.seed = kReleasedTrainSeed;
    SplitSpec split;
    split.seed = kReleasedSplitSeed;
    model_ = new TrainedNetwork(train(NetworkConfig{}, cfg, *dataset_, split));
  }
  static void TearDownTestSuite() {
    delete model_;
    delete dataset_;
  }
  static std::vector<LabeledSample>* dataset_;
  static TrainedNetwork* model_;
};

std::vector<LabeledSample>* Pipeline::dataset_ = nullptr;
TrainedNetwork* Pipeline::model_ = nullptr;

}  // namespace

TEST_F(Pipeline, DatasetShape) {
  ASSERT_EQ(dataset_->size(), 288u);
  for (const auto& s : *dataset_) {
    EXPECT_EQ(s.features.size(), 11u);
    EXPECT_GT(s.targets.a, 0.0);
    if (s.fit_quality > kFitTolerance) EXPECT_TRUE(s.flagged);
  }
}

TEST_F(Pipeline, DatasetIsThreadInvariant) {
  const auto again = build_training_dataset(3);
  ASSERT_EQ(again.size(), dataset_->size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    EXPECT_EQ(again[i].targets.a, (*dataset_)[i].targets.a);
    EXPECT_EQ(again[i].targets.b, (*dataset_)[i].targets.b);
    EXPECT_EQ(again[i].targets.c, (*dataset_)[i].targets.c);
  }
}

TEST_F(Pipeline, ReleasedSeedMetrics) {
  const auto& m = model_->metrics;
  for (int t = 0; t < 3; ++t) EXPECT_GE(m.r2_test[t], 0.98) << "target " << t;
  const double ratio = std::max(m.mse[1], m.mse[2]) / std::min(m.mse[1], m.mse[2]);
  EXPECT_LE(ratio, 10.0);
}

TEST_F(Pipeline, InSamplePredictionsWithinReportedError) {
  const auto split = split_dataset(dataset_->size(), model_->split);
  std::array<double, 3> mae{};
  for (std::size_t i : split.train) {
    const auto& s = (*dataset_)[i];
    const auto p = predict(*model_, s.features);
    mae[0] += std::fabs(p.params.a - s.targets.a);
    mae[1] += std::fabs(p.params.b - s.targets.b);
    mae[2] += std::fabs(p.params.c - s.targets.c);
  }
  for (int t = 0; t < 3; ++t) {
    mae[t] /= static_cast<double>(split.train.size());
    EXPECT_NEAR(mae[t], model_->metrics.mae_train[t], 1e-9 * (1.0 + mae[t])) << t;
  }
}

// Bounded below by the labels: most fitted SNDs are already more than 0.05
// from the exact p.m.f., which alternates between even and odd ranks.
TEST_F(Pipeline, HeldOutPredictedPmfCloseToExact) {
  const auto split = split_dataset(dataset_->size(), model_->split);
  for (std::size_t i : split.test) {
    const auto& s = (*dataset_)[i];
    const auto probs = sign_probabilities(s.scenario);
    const auto exact = exact_pmf_tied(s.scenario.n, probs);
    const auto m = tied_moments(s.scenario.n, probs.p_zero, probs.pi_plus);
    const auto p = predict(*model_, s.features);
    EXPECT_LE(total_variation(snd_pmf(p.params, m, exact.support), exact), 0.05)
        << "case " << s.scenario.case_id << " tau " << s.scenario.tau << " delta "
        << s.scenario.delta << " n " << s.scenario.n << " (label fit TV " << s.fit_quality << ")";
  }
}

TEST_F(Pipeline, PredictedArlTable) {
  const std::vector<int> cases = {2, 5};
  const std::vector<double> taus = {0.0, 0.1};
  const std::vector<double> deltas = {-0.5, 0.0, 0.5};
  const SndProvider provider = [this](const Scenario& s, const TiedMoments& m) {
    return predict(*model_, feature_vector(sign_probabilities(s).pi_plus, m, s.n)).params;
  };
  const auto table = arl_table(20, cases, taus, deltas, ArlSource::snd_predicted, provider);
  ASSERT_EQ(table.rows.size(), 4u);
  for (const auto& row : table.rows)
    for (double a : row.arl) EXPECT_GE(a, 1.0);
}
