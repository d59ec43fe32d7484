#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "srchart/error.hpp"
#include "srchart/nnreg.hpp"
#include "srchart/rng.hpp"

using namespace srchart;

namespace {

// Smooth synthetic regression problem with the dataset's shape.
std::vector<LabeledSample> synthetic(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledSample> out;
  for (std::size_t i = 0; i < count; ++i) {
    FeatureVector f{};
    for (auto& v : f) v = rng.uniform() * 2.0 - 1.0;
    f[10] = i % 2 ? 20.0 : 50.0;
    const SNDParams t{0.6 + 0.05 * f[0], 300.0 * f[1] + f[10], -30.0 * f[2] * f[3]};
    out.push_back(LabeledSample{Scenario(3, 0.1, 0.5, 20), f, t, 0.0, 0.0, false});
  }
  return out;
}

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.uniform() * 2.0 - 1.0;
  return m;
}

TrainConfig short_run() {
  TrainConfig cfg;
  cfg.epochs = 150;
  cfg.seed = 3;
  return cfg;
}

}  // namespace

TEST(NetworkConfig, Validation) {
  NetworkConfig ok;
  EXPECT_NO_THROW(validate(ok));
  NetworkConfig five = ok;
  five.hidden_widths.pop_back();
  EXPECT_THROW(validate(five), DomainError);
  NetworkConfig zero = ok;
  zero.hidden_widths[2] = 0;
  EXPECT_THROW(validate(zero), DomainError);
}

TEST(Split, SizesAndDeterminism) {
  const auto sizes = split_sizes(288, SplitSpec{});
  EXPECT_EQ(sizes, (std::array<std::size_t, 3>{245, 39, 4}));
  const auto a = split_dataset(288, SplitSpec{});
  const auto b = split_dataset(288, SplitSpec{});
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.validation, b.validation);
  EXPECT_EQ(a.test, b.test);
  ASSERT_EQ(a.train.size(), 245u);
  ASSERT_EQ(a.validation.size(), 39u);
  ASSERT_EQ(a.test.size(), 4u);
  std::set<std::size_t> all(a.train.begin(), a.train.end());
  all.insert(a.validation.begin(), a.validation.end());
  all.insert(a.test.begin(), a.test.end());
  EXPECT_EQ(all.size(), 288u);
  SplitSpec other;
  other.seed = 99;
  EXPECT_NE(split_dataset(288, other).train, a.train);
}

TEST(Standardizer, RoundTripAndZeroVariance) {
  Eigen::MatrixXd x = random_matrix(4, 30, 1) * 50.0;
  x.row(2).setConstant(7.0);
  const auto s = fit_standardizer(x);
  EXPECT_EQ(s.scale(2), 1.0);
  const Eigen::MatrixXd z = s.apply(x);
  EXPECT_NEAR(z.row(0).mean(), 0.0, 1e-12);
  EXPECT_LE((s.invert(z) - x).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Network, ZeroWeightsGiveZeroOutput) {
  const Network net{NetworkConfig{}};
  const auto y = net.forward(random_matrix(11, 5, 2) * 100.0);
  ASSERT_EQ(y.rows(), 3);
  EXPECT_EQ(y.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Network, InitializationIsSeeded) {
  Network a{NetworkConfig{}};
  Network b{NetworkConfig{}};
  a.initialize(5);
  b.initialize(5);
  ASSERT_EQ(a.layer_count(), 7u);
  for (std::size_t l = 0; l < a.layer_count(); ++l) {
    EXPECT_EQ(a.weights(l), b.weights(l));
    const double bound = std::sqrt(3.0 / static_cast<double>(a.weights(l).cols()));
    EXPECT_LE(a.weights(l).cwiseAbs().maxCoeff(), bound);
  }
  b.initialize(6);
  EXPECT_NE(a.weights(0), b.weights(0));
}

TEST(Network, GradientMatchesFiniteDifferences) {
  Network net{NetworkConfig{}};
  net.initialize(11);
  const auto check = gradient_check(net, random_matrix(11, 3, 3), random_matrix(3, 3, 4), 1e-5);
  EXPECT_EQ(check.relative_error.size(), net.layer_count());
  EXPECT_LE(check.max_relative_error, 1e-5);
}

TEST(Train, DeterministicAndLearns) {
  const auto samples = synthetic(120, 8);
  SplitSpec split;
  split.seed = 4;
  const auto a = train(NetworkConfig{}, short_run(), samples, split);
  const auto b = train(NetworkConfig{}, short_run(), samples, split);
  for (std::size_t l = 0; l < a.network.layer_count(); ++l) {
    EXPECT_EQ(a.network.weights(l), b.network.weights(l));
    EXPECT_EQ(a.network.bias(l), b.network.bias(l));
  }
  ASSERT_FALSE(a.log.empty());
  EXPECT_LT(a.log.back().train_loss, a.log.front().train_loss);
  EXPECT_EQ(a.log.size(), 15u);
}

TEST(Train, MinibatchOption) {
  const auto samples = synthetic(80, 9);
  auto cfg = short_run();
  cfg.epochs = 20;
  cfg.minibatch = true;
  cfg.batch_size = 16;
  const auto model = train(NetworkConfig{}, cfg, samples, SplitSpec{});
  EXPECT_TRUE(std::isfinite(model.metrics.mse[0]));
}

TEST(Train, DivergenceIsReported) {
  const auto samples = synthetic(60, 10);
  auto cfg = short_run();
  cfg.learning_rate = 1e6;
  cfg.momentum = 0.99;
  EXPECT_THROW(train(NetworkConfig{}, cfg, samples, SplitSpec{}), TrainingDiverged);
}

TEST(Model, JsonRoundTripIsBitExact) {
  const auto samples = synthetic(60, 12);
  auto cfg = short_run();
  cfg.epochs = 30;
  const auto model = train(NetworkConfig{}, cfg, samples, SplitSpec{});
  const auto text = model_to_json(model);
  const auto back = model_from_json(text);
  EXPECT_EQ(model_to_json(back), text);
  for (const auto& s : samples) {
    const auto p = predict(model, s.features);
    const auto q = predict(back, s.features);
    EXPECT_EQ(p.params.a, q.params.a);
    EXPECT_EQ(p.params.b, q.params.b);
    EXPECT_EQ(p.params.c, q.params.c);
  }
  EXPECT_EQ(back.train_config.epochs, 30);
  EXPECT_EQ(back.log.size(), model.log.size());
}

TEST(Model, RejectsBadInput) {
  EXPECT_THROW(model_from_json("not json"), SchemaError);
  EXPECT_THROW(model_from_json("{\"format\":\"other\",\"version\":1}"), SchemaError);
  const auto samples = synthetic(40, 13);
  auto cfg = short_run();
  cfg.epochs = 10;
  const auto model = train(NetworkConfig{}, cfg, samples, SplitSpec{});
  const std::vector<double> ten(10, 0.0);
  EXPECT_THROW(predict(model, ten), DomainError);
}

TEST(Model, HeightIsKeptPositive) {
  auto samples = synthetic(40, 14);
  for (auto& s : samples) s.targets.a = -5.0;
  auto cfg = short_run();
  cfg.epochs = 50;
  const auto model = train(NetworkConfig{}, cfg, samples, SplitSpec{});
  const auto p = predict(model, samples[0].features);
  EXPECT_TRUE(p.height_clamped);
  EXPECT_EQ(p.params.a, kMinPredictedHeight);
}
