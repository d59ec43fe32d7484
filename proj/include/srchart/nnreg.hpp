#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "srchart/snd_fit.hpp"
#include "srchart/srdist.hpp"

namespace srchart {

// Fully connected regression network: tanh hidden layers, identity output.
struct NetworkConfig {
  int input_width = static_cast<int>(kFeatureCount);
  std::vector<int> hidden_widths = {64, 48, 32, 24, 16, 8};
  int output_width = static_cast<int>(kTargetCount);
};

inline constexpr std::size_t kHiddenLayers = 6;

/// Throws DomainError unless there are six positive hidden widths and positive
/// input/output widths.
void validate(const NetworkConfig& config);

struct TrainConfig {
  double learning_rate = 0.02;
  double momentum = 0.9;
  int epochs = 10000;
  int validation_frequency = 10;
  std::uint64_t seed = 1;
  bool minibatch = false;  // per-epoch shuffled mini-batches instead of full batch
  int batch_size = 32;
};

struct SplitSpec {
  double train = 0.85;
  double validation = 0.135;
  double test = 0.015;
  std::uint64_t seed = 1;
};

struct DatasetSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

/// Validation and test sizes are the nearest integers to their fractions of
/// `count`; train takes the remainder. Throws DomainError if any part is empty.
std::array<std::size_t, 3> split_sizes(std::size_t count, const SplitSpec& spec);

/// Fisher-Yates shuffle of 0..count-1 with Rng(spec.seed), then cut in order
/// train | validation | test.
DatasetSplit split_dataset(std::size_t count, const SplitSpec& spec);

// Column-wise standardization (one sample per column).
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;  // 1 where the training variance is zero

  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd invert(const Eigen::MatrixXd& z) const;
};

/// Mean and population standard deviation per row of `x`. Zero-variance rows
/// are only centred, and a warning is issued.
Standardizer fit_standardizer(const Eigen::MatrixXd& x, std::span<const std::string_view> names = {});

struct Normalizer {
  Standardizer features;
  Standardizer targets;
};

class Network {
 public:
  Network() = default;
  explicit Network(const NetworkConfig& config);  // all weights zero

  /// Uniform(-sqrt(3/fan_in), sqrt(3/fan_in)) weights from Rng(seed), zero biases.
  void initialize(std::uint64_t seed);

  const NetworkConfig& config() const { return config_; }
  std::size_t layer_count() const { return weights_.size(); }
  Eigen::MatrixXd& weights(std::size_t layer) { return weights_[layer]; }
  const Eigen::MatrixXd& weights(std::size_t layer) const { return weights_[layer]; }
  Eigen::VectorXd& bias(std::size_t layer) { return biases_[layer]; }
  const Eigen::VectorXd& bias(std::size_t layer) const { return biases_[layer]; }

  /// One column per sample.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;

  struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
  };

  /// Mean squared error over every output of every sample.
  double loss(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) const;
  /// Loss and its gradient by backpropagation.
  double loss_and_gradient(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                           Gradients& grad) const;

 private:
  NetworkConfig config_;
  std::vector<Eigen::MatrixXd> weights_;  // [out][in]
  std::vector<Eigen::VectorXd> biases_;
};

struct GradientCheck {
  std::vector<double> relative_error;  // per layer, weights and biases together
  double max_relative_error = 0.0;
};

/// Central differences with the given step against backpropagation;
/// per layer ||g_fd - g_bp|| / max(||g_fd||, ||g_bp||).
GradientCheck gradient_check(const Network& net, const Eigen::MatrixXd& x,
                             const Eigen::MatrixXd& y, double step = 1e-5);

struct LogEntry {
  int epoch;
  double train_loss;
  double validation_loss;
};

/// SGD with momentum on standardized data; validation loss every
/// cfg.validation_frequency epochs (and at the last epoch). Throws
/// TrainingDiverged on a non-finite loss.
std::vector<LogEntry> train_network(Network& net, const TrainConfig& cfg,
                                    const Eigen::MatrixXd& train_x, const Eigen::MatrixXd& train_y,
                                    const Eigen::MatrixXd& validation_x,
                                    const Eigen::MatrixXd& validation_y);

struct MetricsReport {
  double rmse_validation = 0.0;        // standardized targets
  std::array<double, 3> mse{};         // train, validation, test; standardized targets
  std::array<double, 3> mae_train{};   // per target, original units
  std::array<double, 3> mae_validation{};
  std::array<double, 3> mae_test{};
  std::array<double, 3> r2_train{};
  std::array<double, 3> r2_test{};
};

struct TrainedNetwork {
  NetworkConfig config;
  TrainConfig train_config;
  SplitSpec split;
  Network network;
  Normalizer normalizer;
  std::vector<LogEntry> log;
  MetricsReport metrics;
};

/// Features (11 x count) and targets (3 x count) of the selected samples.
Eigen::MatrixXd feature_matrix(const std::vector<LabeledSample>& samples,
                               std::span<const std::size_t> rows);
Eigen::MatrixXd target_matrix(const std::vector<LabeledSample>& samples,
                              std::span<const std::size_t> rows);

/// Split, normalize with train statistics, initialize from cfg.seed, train,
/// and evaluate.
TrainedNetwork train(const NetworkConfig& config, const TrainConfig& cfg,
                     const std::vector<LabeledSample>& samples, const SplitSpec& split);

inline constexpr double kMinPredictedHeight = 1e-6;

struct Prediction {
  SNDParams params;
  bool height_clamped = false;
};

/// Throws DomainError unless `features` has exactly 11 entries.
Prediction predict(const TrainedNetwork& model, std::span<const double> features);

std::string model_to_json(const TrainedNetwork& model);
/// Throws SchemaError on a malformed or mismatched document.
TrainedNetwork model_from_json(std::string_view text);

}  // namespace srchart
