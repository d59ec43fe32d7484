#include "srchart/nnreg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "srchart/error.hpp"
#include "srchart/io.hpp"
#include "srchart/log.hpp"
#include "srchart/rng.hpp"

namespace srchart {

void validate(const NetworkConfig& config) {
  if (config.input_width < 1 || config.output_width < 1) {
    throw DomainError("network: input and output widths must be positive");
  }
  if (config.hidden_widths.size() != kHiddenLayers) {
    throw DomainError("network: exactly six hidden layers are required");
  }
  for (int w : config.hidden_widths) {
    if (w < 1) throw DomainError("network: hidden widths must be positive");
  }
}

std::array<std::size_t, 3> split_sizes(std::size_t count, const SplitSpec& spec) {
  if (!(spec.train >= 0 && spec.validation >= 0 && spec.test >= 0)) {
    throw DomainError("split: fractions must be non-negative");
  }
  const auto nearest = [count](double fraction) {
    return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(count)));
  };
  const std::size_t validation = nearest(spec.validation);
  const std::size_t test = nearest(spec.test);
  if (validation + test >= count || validation == 0 || test == 0) {
    throw DomainError("split: every part must be non-empty");
  }
  return {count - validation - test, validation, test};
}

DatasetSplit split_dataset(std::size_t count, const SplitSpec& spec) {
  const auto sizes = split_sizes(count, spec);
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.seed);
  for (std::size_t i = count; i > 1; --i) {
    std::swap(order[i - 1], order[rng.below(i)]);
  }
  DatasetSplit out;
  const auto b = order.begin();
  out.train.assign(b, b + static_cast<std::ptrdiff_t>(sizes[0]));
  out.validation.assign(b + static_cast<std::ptrdiff_t>(sizes[0]),
                        b + static_cast<std::ptrdiff_t>(sizes[0] + sizes[1]));
  out.test.assign(b + static_cast<std::ptrdiff_t>(sizes[0] + sizes[1]), order.end());
  return out;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& x) const {
  return (x.colwise() - mean).array().colwise() / scale.array();
}

Eigen::MatrixXd Standardizer::invert(const Eigen::MatrixXd& z) const {
  return (z.array().colwise() * scale.array()).matrix().colwise() + mean;
}

Standardizer fit_standardizer(const Eigen::MatrixXd& x, std::span<const std::string_view> names) {
  if (x.cols() == 0) throw DomainError("normalizer: no training samples");
  Standardizer out;
  out.mean = x.rowwise().mean();
  out.scale.resize(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double var = (x.row(r).array() - out.mean(r)).square().mean();
    if (var > 0.0) {
      out.scale(r) = std::sqrt(var);
    } else {
      out.scale(r) = 1.0;
      const std::string name = static_cast<std::size_t>(r) < names.size()
                                   ? std::string(names[static_cast<std::size_t>(r)])
                                   : "row " + std::to_string(r);
      warn("normalizer: " + name + " has zero variance in the training split; centring only");
    }
  }
  return out;
}

Network::Network(const NetworkConfig& config) : config_(config) {
  validate(config);
  int fan_in = config.input_width;
  auto add = [&](int width) {
    weights_.push_back(Eigen::MatrixXd::Zero(width, fan_in));
    biases_.push_back(Eigen::VectorXd::Zero(width));
    fan_in = width;
  };
  for (int w : config.hidden_widths) add(w);
  add(config.output_width);
}

void Network::initialize(std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    auto& w = weights_[l];
    const double limit = std::sqrt(3.0 / static_cast<double>(w.cols()));
    // Row-major fill so the draw order matches the stored layout.
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = limit * (2.0 * rng.uniform() - 1.0);
    }
    biases_[l].setZero();
  }
}

Eigen::MatrixXd Network::forward(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd a = x;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd z = (weights_[l] * a).colwise() + biases_[l];
    a = l + 1 < weights_.size() ? Eigen::MatrixXd(z.array().tanh()) : z;
  }
  return a;
}

double Network::loss(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) const {
  return (forward(x) - y).array().square().mean();
}

double Network::loss_and_gradient(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                  Gradients& grad) const {
  const std::size_t layers = weights_.size();
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(layers + 1);
  acts.push_back(x);
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = (weights_[l] * acts.back()).colwise() + biases_[l];
    acts.push_back(l + 1 < layers ? Eigen::MatrixXd(z.array().tanh()) : z);
  }
  const Eigen::MatrixXd residual = acts.back() - y;
  const double loss = residual.array().square().mean();

  grad.weights.resize(layers);
  grad.biases.resize(layers);
  Eigen::MatrixXd delta = residual * (2.0 / static_cast<double>(residual.size()));
  for (std::size_t l = layers; l-- > 0;) {
    grad.weights[l] = delta * acts[l].transpose();
    grad.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      delta = ((weights_[l].transpose() * delta).array() * (1.0 - acts[l].array().square()))
                  .matrix();
    }
  }
  return loss;
}

GradientCheck gradient_check(const Network& net, const Eigen::MatrixXd& x,
                             const Eigen::MatrixXd& y, double step) {
  Network::Gradients analytic;
  net.loss_and_gradient(x, y, analytic);
  Network probe = net;
  GradientCheck out;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    double diff2 = 0.0;
    double fd2 = 0.0;
    double bp2 = 0.0;
    auto visit = [&](double& param, double bp) {
      const double saved = param;
      param = saved + step;
      const double up = probe.loss(x, y);
      param = saved - step;
      const double down = probe.loss(x, y);
      param = saved;
      const double fd = (up - down) / (2.0 * step);
      diff2 += (fd - bp) * (fd - bp);
      fd2 += fd * fd;
      bp2 += bp * bp;
    };
    auto& w = probe.weights(l);
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) visit(w(i, j), analytic.weights[l](i, j));
    }
    auto& b = probe.bias(l);
    for (Eigen::Index i = 0; i < b.size(); ++i) visit(b(i), analytic.biases[l](i));
    const double denom = std::max(std::sqrt(fd2), std::sqrt(bp2));
    const double rel = denom > 0.0 ? std::sqrt(diff2) / denom : 0.0;
    out.relative_error.push_back(rel);
    out.max_relative_error = std::max(out.max_relative_error, rel);
  }
  return out;
}

std::vector<LogEntry> train_network(Network& net, const TrainConfig& cfg,
                                    const Eigen::MatrixXd& train_x, const Eigen::MatrixXd& train_y,
                                    const Eigen::MatrixXd& validation_x,
                                    const Eigen::MatrixXd& validation_y) {
  if (cfg.epochs < 1 || cfg.validation_frequency < 1) {
    throw DomainError("train: epochs and validation frequency must be positive");
  }
  if (cfg.minibatch && cfg.batch_size < 1) throw DomainError("train: batch size must be positive");
  const std::size_t layers = net.layer_count();
  Network::Gradients velocity;
  for (std::size_t l = 0; l < layers; ++l) {
    velocity.weights.push_back(Eigen::MatrixXd::Zero(net.weights(l).rows(), net.weights(l).cols()));
    velocity.biases.push_back(Eigen::VectorXd::Zero(net.bias(l).size()));
  }
  auto update = [&](const Network::Gradients& grad) {
    for (std::size_t l = 0; l < layers; ++l) {
      velocity.weights[l] = cfg.momentum * velocity.weights[l] - cfg.learning_rate * grad.weights[l];
      velocity.biases[l] = cfg.momentum * velocity.biases[l] - cfg.learning_rate * grad.biases[l];
      net.weights(l) += velocity.weights[l];
      net.bias(l) += velocity.biases[l];
    }
  };

  const Eigen::Index count = train_x.cols();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng shuffle_rng(cfg.seed, 1);

  std::vector<LogEntry> log;
  Network::Gradients grad;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    double train_loss;
    if (!cfg.minibatch) {
      train_loss = net.loss_and_gradient(train_x, train_y, grad);
      if (!std::isfinite(train_loss)) {
        throw TrainingDiverged(epoch, "training diverged at epoch " + std::to_string(epoch));
      }
      update(grad);
    } else {
      for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[shuffle_rng.below(i)]);
      }
      double weighted = 0.0;
      for (Eigen::Index start = 0; start < count; start += cfg.batch_size) {
        const Eigen::Index size = std::min<Eigen::Index>(cfg.batch_size, count - start);
        Eigen::MatrixXd bx(train_x.rows(), size);
        Eigen::MatrixXd by(train_y.rows(), size);
        for (Eigen::Index k = 0; k < size; ++k) {
          bx.col(k) = train_x.col(order[static_cast<std::size_t>(start + k)]);
          by.col(k) = train_y.col(order[static_cast<std::size_t>(start + k)]);
        }
        const double batch_loss = net.loss_and_gradient(bx, by, grad);
        if (!std::isfinite(batch_loss)) {
          throw TrainingDiverged(epoch, "training diverged at epoch " + std::to_string(epoch));
        }
        weighted += batch_loss * static_cast<double>(size);
        update(grad);
      }
      train_loss = weighted / static_cast<double>(count);
    }
    if (epoch % cfg.validation_frequency == 0 || epoch == cfg.epochs) {
      const double validation_loss =
          validation_x.cols() > 0 ? net.loss(validation_x, validation_y) : 0.0;
      if (!std::isfinite(validation_loss)) {
        throw TrainingDiverged(epoch, "validation loss non-finite at epoch " + std::to_string(epoch));
      }
      log.push_back({epoch, train_loss, validation_loss});
    }
  }
  return log;
}

Eigen::MatrixXd feature_matrix(const std::vector<LabeledSample>& samples,
                               std::span<const std::size_t> rows) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(kFeatureCount), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      x(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(k)) = samples.at(rows[k]).features[f];
    }
  }
  return x;
}

Eigen::MatrixXd target_matrix(const std::vector<LabeledSample>& samples,
                              std::span<const std::size_t> rows) {
  Eigen::MatrixXd y(static_cast<Eigen::Index>(kTargetCount), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& t = samples.at(rows[k]).targets;
    y(0, static_cast<Eigen::Index>(k)) = t.a;
    y(1, static_cast<Eigen::Index>(k)) = t.b;
    y(2, static_cast<Eigen::Index>(k)) = t.c;
  }
  return y;
}

namespace {

std::array<double, 3> mae(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& truth) {
  std::array<double, 3> out{};
  for (Eigen::Index r = 0; r < 3; ++r) out[r] = (pred.row(r) - truth.row(r)).cwiseAbs().mean();
  return out;
}

std::array<double, 3> r_squared(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& truth) {
  std::array<double, 3> out{};
  for (Eigen::Index r = 0; r < 3; ++r) {
    const double ss_res = (pred.row(r) - truth.row(r)).squaredNorm();
    const double ss_tot = (truth.row(r).array() - truth.row(r).mean()).square().sum();
    out[r] = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : -HUGE_VAL);
  }
  return out;
}

}  // namespace

TrainedNetwork train(const NetworkConfig& config, const TrainConfig& cfg,
                     const std::vector<LabeledSample>& samples, const SplitSpec& split) {
  const auto parts = split_dataset(samples.size(), split);
  const Eigen::MatrixXd tx = feature_matrix(samples, parts.train);
  const Eigen::MatrixXd ty = target_matrix(samples, parts.train);
  const Eigen::MatrixXd vx = feature_matrix(samples, parts.validation);
  const Eigen::MatrixXd vy = target_matrix(samples, parts.validation);
  const Eigen::MatrixXd sx = feature_matrix(samples, parts.test);
  const Eigen::MatrixXd sy = target_matrix(samples, parts.test);

  TrainedNetwork model;
  model.config = config;
  model.train_config = cfg;
  model.split = split;
  model.normalizer.features = fit_standardizer(tx, kFeatureNames);
  model.normalizer.targets = fit_standardizer(ty, kTargetNames);
  model.network = Network(config);
  model.network.initialize(cfg.seed);

  const auto& fn = model.normalizer.features;
  const auto& tn = model.normalizer.targets;
  const Eigen::MatrixXd ntx = fn.apply(tx), nty = tn.apply(ty);
  const Eigen::MatrixXd nvx = fn.apply(vx), nvy = tn.apply(vy);
  const Eigen::MatrixXd nsx = fn.apply(sx), nsy = tn.apply(sy);
  model.log = train_network(model.network, cfg, ntx, nty, nvx, nvy);

  auto& m = model.metrics;
  m.mse = {model.network.loss(ntx, nty), model.network.loss(nvx, nvy),
           model.network.loss(nsx, nsy)};
  m.rmse_validation = std::sqrt(m.mse[1]);
  const Eigen::MatrixXd ptrain = tn.invert(model.network.forward(ntx));
  const Eigen::MatrixXd pval = tn.invert(model.network.forward(nvx));
  const Eigen::MatrixXd ptest = tn.invert(model.network.forward(nsx));
  m.mae_train = mae(ptrain, ty);
  m.mae_validation = mae(pval, vy);
  m.mae_test = mae(ptest, sy);
  m.r2_train = r_squared(ptrain, ty);
  m.r2_test = r_squared(ptest, sy);
  return model;
}

Prediction predict(const TrainedNetwork& model, std::span<const double> features) {
  if (features.size() != kFeatureCount) {
    throw DomainError("predict: expected 11 features, got " + std::to_string(features.size()));
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(kFeatureCount), 1);
  for (std::size_t i = 0; i < kFeatureCount; ++i) x(static_cast<Eigen::Index>(i), 0) = features[i];
  const Eigen::MatrixXd y = model.normalizer.targets.invert(
      model.network.forward(model.normalizer.features.apply(x)));
  Prediction out;
  out.params = {y(0, 0), y(1, 0), y(2, 0)};
  if (!(out.params.a > kMinPredictedHeight)) {
    out.params.a = kMinPredictedHeight;
    out.height_clamped = true;
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON model format
// ---------------------------------------------------------------------------
namespace {

using nlohmann::json;

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from(const json& j, Eigen::Index expected) {
  const auto values = j.get<std::vector<double>>();
  if (static_cast<Eigen::Index>(values.size()) != expected) {
    throw SchemaError("model: vector has " + std::to_string(values.size()) + " entries, expected " +
                      std::to_string(expected));
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), expected);
}

json standardizer_json(const Standardizer& s) {
  return {{"mean", vector_json(s.mean)}, {"scale", vector_json(s.scale)}};
}

Standardizer standardizer_from(const json& j, Eigen::Index size) {
  return {vector_from(j.at("mean"), size), vector_from(j.at("scale"), size)};
}

// Metrics can be non-finite (R^2 of a one-sample split); JSON numbers cannot.
json metric_json(double x) { return std::isfinite(x) ? json(x) : json(format_double(x)); }

double metric_from(const json& j) {
  return j.is_string() ? parse_double(j.get<std::string>()) : j.get<double>();
}

json array3(const std::array<double, 3>& a) {
  return json::array({metric_json(a[0]), metric_json(a[1]), metric_json(a[2])});
}

std::array<double, 3> array3_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw SchemaError("model: expected three values");
  return {metric_from(j[0]), metric_from(j[1]), metric_from(j[2])};
}

}  // namespace

std::string model_to_json(const TrainedNetwork& model) {
  json layers = json::array();
  for (std::size_t l = 0; l < model.network.layer_count(); ++l) {
    const auto& w = model.network.weights(l);
    std::vector<double> row_major;
    row_major.reserve(static_cast<std::size_t>(w.size()));
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) row_major.push_back(w(i, j));
    }
    layers.push_back({{"rows", w.rows()},
                      {"cols", w.cols()},
                      {"activation", l + 1 < model.network.layer_count() ? "tanh" : "identity"},
                      {"weights", row_major},
                      {"bias", vector_json(model.network.bias(l))}});
  }
  json log = json::array();
  for (const auto& e : model.log) log.push_back({e.epoch, e.train_loss, e.validation_loss});
  const auto& m = model.metrics;
  const auto& t = model.train_config;
  json doc = {
      {"format", "srchart-mlp"},
      {"format_version", 1},
      {"config",
       {{"input_width", model.config.input_width},
        {"hidden_widths", model.config.hidden_widths},
        {"output_width", model.config.output_width}}},
      {"train_config",
       {{"learning_rate", t.learning_rate},
        {"momentum", t.momentum},
        {"epochs", t.epochs},
        {"validation_frequency", t.validation_frequency},
        {"seed", t.seed},
        {"minibatch", t.minibatch},
        {"batch_size", t.batch_size}}},
      {"split",
       {{"train", model.split.train},
        {"validation", model.split.validation},
        {"test", model.split.test},
        {"seed", model.split.seed}}},
      {"feature_order", kFeatureNames},
      {"target_order", kTargetNames},
      {"normalizer",
       {{"features", standardizer_json(model.normalizer.features)},
        {"targets", standardizer_json(model.normalizer.targets)}}},
      {"layers", layers},
      {"metrics",
       {{"rmse_validation", metric_json(m.rmse_validation)},
        {"mse", array3(m.mse)},
        {"mae_train", array3(m.mae_train)},
        {"mae_validation", array3(m.mae_validation)},
        {"mae_test", array3(m.mae_test)},
        {"r2_train", array3(m.r2_train)},
        {"r2_test", array3(m.r2_test)}}},
      {"log_columns", {"epoch", "train_loss", "validation_loss"}},
      {"log", log}};
  return doc.dump(1) + "\n";
}

TrainedNetwork model_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format") != "srchart-mlp" || doc.at("format_version") != 1) {
      throw SchemaError("model: not a srchart-mlp version 1 document");
    }
    TrainedNetwork model;
    const auto& c = doc.at("config");
    model.config.input_width = c.at("input_width").get<int>();
    model.config.hidden_widths = c.at("hidden_widths").get<std::vector<int>>();
    model.config.output_width = c.at("output_width").get<int>();
    if (model.config.input_width != static_cast<int>(kFeatureCount) ||
        model.config.output_width != static_cast<int>(kTargetCount)) {
      throw SchemaError("model: expected 11 inputs and 3 outputs");
    }
    try {
      model.network = Network(model.config);
    } catch (const DomainError& e) {
      throw SchemaError(std::string("model: ") + e.what());
    }
    const auto& t = doc.at("train_config");
    model.train_config.learning_rate = t.at("learning_rate").get<double>();
    model.train_config.momentum = t.at("momentum").get<double>();
    model.train_config.epochs = t.at("epochs").get<int>();
    model.train_config.validation_frequency = t.at("validation_frequency").get<int>();
    model.train_config.seed = t.at("seed").get<std::uint64_t>();
    model.train_config.minibatch = t.at("minibatch").get<bool>();
    model.train_config.batch_size = t.at("batch_size").get<int>();
    const auto& s = doc.at("split");
    model.split = {s.at("train").get<double>(), s.at("validation").get<double>(),
                   s.at("test").get<double>(), s.at("seed").get<std::uint64_t>()};

    const auto& norm = doc.at("normalizer");
    model.normalizer.features = standardizer_from(norm.at("features"), model.config.input_width);
    model.normalizer.targets = standardizer_from(norm.at("targets"), model.config.output_width);

    const auto& layers = doc.at("layers");
    if (layers.size() != model.network.layer_count()) throw SchemaError("model: layer count mismatch");
    for (std::size_t l = 0; l < layers.size(); ++l) {
      auto& w = model.network.weights(l);
      if (layers[l].at("rows").get<Eigen::Index>() != w.rows() ||
          layers[l].at("cols").get<Eigen::Index>() != w.cols()) {
        throw SchemaError("model: layer " + std::to_string(l) + " shape mismatch");
      }
      const auto values = layers[l].at("weights").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(values.size()) != w.size()) {
        throw SchemaError("model: layer " + std::to_string(l) + " weight count mismatch");
      }
      std::size_t k = 0;
      for (Eigen::Index i = 0; i < w.rows(); ++i) {
        for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = values[k++];
      }
      model.network.bias(l) = vector_from(layers[l].at("bias"), w.rows());
    }

    const auto& m = doc.at("metrics");
    model.metrics.rmse_validation = metric_from(m.at("rmse_validation"));
    model.metrics.mse = array3_from(m.at("mse"));
    model.metrics.mae_train = array3_from(m.at("mae_train"));
    model.metrics.mae_validation = array3_from(m.at("mae_validation"));
    model.metrics.mae_test = array3_from(m.at("mae_test"));
    model.metrics.r2_train = array3_from(m.at("r2_train"));
    model.metrics.r2_test = array3_from(m.at("r2_test"));
    for (const auto& e : doc.at("log")) {
      model.log.push_back({e.at(0).get<int>(), e.at(1).get<double>(), e.at(2).get<double>()});
    }
    return model;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("model: ") + e.what());
  }
}

}  // namespace srchart
