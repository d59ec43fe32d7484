#include "srchart/snd_fit.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <sstream>
#include <mutex>
#include <optional>
#include <thread>

#include <nlohmann/json.hpp>

#include "srchart/error.hpp"
#include "srchart/io.hpp"
#include "srchart/simplex.hpp"

namespace srchart {
namespace {

constexpr std::array<double, kFitStarts> kStartWidths = {1.0, 0.7, 1.4, 0.5, 2.0};

// (standardized centre offset u, log width theta) -> (a, b, c) with a = 1.
SNDParams from_search(double u, double theta, const TiedMoments& m) {
  const double r = std::exp(theta);
  const double centre = m.m1p + u * std::sqrt(m.mu2p);
  SNDParams p;
  p.a = 1.0;
  p.b = (centre + r * m.m1p) / *m.gamma2;
  p.c = -r / *m.gamma1;
  return p;
}

double mean_squared_error(const std::vector<double>& raw, const std::vector<double>& target) {
  double total = 0.0;
  for (double v : raw) total += v;
  if (!(total > 0.0) || !std::isfinite(total)) return HUGE_VAL;
  double sse = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double d = raw[i] / total - target[i];
    sse += d * d;
  }
  return sse / static_cast<double>(raw.size());
}

}  // namespace

SndFitResult fit_snd(const RankDistribution& target, const TiedMoments& moments) {
  if (!moments.gamma1 || !moments.gamma2 || *moments.gamma1 == 0.0) {
    throw UseNormalApproximation("fit_snd: symmetric scenario (gamma1 = 0); use the normal approximation");
  }
  if (target.support.empty()) throw DomainError("fit_snd: empty target");

  const Objective objective = [&](std::span<const double> x) {
    const auto params = from_search(x[0], x[1], moments);
    return mean_squared_error(snd_unnormalized(params, moments, target.support), target.mass);
  };

  SimplexOptions options;
  options.max_evaluations = 1500;
  options.f_tolerance = 1e-12;
  options.f_floor = 1e-32;
  options.x_tolerance = 1e-9;
  const std::array<double, 2> steps = {0.1, 0.1};

  SimplexResult best{{}, HUGE_VAL, 0, false};
  int evaluations = 0;
  for (double width : kStartWidths) {
    auto result = nelder_mead(objective, {0.0, std::log(width)}, steps, options);
    evaluations += result.evaluations;
    if (result.value < best.value) best = std::move(result);
  }
  if (best.x.empty()) throw DomainError("fit_snd: objective undefined at every start");

  SndFitResult out{};
  out.params = from_search(best.x[0], best.x[1], moments);
  double raw_total = 0.0;
  for (double v : snd_unnormalized(out.params, moments, target.support)) raw_total += v;
  out.params.a = 1.0 / raw_total;
  out.objective = best.value;
  out.total_variation = total_variation(snd_pmf(out.params, moments, target.support), target);
  out.evaluations = evaluations;
  out.converged = best.converged;
  return out;
}

SNDParams fit_snd_params(const RankDistribution& target, const TiedMoments& moments) {
  return fit_snd(target, moments).params;
}

FeatureVector feature_vector(double pi_plus, const TiedMoments& m, int n) {
  if (!m.gamma1 || !m.gamma2) {
    throw UseNormalApproximation("feature_vector: shape coefficients undefined (mu2' = 0)");
  }
  return {pi_plus, m.m1p, m.m2p, m.m3p, m.m4p, m.mu2p, m.mu3p, m.mu4p,
          *m.gamma1, *m.gamma2, static_cast<double>(n)};
}

std::vector<Scenario> dataset_scenarios() {
  static constexpr std::array<double, 3> taus = {0.05, 0.1, 0.2};
  static constexpr std::array<double, 8> deltas = {-1.0, -0.5, -0.2, -0.1, 0.1, 0.2, 0.5, 1.0};
  static constexpr std::array<int, 2> sizes = {20, 50};
  std::vector<Scenario> out;
  out.reserve(taus.size() * 6 * deltas.size() * sizes.size());
  for (double tau : taus) {
    for (const auto& bench : benchmark_cases()) {
      for (double delta : deltas) {
        for (int n : sizes) out.emplace_back(bench.id, tau, delta, n);
      }
    }
  }
  return out;
}

LabeledSample label_scenario(const Scenario& scenario) {
  const auto probs = sign_probabilities(scenario);
  const auto moments = tied_moments(scenario.n, probs.p_zero, probs.pi_plus);
  const auto target = exact_pmf_tied(scenario.n, probs);
  const auto fit = fit_snd(target, moments);
  const auto fitted = snd_pmf(fit.params, moments, target.support);
  const std::int64_t top = max_rank_sum(scenario.n);
  return LabeledSample{scenario,
                       feature_vector(probs.pi_plus, moments, scenario.n),
                       fit.params,
                       fit.total_variation,
                       binned_total_variation(fitted, target, -top, 2),
                       !(fit.total_variation <= kFitTolerance) || !fit.converged};
}

std::vector<LabeledSample> build_training_dataset(int threads) {
  const auto scenarios = dataset_scenarios();
  std::vector<std::optional<LabeledSample>> slots(scenarios.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      try {
        slots[i] = label_scenario(scenarios[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int count = std::max(1, threads);
  if (count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<LabeledSample> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<std::string> dataset_csv_columns() {
  std::vector<std::string> cols = {"case_id", "tau", "delta"};
  for (auto name : kFeatureNames) cols.emplace_back(name);
  for (auto name : kTargetNames) cols.emplace_back(name);
  cols.insert(cols.end(), {"fit_quality", "binned_fit_quality", "flagged"});
  return cols;
}

std::string dataset_to_csv(const std::vector<LabeledSample>& samples) {
  std::string out = csv_join(dataset_csv_columns()) + "\n";
  for (const auto& s : samples) {
    std::vector<std::string> row = {std::to_string(s.scenario.case_id),
                                    format_double(s.scenario.tau),
                                    format_double(s.scenario.delta)};
    for (double f : s.features) row.push_back(format_double(f));
    row.insert(row.end(), {format_double(s.targets.a), format_double(s.targets.b),
                           format_double(s.targets.c), format_double(s.fit_quality),
                           format_double(s.binned_fit_quality), s.flagged ? "1" : "0"});
    out += csv_join(row) + "\n";
  }
  return out;
}

std::string dataset_to_json(const std::vector<LabeledSample>& samples) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : samples) {
    nlohmann::json features = nlohmann::json::object();
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      features[std::string(kFeatureNames[i])] = s.features[i];
    }
    arr.push_back({{"case_id", s.scenario.case_id},
                   {"tau", s.scenario.tau},
                   {"delta", s.scenario.delta},
                   {"n", s.scenario.n},
                   {"features", features},
                   {"targets", {{"a", s.targets.a}, {"b", s.targets.b}, {"c", s.targets.c}}},
                   {"fit_quality", s.fit_quality},
                   {"binned_fit_quality", s.binned_fit_quality},
                   {"flagged", s.flagged}});
  }
  nlohmann::json doc;
  doc["feature_order"] = kFeatureNames;
  doc["samples"] = std::move(arr);
  return doc.dump(2) + "\n";
}

namespace {

LabeledSample sample_from_values(int case_id, double tau, double delta, const FeatureVector& f,
                                 const SNDParams& t, double quality, double binned,
                                 bool flagged) {
  const double n = f[kFeatureCount - 1];
  if (n != std::floor(n) || n < 1) throw SchemaError("dataset: feature n must be a positive integer");
  return LabeledSample{Scenario(case_id, tau, delta, static_cast<int>(n)), f, t, quality, binned,
                       flagged};
}

std::vector<LabeledSample> dataset_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  const auto rows = read_csv(in);
  const auto columns = dataset_csv_columns();
  if (rows.empty() || rows.front() != columns) throw SchemaError("dataset CSV: unexpected header");
  std::vector<LabeledSample> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != columns.size()) {
      throw SchemaError("dataset CSV: row " + std::to_string(r) + " has " +
                        std::to_string(row.size()) + " fields");
    }
    FeatureVector f{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) f[i] = parse_double(row[3 + i]);
    const std::size_t t0 = 3 + kFeatureCount;
    const SNDParams t{parse_double(row[t0]), parse_double(row[t0 + 1]), parse_double(row[t0 + 2])};
    out.push_back(sample_from_values(static_cast<int>(parse_double(row[0])), parse_double(row[1]),
                                     parse_double(row[2]), f, t, parse_double(row[t0 + 3]),
                                     parse_double(row[t0 + 4]), row[t0 + 5] == "1"));
  }
  return out;
}

std::vector<LabeledSample> dataset_from_json(std::string_view text) {
  std::vector<LabeledSample> out;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& s : doc.at("samples")) {
      FeatureVector f{};
      for (std::size_t i = 0; i < kFeatureCount; ++i) {
        f[i] = s.at("features").at(std::string(kFeatureNames[i])).get<double>();
      }
      const auto& t = s.at("targets");
      out.push_back(sample_from_values(
          s.at("case_id").get<int>(), s.at("tau").get<double>(), s.at("delta").get<double>(), f,
          {t.at("a").get<double>(), t.at("b").get<double>(), t.at("c").get<double>()},
          s.at("fit_quality").get<double>(), s.value("binned_fit_quality", 0.0),
          s.at("flagged").get<bool>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("dataset JSON: ") + e.what());
  }
  return out;
}

}  // namespace

std::vector<LabeledSample> dataset_from_text(std::string_view text) {
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    return ch == '{' ? dataset_from_json(text) : dataset_from_csv(text);
  }
  throw SchemaError("dataset: empty file");
}

}  // namespace srchart
