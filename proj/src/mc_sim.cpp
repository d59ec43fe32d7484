#include "srchart/mc_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "srchart/error.hpp"
#include "srchart/rng.hpp"

namespace srchart {

void validate(const MeasurementModel& model) {
  if (!(model.eta > 0.0) || !std::isfinite(model.eta)) {
    throw DomainError("measurement model: eta must be positive");
  }
  if (!(model.epsilon_sd >= 0.0)) throw DomainError("measurement model: epsilon_sd must be >= 0");
}

std::int64_t measure_steps(double x, const MeasurementModel& model, double noise) {
  return static_cast<std::int64_t>(
      std::floor((model.alpha1 + model.alpha2 * x + noise) / model.eta + 0.5));
}

double measure(double x, const MeasurementModel& model, double noise) {
  return static_cast<double>(measure_steps(x, model, noise)) * model.eta;
}

namespace {

// Marsaglia polar method on top of Rng.
class NormalSource {
 public:
  explicit NormalSource(Rng& rng) : rng_(rng) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * rng_.uniform() - 1.0;
      v = 2.0 * rng_.uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  Rng& rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Draws one measured sign for the scenario.
class SignSampler {
 public:
  SignSampler(const Scenario& scenario, Rng& rng)
      : dist_(scenario.benchmark().distribution),
        delta_(scenario.delta),
        normals_(rng) {
    model_.eta = scenario.tau;
    exact_ = scenario.tau == 0.0;
  }

  int next() {
    const double x = dist_.from_standard_normal(normals_.next()) + delta_;
    if (exact_) return (x > 0.0) - (x < 0.0);
    const std::int64_t k = measure_steps(x, model_, 0.0);
    return (k > 0) - (k < 0);
  }

 private:
  const JohnsonDistribution& dist_;
  double delta_;
  NormalSource normals_;
  MeasurementModel model_;
  bool exact_ = false;
};

// Runs body(block, first_rep, count) over all blocks on `threads` workers.
template <typename Body>
void for_each_block(std::uint64_t reps, int threads, Body&& body) {
  const std::uint64_t blocks = (reps + kRepsPerBlock - 1) / kRepsPerBlock;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::uint64_t b = next++; b < blocks; b = next++) {
      try {
        const std::uint64_t first = b * kRepsPerBlock;
        body(b, std::min(kRepsPerBlock, reps - first));
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
}

std::int64_t draw_statistic(SignSampler& sampler, int n) {
  std::int64_t sr = 0;
  std::int64_t rank = 0;
  for (int k = 0; k < n; ++k) {
    const int sign = sampler.next();
    if (sign != 0) sr += sign * ++rank;
  }
  return sr;
}

}  // namespace

SignCounts simulate_signs(const Scenario& scenario, std::uint64_t draws, std::uint64_t seed,
                          int threads) {
  if (draws == 0) throw DomainError("simulate_signs: draws must be >= 1");
  const std::uint64_t blocks = (draws + kRepsPerBlock - 1) / kRepsPerBlock;
  std::vector<SignCounts> per_block(blocks);
  for_each_block(draws, threads, [&](std::uint64_t block, std::uint64_t count) {
    Rng rng(seed, block);
    SignSampler sampler(scenario, rng);
    SignCounts local;
    for (std::uint64_t i = 0; i < count; ++i) {
      const int s = sampler.next();
      (s < 0 ? local.minus : s > 0 ? local.plus : local.zero) += 1;
    }
    per_block[block] = local;
  });
  SignCounts out;
  for (const auto& c : per_block) {
    out.minus += c.minus;
    out.zero += c.zero;
    out.plus += c.plus;
  }
  return out;
}

RankDistribution simulate_statistic(const Scenario& scenario, std::uint64_t reps,
                                    std::uint64_t seed, int threads) {
  if (reps == 0) throw DomainError("simulate_statistic: reps must be >= 1");
  const std::int64_t top = max_rank_sum(scenario.n);
  const std::size_t width = static_cast<std::size_t>(2 * top + 1);
  const std::uint64_t blocks = (reps + kRepsPerBlock - 1) / kRepsPerBlock;
  std::vector<std::vector<std::uint64_t>> per_block(blocks);
  for_each_block(reps, threads, [&](std::uint64_t block, std::uint64_t count) {
    Rng rng(seed, block);
    SignSampler sampler(scenario, rng);
    std::vector<std::uint64_t> local(width, 0);
    for (std::uint64_t i = 0; i < count; ++i) {
      ++local[static_cast<std::size_t>(draw_statistic(sampler, scenario.n) + top)];
    }
    per_block[block] = std::move(local);
  });
  std::vector<std::uint64_t> counts(width, 0);
  for (const auto& local : per_block) {
    for (std::size_t i = 0; i < width; ++i) counts[i] += local[i];
  }
  RankDistribution out;
  out.kind = DistributionKind::empirical;
  out.support = tied_support(scenario.n);
  out.mass.resize(width);
  for (std::size_t i = 0; i < width; ++i) {
    out.mass[i] = static_cast<double>(counts[i]) / static_cast<double>(reps);
  }
  return out;
}

RunLengthResult simulate_run_length(const Scenario& scenario, std::int64_t c, std::uint64_t reps,
                                    std::uint64_t seed, std::uint64_t cap, int threads) {
  if (reps == 0) throw DomainError("simulate_run_length: reps must be >= 1");
  if (cap == 0) throw DomainError("simulate_run_length: cap must be >= 1");
  if (c < 1) throw DomainError("simulate_run_length: C must be >= 1");

  RunLengthResult out;
  out.reps = reps;
  if (c > max_rank_sum(scenario.n)) {
    // |SR| never reaches C, so no run can end before the cap.
    out.mean = static_cast<double>(cap);
    out.capped = reps;
    out.all_capped = true;
    out.histogram = {{cap, reps}};
    return out;
  }

  const std::uint64_t blocks = (reps + kRepsPerBlock - 1) / kRepsPerBlock;
  std::vector<std::vector<std::uint64_t>> lengths(blocks);
  std::vector<std::uint64_t> capped(blocks, 0);
  for_each_block(reps, threads, [&](std::uint64_t block, std::uint64_t count) {
    Rng rng(seed, block);
    SignSampler sampler(scenario, rng);
    std::vector<std::uint64_t> local(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      std::uint64_t t = 1;
      for (;; ++t) {
        const std::int64_t sr = draw_statistic(sampler, scenario.n);
        if (sr <= -c || sr >= c) break;
        if (t == cap) {
          ++capped[block];
          break;
        }
      }
      local[i] = t;
    }
    lengths[block] = std::move(local);
  });

  std::map<std::uint64_t, std::uint64_t> histogram;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& local : lengths) {
    for (std::uint64_t len : local) {
      ++histogram[len];
      const double v = static_cast<double>(len);
      sum += v;
      sum_sq += v * v;
    }
  }
  for (std::uint64_t k : capped) out.capped += k;
  const double count = static_cast<double>(reps);
  out.mean = sum / count;
  out.sd = reps > 1 ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / count) / (count - 1.0))) : 0.0;
  out.all_capped = out.capped == reps;
  out.histogram.assign(histogram.begin(), histogram.end());
  return out;
}

}  // namespace srchart
