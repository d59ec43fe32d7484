#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "srchart/srdist.hpp"
#include "srchart/tie_model.hpp"

namespace srchart {

// Measuring device: X' = floor((alpha1 + alpha2 X + eps) / eta + 0.5) * eta.
struct MeasurementModel {
  double eta = 1.0;
  double alpha1 = 0.0;
  double alpha2 = 1.0;
  double epsilon_sd = 0.0;
};

/// Throws DomainError unless eta > 0 and epsilon_sd >= 0.
void validate(const MeasurementModel& model);

/// Number of resolution steps: floor((alpha1 + alpha2 x + noise) / eta + 0.5).
std::int64_t measure_steps(double x, const MeasurementModel& model, double noise);
/// measure_steps(...) * eta.
double measure(double x, const MeasurementModel& model, double noise);

// Reps are processed in blocks of this size; block b draws from Rng(seed, b),
// so any thread count produces the same numbers.
inline constexpr std::uint64_t kRepsPerBlock = 4096;

struct SignCounts {
  std::uint64_t minus = 0;
  std::uint64_t zero = 0;
  std::uint64_t plus = 0;

  std::uint64_t total() const { return minus + zero + plus; }
};

/// Signs of `draws` single measurements for the scenario's process: standard
/// units, nu0 = 0, X = Y + delta, eta = tau (tau = 0 reads X exactly).
SignCounts simulate_signs(const Scenario& scenario, std::uint64_t draws, std::uint64_t seed,
                          int threads = 1);

/// Empirical p.m.f. of the tied statistic: each rep measures n values, drops
/// the zero signs and weights the survivors by ranks 1..N in subgroup order.
/// Support is tied_support(n); kind is empirical.
RankDistribution simulate_statistic(const Scenario& scenario, std::uint64_t reps,
                                    std::uint64_t seed, int threads = 1);

inline constexpr std::uint64_t kDefaultRunLengthCap = 1'000'000;

struct RunLengthResult {
  std::uint64_t reps = 0;
  double mean = 0.0;  // capped runs count as the cap
  double sd = 0.0;
  std::uint64_t capped = 0;
  bool all_capped = false;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> histogram;  // (length, count), ascending
};

/// Subgroups until the first SR with SR <= -C or SR >= C.
RunLengthResult simulate_run_length(const Scenario& scenario, std::int64_t c, std::uint64_t reps,
                                    std::uint64_t seed,
                                    std::uint64_t cap = kDefaultRunLengthCap, int threads = 1);

}  // namespace srchart
