#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "srchart/nnreg.hpp"
#include "srchart/snd_fit.hpp"

namespace srchart {

struct CheckResult {
  int id;
  std::string name;
  bool passed;
  std::string detail;
  double seconds;
};

// Seeds fixed for the released results.
inline constexpr std::uint64_t kReleasedTrainSeed = 1;
inline constexpr std::uint64_t kReleasedSplitSeed = 1;
inline constexpr std::uint64_t kMonteCarloSeed = 20240601;

struct VerifyOptions {
  bool full = true;   // also run the dataset, training and Monte Carlo checks
  int threads = 1;
  std::uint64_t mc_reps = 1'000'000;
  std::uint64_t run_length_reps = 100'000;
  // Reused instead of rebuilding when non-empty.
  std::vector<LabeledSample> dataset;
  // Called after each check completes.
  std::function<void(const CheckResult&)> on_result;
};

CheckResult check_sign_table();
CheckResult check_untied_limits();
CheckResult check_arl0_floor();
CheckResult check_power_sums();
CheckResult check_binomial_moments();
CheckResult check_oracle_moments();
CheckResult check_normal_approximation();
CheckResult check_snd_fits(const std::vector<LabeledSample>& dataset);
CheckResult check_network(const std::vector<LabeledSample>& dataset);
CheckResult check_monte_carlo(std::uint64_t reps, std::uint64_t run_length_reps, int threads);
CheckResult check_arl_tables();

/// Runs checks 1-7 and 11, plus 8-10 when options.full.
std::vector<CheckResult> run_checks(VerifyOptions options);

/// "PASS  3  ARL0 floor: ..." style line.
std::string format_check(const CheckResult& result);

// Independent reference implementations shared with the checks.
namespace brute {

/// Power sums by explicit loops, same order as PowerSums.
PowerSums power_sums(int n);
/// E(N^k) by direct summation of the binomial p.m.f., k = 1..8.
std::array<double, 8> binomial_raw_moments(int n, double p_zero);

}  // namespace brute

}  // namespace srchart
