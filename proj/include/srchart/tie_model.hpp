#pragma once

#include <vector>

#include "srchart/johnson.hpp"

namespace srchart {

// One table row: benchmark process, standardized resolution tau = eta / sigma,
// standardized shift delta = (nu1 - nu0) / sigma and subgroup size n.
struct Scenario {
  /// Throws DomainError for tau < 0, n < 1 and std::out_of_range for bad ids.
  Scenario(int case_id, double tau, double delta, int n);

  const BenchmarkCase& benchmark() const { return srchart::benchmark_case(case_id); }

  int case_id;
  double tau;
  double delta;
  int n;
};

struct SignProbabilities {
  double p_minus = 0.0;
  double p_zero = 0.0;
  double p_plus = 0.0;
  // Sign law after dropping ties.
  double pi_minus = 0.0;
  double pi_plus = 0.0;
};

struct ConditionalProbs {
  double pi_minus;
  double pi_plus;
};

/// Throws DegenerateScenario when p_minus + p_plus == 0.
ConditionalProbs conditional_probs(double p_minus, double p_plus);

/// p-1 = F(-tau/2 - delta), p0 = F(tau/2 - delta) - p-1, p+1 = 1 - F(tau/2 - delta).
/// Throws DegenerateScenario if every observation is a tie.
SignProbabilities sign_probabilities(const JohnsonDistribution& dist, double tau, double delta);
SignProbabilities sign_probabilities(const Scenario& scenario);

/// Round half away from zero to `digits` decimals.
double round_to(double x, int digits);

struct SignGridCell {
  double tau;
  int case_id;
  double delta;
  SignProbabilities probs;
};

const std::vector<double>& grid_taus();
const std::vector<double>& grid_deltas();

/// Every (tau, case, delta) combination in canonical order.
std::vector<SignGridCell> sign_probability_grid();

struct SignGridComparison {
  SignGridCell cell;
  double published_minus;
  double published_plus;
  double rounded_minus;
  double rounded_plus;
  bool minus_matches;
  bool plus_matches;
  // Mismatch in the tau = 0.1 block, where the published table repeats
  // adjacent delta columns.
  bool flagged_typo;
  // The published value equals the one printed in a neighbouring delta column.
  bool duplicates_neighbour;

  bool matches() const { return minus_matches && plus_matches; }
};

std::vector<SignGridComparison> compare_with_published(double tolerance = 5e-4);

}  // namespace srchart
