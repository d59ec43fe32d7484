#include "srchart/tie_model.hpp"

#include <cmath>
#include <string>

#include "srchart/error.hpp"
#include "srchart/reference.hpp"

namespace srchart {

Scenario::Scenario(int case_id, double tau, double delta, int n)
    : case_id(case_id), tau(tau), delta(delta), n(n) {
  srchart::benchmark_case(case_id);
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw DomainError("Scenario: tau must be >= 0");
  if (!std::isfinite(delta)) throw DomainError("Scenario: delta must be finite");
  if (n < 1) throw DomainError("Scenario: n must be >= 1");
}

ConditionalProbs conditional_probs(double p_minus, double p_plus) {
  const double untied = p_minus + p_plus;
  if (!(untied > 0.0)) {
    throw DegenerateScenario("conditional_probs: p-1 + p+1 = 0, every observation is tied");
  }
  return {p_minus / untied, p_plus / untied};
}

SignProbabilities sign_probabilities(const JohnsonDistribution& dist, double tau,
                                     double delta) {
  if (!(tau >= 0.0)) throw DomainError("sign_probabilities: tau must be >= 0");
  SignProbabilities out;
  const double lower = dist.cdf(-tau / 2.0 - delta);
  const double upper = tau == 0.0 ? lower : dist.cdf(tau / 2.0 - delta);
  out.p_minus = lower;
  out.p_zero = upper - lower;
  out.p_plus = 1.0 - upper;
  if (out.p_zero >= 1.0) {
    throw DegenerateScenario("sign_probabilities: p0 = 1, every observation is tied");
  }
  const auto pi = conditional_probs(out.p_minus, out.p_plus);
  out.pi_minus = pi.pi_minus;
  out.pi_plus = pi.pi_plus;
  return out;
}

SignProbabilities sign_probabilities(const Scenario& scenario) {
  return sign_probabilities(scenario.benchmark().distribution, scenario.tau, scenario.delta);
}

double round_to(double x, int digits) {
  const double scale = std::pow(10.0, digits);
  return std::round(x * scale) / scale;
}

const std::vector<double>& grid_taus() {
  static const std::vector<double> taus(reference::kTaus.begin(), reference::kTaus.end());
  return taus;
}

const std::vector<double>& grid_deltas() {
  static const std::vector<double> deltas(reference::kDeltas.begin(),
                                          reference::kDeltas.end());
  return deltas;
}

std::vector<SignGridCell> sign_probability_grid() {
  std::vector<SignGridCell> cells;
  cells.reserve(grid_taus().size() * 6 * grid_deltas().size());
  for (double tau : grid_taus()) {
    for (const auto& bench : benchmark_cases()) {
      for (double delta : grid_deltas()) {
        cells.push_back({tau, bench.id, delta,
                         sign_probabilities(bench.distribution, tau, delta)});
      }
    }
  }
  return cells;
}

std::vector<SignGridComparison> compare_with_published(double tolerance) {
  const auto cells = sign_probability_grid();
  const std::size_t n_delta = grid_deltas().size();
  std::vector<SignGridComparison> rows;
  rows.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::size_t t = i / (6 * n_delta);
    const std::size_t d = i % n_delta;
    const auto& cell = cells[i];
    const auto& pub = reference::published_sign_cell(t, cell.case_id, d);

    SignGridComparison row{cell, pub.p_minus, pub.p_plus,
                           round_to(cell.probs.p_minus, 4), round_to(cell.probs.p_plus, 4),
                           false, false, false, false};
    row.minus_matches = std::fabs(row.rounded_minus - pub.p_minus) <= tolerance;
    row.plus_matches = std::fabs(row.rounded_plus - pub.p_plus) <= tolerance;

    auto same_as = [&](std::size_t other) {
      const auto& nb = reference::published_sign_cell(t, cell.case_id, other);
      return (!row.minus_matches && nb.p_minus == pub.p_minus) ||
             (!row.plus_matches && nb.p_plus == pub.p_plus);
    };
    row.duplicates_neighbour = (d > 0 && same_as(d - 1)) || (d + 1 < n_delta && same_as(d + 1));
    row.flagged_typo = !row.matches() && reference::kTaus[t] == 0.1;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace srchart
