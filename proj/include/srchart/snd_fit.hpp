#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "srchart/moments.hpp"
#include "srchart/srdist.hpp"
#include "srchart/tie_model.hpp"

namespace srchart {

// Largest total-variation distance accepted for a fitted label.
inline constexpr double kFitTolerance = 0.02;
inline constexpr int kFitStarts = 5;

struct SndFitResult {
  SNDParams params;
  double objective;        // mean squared mass error at the optimum
  double total_variation;  // fitted vs target
  int evaluations;         // summed over all starts
  bool converged;          // the winning start met the simplex tolerances
};

/// Least-squares fit of snd_pmf to `target` over its support.
///
/// The normalized SND depends on (b, c) only through the window centre
/// b*g2 + c*g1*m1' and width |c*g1|*sqrt(mu2'). The search runs over those two
/// (as a standardized offset and a log width), always on the branch
/// c*g1 < 0, from kFitStarts deterministic starts; a is then set so the
/// unnormalized mass is exactly one.
/// Throws UseNormalApproximation for gamma1 == 0 (symmetric input).
SndFitResult fit_snd(const RankDistribution& target, const TiedMoments& moments);

SNDParams fit_snd_params(const RankDistribution& target, const TiedMoments& moments);

// Feature order for the regression network.
inline constexpr std::size_t kFeatureCount = 11;
inline constexpr std::size_t kTargetCount = 3;
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "pi_plus", "m1p", "m2p", "m3p", "m4p", "mu2p", "mu3p", "mu4p", "gamma1", "gamma2", "n"};
inline constexpr std::array<std::string_view, kTargetCount> kTargetNames = {"a", "b", "c"};

using FeatureVector = std::array<double, kFeatureCount>;

/// (pi+, m1', m2', m3', m4', mu2', mu3', mu4', gamma1, gamma2, n).
/// Throws UseNormalApproximation when the shape coefficients are undefined.
FeatureVector feature_vector(double pi_plus, const TiedMoments& moments, int n);

struct LabeledSample {
  Scenario scenario;
  FeatureVector features;
  SNDParams targets;
  double fit_quality;          // total variation of the fitted SND
  double binned_fit_quality;   // same, pooled over pairs of adjacent integers
  bool flagged;                // fit_quality > kFitTolerance or no convergence
};

/// The out-of-control tied grid: taus {0.05, 0.1, 0.2} x cases 1..6 x
/// deltas {-1, -0.5, -0.2, -0.1, 0.1, 0.2, 0.5, 1} x n {20, 50}, in that
/// nesting order (tau outermost).
std::vector<Scenario> dataset_scenarios();

LabeledSample label_scenario(const Scenario& scenario);

/// All 288 samples in canonical order; `threads` only changes wall time.
std::vector<LabeledSample> build_training_dataset(int threads = 1);

// Dataset persistence. CSV columns: case_id, tau, delta, the 11 features,
// a, b, c, fit_quality, binned_fit_quality, flagged.
std::vector<std::string> dataset_csv_columns();
std::string dataset_to_csv(const std::vector<LabeledSample>& samples);
std::string dataset_to_json(const std::vector<LabeledSample>& samples);
/// Accepts either format (detected from the first non-space character).
/// Throws SchemaError on a malformed file.
std::vector<LabeledSample> dataset_from_text(std::string_view text);

}  // namespace srchart
