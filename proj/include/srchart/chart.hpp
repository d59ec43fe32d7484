#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "srchart/moments.hpp"
#include "srchart/reference.hpp"
#include "srchart/srdist.hpp"
#include "srchart/tie_model.hpp"

namespace srchart {

enum class ChartMode { untied, tied };

std::string_view to_string(ChartMode mode);

// Limits (-C, C) around the centre line 0.
struct ChartLimits {
  std::int64_t c_value;
  double alpha_achieved;
  ChartMode mode;
  int n;
};

/// In-control false-alarm rate of the normal approximation at C.
///   untied: 1 - [F(C - 2) - F(-C)]
///   tied:   1 - F(C) + F(-C)
/// F is normal_approx_cdf, so limits past the support give alpha = 0.
double normal_alpha(std::int64_t c, int n, double mean, double variance, ChartMode mode);

/// Smallest admissible C with normal_alpha(C) <= alpha_target, scanning
/// upward (untied: parity of n(n+1)/2, step 2; tied: step 1). Throws
/// UnreachableConfidence when no C <= n(n+1)/2 qualifies.
ChartLimits find_control_limit(int n, double mean, double variance,
                               double alpha_target = reference::kDefaultAlpha,
                               ChartMode mode = ChartMode::untied);

struct ErrorRates {
  double alpha;
  double beta;
  bool clamped = false;  // C was moved into [1, max support + 1]
};

/// alpha from the normal approximation at p0_prob, beta = F(C-2) - F(-C) at
/// p1_prob, both via the closed-form moments.
ErrorRates error_rates_untied(std::int64_t c, int n, double p0_prob, double p1_prob);

/// Same two formulas evaluated on the exact untied p.m.f.s.
ErrorRates error_rates_untied_exact(std::int64_t c, int n, double p0_prob, double p1_prob);

/// alpha = 1 - F0(C) + F0(-C); beta = F1(C - 2) - F1(-C).
ErrorRates error_rates_tied(std::int64_t c, const RankDistribution& dist0,
                            const RankDistribution& dist1);

struct ArlPair {
  double arl0;
  double arl1;
  bool arl0_infinite = false;
};

/// arl0 = 1 / alpha, arl1 = 1 / (1 - beta). alpha = 0 yields an infinite ARL0
/// flagged in the result; beta outside [0, 1) throws DomainError.
ArlPair arl_from_errors(double alpha, double beta);

// Tied-mode limit for one benchmark and resolution, computed with the
// in-control (delta = 0) tied moments.
struct TiedLimit {
  int case_id;
  double tau;
  double p_zero;
  double variance;
  ChartLimits limits;
};

std::vector<TiedLimit> tied_limits(int n, std::span<const double> taus,
                                   double alpha_target = reference::kDefaultAlpha);

enum class ArlSource { exact, snd, snd_predicted };

std::string_view to_string(ArlSource source);
/// Accepts "exact", "snd", "snd-predicted"; throws DomainError otherwise.
ArlSource parse_arl_source(std::string_view text);

// Supplies SND parameters for an out-of-control tied scenario.
using SndProvider = std::function<SNDParams(const Scenario&, const TiedMoments&)>;

struct ArlRow {
  int case_id;
  double tau;
  ChartMode mode;
  std::int64_t c_value;
  double alpha;
  double arl0;
  bool arl0_infinite;
  std::vector<double> arl;  // one entry per table delta; delta == 0 holds arl0
  std::vector<bool> fallback;  // normal approximation used instead of the SND
};

struct ArlTable {
  int n;
  ArlSource source;
  std::vector<double> deltas;
  std::vector<ArlRow> rows;  // case-major, taus in the given order
};

/// Rows with tau == 0 are untied charts; others are tied. The out-of-control
/// law comes from `source`: the exact p.m.f., the fitted SND (fit_snd_params
/// unless `provider` is set), or `provider` (required for snd_predicted).
/// SND cells with pi+ = 0.5 fall back to the normal approximation.
ArlTable arl_table(int n, std::span<const int> cases, std::span<const double> taus,
                   std::span<const double> deltas, ArlSource source,
                   const SndProvider& provider = {});

}  // namespace srchart
