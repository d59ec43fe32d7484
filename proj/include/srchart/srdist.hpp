#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "srchart/moments.hpp"
#include "srchart/tie_model.hpp"

namespace srchart {

enum class DistributionKind { exact, normal_approx, snd, empirical };

std::string_view to_string(DistributionKind kind);

// A p.m.f. on an ordered integer support.
struct RankDistribution {
  std::vector<std::int64_t> support;  // strictly increasing
  std::vector<double> mass;           // parallel to support
  DistributionKind kind = DistributionKind::exact;
  bool degenerate = false;  // all-ties point mass

  double total_mass() const;
  double mass_at(std::int64_t s) const;
  /// P(X <= s) for any integer s.
  double cdf(std::int64_t s) const;
  double mean() const;
  double raw_moment(int order) const;
  double central_moment(int order) const;
};

/// Half the L1 distance; supports may differ.
double total_variation(const RankDistribution& a, const RankDistribution& b);

/// Total variation after pooling both p.m.f.s into bins of `width` consecutive
/// integers starting at `origin`. With width 2 this ignores the even/odd
/// alternation that the tied law inherits from mixing N.
double binned_total_variation(const RankDistribution& a, const RankDistribution& b,
                              std::int64_t origin, std::int64_t width);

/// n(n+1)/2, the largest attainable |SR|.
constexpr std::int64_t max_rank_sum(int n) {
  return static_cast<std::int64_t>(n) * (n + 1) / 2;
}

/// {-M, -M+2, ..., M} with M = n(n+1)/2.
std::vector<std::int64_t> untied_support(int n);
/// Every integer in [-M, M].
std::vector<std::int64_t> tied_support(int n);

inline constexpr int kMaxExactN = 200;

/// Exact law of sum_k k S_k, P(S_k = +1) = p, by sequential convolution.
/// Throws ResourceLimit for n > 200.
RankDistribution exact_pmf_untied(int n, double p);

/// Exact law of SR_{t,N}: mixture over N ~ Binomial(n, 1 - p0) of the untied
/// law on ranks 1..N with P(+1) = pi_plus. Support is tied_support(n).
RankDistribution exact_pmf_tied(int n, const SignProbabilities& probs);
RankDistribution exact_pmf_tied(int n, double p_zero, double pi_plus);

/// Continuity-corrected normal p.m.f. on the grid {-M, -M+step, ..., M}
/// (step 2: untied parity grid, step 1: integer grid). F(s) is approximated by
/// Phi((s + 0.5 - mean) / sd); the two end points absorb the tails.
RankDistribution normal_approx_pmf(int n, double mean, double variance, int step = 2);

/// Support-aware normal c.d.f. matching normal_approx_pmf: 0 below -M, 1 at
/// and above M, Phi((s + 0.5 - mean) / sd) in between. variance == 0 gives the
/// point mass at mean.
double normal_approx_cdf(std::int64_t s, int n, double mean, double variance);

// Height, location and width adjustments of the scaled normal density.
struct SNDParams {
  double a = 1.0;
  double b = 0.0;
  double c = 1.0;
};

/// Per support point s, a * gamma2 * integral over [s - 0.25, s + 0.25] of
/// phi((x - b gamma2) / (c gamma1) | m1', mu2'), before normalization.
/// Throws UseNormalApproximation when gamma1 or c is zero (or mu2' == 0).
std::vector<double> snd_unnormalized(const SNDParams& params, const TiedMoments& moments,
                                     std::span<const std::int64_t> support);

/// snd_unnormalized divided by its total. Throws DomainError if a <= 0 or the
/// total underflows.
RankDistribution snd_pmf(const SNDParams& params, const TiedMoments& moments,
                         std::span<const std::int64_t> support);

}  // namespace srchart
