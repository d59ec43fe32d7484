#include "srchart/srdist.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "srchart/error.hpp"
#include "srchart/normal.hpp"

namespace srchart {

std::string_view to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::exact: return "exact";
    case DistributionKind::normal_approx: return "normal-approx";
    case DistributionKind::snd: return "snd";
    case DistributionKind::empirical: return "empirical";
  }
  return "unknown";
}

double RankDistribution::total_mass() const {
  double total = 0.0;
  for (double m : mass) total += m;
  return total;
}

double RankDistribution::mass_at(std::int64_t s) const {
  const auto it = std::lower_bound(support.begin(), support.end(), s);
  if (it == support.end() || *it != s) return 0.0;
  return mass[static_cast<std::size_t>(it - support.begin())];
}

double RankDistribution::cdf(std::int64_t s) const {
  const auto end = std::upper_bound(support.begin(), support.end(), s);
  const auto count = static_cast<std::size_t>(end - support.begin());
  double total = 0.0;
  for (std::size_t i = 0; i < count; ++i) total += mass[i];
  return std::min(total, 1.0);
}

double RankDistribution::mean() const { return raw_moment(1); }

double RankDistribution::raw_moment(int order) const {
  double total = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    total += std::pow(static_cast<double>(support[i]), order) * mass[i];
  }
  return total;
}

double RankDistribution::central_moment(int order) const {
  const double mu = mean();
  double total = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    total += std::pow(static_cast<double>(support[i]) - mu, order) * mass[i];
  }
  return total;
}

double total_variation(const RankDistribution& a, const RankDistribution& b) {
  double sum = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.support.size() || j < b.support.size()) {
    if (j == b.support.size() || (i < a.support.size() && a.support[i] < b.support[j])) {
      sum += std::fabs(a.mass[i++]);
    } else if (i == a.support.size() || b.support[j] < a.support[i]) {
      sum += std::fabs(b.mass[j++]);
    } else {
      sum += std::fabs(a.mass[i++] - b.mass[j++]);
    }
  }
  return 0.5 * sum;
}

double binned_total_variation(const RankDistribution& a, const RankDistribution& b,
                              std::int64_t origin, std::int64_t width) {
  if (width < 1) throw DomainError("binned_total_variation: width must be >= 1");
  auto bin_of = [&](std::int64_t s) {
    const std::int64_t d = s - origin;
    return d >= 0 ? d / width : -((-d + width - 1) / width);
  };
  std::map<std::int64_t, double> diff;
  for (std::size_t i = 0; i < a.support.size(); ++i) diff[bin_of(a.support[i])] += a.mass[i];
  for (std::size_t i = 0; i < b.support.size(); ++i) diff[bin_of(b.support[i])] -= b.mass[i];
  double sum = 0.0;
  for (const auto& [bin, d] : diff) sum += std::fabs(d);
  return 0.5 * sum;
}

std::vector<std::int64_t> untied_support(int n) {
  const std::int64_t top = max_rank_sum(n);
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(top + 1));
  for (std::int64_t s = -top; s <= top; s += 2) out.push_back(s);
  return out;
}

std::vector<std::int64_t> tied_support(int n) {
  const std::int64_t top = max_rank_sum(n);
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(2 * top + 1));
  for (std::int64_t s = -top; s <= top; ++s) out.push_back(s);
  return out;
}

namespace {

void check_exact_n(int n) {
  if (n < 1) throw DomainError("exact p.m.f.: n must be >= 1");
  if (n > kMaxExactN) {
    throw ResourceLimit("exact p.m.f.: n = " + std::to_string(n) + " exceeds the limit of 200");
  }
}

// One convolution step: add rank k with P(+1) = p to the law of the positive
// rank sum T held in g[0..top].
void add_rank(std::vector<double>& g, std::int64_t top, int k, double p) {
  const double q = 1.0 - p;
  for (std::int64_t t = top + k; t >= k; --t) {
    g[static_cast<std::size_t>(t)] = q * g[static_cast<std::size_t>(t)] +
                                     p * g[static_cast<std::size_t>(t - k)];
  }
  for (std::int64_t t = std::min<std::int64_t>(k - 1, top); t >= 0; --t) {
    g[static_cast<std::size_t>(t)] *= q;
  }
}

double log_binomial_weight(int n, int k, double q) {
  const double p0 = 1.0 - q;
  double value = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  if (k > 0) value += k * std::log(q);
  if (n - k > 0) value += (n - k) * std::log(p0);
  return value;
}

}  // namespace

RankDistribution exact_pmf_untied(int n, double p) {
  check_exact_n(n);
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("exact_pmf_untied: p must lie in [0, 1]");
  const std::int64_t top = max_rank_sum(n);
  std::vector<double> g(static_cast<std::size_t>(top + 1), 0.0);
  g[0] = 1.0;
  std::int64_t reach = 0;
  for (int k = 1; k <= n; ++k) {
    add_rank(g, reach, k, p);
    reach += k;
  }
  RankDistribution out;
  out.kind = DistributionKind::exact;
  out.support = untied_support(n);
  out.mass = std::move(g);  // SR = 2T - M, so index t maps to support[t]
  return out;
}

RankDistribution exact_pmf_tied(int n, const SignProbabilities& probs) {
  return exact_pmf_tied(n, probs.p_zero, probs.pi_plus);
}

RankDistribution exact_pmf_tied(int n, double p_zero, double pi_plus) {
  check_exact_n(n);
  if (!(p_zero >= 0.0 && p_zero <= 1.0)) throw DomainError("exact_pmf_tied: p0 must lie in [0, 1]");
  if (!(pi_plus >= 0.0 && pi_plus <= 1.0)) throw DomainError("exact_pmf_tied: pi+ must lie in [0, 1]");

  const std::int64_t top = max_rank_sum(n);
  RankDistribution out;
  out.kind = DistributionKind::exact;
  out.support = tied_support(n);
  out.mass.assign(out.support.size(), 0.0);
  if (p_zero >= 1.0) {
    out.mass[static_cast<std::size_t>(top)] = 1.0;
    out.degenerate = true;
    return out;
  }

  const double q = 1.0 - p_zero;
  std::vector<double> g(static_cast<std::size_t>(top + 1), 0.0);
  g[0] = 1.0;
  std::int64_t reach = 0;
  // N = 0 leaves SR = 0; then each further rank extends T_N to T_{N+1}.
  for (int count = 0; count <= n; ++count) {
    if (count > 0) {
      add_rank(g, reach, count, pi_plus);
      reach += count;
    }
    const double weight = std::exp(log_binomial_weight(n, count, q));
    if (weight == 0.0) continue;
    for (std::int64_t t = 0; t <= reach; ++t) {
      const std::int64_t s = 2 * t - reach;
      out.mass[static_cast<std::size_t>(s + top)] += weight * g[static_cast<std::size_t>(t)];
    }
  }
  return out;
}

double normal_approx_cdf(std::int64_t s, int n, double mean, double variance) {
  const std::int64_t top = max_rank_sum(n);
  if (s < -top) return 0.0;
  if (s >= top) return 1.0;
  if (variance <= 0.0) return static_cast<double>(s) >= mean ? 1.0 : 0.0;
  return normal::cdf((static_cast<double>(s) + 0.5 - mean) / std::sqrt(variance));
}

RankDistribution normal_approx_pmf(int n, double mean, double variance, int step) {
  if (n < 1) throw DomainError("normal_approx_pmf: n must be >= 1");
  if (!(variance > 0.0)) throw DomainError("normal_approx_pmf: variance must be positive");
  if (step != 1 && step != 2) throw DomainError("normal_approx_pmf: step must be 1 or 2");
  RankDistribution out;
  out.kind = DistributionKind::normal_approx;
  out.support = step == 2 ? untied_support(n) : tied_support(n);
  out.mass.resize(out.support.size());
  double previous = 0.0;
  for (std::size_t i = 0; i < out.support.size(); ++i) {
    const double current = normal_approx_cdf(out.support[i], n, mean, variance);
    out.mass[i] = current - previous;
    previous = current;
  }
  return out;
}

namespace {

constexpr std::array<double, 4> kGaussNodes = {0.1834346424956498049, 0.5255324099163289858,
                                               0.7966664774136267396, 0.9602898564975362317};
constexpr std::array<double, 4> kGaussWeights = {0.3626837833783619830, 0.3137066458778872873,
                                                 0.2223810344533744706, 0.1012285362903762591};
constexpr double kHalfWidth = 0.25;
// exp(-z^2 / 2) underflows to exactly zero beyond this |z|.
constexpr double kUnderflowZ = 38.6;

}  // namespace

std::vector<double> snd_unnormalized(const SNDParams& params, const TiedMoments& moments,
                                     std::span<const std::int64_t> support) {
  if (!moments.gamma1 || !moments.gamma2 || !(moments.mu2p > 0.0)) {
    throw UseNormalApproximation("snd: shape coefficients unavailable (mu2' = 0)");
  }
  const double g1 = *moments.gamma1;
  const double g2 = *moments.gamma2;
  if (g1 == 0.0 || params.c == 0.0) {
    throw UseNormalApproximation("snd: gamma1 and c must be non-zero; use the normal approximation");
  }
  // (x - b g2) / (c g1) - m1' = (x - centre) / (c g1)
  const double scale = params.c * g1;
  const double centre = params.b * g2 + scale * moments.m1p;
  const double sd_y = std::sqrt(moments.mu2p);
  const double inv_width = 1.0 / (std::fabs(scale) * sd_y);  // z per unit of x
  const double density_norm = 1.0 / (sd_y * std::sqrt(2.0 * std::numbers::pi));
  const double height = params.a * g2 * density_norm;

  std::vector<double> out(support.size(), 0.0);
  for (std::size_t i = 0; i < support.size(); ++i) {
    const double s = static_cast<double>(support[i]);
    const double nearest = std::max(std::fabs(s - centre) - kHalfWidth, 0.0) * inv_width;
    if (nearest > kUnderflowZ) continue;
    double acc = 0.0;
    for (std::size_t j = 0; j < kGaussNodes.size(); ++j) {
      for (double sign : {-1.0, 1.0}) {
        const double z = (s + sign * kHalfWidth * kGaussNodes[j] - centre) * inv_width;
        acc += kGaussWeights[j] * std::exp(-0.5 * z * z);
      }
    }
    out[i] = height * kHalfWidth * acc;
  }
  return out;
}

RankDistribution snd_pmf(const SNDParams& params, const TiedMoments& moments,
                         std::span<const std::int64_t> support) {
  if (!(params.a > 0.0)) throw DomainError("snd_pmf: a must be positive");
  auto raw = snd_unnormalized(params, moments, support);
  double total = 0.0;
  for (double m : raw) total += m;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw DomainError("snd_pmf: density has no mass on the support");
  }
  for (double& m : raw) m /= total;
  RankDistribution out;
  out.kind = DistributionKind::snd;
  out.support.assign(support.begin(), support.end());
  out.mass = std::move(raw);
  return out;
}

}  // namespace srchart
