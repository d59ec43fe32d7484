#include "srchart/chart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "srchart/error.hpp"
#include "srchart/log.hpp"
#include "srchart/snd_fit.hpp"

namespace srchart {

std::string_view to_string(ChartMode mode) {
  return mode == ChartMode::untied ? "uo" : "to";
}

double normal_alpha(std::int64_t c, int n, double mean, double variance, ChartMode mode) {
  const std::int64_t upper = mode == ChartMode::untied ? c - 2 : c;
  const double inside = normal_approx_cdf(upper, n, mean, variance) -
                        normal_approx_cdf(-c, n, mean, variance);
  return std::clamp(1.0 - inside, 0.0, 1.0);
}

ChartLimits find_control_limit(int n, double mean, double variance, double alpha_target,
                               ChartMode mode) {
  if (n < 1) throw DomainError("find_control_limit: n must be >= 1");
  if (!(variance > 0.0)) throw DomainError("find_control_limit: variance must be positive");
  if (!(alpha_target > 0.0 && alpha_target < 1.0)) {
    throw DomainError("find_control_limit: alpha_target must lie in (0, 1)");
  }
  const std::int64_t top = max_rank_sum(n);
  const std::int64_t step = mode == ChartMode::untied ? 2 : 1;
  const std::int64_t first = mode == ChartMode::untied ? (top % 2 == 0 ? 2 : 1) : 1;
  for (std::int64_t c = first; c <= top; c += step) {
    const double alpha = normal_alpha(c, n, mean, variance, mode);
    if (alpha <= alpha_target) return {c, alpha, mode, n};
  }
  throw UnreachableConfidence("find_control_limit: no C <= " + std::to_string(top) +
                              " reaches alpha <= " + std::to_string(alpha_target) +
                              " for n = " + std::to_string(n));
}

ErrorRates error_rates_untied(std::int64_t c, int n, double p0_prob, double p1_prob) {
  const auto ic = untied_moments(n, p0_prob);
  const auto oc = untied_moments(n, p1_prob);
  ErrorRates out{};
  out.alpha = normal_alpha(c, n, ic.m1, ic.mu2, ChartMode::untied);
  out.beta = std::clamp(normal_approx_cdf(c - 2, n, oc.m1, oc.mu2) -
                            normal_approx_cdf(-c, n, oc.m1, oc.mu2),
                        0.0, 1.0);
  return out;
}

ErrorRates error_rates_untied_exact(std::int64_t c, int n, double p0_prob, double p1_prob) {
  const auto dist0 = exact_pmf_untied(n, p0_prob);
  const auto dist1 = exact_pmf_untied(n, p1_prob);
  ErrorRates out{};
  out.alpha = std::clamp(1.0 - (dist0.cdf(c - 2) - dist0.cdf(-c)), 0.0, 1.0);
  out.beta = std::clamp(dist1.cdf(c - 2) - dist1.cdf(-c), 0.0, 1.0);
  return out;
}

ErrorRates error_rates_tied(std::int64_t c, const RankDistribution& dist0,
                            const RankDistribution& dist1) {
  if (dist0.support.empty() || dist1.support.empty()) {
    throw DomainError("error_rates_tied: empty distribution");
  }
  const std::int64_t reach = std::max({std::abs(dist0.support.front()), dist0.support.back(),
                                       std::abs(dist1.support.front()), dist1.support.back()});
  ErrorRates out{};
  const std::int64_t clamped = std::clamp<std::int64_t>(c, 1, reach + 1);
  if (clamped != c) {
    warn("error_rates_tied: C = " + std::to_string(c) + " outside the support, clamped to " +
         std::to_string(clamped));
    out.clamped = true;
    c = clamped;
  }
  out.alpha = std::clamp(1.0 - dist0.cdf(c) + dist0.cdf(-c), 0.0, 1.0);
  out.beta = std::clamp(dist1.cdf(c - 2) - dist1.cdf(-c), 0.0, 1.0);
  return out;
}

ArlPair arl_from_errors(double alpha, double beta) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("arl_from_errors: alpha must lie in [0, 1]");
  if (!(beta >= 0.0 && beta < 1.0)) throw DomainError("arl_from_errors: beta must lie in [0, 1)");
  ArlPair out{};
  if (alpha == 0.0) {
    out.arl0 = std::numeric_limits<double>::infinity();
    out.arl0_infinite = true;
  } else {
    out.arl0 = 1.0 / alpha;
  }
  out.arl1 = 1.0 / (1.0 - beta);
  return out;
}

namespace {

TiedMoments in_control_moments(int case_id, double tau, int n, double* p_zero) {
  const auto probs = sign_probabilities(Scenario(case_id, tau, 0.0, n));
  if (p_zero) *p_zero = probs.p_zero;
  return tied_moments(n, probs.p_zero, probs.pi_plus);
}

double arl1_or_infinite(double beta) {
  if (beta >= 1.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (1.0 - beta);
}

}  // namespace

std::vector<TiedLimit> tied_limits(int n, std::span<const double> taus, double alpha_target) {
  std::vector<TiedLimit> out;
  for (const auto& bench : benchmark_cases()) {
    for (double tau : taus) {
      double p_zero = 0.0;
      const auto m = in_control_moments(bench.id, tau, n, &p_zero);
      out.push_back({bench.id, tau, p_zero, m.mu2p,
                     find_control_limit(n, m.m1p, m.mu2p, alpha_target, ChartMode::tied)});
    }
  }
  return out;
}

std::string_view to_string(ArlSource source) {
  switch (source) {
    case ArlSource::exact: return "exact";
    case ArlSource::snd: return "snd";
    case ArlSource::snd_predicted: return "snd-predicted";
  }
  return "unknown";
}

ArlSource parse_arl_source(std::string_view text) {
  if (text == "exact") return ArlSource::exact;
  if (text == "snd") return ArlSource::snd;
  if (text == "snd-predicted") return ArlSource::snd_predicted;
  throw DomainError("unknown ARL source '" + std::string(text) + "'");
}

ArlTable arl_table(int n, std::span<const int> cases, std::span<const double> taus,
                   std::span<const double> deltas, ArlSource source,
                   const SndProvider& provider) {
  if (source == ArlSource::snd_predicted && !provider) {
    throw DomainError("arl_table: snd-predicted source needs a parameter provider");
  }
  ArlTable table{n, source, {deltas.begin(), deltas.end()}, {}};
  const auto support = tied_support(n);

  for (int case_id : cases) {
    const auto& bench = benchmark_case(case_id);
    for (double tau : taus) {
      ArlRow row{};
      row.case_id = case_id;
      row.tau = tau;
      if (tau == 0.0) {
        row.mode = ChartMode::untied;
        const auto ic = untied_moments(n, 0.5);
        const auto limits = find_control_limit(n, ic.m1, ic.mu2, reference::kDefaultAlpha,
                                               ChartMode::untied);
        row.c_value = limits.c_value;
        row.alpha = limits.alpha_achieved;
        for (double delta : deltas) {
          if (delta == 0.0) continue;
          const double p1 = sign_probabilities(bench.distribution, 0.0, delta).pi_plus;
          const auto rates = source == ArlSource::exact
                                 ? error_rates_untied_exact(row.c_value, n, 0.5, p1)
                                 : error_rates_untied(row.c_value, n, 0.5, p1);
          row.arl.push_back(arl1_or_infinite(rates.beta));
          row.fallback.push_back(false);
        }
      } else {
        row.mode = ChartMode::tied;
        double p_zero = 0.0;
        const auto m0 = in_control_moments(case_id, tau, n, &p_zero);
        const auto limits = find_control_limit(n, m0.m1p, m0.mu2p, reference::kDefaultAlpha,
                                               ChartMode::tied);
        row.c_value = limits.c_value;
        const auto dist0 = normal_approx_pmf(n, m0.m1p, m0.mu2p, 1);
        row.alpha = error_rates_tied(row.c_value, dist0, dist0).alpha;
        for (double delta : deltas) {
          if (delta == 0.0) continue;
          const Scenario scenario(case_id, tau, delta, n);
          const auto probs = sign_probabilities(scenario);
          const auto m1 = tied_moments(n, probs.p_zero, probs.pi_plus);
          RankDistribution dist1;
          bool fell_back = false;
          if (source == ArlSource::exact) {
            dist1 = exact_pmf_tied(n, probs);
          } else {
            try {
              const SNDParams params =
                  provider ? provider(scenario, m1)
                           : fit_snd_params(exact_pmf_tied(n, probs), m1);
              dist1 = snd_pmf(params, m1, support);
            } catch (const UseNormalApproximation&) {
              dist1 = normal_approx_pmf(n, m1.m1p, m1.mu2p, 1);
              fell_back = true;
            }
          }
          const auto rates = error_rates_tied(row.c_value, dist0, dist1);
          row.arl.push_back(arl1_or_infinite(rates.beta));
          row.fallback.push_back(fell_back);
        }
      }
      const auto pair = arl_from_errors(row.alpha, 0.0);
      row.arl0 = pair.arl0;
      row.arl0_infinite = pair.arl0_infinite;
      // Put ARL0 in the delta == 0 slot(s), keeping the caller's column order.
      std::vector<double> arl;
      std::vector<bool> fallback;
      std::size_t next = 0;
      for (double delta : deltas) {
        if (delta == 0.0) {
          arl.push_back(row.arl0);
          fallback.push_back(false);
        } else {
          arl.push_back(row.arl[next]);
          fallback.push_back(row.fallback[next]);
          ++next;
        }
      }
      row.arl = std::move(arl);
      row.fallback = std::move(fallback);
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

}  // namespace srchart
