#include "srchart/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "srchart/chart.hpp"
#include "srchart/error.hpp"
#include "srchart/io.hpp"
#include "srchart/mc_sim.hpp"
#include "srchart/moments.hpp"
#include "srchart/reference.hpp"
#include "srchart/srdist.hpp"
#include "srchart/tie_model.hpp"

namespace srchart {

// ---------------------------------------------------------------------------
// Reference implementations
// ---------------------------------------------------------------------------
namespace brute {

PowerSums power_sums(int n) {
  using I = std::int64_t;
  PowerSums s{};
  auto at = [&](PowerSum which) -> I& { return s[static_cast<std::size_t>(which)]; };
  for (I k = 1; k <= n; ++k) {
    at(PowerSum::k) += k;
    at(PowerSum::k2) += k * k;
    at(PowerSum::k3) += k * k * k;
    at(PowerSum::k4) += k * k * k * k;
    for (I j = 1; j <= n; ++j) {
      if (j == k) continue;
      at(PowerSum::kj) += k * j;
      at(PowerSum::k2j) += k * k * j;
      at(PowerSum::k3j) += k * k * k * j;
      if (j < k) at(PowerSum::k2j2) += k * k * j * j;
    }
  }
  for (I i = 1; i <= n; ++i) {
    for (I j = 1; j <= n; ++j) {
      if (j == i) continue;
      for (I k = 1; k <= n; ++k) {
        if (k == i || k == j) continue;
        at(PowerSum::i2jk) += i * i * j * k;
      }
    }
  }
  for (I i = 1; i <= n; ++i) {
    for (I j = i + 1; j <= n; ++j) {
      for (I k = j + 1; k <= n; ++k) {
        at(PowerSum::ijk) += i * j * k;
        for (I l = k + 1; l <= n; ++l) at(PowerSum::ijkl) += i * j * k * l;
      }
    }
  }
  return s;
}

std::array<double, 8> binomial_raw_moments(int n, double p_zero) {
  std::array<long double, 8> acc{};
  const long double q = 1.0L - p_zero;
  // Binomial weights by the multiplicative recurrence from N = 0 (or N = n
  // when p_zero = 0, where every other weight vanishes).
  std::vector<long double> w(static_cast<std::size_t>(n) + 1, 0.0L);
  if (p_zero == 0.0) {
    w[static_cast<std::size_t>(n)] = 1.0L;
  } else {
    w[0] = std::pow(static_cast<long double>(p_zero), n);
    for (int k = 0; k < n; ++k) {
      w[static_cast<std::size_t>(k) + 1] =
          w[static_cast<std::size_t>(k)] * (n - k) / (k + 1) * q / p_zero;
    }
  }
  for (int count = 0; count <= n; ++count) {
    long double power = 1.0L;
    for (int k = 0; k < 8; ++k) {
      power *= count;
      acc[static_cast<std::size_t>(k)] += w[static_cast<std::size_t>(count)] * power;
    }
  }
  std::array<double, 8> out{};
  for (std::size_t k = 0; k < 8; ++k) out[k] = static_cast<double>(acc[k]);
  return out;
}

}  // namespace brute

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double x) { return format_double(x); }

double rel_diff(double a, double b, double scale) {
  return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), scale});
}

}  // namespace

CheckResult check_sign_table() {
  const auto start = Clock::now();
  const auto rows = compare_with_published();
  int mismatched = 0;
  int flagged = 0;
  int flagged_without_duplicate = 0;
  std::ostringstream report;
  for (const auto& r : rows) {
    if (r.matches()) continue;
    if (r.flagged_typo) {
      ++flagged;
      if (!r.duplicates_neighbour) ++flagged_without_duplicate;
      report << " [case " << r.cell.case_id << ", tau " << num(r.cell.tau) << ", delta "
             << num(r.cell.delta) << ": published " << format_fixed(r.published_minus, 4) << "/"
             << format_fixed(r.published_plus, 4) << ", computed "
             << format_fixed(r.cell.probs.p_minus, 4) << "/" << format_fixed(r.cell.probs.p_plus, 4)
             << "]";
    } else {
      ++mismatched;
    }
  }
  const double elapsed = seconds_since(start);
  const bool ok = mismatched == 0 && flagged_without_duplicate == 0 && elapsed < 1.0;
  std::ostringstream detail;
  detail << rows.size() << " cells, " << rows.size() - static_cast<std::size_t>(mismatched + flagged)
         << " match to 5e-4, " << mismatched << " unexplained mismatches, " << flagged
         << " flagged tau=0.1 typos (" << flagged_without_duplicate
         << " not explained by a repeated neighbour column)" << report.str();
  return {1, "Published sign-probability grid", ok, detail.str(), elapsed};
}

CheckResult check_untied_limits() {
  const auto start = Clock::now();
  const auto m20 = untied_moments(20, 0.5);
  const auto m50 = untied_moments(50, 0.5);
  const auto l20 = find_control_limit(20, m20.m1, m20.mu2);
  const auto l50 = find_control_limit(50, m50.m1, m50.mu2);
  const bool ok = l20.c_value == reference::kUntiedLimitN20 && l50.c_value == reference::kUntiedLimitN50;
  std::string detail = "n=20: C=" + std::to_string(l20.c_value) + " (expected 162), n=50: C=" +
                       std::to_string(l50.c_value) + " (expected 623)";
  return {2, "Untied control limits", ok, detail, seconds_since(start)};
}

CheckResult check_arl0_floor() {
  const auto start = Clock::now();
  bool ok = true;
  std::string detail;
  for (int n : {20, 50}) {
    const auto m = untied_moments(n, 0.5);
    const auto limits = find_control_limit(n, m.m1, m.mu2);
    const auto arl = arl_from_errors(limits.alpha_achieved, 0.0);
    ok = ok && !arl.arl0_infinite && arl.arl0 >= reference::kMinimumArl0;
    detail += "n=" + std::to_string(n) + ": C=" + std::to_string(limits.c_value) + " alpha=" +
              num(limits.alpha_achieved) + " ARL0=" + format_fixed(arl.arl0, 3) + "; ";
  }
  detail += "floor 370.370";
  return {3, "ARL0 floor", ok, detail, seconds_since(start)};
}

CheckResult check_power_sums() {
  const auto start = Clock::now();
  int failures = 0;
  std::string first_failure;
  for (int n = 1; n <= 50; ++n) {
    const auto closed = power_sum_identities(n);
    const auto loops = brute::power_sums(n);
    for (std::size_t i = 0; i < kPowerSumCount; ++i) {
      if (closed[i] != loops[i]) {
        if (failures++ == 0) {
          first_failure = std::string(power_sum_formula(static_cast<PowerSum>(i)).label) +
                          " at n=" + std::to_string(n);
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  std::string detail = "11 identities x n=1..50, " + std::to_string(failures) + " mismatches";
  if (failures) detail += " (first: " + first_failure + ")";
  return {4, "Power-sum identity suite", failures == 0 && elapsed < 1.0, detail, elapsed};
}

CheckResult check_binomial_moments() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (int n = 1; n <= 60; ++n) {
    for (double p0 : {0.0, 0.1, 0.45, 0.9}) {
      const auto table = binomial_raw_moments(n, p0);
      const auto direct = brute::binomial_raw_moments(n, p0);
      for (int k = 1; k <= 8; ++k) {
        const double ref = direct[static_cast<std::size_t>(k - 1)];
        worst = std::max(worst, std::fabs(table.moment(k) - ref) / std::fabs(ref));
      }
    }
  }
  return {5, "Binomial moment suite", worst <= 1e-10,
          "E(N^1..N^8), n=1..60, p0 in {0,0.1,0.45,0.9}: max rel error " + num(worst) + " (tol 1e-10)",
          seconds_since(start)};
}

CheckResult check_oracle_moments() {
  const auto start = Clock::now();
  double worst = 0.0;
  std::string worst_at;
  int cells = 0;
  for (int n : {5, 10, 20, 50}) {
    for (const auto& bench : benchmark_cases()) {
      for (double tau : {0.0, 0.05, 0.2}) {
        for (double delta : {0.0, 0.2, 1.0}) {
          const auto probs = sign_probabilities(bench.distribution, tau, delta);
          const auto closed = tied_moments(n, probs.p_zero, probs.pi_plus);
          const auto pmf = exact_pmf_tied(n, probs);
          const double sd = std::sqrt(std::max(closed.mu2p, 0.0));
          const double oracle[7] = {pmf.raw_moment(1), pmf.raw_moment(2), pmf.raw_moment(3),
                                    pmf.raw_moment(4), pmf.central_moment(2),
                                    pmf.central_moment(3), pmf.central_moment(4)};
          const double model[7] = {closed.m1p, closed.m2p, closed.m3p, closed.m4p,
                                   closed.mu2p, closed.mu3p, closed.mu4p};
          // Raw moments are compared relative to their own size; the scale
          // floor only matters when a moment vanishes by symmetry.
          const int orders[7] = {1, 2, 3, 4, 2, 3, 4};
          for (int i = 0; i < 7; ++i) {
            const double err = rel_diff(oracle[i], model[i], std::pow(sd, orders[i]));
            if (err > worst) {
              worst = err;
              worst_at = "n=" + std::to_string(n) + " case " + std::to_string(bench.id) +
                         " tau=" + num(tau) + " delta=" + num(delta) + " moment #" +
                         std::to_string(i + 1);
            }
          }
          ++cells;
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {6, "Oracle vs closed-form moments", worst <= 1e-8 && elapsed < 30.0,
          std::to_string(cells) + " scenarios, m1'..m4' and mu2'..mu4': max rel error " + num(worst) +
              " at " + worst_at + " (tol 1e-8)",
          elapsed};
}

CheckResult check_normal_approximation() {
  const auto start = Clock::now();
  const auto m = untied_moments(20, 0.5);
  const auto exact = exact_pmf_untied(20, 0.5);
  const auto approx = normal_approx_pmf(20, m.m1, m.mu2, 2);
  double worst = 0.0;
  double fe = 0.0;
  double fa = 0.0;
  for (std::size_t i = 0; i < exact.support.size(); ++i) {
    fe += exact.mass[i];
    fa += approx.mass[i];
    worst = std::max(worst, std::fabs(fe - fa));
  }
  return {7, "Normal approximation quality", worst <= 0.01,
          "n=20, p=0.5: max |F_normal - F_exact| = " + num(worst) + " (tol 0.01)",
          seconds_since(start)};
}

CheckResult check_snd_fits(const std::vector<LabeledSample>& dataset) {
  const auto start = Clock::now();
  int flagged = 0;
  int over = 0;
  double worst = 0.0;
  double worst_binned = 0.0;
  double best = HUGE_VAL;
  for (const auto& s : dataset) {
    flagged += s.flagged ? 1 : 0;
    over += s.fit_quality > kFitTolerance ? 1 : 0;
    worst = std::max(worst, s.fit_quality);
    best = std::min(best, s.fit_quality);
    worst_binned = std::max(worst_binned, s.binned_fit_quality);
  }
  const bool ok = dataset.size() == 288 && flagged == 0 && over == 0;
  std::ostringstream detail;
  detail << dataset.size() << " samples, " << over << " with TV > 0.02, " << flagged
         << " flagged; TV range [" << num(best) << ", " << num(worst)
         << "]; max TV after pooling adjacent integer pairs " << num(worst_binned);
  return {8, "SND fit quality", ok, detail.str(), seconds_since(start)};
}

CheckResult check_network(const std::vector<LabeledSample>& dataset) {
  const auto start = Clock::now();
  NetworkConfig config;
  TrainConfig cfg;
  cfg.seed = kReleasedTrainSeed;
  SplitSpec split;
  split.seed = kReleasedSplitSeed;

  // Gradient check on three standardized training samples at the initial weights.
  const auto parts = split_dataset(dataset.size(), split);
  const Eigen::MatrixXd tx = feature_matrix(dataset, parts.train);
  const Eigen::MatrixXd ty = target_matrix(dataset, parts.train);
  const Standardizer fx = fit_standardizer(tx);
  const Standardizer fy = fit_standardizer(ty);
  Network probe(config);
  probe.initialize(cfg.seed);
  const auto grad = gradient_check(probe, fx.apply(tx.leftCols(3)), fy.apply(ty.leftCols(3)), 1e-5);

  const auto model = train(config, cfg, dataset, split);
  const auto& m = model.metrics;
  const bool r2_ok = std::all_of(m.r2_test.begin(), m.r2_test.end(), [](double r) { return r >= 0.98; });
  const double ratio = std::max(m.mse[1], m.mse[2]) / std::max(std::min(m.mse[1], m.mse[2]), 1e-300);
  const bool ok = grad.max_relative_error <= 1e-5 && r2_ok && ratio <= 10.0;
  std::ostringstream detail;
  detail << "seed " << cfg.seed << ", gradient check max rel " << num(grad.max_relative_error)
         << "; test R2 a=" << format_fixed(m.r2_test[0], 4) << " b=" << format_fixed(m.r2_test[1], 4)
         << " c=" << format_fixed(m.r2_test[2], 4) << "; MSE train/val/test " << num(m.mse[0]) << "/"
         << num(m.mse[1]) << "/" << num(m.mse[2]) << " (val:test ratio " << format_fixed(ratio, 2)
         << "); RMSE val " << num(m.rmse_validation);
  return {9, "Network training", ok, detail.str(), seconds_since(start)};
}

CheckResult check_monte_carlo(std::uint64_t reps, std::uint64_t run_length_reps, int threads) {
  const auto start = Clock::now();
  std::ostringstream detail;
  bool ok = true;

  const Scenario untied(3, 0.0, 0.0, 20);
  const double tv_untied = total_variation(simulate_statistic(untied, reps, kMonteCarloSeed, threads),
                                           exact_pmf_untied(20, 0.5));
  const Scenario tied(3, 0.2, 0.5, 20);
  const double tv_tied =
      total_variation(simulate_statistic(tied, reps, kMonteCarloSeed + 1, threads),
                      exact_pmf_tied(20, sign_probabilities(tied)));
  ok = ok && tv_untied <= 0.02 && tv_tied <= 0.02;
  detail << "TV untied " << num(tv_untied) << ", tied " << num(tv_tied) << " (tol 0.02); ";

  double worst_z = 0.0;
  int cells = 0;
  std::uint64_t stream = 100;
  for (const auto& bench : benchmark_cases()) {
    for (double tau : {0.1, 0.2}) {
      for (double delta : {0.0, 0.5}) {
        const Scenario s(bench.id, tau, delta, 1);
        const auto counts = simulate_signs(s, reps, kMonteCarloSeed + stream++, threads);
        const auto probs = sign_probabilities(s);
        const double total = static_cast<double>(counts.total());
        const std::array<std::pair<std::uint64_t, double>, 3> pairs = {
            {{counts.minus, probs.p_minus}, {counts.zero, probs.p_zero}, {counts.plus, probs.p_plus}}};
        for (const auto& [count, p] : pairs) {
          const double se = std::sqrt(p * (1.0 - p) / total);
          const double z = std::fabs(static_cast<double>(count) / total - p) / se;
          worst_z = std::max(worst_z, z);
        }
        ++cells;
      }
    }
  }
  ok = ok && worst_z <= 3.0;
  detail << "sign frequencies over " << cells << " cells: max |z| " << format_fixed(worst_z, 3)
         << " (tol 3); ";

  // The run length is geometric in the true per-subgroup signal probability,
  // which is the exact alpha at C, not the normal-approximation value used to
  // choose C.
  const auto m = untied_moments(20, 0.5);
  const auto limits = find_control_limit(20, m.m1, m.mu2);
  const double alpha_exact = error_rates_untied_exact(limits.c_value, 20, 0.5, 0.5).alpha;
  const auto run = simulate_run_length(untied, limits.c_value, run_length_reps, kMonteCarloSeed + 2,
                                       kDefaultRunLengthCap, threads);
  const double expected = 1.0 / alpha_exact;
  const double rel = std::fabs(run.mean - expected) / expected;
  const double sd_ratio = run.sd / run.mean;
  ok = ok && rel <= 0.05 && run.capped == 0 && std::fabs(sd_ratio - 1.0) <= 0.10;
  detail << "ARL0 at C=" << limits.c_value << ": simulated " << format_fixed(run.mean, 2)
         << " vs 1/alpha_exact " << format_fixed(expected, 2) << " (rel " << format_fixed(rel, 4)
         << ", tol 0.05), sd/mean " << format_fixed(sd_ratio, 4) << " (tol 0.10); 1/alpha_normal "
         << format_fixed(1.0 / limits.alpha_achieved, 2) << "; ";
  const double elapsed = seconds_since(start);
  ok = ok && elapsed < 120.0;
  return {10, "Monte Carlo consistency", ok, detail.str(), elapsed};
}

CheckResult check_arl_tables() {
  const auto start = Clock::now();
  const std::vector<int> cases = {1, 2, 3, 4, 5, 6};
  const std::vector<double> taus = {0.0, 0.05, 0.1, 0.2};
  const std::vector<double> deltas(reference::kDeltas.begin(), reference::kDeltas.end());
  bool layout_ok = true;
  double worst_asym = 0.0;
  int faster = 0;
  int comparisons = 0;
  std::string slower;
  for (int n : {20, 50}) {
    const auto table = arl_table(n, cases, taus, deltas, ArlSource::exact);
    layout_ok = layout_ok && table.rows.size() == cases.size() * taus.size();
    const std::size_t centre = 4;
    for (const auto& row : table.rows) {
      layout_ok = layout_ok && row.arl.size() == 9 && row.arl[centre] == row.arl0;
      for (std::size_t k = 0; k < 4; ++k) {
        const double lo = std::min(row.arl[k], row.arl[8 - k]);
        const double hi = std::max(row.arl[k], row.arl[8 - k]);
        worst_asym = std::max(worst_asym, hi / lo - 1.0);
      }
    }
    for (const auto& row : table.rows) {
      if (row.mode != ChartMode::tied) continue;
      const auto uo = std::find_if(table.rows.begin(), table.rows.end(), [&](const ArlRow& r) {
        return r.case_id == row.case_id && r.mode == ChartMode::untied;
      });
      for (std::size_t k : {std::size_t{3}, std::size_t{5}}) {
        ++comparisons;
        if (row.arl[k] <= uo->arl[k]) {
          ++faster;
        } else if (slower.size() < 400) {
          slower += " [n=" + std::to_string(n) + " case " + std::to_string(row.case_id) + " tau=" +
                    num(row.tau) + " delta=" + num(deltas[k]) + ": TO " + format_fixed(row.arl[k], 2) +
                    " > UO " + format_fixed(uo->arl[k], 2) + "]";
        }
      }
    }
  }
  // Diagnostic only: the same TO cells with the acceptance region -C < SR < C.
  double symmetric_asym = 0.0;
  for (int n : {20, 50}) {
    for (int case_id : cases) {
      for (double tau : {0.05, 0.1, 0.2}) {
        const auto p0 = sign_probabilities(Scenario(case_id, tau, 0.0, n));
        const auto m0 = tied_moments(n, p0.p_zero, p0.pi_plus);
        const auto c = find_control_limit(n, m0.m1p, m0.mu2p, reference::kDefaultAlpha,
                                          ChartMode::tied).c_value;
        auto arl = [&](double delta) {
          const auto d1 = exact_pmf_tied(n, sign_probabilities(Scenario(case_id, tau, delta, n)));
          return 1.0 / (1.0 - (d1.cdf(c - 1) - d1.cdf(-c)));
        };
        for (std::size_t k = 0; k < 4; ++k) {
          const double a = arl(deltas[k]);
          const double b = arl(deltas[8 - k]);
          symmetric_asym = std::max(symmetric_asym, std::max(a, b) / std::min(a, b) - 1.0);
        }
      }
    }
  }
  const bool ok = layout_ok && worst_asym <= 0.10 && faster == comparisons;
  std::ostringstream detail;
  detail << "n=20,50, 24 rows each, columns -1..1 with ARL0 centre: layout " << (layout_ok ? "ok" : "BAD")
         << "; max ARL1(+d)/ARL1(-d) asymmetry " << format_fixed(worst_asym, 4)
         << " (tol 0.10; with acceptance region -C < SR < C it would be "
         << format_fixed(symmetric_asym, 4) << "); TO <= UO at |delta|=0.1 in " << faster << "/" << comparisons << slower;
  return {11, "ARL table structure", ok, detail.str(), seconds_since(start)};
}

std::vector<CheckResult> run_checks(VerifyOptions options) {
  std::vector<CheckResult> out;
  auto record = [&](CheckResult r) {
    if (options.on_result) options.on_result(r);
    out.push_back(std::move(r));
  };
  auto guarded = [&](int id, const char* name, auto&& fn) {
    const auto start = Clock::now();
    try {
      record(fn());
    } catch (const std::exception& e) {
      record({id, name, false, std::string("error: ") + e.what(), seconds_since(start)});
    }
  };
  guarded(1, "Published sign-probability grid", [] { return check_sign_table(); });
  guarded(2, "Untied control limits", [] { return check_untied_limits(); });
  guarded(3, "ARL0 floor", [] { return check_arl0_floor(); });
  guarded(4, "Power-sum identity suite", [] { return check_power_sums(); });
  guarded(5, "Binomial moment suite", [] { return check_binomial_moments(); });
  guarded(6, "Oracle vs closed-form moments", [] { return check_oracle_moments(); });
  guarded(7, "Normal approximation quality", [] { return check_normal_approximation(); });
  if (options.full) {
    if (options.dataset.empty()) {
      guarded(8, "SND fit quality", [&] {
        options.dataset = build_training_dataset(options.threads);
        return check_snd_fits(options.dataset);
      });
    } else {
      guarded(8, "SND fit quality", [&] { return check_snd_fits(options.dataset); });
    }
    guarded(9, "Network training", [&] {
      if (options.dataset.empty()) throw DomainError("no dataset available");
      return check_network(options.dataset);
    });
    guarded(10, "Monte Carlo consistency", [&] {
      return check_monte_carlo(options.mc_reps, options.run_length_reps, options.threads);
    });
  }
  guarded(11, "ARL table structure", [] { return check_arl_tables(); });
  return out;
}

std::string format_check(const CheckResult& r) {
  std::ostringstream out;
  out << (r.passed ? "PASS" : "FAIL") << "  criterion " << r.id << "  " << r.name << "  ("
      << format_fixed(r.seconds, 2) << " s): " << r.detail;
  return out.str();
}

}  // namespace srchart
