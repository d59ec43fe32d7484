#include "srchart/moments.hpp"

#include <cmath>
#include <string>

#include "srchart/error.hpp"

namespace srchart {

UntiedMoments untied_moments(int n, double p) {
  if (n < 1) throw DomainError("untied_moments: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("untied_moments: p must lie in [0, 1]");
  const double nn = n;
  return {n, p, nn * (nn + 1.0) * (2.0 * p - 1.0) / 2.0,
          2.0 * nn * p * (1.0 - p) * (nn + 1.0) * (2.0 * nn + 1.0) / 3.0};
}

namespace {

constexpr std::array<PowerSumFormula, kPowerSumCount> kFormulas = {{
    {"sum k", {0, 1, 1}, 2},
    {"sum k^2", {0, 1, 3, 2}, 6},
    {"sum k^3", {0, 0, 1, 2, 1}, 4},
    {"sum k^4", {0, -1, 0, 10, 15, 6}, 30},
    {"sum_{k!=j} kj", {0, -2, -3, 2, 3}, 12},
    {"sum_{k!=j} k^2 j", {0, 0, -1, -1, 1, 1}, 6},
    {"sum_{j<k} k^2 j^2", {0, 6, 5, -30, -25, 24, 20}, 360},
    {"sum_{k!=j} k^3 j", {0, 4, 0, -25, -15, 21, 15}, 120},
    {"sum_{i<j<k} ijk", {0, 0, 2, 1, -3, -1, 1}, 48},
    {"sum_{i!=j!=k} i^2 jk", {0, -24, -10, 105, 35, -111, -25, 30}, 360},
    {"sum_{i<j<k<l} ijkl", {0, 48, 20, -180, -25, 192, -10, -60, 15}, 5760},
}};

__extension__ using Wide = __int128;

std::int64_t evaluate_exact(const PowerSumFormula& f, int n) {
  Wide acc = 0;
  Wide power = 1;
  for (std::size_t d = 0; d < f.numerator.size(); ++d) {
    acc += static_cast<Wide>(f.numerator[d]) * power;
    power *= n;
  }
  if (acc % f.denominator != 0) {
    throw DomainError(std::string("power sum not integral: ") + std::string(f.label));
  }
  return static_cast<std::int64_t>(acc / f.denominator);
}

// E(sum of the identity evaluated at N) given raw moments of N.
double expect(const PowerSumFormula& f, const BinomialMomentTable& table) {
  double acc = 0.0;
  for (std::size_t d = 0; d < f.numerator.size(); ++d) {
    if (f.numerator[d] != 0) acc += static_cast<double>(f.numerator[d]) * table.moment(static_cast<int>(d));
  }
  return acc / static_cast<double>(f.denominator);
}

double expect(PowerSum which, const BinomialMomentTable& table) {
  return expect(power_sum_formula(which), table);
}

constexpr int kMaxOrder = 8;

// s(k, j): signed Stirling numbers of the first kind, k, j <= 8.
constexpr auto kStirling = [] {
  std::array<std::array<std::int64_t, kMaxOrder + 1>, kMaxOrder + 1> s{};
  s[0][0] = 1;
  for (int k = 0; k < kMaxOrder; ++k) {
    for (int j = 1; j <= k + 1; ++j) {
      s[k + 1][j] = s[k][j - 1] - static_cast<std::int64_t>(k) * s[k][j];
    }
  }
  return s;
}();

}  // namespace

const PowerSumFormula& power_sum_formula(PowerSum which) {
  return kFormulas[static_cast<std::size_t>(which)];
}

PowerSums power_sum_identities(int n) {
  if (n < 1) throw DomainError("power_sum_identities: n must be >= 1");
  if (n > 200) throw ResourceLimit("power_sum_identities: exact evaluation limited to n <= 200");
  PowerSums out{};
  for (std::size_t i = 0; i < kPowerSumCount; ++i) out[i] = evaluate_exact(kFormulas[i], n);
  return out;
}

std::int64_t stirling_first_kind(int k, int j) {
  if (k < 1 || k > kMaxOrder || j < 1 || j > k) return 0;
  return -kStirling[k][j];
}

double BinomialMomentTable::moment(int k) const {
  if (k == 0) return 1.0;
  if (k < 0 || k > kMaxOrder) throw DomainError("BinomialMomentTable: order must be 0..8");
  return raw[static_cast<std::size_t>(k - 1)];
}

BinomialMomentTable binomial_raw_moments(int n, double p_zero) {
  if (n < 1) throw DomainError("binomial_raw_moments: n must be >= 1");
  if (!(p_zero >= 0.0 && p_zero <= 1.0)) {
    throw DomainError("binomial_raw_moments: p_zero must lie in [0, 1]");
  }
  const double q = 1.0 - p_zero;
  BinomialMomentTable table{n, p_zero, {}};
  double falling = 1.0;  // n(n-1)...(n-k+1)
  double q_power = 1.0;
  for (int k = 1; k <= kMaxOrder; ++k) {
    falling *= static_cast<double>(n - k + 1);
    q_power *= q;
    double value = falling * q_power;
    for (int j = k - 1; j >= 1; --j) {
      value += static_cast<double>(stirling_first_kind(k, j)) * table.raw[static_cast<std::size_t>(j - 1)];
    }
    table.raw[static_cast<std::size_t>(k - 1)] = value;
  }
  return table;
}

TiedMoments tied_moments(int n, double p_zero, double pi_plus) {
  if (n < 1) throw DomainError("tied_moments: n must be >= 1");
  if (!(p_zero >= 0.0 && p_zero < 1.0)) throw DomainError("tied_moments: p_zero must lie in [0, 1)");
  if (!(pi_plus >= 0.0 && pi_plus <= 1.0)) throw DomainError("tied_moments: pi_plus must lie in [0, 1]");

  const auto table = binomial_raw_moments(n, p_zero);
  // E(S') = E(S'^3) = d and E(S'^2) = E(S'^4) = 1 for the sign law without ties.
  const double d = pi_plus - (1.0 - pi_plus);
  const double d2 = d * d;

  TiedMoments out;
  out.m1p = d * expect(PowerSum::k, table);
  out.m2p = expect(PowerSum::k2, table) + d2 * expect(PowerSum::kj, table);
  out.m3p = d * (expect(PowerSum::k3, table) + 3.0 * expect(PowerSum::k2j, table)) +
            6.0 * d2 * d * expect(PowerSum::ijk, table);
  out.m4p = expect(PowerSum::k4, table) + 6.0 * expect(PowerSum::k2j2, table) +
            d2 * (4.0 * expect(PowerSum::k3j, table) + 6.0 * expect(PowerSum::i2jk, table)) +
            24.0 * d2 * d2 * expect(PowerSum::ijkl, table);

  const double m1 = out.m1p;
  out.mu2p = out.m2p - m1 * m1;
  out.mu3p = out.m3p - 3.0 * m1 * out.m2p + 2.0 * m1 * m1 * m1;
  out.mu4p = out.m4p - 4.0 * m1 * out.m3p + 6.0 * m1 * m1 * out.m2p - 3.0 * m1 * m1 * m1 * m1;
  // Guard the round-off floor of a variance that is zero in exact arithmetic.
  const double scale = out.m2p > 0.0 ? out.m2p : 1.0;
  if (out.mu2p <= 1e-12 * scale) out.mu2p = 0.0;
  if (out.mu2p > 0.0) {
    out.gamma1 = out.mu3p / std::pow(out.mu2p, 1.5);
    out.gamma2 = out.mu4p / (out.mu2p * out.mu2p);
  }
  return out;
}

}  // namespace srchart
