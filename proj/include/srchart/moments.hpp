#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace srchart {

// Moments of the untied statistic SR = sum_k k S_k with P(S_k = +1) = p.
struct UntiedMoments {
  int n;
  double p;
  double m1;   // n(n+1)(2p-1)/2
  double mu2;  // 2np(1-p)(n+1)(2n+1)/3
};

UntiedMoments untied_moments(int n, double p);

// ---------------------------------------------------------------------------
// Closed-form sums over the first n integers.
//
// Each identity is a polynomial in n with integer coefficients over a common
// integer denominator, so it can be evaluated exactly in integer arithmetic
// and also taken in expectation over a random upper limit N.
// ---------------------------------------------------------------------------
enum class PowerSum : std::size_t {
  k,            // sum_k k
  k2,           // sum_k k^2
  k3,           // sum_k k^3
  k4,           // sum_k k^4
  kj,           // sum_{k != j} k j
  k2j,          // sum_{k != j} k^2 j
  k2j2,         // sum_{j < k} k^2 j^2
  k3j,          // sum_{k != j} k^3 j
  ijk,          // sum_{i < j < k} i j k
  i2jk,         // sum over pairwise distinct ordered (i, j, k) of i^2 j k
  ijkl,         // sum_{i < j < k < l} i j k l
};

inline constexpr std::size_t kPowerSumCount = 11;

struct PowerSumFormula {
  std::string_view label;
  std::array<std::int64_t, 9> numerator;  // coefficient of n^d at index d
  std::int64_t denominator;
};

const PowerSumFormula& power_sum_formula(PowerSum which);

using PowerSums = std::array<std::int64_t, kPowerSumCount>;

/// All eleven identities at n, evaluated exactly. Valid for 1 <= n <= 200;
/// throws ResourceLimit beyond that (the 8th-degree term leaves 64 bits).
PowerSums power_sum_identities(int n);

// ---------------------------------------------------------------------------
// N ~ Binomial(n, 1 - p_zero): raw moments E(N^k), k = 1..8, from the
// factorial moments n(n-1)...(n-k+1)(1-p_zero)^k and the signed Stirling
// numbers of the first kind.
// ---------------------------------------------------------------------------
struct BinomialMomentTable {
  int n;
  double p_zero;
  std::array<double, 8> raw;  // raw[k-1] = E(N^k)

  /// E(N^k) for k = 0..8 (k = 0 gives 1).
  double moment(int k) const;
};

BinomialMomentTable binomial_raw_moments(int n, double p_zero);

/// Coefficient of E(N^j) in the recursion for E(N^k), i.e. -s(k, j).
std::int64_t stirling_first_kind(int k, int j);

// Moments of the tied statistic SR_{t,N} = sum_{k=1}^N k S'_k.
struct TiedMoments {
  double m1p = 0.0;
  double m2p = 0.0;
  double m3p = 0.0;
  double m4p = 0.0;
  double mu2p = 0.0;
  double mu3p = 0.0;
  double mu4p = 0.0;
  // Undefined when mu2p == 0.
  std::optional<double> gamma1;
  std::optional<double> gamma2;
};

/// Requires n >= 1, 0 <= p_zero < 1, 0 <= pi_plus <= 1.
TiedMoments tied_moments(int n, double p_zero, double pi_plus);

}  // namespace srchart
