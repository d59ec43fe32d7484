#pragma once

// Brute-force reference implementations used only by the tests. These
// enumerate sign patterns directly and never call the library's dynamic
// programmes.
#include <cmath>
#include <cstdint>
#include <map>

namespace oracle {

// P(SR = s) for SR = sum_k k S_k, S_k = +1 w.p. p, by 2^n enumeration.
inline std::map<std::int64_t, double> untied_pmf(int n, double p) {
  std::map<std::int64_t, double> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::int64_t s = 0;
    double w = 1.0;
    for (int k = 1; k <= n; ++k) {
      const bool plus = mask & (1u << (k - 1));
      s += plus ? k : -k;
      w *= plus ? p : 1.0 - p;
    }
    out[s] += w;
  }
  return out;
}

// Tied statistic by 3^n enumeration of raw signs. Non-zero signs receive
// ranks 1..N in index order.
inline std::map<std::int64_t, double> tied_pmf(int n, double p_minus, double p_zero, double p_plus) {
  std::map<std::int64_t, double> out;
  std::int64_t patterns = 1;
  for (int i = 0; i < n; ++i) patterns *= 3;
  for (std::int64_t code = 0; code < patterns; ++code) {
    std::int64_t c = code;
    std::int64_t s = 0;
    int rank = 0;
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      const int digit = static_cast<int>(c % 3);
      c /= 3;
      if (digit == 0) {
        w *= p_minus;
        s -= ++rank;
      } else if (digit == 1) {
        w *= p_zero;
      } else {
        w *= p_plus;
        s += ++rank;
      }
    }
    out[s] += w;
  }
  return out;
}

inline double moment(const std::map<std::int64_t, double>& pmf, int order, double centre = 0.0) {
  double acc = 0.0;
  for (const auto& [s, w] : pmf) acc += w * std::pow(static_cast<double>(s) - centre, order);
  return acc;
}

inline double binomial_pmf(int n, int k, double q) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) *
         std::pow(q, k) * std::pow(1.0 - q, n - k);
}

}  // namespace oracle
