#include "srchart/johnson.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "srchart/error.hpp"
#include "srchart/normal.hpp"
#include "srchart/rng.hpp"

namespace srchart {

JohnsonDistribution::JohnsonDistribution(JohnsonFamily family, double zeta,
                                         double vartheta, double iota, double xi)
    : family_(family), zeta_(zeta), vartheta_(vartheta), iota_(iota), xi_(xi) {
  if (!(vartheta > 0.0) || !(xi > 0.0) || !std::isfinite(zeta) ||
      !std::isfinite(iota) || !std::isfinite(vartheta) || !std::isfinite(xi)) {
    throw DomainError("JohnsonDistribution: require vartheta > 0, xi > 0 and finite parameters");
  }
}

double JohnsonDistribution::cdf(double y) const {
  if (family_ == JohnsonFamily::SU) {
    return normal::cdf(zeta_ + vartheta_ * std::asinh((y - iota_) / xi_));
  }
  if (y <= iota_) return 0.0;
  if (y >= iota_ + xi_) return 1.0;
  return normal::cdf(zeta_ + vartheta_ * std::log((y - iota_) / (iota_ + xi_ - y)));
}

double JohnsonDistribution::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("JohnsonDistribution::quantile: u must lie in (0, 1)");
  }
  return from_standard_normal(normal::quantile(u));
}

double JohnsonDistribution::from_standard_normal(double z) const {
  const double w = (z - zeta_) / vartheta_;
  if (family_ == JohnsonFamily::SU) return iota_ + xi_ * std::sinh(w);
  // Logistic map onto (iota, iota + xi); keep strictly inside the interval.
  const double lo = iota_;
  const double hi = iota_ + xi_;
  const double y = w >= 0.0 ? iota_ + xi_ / (1.0 + std::exp(-w))
                            : iota_ + xi_ * std::exp(w) / (1.0 + std::exp(w));
  if (y <= lo) return std::nextafter(lo, hi);
  if (y >= hi) return std::nextafter(hi, lo);
  return y;
}

std::vector<double> JohnsonDistribution::sample(std::uint64_t seed,
                                                std::size_t count) const {
  Rng rng(seed, 0);
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(quantile(rng.uniform()));
  return out;
}

namespace {

const std::array<BenchmarkCase, 6>& cases() {
  static const std::array<BenchmarkCase, 6> table = {{
      {1, "Uniform", JohnsonDistribution(JohnsonFamily::SB, 0.0, 0.6465, -1.8153, 3.6306), -1.2},
      {2, "Triangular", JohnsonDistribution(JohnsonFamily::SB, 0.0, 1.3983, -3.1097, 6.2195), -0.6},
      {3, "Normal", JohnsonDistribution(JohnsonFamily::SU, 0.0, 100.0, 0.0, 100.0), 0.0},
      {4, "Student T-10", JohnsonDistribution(JohnsonFamily::SU, 0.0, 2.3212, 0.0, 2.1094), 1.0},
      {5, "Student T-6", JohnsonDistribution(JohnsonFamily::SU, 0.0, 1.6104, 0.0, 1.3118), 3.0},
      {6, "Student T-5", JohnsonDistribution(JohnsonFamily::SU, 0.0, 1.3493, 0.0, 1.0), 6.0},
  }};
  return table;
}

}  // namespace

std::span<const BenchmarkCase> benchmark_cases() { return cases(); }

const BenchmarkCase& benchmark_case(int id) {
  if (id < 1 || id > 6) {
    throw std::out_of_range("benchmark case id must be in 1..6, got " + std::to_string(id));
  }
  return cases()[static_cast<std::size_t>(id - 1)];
}

}  // namespace srchart
