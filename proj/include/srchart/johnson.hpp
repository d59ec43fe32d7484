#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace srchart {

enum class JohnsonFamily { SU, SB };

// Johnson translation system. With Z standard normal,
//   SU:  Z = zeta + vartheta * asinh((y - iota) / xi)
//   SB:  Z = zeta + vartheta * ln((y - iota) / (iota + xi - y)),  y in [iota, iota + xi]
class JohnsonDistribution {
 public:
  /// Throws DomainError unless vartheta > 0 and xi > 0.
  JohnsonDistribution(JohnsonFamily family, double zeta, double vartheta,
                      double iota, double xi);

  JohnsonFamily family() const noexcept { return family_; }
  double zeta() const noexcept { return zeta_; }
  double vartheta() const noexcept { return vartheta_; }
  double iota() const noexcept { return iota_; }
  double xi() const noexcept { return xi_; }

  /// Defined on the whole real line; SB clamps to 0 / 1 outside its support.
  double cdf(double y) const;
  /// Throws DomainError unless 0 < u < 1.
  double quantile(double u) const;
  /// The translation inverted at a standard normal value z.
  double from_standard_normal(double z) const;
  /// Inverse-transform draws from Rng(seed, 0).
  std::vector<double> sample(std::uint64_t seed, std::size_t count) const;

 private:
  JohnsonFamily family_;
  double zeta_;
  double vartheta_;
  double iota_;
  double xi_;
};

struct BenchmarkCase {
  int id;
  std::string_view name;
  JohnsonDistribution distribution;
  double nominal_kurtosis;  // excess kurtosis of the distribution being mimicked
};

/// The six symmetric benchmark processes, ids 1..6.
std::span<const BenchmarkCase> benchmark_cases();
/// Throws std::out_of_range for ids outside 1..6.
const BenchmarkCase& benchmark_case(int id);

}  // namespace srchart
