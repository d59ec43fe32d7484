#pragma once

#include <array>
#include <cstdint>

// Published reference values used by golden tests and the `verify` command.
namespace srchart::reference {

struct PublishedSignCell {
  double p_minus;
  double p_plus;
};

inline constexpr std::array<double, 4> kTaus = {0.0, 0.05, 0.1, 0.2};
inline constexpr std::array<double, 9> kDeltas = {-1.0, -0.5, -0.2, -0.1, 0.0,
                                                  0.1,  0.2,  0.5,  1.0};

/// Four-decimal sign probabilities by [tau index][case - 1][delta index].
const PublishedSignCell& published_sign_cell(std::size_t tau_index, int case_id,
                                             std::size_t delta_index);

// Control limits at alpha = 0.0027.
inline constexpr std::int64_t kUntiedLimitN20 = 162;
inline constexpr std::int64_t kUntiedLimitN50 = 623;
// Tied limits as published; the (case, tau) that produced them is not stated.
inline constexpr std::int64_t kTiedLimitN20 = 64;
inline constexpr std::int64_t kTiedLimitN50 = 231;

inline constexpr double kDefaultAlpha = 0.0027;
inline constexpr double kMinimumArl0 = 370.370;

}  // namespace srchart::reference
