#include "srchart/reference.hpp"

#include <stdexcept>

namespace srchart::reference {
namespace {

using Row = std::array<double, 9>;

struct CaseRows {
  Row minus;
  Row plus;
};

// [tau][case]
constexpr std::array<std::array<CaseRows, 6>, 4> kTable = {{
    // tau = 0
    {{
        {{0.7885, 0.6427, 0.5569, 0.5284, 0.5, 0.4716, 0.4431, 0.3573, 0.2115},
         {0.2115, 0.3573, 0.4431, 0.4716, 0.5, 0.5284, 0.5569, 0.6427, 0.7885}},
        {{0.8244, 0.6749, 0.5714, 0.5358, 0.5, 0.4641, 0.4285, 0.325, 0.1756},
         {0.1756, 0.3251, 0.4286, 0.4642, 0.5, 0.5359, 0.5715, 0.675, 0.8244}},
        {{0.8413, 0.6915, 0.5793, 0.5398, 0.5, 0.4602, 0.4207, 0.3085, 0.1587},
         {0.1587, 0.3085, 0.4207, 0.4602, 0.5, 0.5398, 0.5793, 0.6915, 0.8413}},
        {{0.8561, 0.7072, 0.587, 0.5438, 0.5, 0.4562, 0.413, 0.2928, 0.1439},
         {0.1439, 0.2928, 0.413, 0.4562, 0.5, 0.5438, 0.587, 0.7072, 0.8561}},
        {{0.8712, 0.7257, 0.5966, 0.5488, 0.5, 0.4512, 0.4034, 0.2743, 0.1288},
         {0.1288, 0.2743, 0.4034, 0.4512, 0.5, 0.5488, 0.5966, 0.7257, 0.8712}},
        {{0.8828, 0.7419, 0.6057, 0.5536, 0.5, 0.4464, 0.3943, 0.2581, 0.1172},
         {0.1172, 0.2581, 0.3943, 0.4464, 0.5, 0.5536, 0.6057, 0.7419, 0.8828}},
    }},
    // tau = 0.05
    {{
        {{0.7811, 0.6355, 0.5497, 0.5213, 0.4929, 0.4645, 0.436, 0.3502, 0.2041},
         {0.2041, 0.3502, 0.436, 0.4645, 0.4929, 0.5213, 0.5497, 0.6355, 0.7811}},
        {{0.8179, 0.6666, 0.5626, 0.5269, 0.491, 0.4552, 0.4197, 0.3168, 0.1691},
         {0.1692, 0.3168, 0.4197, 0.4552, 0.491, 0.5269, 0.5626, 0.6666, 0.8179}},
        {{0.8352, 0.6826, 0.5695, 0.5299, 0.49, 0.4503, 0.411, 0.2998, 0.1527},
         {0.1527, 0.2998, 0.411, 0.4503, 0.49, 0.5299, 0.5695, 0.6826, 0.8352}},
        {{0.8504, 0.6979, 0.5763, 0.5329, 0.489, 0.4453, 0.4024, 0.2837, 0.1384},
         {0.1384, 0.2837, 0.4024, 0.4453, 0.489, 0.5329, 0.5763, 0.6979, 0.8504}},
        {{0.866, 0.716, 0.5848, 0.5367, 0.4878, 0.4391, 0.3917, 0.2649, 0.1238},
         {0.1238, 0.2649, 0.3917, 0.4391, 0.4878, 0.5367, 0.5848, 0.716, 0.866}},
        {{0.878, 0.732, 0.5929, 0.5403, 0.4865, 0.4332, 0.3817, 0.2485, 0.1126},
         {0.1126, 0.2485, 0.3817, 0.4332, 0.4865, 0.5403, 0.5929, 0.732, 0.878}},
    }},
    // tau = 0.1 (transcribed as printed, repeated columns included)
    {{
        {{0.7737, 0.6283, 0.5426, 0.5426, 0.4858, 0.4858, 0.4289, 0.343, 0.1967},
         {0.1967, 0.343, 0.4289, 0.4289, 0.4858, 0.4858, 0.5426, 0.6283, 0.7737}},
        {{0.8112, 0.6582, 0.5537, 0.5537, 0.482, 0.482, 0.4109, 0.3086, 0.1628},
         {0.1629, 0.3086, 0.4109, 0.4109, 0.4821, 0.4821, 0.5537, 0.6582, 0.8113}},
        {{0.8289, 0.6736, 0.5596, 0.5596, 0.4801, 0.4801, 0.4013, 0.2912, 0.1469},
         {0.1469, 0.2912, 0.4013, 0.4013, 0.4801, 0.4801, 0.5596, 0.6736, 0.8289}},
        {{0.8445, 0.6885, 0.5655, 0.5655, 0.4781, 0.4781, 0.3919, 0.2747, 0.133},
         {0.133, 0.2747, 0.3919, 0.3919, 0.4781, 0.4781, 0.5655, 0.6885, 0.8445}},
        {{0.8606, 0.7061, 0.5729, 0.5729, 0.4755, 0.4755, 0.3802, 0.2556, 0.1189},
         {0.1189, 0.2556, 0.3802, 0.3802, 0.4755, 0.4755, 0.5729, 0.7061, 0.8606}},
        {{0.8731, 0.7219, 0.5799, 0.5799, 0.4731, 0.4731, 0.3692, 0.2392, 0.1082},
         {0.1082, 0.2392, 0.3692, 0.3692, 0.4731, 0.4731, 0.5799, 0.7219, 0.8731}},
    }},
    // tau = 0.2
    {{
        {{0.759, 0.614, 0.5284, 0.5, 0.4716, 0.4431, 0.4146, 0.3285, 0.1819},
         {0.1819, 0.3285, 0.4146, 0.4431, 0.4716, 0.5, 0.5284, 0.614, 0.759}},
        {{0.7976, 0.6412, 0.5358, 0.5, 0.4641, 0.4285, 0.3933, 0.2924, 0.1506},
         {0.1506, 0.2924, 0.3934, 0.4286, 0.4642, 0.5, 0.5359, 0.6412, 0.7976}},
        {{0.8159, 0.6554, 0.5398, 0.5, 0.4602, 0.4207, 0.3821, 0.2743, 0.1357},
         {0.1357, 0.2743, 0.3821, 0.4207, 0.4602, 0.5, 0.5398, 0.6554, 0.8159}},
        {{0.8321, 0.6691, 0.5438, 0.5, 0.4562, 0.413, 0.3711, 0.2573, 0.1227},
         {0.1227, 0.2573, 0.3711, 0.413, 0.4562, 0.5, 0.5438, 0.6691, 0.8321}},
        {{0.8491, 0.6857, 0.5488, 0.5, 0.4512, 0.4034, 0.3575, 0.2379, 0.1097},
         {0.1097, 0.2379, 0.3575, 0.4034, 0.4512, 0.5, 0.5488, 0.6857, 0.8491}},
        {{0.8625, 0.7007, 0.5536, 0.5, 0.4464, 0.3943, 0.345, 0.2214, 0.0999},
         {0.0999, 0.2214, 0.345, 0.3943, 0.4464, 0.5, 0.5536, 0.7007, 0.8625}},
    }},
}};

}  // namespace

const PublishedSignCell& published_sign_cell(std::size_t tau_index, int case_id,
                                             std::size_t delta_index) {
  if (tau_index >= kTaus.size() || case_id < 1 || case_id > 6 ||
      delta_index >= kDeltas.size()) {
    throw std::out_of_range("published_sign_cell: index out of range");
  }
  // Built once so a reference to a stable cell can be returned.
  static const auto cells = [] {
    std::array<std::array<std::array<PublishedSignCell, 9>, 6>, 4> out{};
    for (std::size_t t = 0; t < 4; ++t)
      for (std::size_t c = 0; c < 6; ++c)
        for (std::size_t d = 0; d < 9; ++d)
          out[t][c][d] = {kTable[t][c].minus[d], kTable[t][c].plus[d]};
    return out;
  }();
  return cells[tau_index][static_cast<std::size_t>(case_id - 1)][delta_index];
}

}  // namespace srchart::reference
