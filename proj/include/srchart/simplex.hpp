#pragma once

#include <functional>
#include <span>
#include <vector>

namespace srchart {

struct SimplexOptions {
  int max_evaluations = 2000;
  double f_tolerance = 1e-14;  // relative spread of vertex values
  double f_floor = 1e-300;     // absolute spread treated as converged
  double x_tolerance = 1e-10;  // max vertex distance from the best vertex
};

struct SimplexResult {
  std::vector<double> x;
  double value;
  int evaluations;
  bool converged;
};

using Objective = std::function<double(std::span<const double>)>;

/// Nelder-Mead downhill simplex with the standard coefficients (reflection 1,
/// expansion 2, contraction 1/2, shrink 1/2). The initial simplex is `start`
/// plus one vertex per coordinate displaced by `steps[i]`. Non-finite
/// objective values are treated as +infinity.
SimplexResult nelder_mead(const Objective& f, std::vector<double> start,
                          std::span<const double> steps, const SimplexOptions& options = {});

}  // namespace srchart
