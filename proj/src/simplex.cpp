#include "srchart/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "srchart/error.hpp"

namespace srchart {
namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

}  // namespace

SimplexResult nelder_mead(const Objective& f, std::vector<double> start,
                          std::span<const double> steps, const SimplexOptions& options) {
  const std::size_t dim = start.size();
  if (dim == 0 || steps.size() != dim) {
    throw DomainError("nelder_mead: start and steps must have the same non-zero size");
  }
  int evaluations = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<Vertex> simplex;
  simplex.reserve(dim + 1);
  simplex.push_back({start, eval(start)});
  for (std::size_t i = 0; i < dim; ++i) {
    auto x = start;
    x[i] += steps[i];
    simplex.push_back({x, eval(x)});
  }

  auto order = [&] {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };
  auto along = [&](const std::vector<double>& centroid, const std::vector<double>& worst,
                   double t) {
    std::vector<double> x(dim);
    for (std::size_t i = 0; i < dim; ++i) x[i] = centroid[i] + t * (worst[i] - centroid[i]);
    return x;
  };

  bool converged = false;
  order();
  while (evaluations < options.max_evaluations) {
    const double best = simplex.front().f;
    const double worst_f = simplex.back().f;
    double diameter = 0.0;
    for (std::size_t v = 1; v <= dim; ++v) {
      for (std::size_t i = 0; i < dim; ++i) {
        diameter = std::max(diameter, std::fabs(simplex[v].x[i] - simplex[0].x[i]));
      }
    }
    const double spread = worst_f - best;
    if (std::isfinite(spread) &&
        (spread <= options.f_tolerance * std::fabs(best) || spread <= options.f_floor) &&
        diameter <= options.x_tolerance) {
      converged = true;
      break;
    }
    if (diameter <= options.x_tolerance * 1e-3) {
      converged = std::isfinite(best);
      break;
    }

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t v = 0; v < dim; ++v) {
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v].x[i];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    Vertex& worst = simplex.back();
    const auto reflected = along(centroid, worst.x, -1.0);
    const double fr = eval(reflected);
    if (fr < simplex.front().f) {
      const auto expanded = along(centroid, worst.x, -2.0);
      const double fe = eval(expanded);
      worst = fe < fr ? Vertex{expanded, fe} : Vertex{reflected, fr};
    } else if (fr < simplex[dim - 1].f) {
      worst = {reflected, fr};
    } else {
      const bool outside = fr < worst.f;
      const auto contracted = along(centroid, worst.x, outside ? -0.5 : 0.5);
      const double fc = eval(contracted);
      if (fc < (outside ? fr : worst.f)) {
        worst = {contracted, fc};
      } else {
        for (std::size_t v = 1; v <= dim; ++v) {
          for (std::size_t i = 0; i < dim; ++i) {
            simplex[v].x[i] = simplex[0].x[i] + 0.5 * (simplex[v].x[i] - simplex[0].x[i]);
          }
          simplex[v].f = eval(simplex[v].x);
        }
      }
    }
    order();
  }
  return {simplex.front().x, simplex.front().f, evaluations, converged};
}

}  // namespace srchart
