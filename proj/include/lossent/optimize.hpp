#pragma once

// Thin wrappers over GSL minimizers, phrased as maximizers.

#include <functional>
#include <vector>

namespace lossent::opt {

struct Max1D {
  double x = 0.0;
  double fx = 0.0;
};

/// Evaluates f on `grid` evenly spaced points of [lo, hi] (endpoints
/// included), then refines the best interior point by golden-section search.
Max1D grid_golden_max(const std::function<double(double)>& f, double lo, double hi, std::size_t grid,
                      double xtol = 1e-12);

struct MaxND {
  std::vector<double> x;
  double fx = 0.0;
  std::size_t iterations = 0;
};

/// Nelder-Mead simplex from x0 with uniform initial step.
MaxND simplex_max(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                  double step, std::size_t max_iter = 2000, double size_tol = 1e-10);

}  // namespace lossent::opt
