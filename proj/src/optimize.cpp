#include "lossent/optimize.hpp"

#include <cmath>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_min.h>
#include <gsl/gsl_multimin.h>

#include "lossent/error.hpp"

namespace lossent::opt {

namespace {

// GSL's default handler aborts; status codes are checked instead. Set once
// so concurrent callers never race on the global handler.
void disable_gsl_abort() {
  static const bool done = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)done;
}

double neg_1d(double x, void* params) {
  const auto& f = *static_cast<const std::function<double(double)>*>(params);
  return -f(x);
}

double neg_nd(const gsl_vector* v, void* params) {
  const auto& f = *static_cast<const std::function<double(const std::vector<double>&)>*>(params);
  std::vector<double> x(v->size);
  for (std::size_t i = 0; i < v->size; ++i) x[i] = gsl_vector_get(v, i);
  return -f(x);
}

}  // namespace

Max1D grid_golden_max(const std::function<double(double)>& f, double lo, double hi, std::size_t grid,
                      double xtol) {
  if (grid < 3) throw InvalidInput("grid needs at least 3 points", "grid");
  const double h = (hi - lo) / static_cast<double>(grid - 1);
  std::size_t best = 0;
  double best_f = f(lo);
  std::vector<double> fs(grid);
  fs[0] = best_f;
  for (std::size_t i = 1; i < grid; ++i) {
    fs[i] = f(lo + h * static_cast<double>(i));
    if (fs[i] > best_f) {
      best_f = fs[i];
      best = i;
    }
  }
  Max1D out{lo + h * static_cast<double>(best), best_f};
  if (best == 0 || best + 1 == grid) return out;
  // GSL needs a strict bracket: the middle must beat both ends.
  if (!(fs[best] > fs[best - 1] && fs[best] > fs[best + 1])) return out;

  disable_gsl_abort();
  gsl_function fn{&neg_1d, const_cast<std::function<double(double)>*>(&f)};
  gsl_min_fminimizer* s = gsl_min_fminimizer_alloc(gsl_min_fminimizer_goldensection);
  double a = out.x - h, b = out.x + h;
  if (gsl_min_fminimizer_set_with_values(s, &fn, out.x, -fs[best], a, -fs[best - 1], b, -fs[best + 1]) ==
      GSL_SUCCESS) {
    for (int iter = 0; iter < 200; ++iter) {
      if (gsl_min_fminimizer_iterate(s) != GSL_SUCCESS) break;
      a = gsl_min_fminimizer_x_lower(s);
      b = gsl_min_fminimizer_x_upper(s);
      if (gsl_min_test_interval(a, b, xtol, 0.0) == GSL_SUCCESS) break;
    }
    const double x = gsl_min_fminimizer_x_minimum(s);
    const double fx = -gsl_min_fminimizer_f_minimum(s);
    if (fx >= out.fx) out = {x, fx};
  }
  gsl_min_fminimizer_free(s);
  return out;
}

MaxND simplex_max(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                  double step, std::size_t max_iter, double size_tol) {
  const std::size_t n = x0.size();
  if (n == 0) return {x0, f(x0), 0};
  disable_gsl_abort();
  gsl_multimin_function fn{&neg_nd, n, const_cast<std::function<double(const std::vector<double>&)>*>(&f)};
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* ss = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x, i, x0[i]);
  gsl_vector_set_all(ss, step);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x, ss);
  std::size_t iter = 0;
  for (; iter < max_iter; ++iter) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), size_tol) == GSL_SUCCESS) break;
  }
  MaxND out;
  out.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.x[i] = gsl_vector_get(s->x, i);
  out.fx = -s->fval;
  out.iterations = iter;
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(ss);
  gsl_vector_free(x);
  return out;
}

}  // namespace lossent::opt
