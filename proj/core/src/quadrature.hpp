#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace lack::detail {

// Adaptive 31-point Gauss-Kronrod on a finite interval.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-13, unsigned max_depth = 30) {
  if (b <= a) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth,
                                                                        rel_tol);
}

}  // namespace lack::detail
