// Adaptive Simpson quadrature with an absolute error target. Handles the
// mildly singular integrands used here (t log t near 0) by recursive
// bisection with the standard Richardson acceptance test.

#pragma once

#include <functional>

namespace arakelov {

// Integrates f over [a, b] to absolute accuracy ~tol. Throws
// QuadratureError when the recursion depth limit is reached before the
// tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth = 60);

} // namespace arakelov
