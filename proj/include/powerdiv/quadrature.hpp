#pragma once

#include <functional>

#include "powerdiv/common.hpp"

namespace powerdiv {

// Gauss-Kronrod 7-15 adaptive integration by interval bisection. The error
// estimate per interval is |K15 - G7|; intervals are split until the local
// estimate fits within the proportionally allocated tolerance. Throws
// QuadratureFailure when the subdivision depth limit is reached.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol = 0.0, int max_depth = 48);

// Plain 15-point Gauss-Legendre rule on [a, b]; no error control. Used for
// the cumulative panel sums of the Stein solution where panel widths are
// chosen small enough a priori.
double gauss_legendre_15(const std::function<double(double)>& f, double a, double b);

}  // namespace powerdiv
