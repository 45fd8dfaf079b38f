#pragma once

#include "powerdiv/model.hpp"

namespace powerdiv {

// Chi-square reference distribution with dof degrees of freedom (dof = r-1
// throughout the library, but any positive real works).
struct ChiSquareRef {
  double dof = 1.0;
  double quad_tol = 1e-11;
};

double chi2_pdf(const ChiSquareRef& ref, double x);

// Regularized lower incomplete gamma P(dof/2, z/2); absolute error <= 1e-12.
double chi2_cdf(const ChiSquareRef& ref, double z);
// Upper tail 1 - cdf, computed without cancellation.
double chi2_tail(const ChiSquareRef& ref, double z);

// Smallest grid point T with upper tail mass below `tail_mass`.
double chi2_truncation_point(const ChiSquareRef& ref, double tail_mass = 1e-14);

// E[h(Y)] for Y ~ chi-square(dof) by adaptive quadrature, absolute tolerance
// 1e-10. The domain is truncated where the tail mass drops below 1e-14; the
// remainder is restored from h's limit at infinity (bounded h) or from the
// exact linear-growth tail formula (the identity). Densities with a
// fractional power singularity at the origin (dof not an even integer) are
// integrated under the substitution t = u^2 near 0.
double chi2_expectation(const ChiSquareRef& ref, const TestFunctionSpec& h);

// Lower regularized incomplete gamma P(a, x); building block for the cdf.
double reg_lower_gamma(double a, double x);

}  // namespace powerdiv
