#pragma once

#include "powerdiv/chi_square.hpp"
#include "powerdiv/model.hpp"
#include "powerdiv/oracle.hpp"

namespace powerdiv {

// Solution data of the chi-square Stein equation
//   x f''(x) + (dof - x)/2 f'(x) = h(x) - E[h(Y_dof)]
// on an evaluation grid;
//   f'(x) = 1/(x rho(x)) int_0^x (h(t) - chi2_h) rho(t) dt.
struct SteinSolution {
  double dof = 1.0;
  std::string h_name;
  double chi2_h = 0.0;
  std::vector<double> grid;
  std::vector<double> fprime_values;
};

// One (dof, h) pair with the expectation chi2_h precomputed. All pointwise
// evaluations are quadratures of the solution formula; x beyond
// 2 dof + 2 switches to the equivalent tail form
//   f'(x) = -1/(x rho(x)) int_x^inf (h(t) - chi2_h) rho(t) dt,
// which is the numerically conditioned branch out there (the two forms agree
// because the full integral vanishes).
class SteinOperator {
 public:
  SteinOperator(double dof, const TestFunctionSpec& h);

  double dof() const { return ref_.dof; }
  double chi2_h() const { return chi2_h_; }

  double fprime(double x) const;
  double fprime_lower(double x) const;  // int_0^x form
  double fprime_tail(double x) const;   // -int_x^inf form

  // |x f'' + (dof-x)/2 f' - (h - chi2_h)| with f'' by central difference of
  // f' (step max(1e-5, 1e-7 x)). The two f' evaluations share their base
  // integral so the quadrature error largely cancels in the difference.
  double residual(double x) const;

  // |E[W f''(W) + (dof-W)/2 f'(W)] - (E[h(W)] - chi2_h)| over the exact law
  // of W. An atom at 0 contributes its Stein-equation limit h(0) - chi2_h.
  double identity_gap(const ExactDistribution& dist) const;

 private:
  double integrand(double t) const { return (h_.eval(t) - chi2_h_) * chi2_pdf(ref_, t); }
  double lower_integral(double x) const;
  double tail_integral(double x) const;
  double tail_integral_from(double x, double upto) const;
  // f'' by the shared-base central difference; used by residual and
  // identity_gap.
  void fprime_fsecond(double x, double* fp, double* fpp) const;

  ChiSquareRef ref_;
  TestFunctionSpec h_;
  double chi2_h_;
};

double solve_fprime(double dof, const TestFunctionSpec& h, double x);
double stein_residual(double dof, const TestFunctionSpec& h, double x);
double identity_gap(double dof, const TestFunctionSpec& h, const ExactDistribution& dist);

// Grid-based estimator of ||f^(k)|| for k = 1..6 over (0, cap]. f' comes
// from cumulative panel integration of the solution formula (lower form up
// to ~4 dof, tail form beyond); higher derivatives are central differences
// with Richardson extrapolation at two stencil spacings. The estimate is
// certified by refinement: two successive spacings must agree within 0.5% or
// NoConvergence is thrown. Stencil windows crossing a declared breakpoint of
// h are skipped for k >= 3 (derivatives of f jump there and no grid
// refinement can converge on the kink itself).
class SteinVerifier {
 public:
  // cap <= 0 selects the default 200 + 10 dof.
  SteinVerifier(double dof, const TestFunctionSpec& h, double cap = 0.0);

  double estimate_sup_norm(int k) const;
  double cap() const { return cap_; }

  // The lower-form grid packaged as a SteinSolution.
  SteinSolution solution() const;

  // Exact x -> 0+ limit of f^(m+1), m >= 0, from the differentiated Stein
  // equation: (m + dof/2) f^(m+1)(0) = h^(m)(0) + (m/2) f^(m)(0).
  double limit_at_origin(int deriv_order) const;

 private:
  struct Segment {
    double step = 0.0;
    std::vector<double> xs;
    std::vector<double> fprime;
  };
  double deriv_max(const Segment& seg, int m, int spacing, double x_min,
                   double excl_radius) const;

  double dof_ = 1.0;
  double cap_ = 0.0;
  TestFunctionSpec h_;
  double chi2_h_ = 0.0;
  std::vector<double> breakpoints_;
  Segment near_;  // lower form, fine grid on (0, ~4 dof + 8]
  Segment far_;   // tail form, coarser grid up to cap
};

double estimate_sup_norm(double dof, const TestFunctionSpec& h, int k, double cap = 0.0);

}  // namespace powerdiv
