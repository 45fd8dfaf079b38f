#include "powerdiv/chi_square.hpp"

#include <algorithm>
#include <cmath>

#include "powerdiv/quadrature.hpp"

namespace powerdiv {

namespace {

// Series representation, valid (and fast) for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  fail(errc::quadrature_failure, "incomplete gamma series did not converge");
}

// Continued fraction for Q(a, x) via modified Lentz, valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) {
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  fail(errc::quadrature_failure, "incomplete gamma continued fraction did not converge");
}

}  // namespace

double reg_lower_gamma(double a, double x) {
  if (x < 0.0) fail(errc::negative_argument, "incomplete gamma needs x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double chi2_pdf(const ChiSquareRef& ref, double x) {
  if (x < 0.0) return 0.0;
  double a = 0.5 * ref.dof;
  if (x == 0.0) {
    if (ref.dof > 2.0) return 0.0;
    if (ref.dof == 2.0) return 0.5;
    return kInf;
  }
  return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::log(2.0) - std::lgamma(a));
}

double chi2_cdf(const ChiSquareRef& ref, double z) {
  if (z < 0.0) fail(errc::negative_argument, "chi-square cdf needs z >= 0");
  return reg_lower_gamma(0.5 * ref.dof, 0.5 * z);
}

double chi2_tail(const ChiSquareRef& ref, double z) {
  if (z < 0.0) fail(errc::negative_argument, "chi-square tail needs z >= 0");
  double a = 0.5 * ref.dof;
  double x = 0.5 * z;
  if (x == 0.0) return 1.0;
  if (x >= a + 1.0) return gamma_q_cf(a, x);
  return 1.0 - gamma_p_series(a, x);
}

double chi2_truncation_point(const ChiSquareRef& ref, double tail_mass) {
  double t = ref.dof + 10.0;
  while (chi2_tail(ref, t) > tail_mass) {
    t *= 2.0;
    if (t > 1e6) fail(errc::quadrature_failure, "truncation point search ran away");
  }
  return t;
}

namespace {

bool density_smooth_at_origin(double dof) {
  // x^{dof/2 - 1} is smooth at 0 only when dof/2 - 1 is a nonnegative integer.
  double e = 0.5 * dof - 1.0;
  return e >= 0.0 && e == std::floor(e);
}

}  // namespace

double chi2_expectation(const ChiSquareRef& ref, const TestFunctionSpec& h) {
  const double T = chi2_truncation_point(ref);
  std::vector<double> cuts;
  cuts.push_back(0.0);
  for (double b : h.breakpoints) {
    if (b > 0.0 && b < T) cuts.push_back(b);
  }
  cuts.push_back(T);
  std::sort(cuts.begin(), cuts.end());

  auto integrand = [&](double t) { return h.eval(t) * chi2_pdf(ref, t); };

  KahanSum total;
  const double seg_tol = 1e-12;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i];
    double b = cuts[i + 1];
    if (a == 0.0 && !density_smooth_at_origin(ref.dof)) {
      // Substituted piece on [0, min(b, 1)]: the integrand in u is a
      // polynomial power times a smooth factor.
      double m = std::min(b, 1.0);
      auto sub = [&](double u) { return h.eval(u * u) * chi2_pdf(ref, u * u) * 2.0 * u; };
      total.add(integrate_adaptive(sub, 0.0, std::sqrt(m), seg_tol));
      a = m;
      if (a >= b) continue;
    }
    total.add(integrate_adaptive(integrand, a, b, seg_tol));
  }

  // Restore the truncated tail: exact for linear growth, limit value for
  // bounded h with a limit, and below 1e-14 * ||h|| otherwise.
  if (h.growth_degree == 1) {
    ChiSquareRef shifted{ref.dof + 2.0, ref.quad_tol};
    total.add(ref.dof * chi2_tail(shifted, T));
  } else if (h.limit_at_inf) {
    total.add(*h.limit_at_inf * chi2_tail(ref, T));
  }
  return total.value();
}

}  // namespace powerdiv
