#include "powerdiv/stein.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "powerdiv/quadrature.hpp"

namespace powerdiv {

namespace {

// Adaptive integration split at the test function's breakpoints.
double integrate_split(const std::function<double(double)>& f, double a, double b,
                       const std::vector<double>& breakpoints, double abs_tol, double rel_tol) {
  std::vector<double> cuts{a};
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  KahanSum acc;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    acc.add(integrate_adaptive(f, cuts[i], cuts[i + 1], abs_tol, rel_tol));
  }
  return acc.value();
}

bool density_smooth_at_origin(double dof) {
  double e = 0.5 * dof - 1.0;
  return e >= 0.0 && e == std::floor(e);
}

double switch_point(double dof) { return 2.0 * dof + 2.0; }

}  // namespace

SteinOperator::SteinOperator(double dof, const TestFunctionSpec& h)
    : ref_{dof, 1e-11}, h_(h), chi2_h_(chi2_expectation(ref_, h)) {}

double SteinOperator::lower_integral(double x) const {
  auto g = [this](double t) { return integrand(t); };
  KahanSum acc;
  double a = 0.0;
  if (!density_smooth_at_origin(ref_.dof)) {
    double m = std::min(x, 1.0);
    auto sub = [this](double u) {
      return (h_.eval(u * u) - chi2_h_) * chi2_pdf(ref_, u * u) * 2.0 * u;
    };
    acc.add(integrate_split(sub, 0.0, std::sqrt(m), {}, 1e-15, 1e-14));
    a = m;
  }
  if (a < x) acc.add(integrate_split(g, a, x, h_.breakpoints, 1e-15, 1e-14));
  return acc.value();
}

double SteinOperator::tail_integral_from(double x, double upto) const {
  auto g = [this](double t) { return integrand(t); };
  return integrate_split(g, x, upto, h_.breakpoints, 0.0, 5e-14);
}

double SteinOperator::tail_integral(double x) const {
  // Extend the window until the increment is lost in the running total; the
  // integrand decays at least like exp(-t/2) times slow variation.
  double total = tail_integral_from(x, x + 60.0);
  double lo = x + 60.0;
  for (int i = 0; i < 12; ++i) {
    double hi = lo + 120.0;
    double inc = tail_integral_from(lo, hi);
    total += inc;
    lo = hi;
    if (std::abs(inc) <= 1e-17 * std::abs(total)) break;
  }
  return total;
}

double SteinOperator::fprime_lower(double x) const {
  if (!(x > 0.0)) fail(errc::negative_argument, "Stein solution needs x > 0");
  return lower_integral(x) / (x * chi2_pdf(ref_, x));
}

double SteinOperator::fprime_tail(double x) const {
  if (!(x > 0.0)) fail(errc::negative_argument, "Stein solution needs x > 0");
  return -tail_integral(x) / (x * chi2_pdf(ref_, x));
}

double SteinOperator::fprime(double x) const {
  return x <= switch_point(ref_.dof) ? fprime_lower(x) : fprime_tail(x);
}

void SteinOperator::fprime_fsecond(double x, double* fp, double* fpp) const {
  const double delta = std::max(1e-5, 1e-7 * x);
  const double xm = x - delta, xp = x + delta;
  // The realized offsets differ from delta by up to one ulp of x; the
  // analytic factors below must use exactly the offsets the integrals see.
  const double dp = xp - x;
  const double dm = x - xm;
  // 1/(t rho(t)) at x +- delta expressed through the value at x:
  //   (x rho(x)) / (t rho(t)) = exp((dof/2)(log x - log t) + (t - x)/2).
  // The three reciprocals share their rounding, and their difference is
  // carried through expm1 so the central difference of f' is not polluted
  // by independent pdf noise.
  const double inv_c = 1.0 / (x * chi2_pdf(ref_, x));
  const double half_dof = 0.5 * ref_.dof;
  const double ep = -half_dof * std::log1p(dp / x) + 0.5 * dp;
  const double em = -half_dof * std::log1p(-dm / x) - 0.5 * dm;
  const double inv_p = inv_c * std::exp(ep);
  const double inv_m = inv_c * std::exp(em);
  const double inv_diff = inv_c * std::exp(em) * std::expm1(ep - em);  // inv_p - inv_m
  auto sliver = [this](double a, double b) {
    return integrate_split([this](double t) { return integrand(t); }, a, b, h_.breakpoints,
                           1e-16, 1e-14);
  };
  double fc, diff;
  if (x <= switch_point(ref_.dof) && xm > 0.0) {
    // Shared base: I(xm) once, then the slivers to x and x + delta. The
    // common quadrature error cancels in the central difference.
    double base = lower_integral(xm);
    double d1 = sliver(xm, x);
    double d2 = sliver(x, xp);
    fc = (base + d1) * inv_c;
    diff = base * inv_diff + (d1 + d2) * inv_p;
  } else {
    double base = tail_integral(xp);  // J(x + delta)
    double d1 = sliver(x, xp);
    double d2 = sliver(xm, x);
    fc = -(base + d1) * inv_c;
    // f'(x+d) - f'(x-d) = -base (inv_p - inv_m) + (d1 + d2) inv_m
    diff = -base * inv_diff + (d1 + d2) * inv_m;
  }
  *fp = fc;
  *fpp = diff / (dp + dm);
}

double SteinOperator::residual(double x) const {
  if (!(x > 0.0)) fail(errc::negative_argument, "Stein residual needs x > 0");
  double fp, fpp;
  fprime_fsecond(x, &fp, &fpp);
  if (std::getenv("POWERDIV_STEIN_DEBUG")) {
    std::fprintf(stderr, "residual x=%g fp=%.17g fpp=%.17g xfpp=%.3e lin=%.3e\n", x, fp, fpp,
                 x * fpp, 0.5 * (ref_.dof - x) * fp - (h_.eval(x) - chi2_h_));
  }
  return std::abs(x * fpp + 0.5 * (ref_.dof - x) * fp - (h_.eval(x) - chi2_h_));
}

double SteinOperator::identity_gap(const ExactDistribution& dist) const {
  KahanSum lhs;
  for (const auto& atom : dist.atoms) {
    if (std::isinf(atom.value))
      fail(errc::infinite_atom_without_limit, "identity gap needs finite atoms");
    if (atom.value <= 0.0) {
      // x f'' + (dof - x)/2 f' -> h(0) - chi2_h as x -> 0+.
      lhs.add(atom.prob * (h_.eval(0.0) - chi2_h_));
      continue;
    }
    double fp, fpp;
    fprime_fsecond(atom.value, &fp, &fpp);
    lhs.add(atom.prob * (atom.value * fpp + 0.5 * (ref_.dof - atom.value) * fp));
  }
  KahanSum rhs;
  for (const auto& atom : dist.atoms) rhs.add(atom.prob * (h_.eval(atom.value) - chi2_h_));
  return std::abs(lhs.value() - rhs.value());
}

double solve_fprime(double dof, const TestFunctionSpec& h, double x) {
  return SteinOperator(dof, h).fprime(x);
}

double stein_residual(double dof, const TestFunctionSpec& h, double x) {
  return SteinOperator(dof, h).residual(x);
}

double identity_gap(double dof, const TestFunctionSpec& h, const ExactDistribution& dist) {
  return SteinOperator(dof, h).identity_gap(dist);
}

// ---------------------------------------------------------------------------
// Grid-based sup-norm estimation.

namespace {

// Panel integral that honors interior breakpoints.
double panel(const std::function<double(double)>& f, double a, double b,
             const std::vector<double>& breakpoints) {
  for (double c : breakpoints) {
    if (c > a && c < b) {
      return panel(f, a, c, breakpoints) + panel(f, c, b, breakpoints);
    }
  }
  return gauss_legendre_15(f, a, b);
}

// Central finite-difference stencils for the m-th derivative, O(s^2).
struct Stencil {
  int halfwidth;
  int offsets[7];
  double coeffs[7];
  int count;
};

Stencil stencil_for(int m) {
  switch (m) {
    case 1: return {1, {-1, 1}, {-0.5, 0.5}, 2};
    case 2: return {1, {-1, 0, 1}, {1.0, -2.0, 1.0}, 3};
    case 3: return {2, {-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}, 4};
    case 4: return {2, {-2, -1, 0, 1, 2}, {1.0, -4.0, 6.0, -4.0, 1.0}, 5};
    case 5: return {3, {-3, -2, -1, 1, 2, 3}, {-0.5, 2.0, -2.5, 2.5, -2.0, 0.5}, 6};
    default: fail(errc::order_out_of_range, "stencil order out of range");
  }
}

}  // namespace

SteinVerifier::SteinVerifier(double dof, const TestFunctionSpec& h, double cap)
    : dof_(dof), h_(h), breakpoints_(h.breakpoints) {
  cap_ = cap > 0.0 ? cap : 200.0 + 10.0 * dof;
  ChiSquareRef ref{dof, 1e-11};
  chi2_h_ = chi2_expectation(ref, h);
  auto g = [&](double t) { return (h.eval(t) - chi2_h_) * chi2_pdf(ref, t); };

  // Near segment: cumulative lower-form integral on a fine uniform grid.
  {
    near_.step = 1.0 / 256.0;
    const double hi = std::min(cap_, 4.0 * dof + 8.0);
    const size_t count = static_cast<size_t>(std::ceil(hi / near_.step));
    near_.xs.resize(count);
    near_.fprime.resize(count);
    KahanSum cum;
    double prev = 0.0;
    bool substituted = !density_smooth_at_origin(dof);
    for (size_t i = 0; i < count; ++i) {
      double x = static_cast<double>(i + 1) * near_.step;
      if (substituted && x <= 1.0) {
        auto sub = [&](double u) { return (h.eval(u * u) - chi2_h_) * chi2_pdf(ref, u * u) * 2.0 * u; };
        cum.add(panel(sub, std::sqrt(prev), std::sqrt(x), {}));
      } else {
        cum.add(panel(g, prev, x, breakpoints_));
      }
      near_.xs[i] = x;
      near_.fprime[i] = cum.value() / (x * chi2_pdf(ref, x));
      prev = x;
    }
  }

  // Far segment: cumulative tail-form integral, swept from far beyond the
  // cap back toward the switch region.
  {
    far_.step = 1.0 / 16.0;
    const double lo = std::max(far_.step, std::floor(dof / far_.step) * far_.step);
    const size_t count = static_cast<size_t>(std::floor((cap_ - lo) / far_.step)) + 1;
    far_.xs.resize(count);
    far_.fprime.resize(count);
    const double pad_end = cap_ + 320.0;
    // Remainder beyond the padded end is below e^{-160} of the local scale.
    KahanSum cum;
    double edge = pad_end;
    while (edge > cap_) {
      double next = edge - far_.step;
      cum.add(panel(g, next, edge, breakpoints_));
      edge = next;
    }
    for (size_t i = count; i-- > 0;) {
      double x = lo + static_cast<double>(i) * far_.step;
      cum.add(panel(g, x, edge, breakpoints_));
      edge = x;
      far_.xs[i] = x;
      far_.fprime[i] = -cum.value() / (x * chi2_pdf(ref, x));
    }
  }
}

SteinSolution SteinVerifier::solution() const {
  SteinSolution s;
  s.dof = dof_;
  s.h_name = h_.name;
  s.chi2_h = chi2_h_;
  s.grid = near_.xs;
  s.fprime_values = near_.fprime;
  return s;
}

double SteinVerifier::deriv_max(const Segment& seg, int m, int spacing, double x_min,
                                double excl_radius) const {
  if (m == 0) {
    double best = 0.0;
    for (double v : seg.fprime) best = std::max(best, std::abs(v));
    return best;
  }
  const Stencil st = stencil_for(m);
  const double s = spacing * seg.step;
  const double s2 = 2.0 * s;
  const int n = static_cast<int>(seg.xs.size());
  // The scan window starts at a fixed abscissa so that estimates at
  // different stencil spacings cover identical ground; the x -> 0 boundary
  // layer is covered by the analytic origin limit instead.
  int lo = 2 * st.halfwidth * spacing;
  const int hi = n - 2 * st.halfwidth * spacing;
  while (lo < hi && seg.xs[static_cast<size_t>(lo)] < x_min) ++lo;
  double best = 0.0;
  for (int i = lo; i < hi; ++i) {
    double x = seg.xs[static_cast<size_t>(i)];
    if (m >= 2 && !breakpoints_.empty()) {
      // Derivatives of f jump at h's kinks and no stencil converges across
      // them. The exclusion radius covers the widest stencil used at this
      // order, so the two refinements scan identical ground.
      bool skip = false;
      for (double b : breakpoints_) {
        if (std::abs(x - b) <= excl_radius) skip = true;
      }
      if (skip) continue;
    }
    double d1 = 0.0, d2 = 0.0;
    for (int t = 0; t < st.count; ++t) {
      d1 += st.coeffs[t] * seg.fprime[static_cast<size_t>(i + st.offsets[t] * spacing)];
      d2 += st.coeffs[t] * seg.fprime[static_cast<size_t>(i + st.offsets[t] * 2 * spacing)];
    }
    d1 /= std::pow(s, m);
    d2 /= std::pow(s2, m);
    // Richardson: the O(s^2) truncation term cancels.
    best = std::max(best, std::abs((4.0 * d1 - d2) / 3.0));
  }
  return best;
}

double SteinVerifier::limit_at_origin(int deriv_order) const {
  // f^(1)(0) = 2 (h(0) - chi2_h)/dof; then
  // (m + dof/2) f^(m+1)(0) = h^(m)(0) + (m/2) f^(m)(0).
  double f_prev = 2.0 * (h_.eval(0.0) - chi2_h_) / dof_;
  for (int m = 1; m < deriv_order; ++m) {
    f_prev = (h_.deriv(m, 0.0) + 0.5 * m * f_prev) / (m + 0.5 * dof_);
  }
  return f_prev;
}

double SteinVerifier::estimate_sup_norm(int k) const {
  if (k < 1 || k > 6) fail(errc::order_out_of_range, "sup norm order must be 1..6");
  const int m = k - 1;
  const double origin = std::abs(limit_at_origin(m + 1));
  if (m == 0) {
    double coarse = origin;
    for (size_t i = 1; i < near_.fprime.size(); i += 2)
      coarse = std::max(coarse, std::abs(near_.fprime[i]));
    double best =
        std::max({origin, deriv_max(near_, 0, 1, 0.0, 0.0), deriv_max(far_, 0, 1, 0.0, 0.0)});
    if (best > 1e-7 &&
        std::abs(best - std::max(coarse, deriv_max(far_, 0, 1, 0.0, 0.0))) > 5e-3 * best) {
      fail(errc::no_convergence, "sup norm refinements disagree beyond 0.5%");
    }
    return best;
  }
  // Stencil spacings sized so that the grid-value noise (about 1e-13 on
  // f') stays well below the certification tolerance after the 1/s^m
  // amplification; the scan window start is fixed per order so refinements
  // cover identical ground, with the origin limit covering the rest.
  static const int near_spacing[6] = {0, 4, 4, 8, 16, 32};
  static const double window_start[6] = {0.0, 0.25, 0.25, 0.3, 0.5, 0.8};
  const double x_min = window_start[m];
  const int sp = near_spacing[m];
  const int hw = m <= 2 ? 1 : (m <= 4 ? 2 : 3);
  const double excl_near = 2.0 * sp * hw * near_.step + 0.1;
  const double excl_far = 2.0 * 4 * hw * far_.step + 0.1;
  double est1 = std::max(origin, std::max(deriv_max(near_, m, sp, x_min, excl_near),
                                          deriv_max(far_, m, 4, x_min, excl_far)));
  double est2 = std::max(origin, std::max(deriv_max(near_, m, sp / 2, x_min, excl_near),
                                          deriv_max(far_, m, 2, x_min, excl_far)));
  if (std::getenv("POWERDIV_STEIN_DEBUG")) {
    std::fprintf(stderr, "supnorm m=%d origin=%.8g est1=%.8g est2=%.8g\n", m, origin, est1,
                 est2);
  }
  double scale = std::max(est1, est2);
  if (scale < 1e-4) return est2;  // identically vanishing derivative: noise
  if (std::abs(est1 - est2) > 5e-3 * scale) {
    fail(errc::no_convergence, "sup norm refinements disagree beyond 0.5%");
  }
  return est2;
}

double estimate_sup_norm(double dof, const TestFunctionSpec& h, int k, double cap) {
  return SteinVerifier(dof, h, cap).estimate_sup_norm(k);
}

}  // namespace powerdiv
