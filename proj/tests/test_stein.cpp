#include <doctest.h>

#include <cmath>

#include "powerdiv/bounds.hpp"
#include "powerdiv/stein.hpp"

using namespace powerdiv;

TEST_SUITE_BEGIN("stein");

namespace {

// Test-local oracle: adaptive Simpson, independent of the library's
// Gauss-Kronrod machinery.
double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = f(0.5 * (a + m)), rm = f(0.5 * (m + b));
  double left = (m - a) / 6.0 * (fa + 4.0 * lm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * rm + fb);
  if (depth > 40 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, m, fa, lm, fm, left, tol / 2, depth + 1) +
         simpson_rec(f, m, b, fm, rm, fb, right, tol / 2, depth + 1);
}

double simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 0);
}

TestFunctionSpec constant_one() {
  TestFunctionSpec f;
  f.name = "one";
  f.eval = [](double) { return 1.0; };
  f.deriv = [](int k, double) { return k == 0 ? 1.0 : 0.0; };
  f.deriv_norms = {1, 0, 0, 0, 0, 0};
  f.cls = {0, 5};
  f.limit_at_inf = 1.0;
  return f;
}

}  // namespace

TEST_CASE("identity test function solves with constant fprime -2") {
  TestFunctionSpec id = make_identity();
  for (double dof : {1.0, 2.0, 3.0, 5.0}) {
    SteinOperator op(dof, id);
    for (double x : {0.05, 0.5, 1.0, dof, 2.0 * dof, 4.0 * dof, 30.0}) {
      CHECK(op.fprime(x) == doctest::Approx(-2.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("constant test function solves with fprime 0") {
  SteinOperator op(3.0, constant_one());
  for (double x : {0.1, 1.0, 5.0, 40.0}) {
    CHECK(std::abs(op.fprime(x)) <= 1e-12);
    CHECK(op.residual(x) <= 1e-10);
  }
}

TEST_CASE("fprime cross-checked against an independent quadrature") {
  // dof = 1, h = e^-x at x = 1: f'(1) = (1/rho(1)) int_0^1 (h - chi2_h) rho.
  // With t = u^2 the dof-1 density cancels its singularity analytically:
  // rho(u^2) 2u = 2 e^{-u^2/2} / sqrt(2 pi). Adaptive Simpson as the oracle.
  TestFunctionSpec h = make_exp_decay();
  SteinOperator op(1.0, h);
  double chi2h = 1.0 / std::sqrt(3.0);
  const double c = 2.0 / std::sqrt(2.0 * M_PI);
  auto sub = [&](double u) { return (std::exp(-u * u) - chi2h) * c * std::exp(-u * u / 2.0); };
  double oracle = simpson(sub, 0.0, 1.0, 1e-14) / (1.0 * chi2_pdf(ChiSquareRef{1.0}, 1.0));
  CHECK(op.fprime(1.0) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("residual examples") {
  TestFunctionSpec id = make_identity();
  for (double x : {0.01, 0.3, 1.0, 7.0, 55.0, 100.0}) {
    CHECK(stein_residual(2.0, id, x) <= 1e-8);
  }
  TestFunctionSpec h = make_exp_decay();
  for (double x : {0.1, 1.0, 10.0}) {
    CHECK(stein_residual(3.0, h, x) <= 1e-8);
  }
}

TEST_CASE("residual stays below 1e-8 for a sample of the scan grid") {
  // The full grid runs in the acceptance suite; this samples each function.
  for (const auto& h : registry()) {
    for (double dof : {1.0, 5.0}) {
      SteinOperator op(dof, h);
      for (double x : {0.01, 0.17, 1.9, 2.5, 11.0, 100.0}) {
        INFO(h.name, " dof=", dof, " x=", x);
        CHECK(op.residual(x) <= 1e-8);
      }
    }
  }
}

TEST_CASE("lower and tail forms agree on the overlap region") {
  for (const auto& name : {"exp_decay", "smoothing", "identity"}) {
    const TestFunctionSpec& h = registry_find(name);
    for (double dof : {1.0, 2.0, 3.0, 5.0}) {
      SteinOperator op(dof, h);
      for (int i = 0; i <= 6; ++i) {
        double x = dof + (4.0 * dof - dof) * i / 6.0;
        CHECK(std::abs(op.fprime_lower(x) - op.fprime_tail(x)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("sup norm estimates: identity closed form") {
  CHECK(estimate_sup_norm(1.0, make_identity(), 1) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(estimate_sup_norm(3.0, make_identity(), 1) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(estimate_sup_norm(2.0, make_identity(), 2) <= 1e-5);
}

TEST_CASE("sup norm estimates respect the rule bounds on a sample") {
  // Full verification in the acceptance suite; spot-check the tight and
  // representative cases here.
  TestFunctionSpec exp_h = make_exp_decay();
  NormBundle exp_norms = NormBundle::from(exp_h);
  SteinVerifier v3(3.0, exp_h);
  for (int k = 1; k <= 5; ++k) {
    double est = v3.estimate_sup_norm(k);
    double luk = stein_norm_bound(std::max(k, 1), 3.0, exp_norms, SteinNormRule::luk);
    CHECK(est <= luk * (1.0 + 1e-3));
  }
  double est6 = v3.estimate_sup_norm(6);
  CHECK(est6 <= stein_norm_bound(6, 3.0, exp_norms, SteinNormRule::order_only) * (1.0 + 1e-3));
  CHECK(est6 <= stein_norm_bound(6, 3.0, exp_norms, SteinNormRule::general) * (1.0 + 1e-3));

  // The identity at k = 1 meets the luk bound with equality (f' = -2,
  // 2||h'||/1 = 2); the slack factor absorbs the estimate error.
  double id_est = estimate_sup_norm(1.0, make_identity(), 1);
  CHECK(id_est <= 2.0 * (1.0 + 1e-3));
  CHECK(id_est >= 2.0 * (1.0 - 1e-3));
}

TEST_CASE("solution grid is consistent with pointwise evaluation") {
  TestFunctionSpec h = make_logistic();
  SteinVerifier verifier(2.0, h);
  SteinSolution sol = verifier.solution();
  CHECK(sol.dof == 2.0);
  CHECK(sol.grid.size() == sol.fprime_values.size());
  SteinOperator op(2.0, h);
  for (size_t i = 63; i < sol.grid.size(); i += 1024) {
    CHECK(sol.fprime_values[i] == doctest::Approx(op.fprime_lower(sol.grid[i])).epsilon(1e-9));
  }
}

TEST_CASE("identity gap examples") {
  ExactDistribution point;
  point.atoms = {{1.0, 1.0}};
  CHECK(identity_gap(1.0, make_identity(), point) <= 1e-8);
  CHECK(identity_gap(2.0, constant_one(), point) <= 1e-12);

  ExactDistribution law = exact_distribution(make_spec(20, {0.5, 0.5}), make_index(1.0));
  CHECK(identity_gap(1.0, make_exp_decay(), law) <= 1e-6);
}

TEST_SUITE_END();
