#include "powerdiv/lemmas.hpp"

#include <cmath>

namespace powerdiv {

const char* to_string(TaylorVariant v) {
  switch (v) {
    case TaylorVariant::log: return "log";
    case TaylorVariant::high_lambda: return "high_lambda";
    case TaylorVariant::mid_lambda: return "mid_lambda";
  }
  return "?";
}

MarginRecord moment_margin(long long n, double p, BinMomentKind kind) {
  MarginRecord rec;
  rec.hypothesis_ok = static_cast<double>(n) * p >= 2.0;
  rec.lhs = exact_binomial_moment(n, p, kind);
  switch (kind) {
    case BinMomentKind::abs3: rec.rhs = 3.0; break;
    case BinMomentKind::central4: rec.rhs = 4.0; break;
    case BinMomentKind::central6: rec.rhs = 28.0; break;
  }
  rec.margin = rec.rhs - rec.lhs;
  return rec;
}

MarginRecord ahle_margin(long long n, double p, double k) {
  MarginRecord rec;
  double np = static_cast<double>(n) * p;
  rec.lhs = exact_binomial_raw_moment(n, p, k);
  rec.rhs = std::exp(k * k / (2.0 * np)) * std::pow(np, k);
  rec.margin = rec.rhs - rec.lhs;
  return rec;
}

MarginRecord cross_moment_margin(const MultinomialSpec& spec, int j, int k) {
  MarginRecord rec;
  rec.hypothesis_ok = true;
  for (double p : spec.probs) {
    if (static_cast<double>(spec.n) * p < static_cast<double>(spec.r())) rec.hypothesis_ok = false;
  }
  rec.lhs = std::abs(exact_cross_moment(spec, j, k));
  rec.rhs = 6.0 / spec.r() +
            4.0 * std::sqrt(spec.probs[static_cast<size_t>(j)] * spec.probs[static_cast<size_t>(k)]);
  rec.margin = rec.rhs - rec.lhs;
  return rec;
}

namespace {

// Fourth-order Taylor remainder of x^{lambda+1}/a^lambda about x = a.
double power_remainder_4(double lambda, double x, double a) {
  double d = x - a;
  return pow_nonneg(x, lambda + 1.0) / std::pow(a, lambda) - a - (lambda + 1.0) * d -
         lambda * (lambda + 1.0) / (2.0 * a) * d * d -
         (lambda - 1.0) * lambda * (lambda + 1.0) / (6.0 * a * a) * d * d * d;
}

// Third-order Taylor remainder of the same function.
double power_remainder_3(double lambda, double x, double a) {
  double d = x - a;
  return pow_nonneg(x, lambda + 1.0) / std::pow(a, lambda) - a - (lambda + 1.0) * d -
         lambda * (lambda + 1.0) / (2.0 * a) * d * d;
}

double xlog_term(double x, double a) {
  return x == 0.0 ? 0.0 : 2.0 * x * std::log(x / a);
}

}  // namespace

MarginRecord taylor_margin_L1(TaylorVariant variant, double lambda, double x, double a) {
  if (!(a > 0.0) || x < 0.0) fail(errc::variant_domain_error, "need a > 0 and x >= 0");
  MarginRecord rec;
  double d = x - a;
  switch (variant) {
    case TaylorVariant::log: {
      rec.lhs = std::abs(xlog_term(x, a) - 2.0 * d - d * d / a + d * d * d / (3.0 * a * a));
      rec.rhs = 2.0 * d * d * d * d / (3.0 * a * a * a);
      break;
    }
    case TaylorVariant::high_lambda: {
      if (!(lambda >= 3.0)) fail(errc::variant_domain_error, "high_lambda needs lambda >= 3");
      rec.lhs = std::abs(power_remainder_4(lambda, x, a));
      rec.rhs = (lambda - 2.0) * (lambda - 1.0) * lambda * (lambda + 1.0) / 24.0 *
                (1.0 + pow_nonneg(x / a, lambda - 3.0)) * d * d * d * d / (a * a * a);
      break;
    }
    case TaylorVariant::mid_lambda: {
      if (!(lambda > -1.0 && lambda < 3.0) || lambda == 0.0)
        fail(errc::variant_domain_error, "mid_lambda needs lambda in (-1,3) \\ {0}");
      // lambda in {1, 2}: the function is its own cubic Taylor polynomial and
      // the remainder vanishes identically; evaluating it would only expose
      // cancellation noise.
      rec.lhs = (lambda == 1.0 || lambda == 2.0) ? 0.0 : std::abs(power_remainder_4(lambda, x, a));
      rec.rhs = std::abs((lambda - 2.0) * (lambda - 1.0) * lambda) / 6.0 * d * d * d * d /
                (a * a * a);
      break;
    }
  }
  rec.margin = rec.rhs - rec.lhs;
  return rec;
}

MarginRecord taylor_margin_L2(TaylorVariant variant, double lambda, double x, double a) {
  if (!(a > 0.0) || x < 0.0) fail(errc::variant_domain_error, "need a > 0 and x >= 0");
  MarginRecord rec;
  double d = x - a;
  double ad = std::abs(d);
  switch (variant) {
    case TaylorVariant::log: {
      rec.lhs = std::abs(xlog_term(x, a) - 2.0 * d - d * d / a);
      rec.rhs = ad * ad * ad / (a * a);
      break;
    }
    case TaylorVariant::high_lambda: {
      if (!(lambda >= 2.0)) fail(errc::variant_domain_error, "high_lambda needs lambda >= 2");
      rec.lhs = std::abs(power_remainder_3(lambda, x, a));
      rec.rhs = (lambda - 1.0) * lambda * (lambda + 1.0) / 6.0 *
                (1.0 + pow_nonneg(x / a, lambda - 2.0)) * ad * ad * ad / (a * a);
      break;
    }
    case TaylorVariant::mid_lambda: {
      if (!(lambda > -1.0 && lambda < 2.0) || lambda == 0.0)
        fail(errc::variant_domain_error, "mid_lambda needs lambda in (-1,2) \\ {0}");
      // lambda = 1: the quadratic remainder vanishes identically.
      rec.lhs = lambda == 1.0 ? 0.0 : std::abs(power_remainder_3(lambda, x, a));
      rec.rhs = std::abs((lambda - 1.0) * lambda) / 2.0 * ad * ad * ad / (a * a);
      break;
    }
  }
  rec.margin = rec.rhs - rec.lhs;
  return rec;
}

std::vector<TaylorScanPoint> taylor_scan_grid(bool second_lemma) {
  std::vector<double> xs{0.0};
  for (int i = 0; i < 200; ++i) {
    // logspace(-3, 3, 200)
    xs.push_back(std::pow(10.0, -3.0 + 6.0 * i / 199.0));
  }
  const std::vector<double> as{0.5, 1.0, 2.0, 10.0};
  const std::vector<double> lambdas{-0.99, -0.5, -0.1, 0.5, 2.0 / 3.0, 1.5,
                                    2.0,   2.5,  3.0,  3.5, 5.0,       10.0};
  const double high_cut = second_lemma ? 2.0 : 3.0;
  std::vector<TaylorScanPoint> grid;
  for (double a : as) {
    for (double xr : xs) {
      double x = xr * a;
      grid.push_back({TaylorVariant::log, 0.0, x, a});
      for (double lam : lambdas) {
        if (lam >= high_cut) {
          grid.push_back({TaylorVariant::high_lambda, lam, x, a});
        } else if (lam != 0.0) {
          grid.push_back({TaylorVariant::mid_lambda, lam, x, a});
        }
      }
    }
  }
  return grid;
}

std::vector<MomentScanPoint> moment_scan_grid() {
  std::vector<MomentScanPoint> grid;
  const std::vector<long long> ns{4, 8, 16, 32, 64, 128, 256, 512, 1000};
  const std::vector<double> ps{0.05, 0.1, 0.25, 0.5, 0.75, 0.9};
  for (long long n : ns) {
    for (double p : ps) {
      if (static_cast<double>(n) * p >= 2.0) grid.push_back({n, p});
    }
  }
  return grid;
}

std::vector<double> ahle_order_grid() { return {0.5, 1.0, 2.0, 3.0, 3.5, 5.0}; }

}  // namespace powerdiv
