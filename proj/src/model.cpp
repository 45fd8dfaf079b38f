#include "powerdiv/model.hpp"

#include <algorithm>
#include <cmath>

namespace powerdiv {

MultinomialSpec make_spec(long long n, std::vector<double> probs) {
  if (n < 1) fail(errc::index_out_of_range, "trial count n must be >= 1");
  if (probs.size() < 2) fail(errc::too_few_cells, "need at least 2 cells");
  for (double p : probs) {
    if (!(p > 0.0)) fail(errc::non_positive_probability, "cell probabilities must be positive");
  }
  KahanSum total;
  for (double p : probs) total.add(p);
  double sum = total.value();
  if (std::abs(sum - 1.0) > 1e-9) {
    fail(errc::probability_sum_error, "probabilities sum to " + std::to_string(sum));
  }
  // Renormalize, but skip when the sum is already 1 to machine precision so
  // that re-running make_spec on its own output is bit-stable.
  if (std::abs(sum - 1.0) > 1e-14) {
    for (double& p : probs) p /= sum;
  }

  MultinomialSpec spec;
  spec.n = n;
  spec.probs = std::move(probs);
  spec.p_star = *std::min_element(spec.probs.begin(), spec.probs.end());
  KahanSum inv, sqrt_inv, inv_sqrt_np;
  for (double p : spec.probs) {
    inv.add(1.0 / p);
    sqrt_inv.add(1.0 / std::sqrt(p));
    inv_sqrt_np.add(1.0 / std::sqrt(static_cast<double>(n) * p));
  }
  spec.inv_sum = inv.value();
  spec.sqrt_inv_sum = sqrt_inv.value();
  spec.inv_sqrt_np_sum = inv_sqrt_np.value();
  return spec;
}

DivergenceIndex make_index(double lambda) {
  if (!(lambda > -1.0) && std::abs(lambda + 1.0) > 1e-7) {
    fail(errc::index_out_of_range, "index parameter must satisfy lambda > -1 (or -1 for GM^2)");
  }
  DivergenceIndex idx;
  if (std::abs(lambda + 1.0) <= 1e-7) {
    idx.lambda = -1.0;
    idx.regime = Regime::MinusOne;
  } else if (std::abs(lambda) <= 1e-7) {
    idx.lambda = lambda;
    idx.regime = Regime::Zero;
  } else {
    idx.lambda = lambda;
    idx.regime = Regime::Generic;
  }
  return idx;
}

void validate_counts(const Counts& counts, const MultinomialSpec& spec) {
  if (counts.size() != spec.probs.size())
    fail(errc::count_sum_mismatch, "counts length does not match cell count");
  long long total = 0;
  for (long long c : counts) {
    if (c < 0) fail(errc::count_sum_mismatch, "negative count");
    total += c;
  }
  if (total != spec.n) fail(errc::count_sum_mismatch, "counts do not sum to n");
}

std::vector<double> standardize(const Counts& counts, const MultinomialSpec& spec) {
  validate_counts(counts, spec);
  std::vector<double> s(counts.size());
  for (size_t j = 0; j < counts.size(); ++j) {
    double np = static_cast<double>(spec.n) * spec.probs[j];
    s[j] = (static_cast<double>(counts[j]) - np) / std::sqrt(np);
  }
  return s;
}

bool TestFunctionSpec::has_finite_norms(int j, int k, bool allow_ae) const {
  for (int o = j; o <= k; ++o) {
    if (std::isfinite(deriv_norms[static_cast<size_t>(o)])) continue;
    if (o == 2 && ae_second_derivative && allow_ae) continue;
    return false;
  }
  return true;
}

TestFunctionSpec make_identity() {
  TestFunctionSpec f;
  f.name = "identity";
  f.eval = [](double x) { return x; };
  f.deriv = [](int k, double x) {
    if (k == 0) return x;
    return k == 1 ? 1.0 : 0.0;
  };
  f.deriv_norms = {kInf, 1.0, 0.0, 0.0, 0.0, 0.0};
  f.cls = {1, 5};
  f.growth_degree = 1;
  return f;
}

TestFunctionSpec make_exp_decay() {
  TestFunctionSpec f;
  f.name = "exp_decay";
  f.eval = [](double x) { return std::exp(-x); };
  f.deriv = [](int k, double x) {
    double v = std::exp(-x);
    return (k % 2 == 0) ? v : -v;
  };
  f.deriv_norms = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  f.cls = {0, 5};
  f.limit_at_inf = 0.0;
  return f;
}

TestFunctionSpec make_sine(double omega) {
  TestFunctionSpec f;
  f.name = "sine";
  f.eval = [omega](double x) { return std::sin(omega * x); };
  f.deriv = [omega](int k, double x) {
    constexpr double half_pi = 1.5707963267948966;
    return std::pow(omega, k) * std::sin(omega * x + k * half_pi);
  };
  for (int k = 0; k <= 5; ++k) f.deriv_norms[static_cast<size_t>(k)] = std::pow(omega, k);
  f.cls = {0, 5};
  f.params = {{"omega", omega}};
  return f;
}

namespace {

// Derivatives of the logistic sigmoid as polynomials in s = sigma(x):
// sigma^(m) = s(1-s) * P_m(s). Closed-form extrema give the sup norms.
double logistic_deriv_poly(int m, double s) {
  switch (m) {
    case 1: return 1.0;
    case 2: return 1.0 - 2.0 * s;
    case 3: return 1.0 + s * (-6.0 + 6.0 * s);
    case 4: return 1.0 + s * (-14.0 + s * (36.0 - 24.0 * s));
    case 5: return 1.0 + s * (-30.0 + s * (150.0 + s * (-240.0 + 120.0 * s)));
    default: return 0.0;
  }
}

}  // namespace

TestFunctionSpec make_logistic(double center) {
  TestFunctionSpec f;
  f.name = "logistic";
  f.eval = [center](double x) { return 1.0 / (1.0 + std::exp(-(x - center))); };
  f.deriv = [center](int k, double x) {
    double s = 1.0 / (1.0 + std::exp(-(x - center)));
    if (k == 0) return s;
    return s * (1.0 - s) * logistic_deriv_poly(k, s);
  };
  // ||h''|| = 1/(6 sqrt 3), ||h'''|| = 1/8 and ||h^(5)|| = 1/4 are exact
  // extrema of the derivative polynomials; ||h^(4)|| is the extremum at the
  // quartic root s* ~ 0.3009805446269047.
  f.deriv_norms = {1.0, 0.25, 1.0 / (6.0 * std::sqrt(3.0)), 0.125, 0.1276839219678019, 0.25};
  f.cls = {0, 5};
  f.params = {{"center", center}};
  f.limit_at_inf = 1.0;
  return f;
}

TestFunctionSpec make_smoothing(double alpha, double z) {
  TestFunctionSpec f;
  f.name = "smoothing";
  f.eval = [alpha, z](double x) {
    if (x <= z) return 1.0;
    if (x <= z + alpha / 2.0) return 1.0 - 2.0 * (x - z) * (x - z) / (alpha * alpha);
    if (x <= z + alpha) return 2.0 * (x - (z + alpha)) * (x - (z + alpha)) / (alpha * alpha);
    return 0.0;
  };
  f.deriv = [alpha, z](int k, double x) {
    if (k == 0) {
      if (x <= z) return 1.0;
      if (x <= z + alpha / 2.0) return 1.0 - 2.0 * (x - z) * (x - z) / (alpha * alpha);
      if (x <= z + alpha) return 2.0 * (x - (z + alpha)) * (x - (z + alpha)) / (alpha * alpha);
      return 0.0;
    }
    if (k == 1) {
      if (x <= z || x >= z + alpha) return 0.0;
      if (x <= z + alpha / 2.0) return -4.0 * (x - z) / (alpha * alpha);
      return 4.0 * (x - (z + alpha)) / (alpha * alpha);
    }
    if (k == 2) {
      // Almost-everywhere second derivative; right limit at the kinks.
      if (x < z || x >= z + alpha) return 0.0;
      if (x < z + alpha / 2.0) return -4.0 / (alpha * alpha);
      return 4.0 / (alpha * alpha);
    }
    return 0.0;
  };
  f.deriv_norms = {1.0, 2.0 / alpha, 4.0 / (alpha * alpha), kInf, kInf, kInf};
  f.cls = {0, 1};
  f.params = {{"alpha", alpha}, {"z", z}};
  f.ae_second_derivative = true;
  f.limit_at_inf = 0.0;
  f.breakpoints = {z, z + alpha / 2.0, z + alpha};
  return f;
}

const std::vector<TestFunctionSpec>& registry() {
  static const std::vector<TestFunctionSpec> reg = [] {
    std::vector<TestFunctionSpec> v;
    v.push_back(make_identity());
    v.push_back(make_exp_decay());
    v.push_back(make_sine());
    v.push_back(make_logistic());
    v.push_back(make_smoothing());
    return v;
  }();
  return reg;
}

const TestFunctionSpec& registry_find(const std::string& name) {
  for (const auto& f : registry()) {
    if (f.name == name) return f;
  }
  fail(errc::config_error, "unknown test function: " + name);
}

}  // namespace powerdiv
