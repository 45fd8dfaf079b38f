#include "powerdiv/bounds.hpp"

#include <cmath>

namespace powerdiv {

namespace {

const double kG632Base = std::sqrt(2.0) * (std::sqrt(2.0 * M_PI) + std::exp(-1.0));

double np_star(const MultinomialSpec& spec) {
  return static_cast<double>(spec.n) * spec.p_star;
}

void add_precondition(BoundReport& rep, const std::string& name, double required, double actual,
                      bool ok) {
  rep.preconditions.push_back({name, required, actual, ok});
}

void check_np_star(BoundReport& rep, const MultinomialSpec& spec, double required) {
  double actual = np_star(spec);
  add_precondition(rep, "np_star", required, actual, actual >= required);
}

void check_lambda(BoundReport& rep, double lambda) {
  add_precondition(rep, "lambda_gt_minus_one", -1.0, lambda, lambda > -1.0);
}

// Extra moment condition for large lambda: np_* >= 2 (lambda - t)^2 when
// lambda >= t (t = 3 for the 1/n bounds, t = 2 for the 1/sqrt(n) bounds).
void check_large_lambda(BoundReport& rep, const MultinomialSpec& spec, double lambda,
                        double threshold) {
  if (lambda < threshold) return;
  double required = 2.0 * (lambda - threshold) * (lambda - threshold);
  double actual = np_star(spec);
  add_precondition(rep, "np_star_large_lambda", required, actual, actual >= required);
}

void check_norms(BoundReport& rep, const NormBundle& norms, SmoothnessClass cls) {
  bool ok = true;
  for (int k = cls.j; k <= cls.k; ++k) {
    if (!std::isfinite(norms[k])) ok = false;
  }
  add_precondition(rep, "norms_finite", 1.0, ok ? 1.0 : 0.0, ok);
}

bool finish(BoundReport& rep) {
  if (rep.satisfied()) return true;
  rep.value = kInf;
  rep.terms.clear();
  return false;
}

// Coefficient blocks of the bound formulas.
double block_g5(const NormBundle& h) {
  return 19.0 * h[0] + 366.0 * h[1] + 2016.0 * h[2] + 5264.0 * h[3] + 106965.0 * h[4] +
         302922.0 * h[5];
}
double block_t015(const NormBundle& h) {
  return 122.0 * h[1] + 1970.0 * h[2] + 6943.0 * h[3] + 12731.0 * h[4] + 643710.0 * h[5];
}
double block_t025(const NormBundle& h) {
  return 19.0 * h[2] + 206.0 * h[3] + 545.0 * h[4] + 161348.0 * h[5];
}
double block_g2(const NormBundle& h) { return 3.0 * h[0] + 23.0 * h[1] + 42.0 * h[2]; }
double block_t012(const NormBundle& h) { return 115.0 * h[1] + 536.0 * h[2]; }
double block_lambda_r(const NormBundle& h) {
  return 2.0 * h[1] + 202.0 * h[2] + 819.0 * h[3] + 100974.0 * h[4];
}

// |lambda-1|(lambda-2)| (12 lambda + 13) / (6 (lambda + 1)); literal zero at
// lambda = 1 and lambda = 2 so the reduction tests are exact.
double lambda_linear_term(double lambda) {
  if (lambda == 1.0 || lambda == 2.0) return 0.0;
  return std::abs((lambda - 1.0) * (lambda - 2.0)) * (12.0 * lambda + 13.0) /
         (6.0 * (lambda + 1.0));
}

double lambda_square_term(double lambda) {
  if (lambda == 1.0) return 0.0;
  return (19.0 / 9.0) * (lambda - 1.0) * (lambda - 1.0);
}

double sqrt_n_lambda_term(double lambda) {
  if (lambda == 1.0) return 0.0;
  return std::abs(lambda - 1.0) * (4.0 * lambda + 7.0) / (lambda + 1.0);
}

// Shared prefactors so that the lambda = 1 reductions of the power
// divergence bounds are bitwise equal to the Pearson bounds.
double g2_prefactor(const MultinomialSpec& spec, const NormBundle& norms) {
  return 24.0 / (spec.r() + 1.0) * block_g2(norms);
}
double t012_prefactor(const MultinomialSpec& spec, const NormBundle& norms) {
  return block_t012(norms) / std::sqrt(spec.r() + 1.0);
}

}  // namespace

const char* to_string(PearsonVariant v) {
  switch (v) {
    case PearsonVariant::C05: return "pearson_C05";
    case PearsonVariant::C02: return "pearson_C02";
    case PearsonVariant::C15: return "pearson_C15";
    case PearsonVariant::C12: return "pearson_C12";
    case PearsonVariant::C25: return "pearson_C25";
    case PearsonVariant::C22: return "pearson_C22";
  }
  return "?";
}
const char* to_string(RateNVariant v) { return v == RateNVariant::C05 ? "pd_n_C05" : "pd_n_C15"; }
const char* to_string(RateSqrtNVariant v) { return v == RateSqrtNVariant::C02 ? "pd_sqrtn_C02" : "pd_sqrtn_C12"; }
const char* to_string(SteinNormRule rule) {
  switch (rule) {
    case SteinNormRule::luk: return "luk";
    case SteinNormRule::general: return "general";
    case SteinNormRule::simplified: return "simplified";
    case SteinNormRule::order_only: return "order_only";
    case SteinNormRule::two_norm: return "two_norm";
  }
  return "?";
}

SmoothnessClass variant_class(PearsonVariant v) {
  switch (v) {
    case PearsonVariant::C05: return {0, 5};
    case PearsonVariant::C02: return {0, 2};
    case PearsonVariant::C15: return {1, 5};
    case PearsonVariant::C12: return {1, 2};
    case PearsonVariant::C25: return {2, 5};
    case PearsonVariant::C22: return {2, 2};
  }
  return {0, 5};
}
SmoothnessClass variant_class(RateNVariant v) {
  return v == RateNVariant::C05 ? SmoothnessClass{0, 5} : SmoothnessClass{1, 5};
}
SmoothnessClass variant_class(RateSqrtNVariant v) {
  return v == RateSqrtNVariant::C02 ? SmoothnessClass{0, 2} : SmoothnessClass{1, 2};
}

BoundReport pearson_bound(const MultinomialSpec& spec, const NormBundle& norms,
                          PearsonVariant variant) {
  BoundReport rep;
  rep.theorem = to_string(variant);
  check_np_star(rep, spec, 1.0);
  check_norms(rep, norms, variant_class(variant));
  if (!finish(rep)) return rep;

  const double n = static_cast<double>(spec.n);
  const double r = spec.r();
  const double q = spec.sqrt_inv_sum;  // sum 1/sqrt(p_j)
  double value = 0.0;
  switch (variant) {
    case PearsonVariant::C05:
      value = 4.0 / ((r + 1.0) * n) * q * q * block_g5(norms);
      break;
    case PearsonVariant::C02:
      value = g2_prefactor(spec, norms) * spec.inv_sqrt_np_sum;
      break;
    case PearsonVariant::C15:
      value = q * q / (std::sqrt(r + 1.0) * n) * block_t015(norms);
      break;
    case PearsonVariant::C12:
      value = t012_prefactor(spec, norms) * spec.inv_sqrt_np_sum;
      break;
    case PearsonVariant::C25:
      value = q * q / n * block_t025(norms);
      break;
    case PearsonVariant::C22:
      value = 238.0 * norms[2] * spec.inv_sqrt_np_sum;
      break;
  }
  rep.value = value;
  rep.terms.emplace_back("pearson_block", value);
  return rep;
}

BoundReport rate_n_bound(const MultinomialSpec& spec, const DivergenceIndex& idx,
                       const NormBundle& norms, RateNVariant variant) {
  BoundReport rep;
  rep.theorem = to_string(variant);
  check_lambda(rep, idx.lambda);
  check_np_star(rep, spec, static_cast<double>(spec.r()));
  check_large_lambda(rep, spec, idx.lambda, 3.0);
  check_norms(rep, norms, variant_class(variant));
  if (!finish(rep)) return rep;

  const double lam = idx.lambda;
  const double r = spec.r();
  const double scale = spec.inv_sum / static_cast<double>(spec.n);
  double pearson_part = variant == RateNVariant::C05
                            ? 4.0 * r / (r + 1.0) * block_g5(norms)
                            : r / std::sqrt(r + 1.0) * block_t015(norms);
  double lam_r = lam == 1.0 ? 0.0 : std::abs(lam - 1.0) * r * block_lambda_r(norms);
  double lam_sq = lambda_square_term(lam) * norms[2];
  double lam_lin = lambda_linear_term(lam) * norms[1];

  rep.value = (pearson_part + lam_r + lam_sq + lam_lin) * scale;
  rep.terms.emplace_back("pearson_block", pearson_part * scale);
  rep.terms.emplace_back("lambda_r_block", lam_r * scale);
  rep.terms.emplace_back("lambda_square", lam_sq * scale);
  rep.terms.emplace_back("lambda_linear", lam_lin * scale);
  return rep;
}

BoundReport rate_sqrt_n_bound(const MultinomialSpec& spec, const DivergenceIndex& idx,
                       const NormBundle& norms, RateSqrtNVariant variant) {
  BoundReport rep;
  rep.theorem = to_string(variant);
  check_lambda(rep, idx.lambda);
  check_np_star(rep, spec, 2.0);
  check_large_lambda(rep, spec, idx.lambda, 2.0);
  check_norms(rep, norms, variant_class(variant));
  if (!finish(rep)) return rep;

  const double lam = idx.lambda;
  double pearson_pref =
      variant == RateSqrtNVariant::C02 ? g2_prefactor(spec, norms) : t012_prefactor(spec, norms);
  double lam_pref = sqrt_n_lambda_term(lam) * norms[1];
  // Adding the literal 0.0 at lambda = 1 keeps the value bitwise equal to the
  // corresponding Pearson bound.
  rep.value = (pearson_pref + lam_pref) * spec.inv_sqrt_np_sum;
  rep.terms.emplace_back("pearson_block", pearson_pref * spec.inv_sqrt_np_sum);
  rep.terms.emplace_back("lambda_term", lam_pref * spec.inv_sqrt_np_sum);
  return rep;
}

BoundReport kolmogorov_bound(const MultinomialSpec& spec, const DivergenceIndex& idx) {
  BoundReport rep;
  rep.theorem = "kolmogorov";
  check_lambda(rep, idx.lambda);
  check_np_star(rep, spec, 2.0);
  check_large_lambda(rep, spec, idx.lambda, 2.0);
  if (!finish(rep)) return rep;

  const double lam = idx.lambda;
  const double r = spec.r();
  const double b = np_star(spec);
  const double lam_num = lam == 1.0 ? 0.0 : std::abs(lam - 1.0) * (4.0 * lam + 7.0) * r / (lam + 1.0);

  double lead, mid, tail;
  if (spec.r() == 2) {
    double outer = std::pow(b, -0.1);
    lead = outer * 8.0;
    mid = outer * (21.0 + lam_num / 52.0) * std::pow(b, -0.2);
    tail = outer * 72.0 * std::pow(b, -0.4);
  } else if (spec.r() == 3) {
    double outer = std::pow(b, -1.0 / 6.0);
    lead = outer * 19.0;
    mid = outer * (44.0 + lam_num / 25.0) * std::pow(b, -1.0 / 6.0);
    tail = outer * 72.0 * std::pow(b, -1.0 / 3.0);
  } else {
    double rm3 = r - 3.0;
    double outer = 1.0 / (std::pow(rm3, 1.0 / 3.0) * std::pow(b, 1.0 / 6.0));
    lead = outer * 13.0;
    mid = outer * (37.0 + lam_num / 30.0) * std::pow(rm3, 1.0 / 6.0) * std::pow(b, -1.0 / 6.0);
    tail = outer * 72.0 * std::pow(rm3, 1.0 / 3.0) * std::pow(b, -1.0 / 3.0);
  }
  rep.value = lead + mid + tail;
  rep.terms.emplace_back("leading", lead);
  rep.terms.emplace_back("middle", mid);
  rep.terms.emplace_back("tail", tail);
  return rep;
}

BoundReport ipm15_upper(const MultinomialSpec& spec, const DivergenceIndex& idx) {
  BoundReport rep;
  rep.theorem = "ipm_d15_upper";
  check_lambda(rep, idx.lambda);
  check_np_star(rep, spec, static_cast<double>(spec.r()));
  check_large_lambda(rep, spec, idx.lambda, 3.0);
  if (!finish(rep)) return rep;

  const double lam = idx.lambda;
  const double r = spec.r();
  const double scale = spec.inv_sum / static_cast<double>(spec.n);
  double base = 665476.0 * std::sqrt(r);
  double lam_r = lam == 1.0 ? 0.0 : 101997.0 * std::abs(lam - 1.0) * r;
  double lam_sq = lambda_square_term(lam);
  double lam_lin = lambda_linear_term(lam);
  rep.value = (base + lam_r + lam_sq + lam_lin) * scale;
  rep.terms.emplace_back("base", base * scale);
  rep.terms.emplace_back("lambda_r", lam_r * scale);
  rep.terms.emplace_back("lambda_square", lam_sq * scale);
  rep.terms.emplace_back("lambda_linear", lam_lin * scale);
  return rep;
}

double mean_gap_leading(const MultinomialSpec& spec, const DivergenceIndex& idx) {
  if (!(idx.lambda > -1.0))
    fail(errc::index_out_of_range, "mean gap needs lambda > -1");
  const double lam = idx.lambda;
  if (lam == 1.0) return 0.0;
  const double n = static_cast<double>(spec.n);
  KahanSum acc;
  for (double p : spec.probs) {
    acc.add((lam - 1.0) / (n * p) *
            ((3.0 * lam - 2.0) / 12.0 - lam * p / 2.0 + (3.0 * lam + 2.0) * p * p / 12.0));
  }
  return acc.value();
}

double stein_norm_bound(int k, double dof, const NormBundle& norms, SteinNormRule rule) {
  const int min_k = rule == SteinNormRule::luk ? 1 : 2;
  if (k < min_k || k > 6) fail(errc::order_out_of_range, "derivative order outside rule range");
  switch (rule) {
    case SteinNormRule::luk:
      if (k > 5) fail(errc::order_out_of_range, "no tabulated h norm beyond order 5");
      return 2.0 * norms[k] / k;
    case SteinNormRule::general: {
      double d = dof + 2.0 * k - 2.0;
      return (kG632Base / std::sqrt(d) + 4.0 / d) * norms[k - 1];
    }
    case SteinNormRule::simplified:
      return 6.375 * norms[k - 1] / std::sqrt(dof + 1.0);
    case SteinNormRule::order_only: {
      double d = 2.0 * k - 1.0;
      return (kG632Base / std::sqrt(d) + 4.0 / d) * norms[k - 1];
    }
    case SteinNormRule::two_norm:
      return 4.0 / (dof + 2.0) * (3.0 * norms[k - 1] + 2.0 * norms[k - 2]);
  }
  return kInf;
}

std::vector<long long> reconstruct_pearson(ReconstructVariant variant) {
  // 6.375 = 51/8 exactly; ceil(c * 51 / 8) in integer arithmetic.
  auto lift = [](long long c) { return (c * 51 + 7) / 8; };
  if (variant == ReconstructVariant::C15) {
    return {lift(19), lift(309), lift(1089), lift(1997), lift(100974)};
  }
  return {lift(18), lift(84)};
}

std::vector<double> reconstruct_pearson_c25() {
  // Orders 2..5 of the intermediate coefficients {19, 309, 1089, 1997,
  // 100974} map through 2/k; the order-6 coefficient maps through the
  // dof-free solution-norm factor and lands on the h^(5) norm.
  double order_only_k6 = kG632Base / std::sqrt(11.0) + 4.0 / 11.0;
  return {std::ceil(19.0 * 2.0 / 2.0), std::ceil(309.0 * 2.0 / 3.0),
          std::ceil(1089.0 * 2.0 / 4.0), std::ceil(1997.0 * 2.0 / 5.0 + 100974.0 * order_only_k6)};
}

KolmogorovCoefficients kolmogorov_construction_coefficients(int r) {
  KolmogorovCoefficients c{};
  if (r == 2) {
    double alpha = 52.75;
    c.leading = std::sqrt(2.0 * alpha / M_PI) + 4032.0 / (alpha * alpha);
    c.middle = 1104.0 / alpha;
    c.lambda_denom = alpha;
  } else if (r == 3) {
    double alpha = 25.27;
    c.leading = alpha / 2.0 + 4032.0 / (alpha * alpha);
    c.middle = 1104.0 / alpha;
    c.lambda_denom = alpha;
  } else {
    double alpha = 30.58;
    c.leading = alpha / (2.0 * std::sqrt(M_PI)) + 4032.0 / (alpha * alpha);
    c.middle = 1104.0 / alpha;
    c.lambda_denom = alpha;
  }
  c.tail = 72.0;
  return c;
}

double kolmogorov_smoothing_construction(const MultinomialSpec& spec, const DivergenceIndex& idx) {
  const double lam = idx.lambda;
  const double r = spec.r();
  const double b = static_cast<double>(spec.n) * spec.p_star;
  double alpha, tail;
  if (spec.r() == 2) {
    alpha = 52.75 * std::pow(b, -0.2);
    tail = std::sqrt(2.0 * alpha / M_PI);
  } else if (spec.r() == 3) {
    alpha = 25.27 * std::pow(b, -1.0 / 6.0);
    tail = alpha / 2.0;
  } else {
    alpha = 30.58 * std::pow(r - 3.0, 1.0 / 6.0) * std::pow(b, -1.0 / 6.0);
    tail = alpha / (2.0 * std::sqrt(M_PI * (r - 3.0)));
  }
  double lam_num = lam == 1.0 ? 0.0 : std::abs(lam - 1.0) * (4.0 * lam + 7.0) * r / (lam + 1.0);
  return (72.0 + 1104.0 / alpha + lam_num / alpha + 4032.0 / (alpha * alpha)) / std::sqrt(b) +
         tail;
}

}  // namespace powerdiv
