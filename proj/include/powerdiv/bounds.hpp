#pragma once

#include <array>

#include "powerdiv/model.hpp"

namespace powerdiv {

// The derivative sup norms a bound formula consumes, orders 0..5.
struct NormBundle {
  std::array<double, 6> norms{};

  static NormBundle from(const TestFunctionSpec& h, bool allow_ae = true) {
    NormBundle b;
    b.norms = h.deriv_norms;
    if (!allow_ae && h.ae_second_derivative) b.norms[2] = kInf;
    return b;
  }
  static NormBundle ones() {
    NormBundle b;
    b.norms = {1, 1, 1, 1, 1, 1};
    return b;
  }
  double operator[](int k) const { return norms[static_cast<size_t>(k)]; }
};

// Smooth-test-function bounds for Pearson's statistic, named by the
// smoothness class they consume (C05 = bounded derivative orders 0..5, C15 =
// orders 1..5, and so on). C05/C02 carry the smallest constants; the other
// variants trade larger constants for weaker smoothness requirements.
enum class PearsonVariant { C05, C02, C15, C12, C25, C22 };
// O(1/n) power divergence bounds: C5 needs C_b^5, C15 needs C_b^{1,5}.
enum class RateNVariant { C05, C15 };
// O(1/sqrt n) power divergence bounds: C2 needs C_b^2, C12 needs C_b^{1,2}.
enum class RateSqrtNVariant { C02, C12 };

const char* to_string(PearsonVariant v);
const char* to_string(RateNVariant v);
const char* to_string(RateSqrtNVariant v);

// Smoothness class (j, k) consumed by each variant.
SmoothnessClass variant_class(PearsonVariant v);
SmoothnessClass variant_class(RateNVariant v);
SmoothnessClass variant_class(RateSqrtNVariant v);

BoundReport pearson_bound(const MultinomialSpec& spec, const NormBundle& norms,
                          PearsonVariant variant);

BoundReport rate_n_bound(const MultinomialSpec& spec, const DivergenceIndex& idx,
                       const NormBundle& norms, RateNVariant variant);

BoundReport rate_sqrt_n_bound(const MultinomialSpec& spec, const DivergenceIndex& idx,
                       const NormBundle& norms, RateSqrtNVariant variant);

// Kolmogorov distance bound, case split on r = 2, r = 3, r >= 4. Derived
// from the sqrt(n)-rate bound through quadratic smoothing of indicators.
BoundReport kolmogorov_bound(const MultinomialSpec& spec, const DivergenceIndex& idx);

// Upper bound on the d_{1,5} integral probability metric (all norms 1).
BoundReport ipm15_upper(const MultinomialSpec& spec, const DivergenceIndex& idx);

// Leading term of |E[T_lambda] - (r-1)|: the signed sum
// sum_j (lambda-1)/(n p_j) [ (3 lambda - 2)/12 - lambda p_j / 2
//                            + (3 lambda + 2) p_j^2 / 12 ].
double mean_gap_leading(const MultinomialSpec& spec, const DivergenceIndex& idx);

// Bounds on derivatives of the solution of the chi-square Stein equation in
// terms of derivative norms of the test function.
enum class SteinNormRule { luk, general, simplified, order_only, two_norm };
const char* to_string(SteinNormRule rule);

// Returns +inf when a required h-norm is unbounded (the rule then gives no
// information); throws OrderOutOfRange outside the rule's k range.
double stein_norm_bound(int k, double dof, const NormBundle& norms, SteinNormRule rule);

// Reconstructs the C15 / C12 Pearson coefficient lists by applying the 6.375
// solution-norm factor to the intermediate Stein-solution coefficients and
// rounding up: exact integer arithmetic, ceil(c * 51/8).
enum class ReconstructVariant { C15, C12 };
std::vector<long long> reconstruct_pearson(ReconstructVariant variant);

// Reconstruction of the C25 Pearson coefficients from the same intermediate
// coefficients via the 2/k and sqrt(2)(sqrt(2 pi)+1/e)/sqrt(2k-1) + 4/(2k-1)
// factors. The first three reproduce the bound's constants exactly; the
// h^(5) coefficient reconstructs to 161280, below the bound's 161348, so the
// implemented constant is the looser (safe) one.
std::vector<double> reconstruct_pearson_c25();

// Internal cross-check of the Kolmogorov bound: the generic smoothing-
// function construction evaluated at the tuned alpha choice. The bound's
// constants are the ceilings/floors of this construction's coefficients.
double kolmogorov_smoothing_construction(const MultinomialSpec& spec, const DivergenceIndex& idx);

// The construction's raw coefficients for a given r: {leading, middle,
// lambda-denominator, tail}; the Kolmogorov bound uses
// {ceil, ceil, floor, exact}.
struct KolmogorovCoefficients {
  double leading;
  double middle;
  double lambda_denom;
  double tail;
};
KolmogorovCoefficients kolmogorov_construction_coefficients(int r);

}  // namespace powerdiv
