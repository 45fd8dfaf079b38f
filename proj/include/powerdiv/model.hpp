#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "powerdiv/common.hpp"

namespace powerdiv {

// Null model for n trials over r cells. Derived quantities that every bound
// needs (minimum cell probability, reciprocal sums) are cached at
// construction. Immutable after make_spec.
struct MultinomialSpec {
  long long n = 0;
  std::vector<double> probs;
  double p_star = 0.0;        // min_j p_j
  double inv_sum = 0.0;       // S = sum_j 1/p_j
  double sqrt_inv_sum = 0.0;  // sum_j 1/sqrt(p_j)
  double inv_sqrt_np_sum = 0.0;  // sum_j 1/sqrt(n p_j)

  int r() const { return static_cast<int>(probs.size()); }
};

// probs are validated (all positive, length >= 2, |sum-1| <= 1e-9) and then
// renormalized exactly; user inputs typically carry decimal rounding.
MultinomialSpec make_spec(long long n, std::vector<double> probs);

enum class Regime { Zero, MinusOne, Generic };

struct DivergenceIndex {
  double lambda = 1.0;
  Regime regime = Regime::Generic;
};

// Classifies lambda. Values within 1e-7 of the limit points 0 and -1 are
// routed to the analytic limit statistics; the prefactor 2/(lambda(lambda+1))
// is catastrophically ill-conditioned there. lambda < -1 is rejected
// (the statistic is infinite with positive probability and E[h(T)] undefined).
DivergenceIndex make_index(double lambda);

using Counts = std::vector<long long>;

void validate_counts(const Counts& counts, const MultinomialSpec& spec);

// s_j = (U_j - n p_j) / sqrt(n p_j); satisfies sum_j sqrt(p_j) s_j = 0.
std::vector<double> standardize(const Counts& counts, const MultinomialSpec& spec);

// Bounded-derivative class C_b^{j,k}: derivatives of orders j..k bounded.
struct SmoothnessClass {
  int j = 0;
  int k = 0;
};

// A smooth test function h with analytic derivative evaluators and exact
// sup norms of h, h', ..., h^(5). Norm entries are +inf when unbounded or
// when the derivative does not exist classically.
struct TestFunctionSpec {
  std::string name;
  std::function<double(double)> eval;
  // deriv(k, x): k-th derivative, k = 0..5. For the smoothing function the
  // second derivative is almost-everywhere only; at a kink the right limit
  // is returned.
  std::function<double(int, double)> deriv;
  std::array<double, 6> deriv_norms{};
  SmoothnessClass cls;
  std::vector<std::pair<std::string, double>> params;
  bool ae_second_derivative = false;
  std::optional<double> limit_at_inf;
  // Points where h is not smooth; quadrature and derivative scans split here.
  std::vector<double> breakpoints;
  // 0 = bounded, 1 = linear growth (the identity). Controls the tail
  // remainder formula in chi-square expectations.
  int growth_degree = 0;

  double norm(int k) const { return deriv_norms[static_cast<size_t>(k)]; }
  // All derivative norms of orders j..k finite. ae norms count when
  // allow_ae is set; the power divergence bound formulas consume the
  // smoothing function's almost-everywhere second-derivative norm this way.
  bool has_finite_norms(int j, int k, bool allow_ae = true) const;
};

// Built-in registry spanning C_b^5, C_b^{1,5}, C_b^2 and C_b^{0,1}.
const std::vector<TestFunctionSpec>& registry();
const TestFunctionSpec& registry_find(const std::string& name);

TestFunctionSpec make_identity();
TestFunctionSpec make_exp_decay();
TestFunctionSpec make_sine(double omega = 0.5);
TestFunctionSpec make_logistic(double center = 4.0);
TestFunctionSpec make_smoothing(double alpha = 2.0, double z = 1.0);

struct Precondition {
  std::string name;
  double required = 0.0;
  double actual = 0.0;
  bool satisfied = false;
};

// A bound value with its provenance tag (which bound family produced it),
// the additive terms it decomposes into, and the precondition diagnostics.
// value is +inf exactly when a precondition fails (sweeps record infeasible
// cells rather than aborting).
struct BoundReport {
  double value = kInf;
  std::string theorem;
  std::vector<std::pair<std::string, double>> terms;
  std::vector<Precondition> preconditions;

  bool satisfied() const {
    for (const auto& p : preconditions)
      if (!p.satisfied) return false;
    return true;
  }
};

// Full atom list of a statistic under exact enumeration: values strictly
// increasing, probabilities summing to 1.
struct ExactDistribution {
  struct Atom {
    double value;
    double prob;
  };
  std::vector<Atom> atoms;
  std::string source;
};

}  // namespace powerdiv
