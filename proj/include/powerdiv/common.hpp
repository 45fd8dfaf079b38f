#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace powerdiv {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error codes mirror the failure modes of the public operations. Every
// throwing path goes through PdError so callers can dispatch on `code`.
enum class errc {
  non_positive_probability,
  probability_sum_error,
  too_few_cells,
  count_sum_mismatch,
  index_out_of_range,
  support_too_large,
  negative_argument,
  quadrature_failure,
  infinite_atom_without_limit,
  no_convergence,
  order_out_of_range,
  variant_domain_error,
  hypothesis_violated,
  parse_error,
  config_error,
};

class PdError : public std::runtime_error {
 public:
  PdError(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw PdError(code, what); }

// Kahan-Neumaier compensated accumulator. All statistic, probability and
// expectation sums in the library run through this so that results are
// reproducible at the 1e-12 level demanded by the oracle comparisons.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }
  void reset() { sum_ = comp_ = 0.0; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// x^e for x >= 0 with the conventions used throughout: 0^0 = 1,
// 0^e = 0 for e > 0 and +inf for e < 0 (never NaN).
inline double pow_nonneg(double x, double e) {
  if (x == 0.0) {
    if (e > 0.0) return 0.0;
    if (e == 0.0) return 1.0;
    return kInf;
  }
  return std::pow(x, e);
}

inline bool nearly_equal(double a, double b, double rel, double abs_tol = 0.0) {
  double d = std::abs(a - b);
  return d <= abs_tol || d <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace powerdiv
