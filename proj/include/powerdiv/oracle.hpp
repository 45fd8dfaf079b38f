#pragma once

#include <cstdint>
#include <functional>

#include "powerdiv/chi_square.hpp"
#include "powerdiv/enumeration.hpp"
#include "powerdiv/model.hpp"

namespace powerdiv {

// log of the multinomial probability mass at `counts` under the null model.
double log_pmf(const Counts& counts, const MultinomialSpec& spec);

// Options for the exact enumeration oracle. The support is cut into fixed
// chunks of `chunk_size` compositions; chunks are reduced independently and
// combined in chunk order, so results are bitwise identical for any number
// of worker threads.
struct EnumerationOptions {
  std::uint64_t cap = kDefaultSupportCap;
  unsigned jobs = 0;  // 0 = hardware concurrency
  std::uint64_t chunk_size = 1 << 15;
};

// Exact law of T_lambda (or of a custom statistic) by full-support
// enumeration. Statistic values within 1e-12 relative are merged into one
// atom; probabilities are compensated sums and total 1 within 1e-12.
ExactDistribution exact_distribution(const MultinomialSpec& spec, const DivergenceIndex& idx,
                                     const EnumerationOptions& opts = {});
ExactDistribution exact_distribution_fn(const MultinomialSpec& spec,
                                        const std::function<double(const Counts&)>& statistic,
                                        const std::string& source,
                                        const EnumerationOptions& opts = {});

// Sum of exp(log_pmf) over the whole support (normalization check).
double pmf_total(const MultinomialSpec& spec, const EnumerationOptions& opts = {});

// E[h(W)] for W with the given exact law. Atoms at +inf use h's limit at
// infinity and are rejected when no limit is declared.
double exact_expectation(const ExactDistribution& dist, const TestFunctionSpec& h);

// E[W]; +inf when the law has an atom at +inf.
double exact_mean(const ExactDistribution& dist);

// sup_z |P(W <= z) - P(Y <= z)| against the continuous reference, evaluated
// exactly as a max over atoms of the jump-side differences.
double exact_kolmogorov(const ExactDistribution& dist, const ChiSquareRef& ref);

enum class BinMomentKind { abs3, central4, central6 };

// Exact binomial moments by direct summation over the support with log-space
// weights. Central kinds are moments of S = (U - np)/sqrt(np).
double exact_binomial_moment(long long n, double p, BinMomentKind kind);
// E[U^k] for real k > 0; the U = 0 term contributes 0.
double exact_binomial_raw_moment(long long n, double p, double k);

// E[S_j^3 S_k^3] for standardized multinomial counts, j != k. Computed by
// exact reduction to the trinomial law of (U_j, U_k); agrees with the full
// enumeration to within accumulation error.
double exact_cross_moment(const MultinomialSpec& spec, int j, int k);
// Full-support version, kept as the independent route for verification.
double exact_cross_moment_full(const MultinomialSpec& spec, int j, int k,
                               const EnumerationOptions& opts = {});

}  // namespace powerdiv
