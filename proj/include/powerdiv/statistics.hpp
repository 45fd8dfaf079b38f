#pragma once

#include "powerdiv/model.hpp"

namespace powerdiv {

// The power divergence statistic T_lambda. The Generic regime evaluates the
// zero-safe algebraic form
//   T = 2/(lambda(lambda+1)) [ sum_j U_j^{lambda+1} / (n p_j)^lambda - n ],
// which is finite for every counts vector since lambda+1 > 0 makes U_j = 0
// contribute nothing. The Zero regime returns the log likelihood ratio L with
// the 0 log 0 = 0 convention; MinusOne returns GM^2, which is +inf whenever
// a cell count is zero. Always >= 0, with equality iff U_j = n p_j for all j.
double power_divergence(const Counts& counts, const MultinomialSpec& spec,
                        const DivergenceIndex& idx);

// chi^2 = sum_j (U_j - n p_j)^2 / (n p_j); equals T_1.
double pearson(const Counts& counts, const MultinomialSpec& spec);

// T^2 = 4 sum_j (sqrt(U_j) - sqrt(n p_j))^2; equals T_{-1/2}.
double freeman_tukey(const Counts& counts, const MultinomialSpec& spec);

// GM^2 = 2n sum_j p_j log(n p_j / U_j); +inf when any U_j = 0.
double modified_lr(const Counts& counts, const MultinomialSpec& spec);

// L = 2 sum_j U_j log(U_j / (n p_j)); equals T_0 (limit).
double likelihood_ratio(const Counts& counts, const MultinomialSpec& spec);

}  // namespace powerdiv
