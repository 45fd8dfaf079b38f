#pragma once

#include <string>

#include "powerdiv/lemmas.hpp"
#include "powerdiv/stein.hpp"

namespace powerdiv {

struct ScanResult {
  std::string csv;
  double min_margin = kInf;
  // Smallest margin in absolute value; equality cases show up as ~0 here.
  double tightest = kInf;
};

// Taylor remainder inequalities on the documented grid
// x in {0} u logspace(-3,3,200) * a, a in {0.5,1,2,10}, lambda filtered per
// variant domain. CSV: variant,lambda,x,a,lhs,rhs,margin.
ScanResult scan_taylor(bool second_lemma);

// Binomial moment bounds on the np >= 2 grid. CSV: kind,n,p,lhs,rhs,margin.
ScanResult scan_moments();

// E[U^k] bound over n, p, k grids. CSV: n,p,k,lhs,rhs,margin.
ScanResult scan_ahle();

// Cross moment bound over small enumerable specs, all ordered pairs.
// CSV: n,r,probs,j,k,lhs,rhs,margin.
ScanResult scan_cross();

// Stein solution norm estimates against every applicable rule bound.
// CSV: h,dof,k,rule,estimate,bound,margin where margin =
// bound * (1 + 1e-3) - estimate (rule bounds carry that much verification
// slack); rules whose bound is exactly zero assert the estimate is below the
// 1e-4 noise floor instead. Rows with an unbounded required norm are skipped.
ScanResult scan_stein_norms();

}  // namespace powerdiv
