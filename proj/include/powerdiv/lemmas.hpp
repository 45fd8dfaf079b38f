#pragma once

#include "powerdiv/model.hpp"
#include "powerdiv/oracle.hpp"

namespace powerdiv {

// One evaluated inequality: margin = rhs - lhs, so nonnegative margins
// certify the statement numerically. hypothesis_ok records whether the
// lemma's hypotheses hold at this point; scan drivers report violations
// instead of asserting them.
struct MarginRecord {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool hypothesis_ok = true;
};

// Binomial standardized-moment bounds E|S|^3 <= 3, E S^4 <= 4, E S^6 <= 28
// under np >= 2.
MarginRecord moment_margin(long long n, double p, BinMomentKind kind);

// E[U^k] <= exp(k^2/(2np)) (np)^k for all real k > 0.
MarginRecord ahle_margin(long long n, double p, double k);

// |E[S_j^3 S_k^3]| <= 6/r + 4 sqrt(p_j p_k) under n p_j >= r for all j.
MarginRecord cross_moment_margin(const MultinomialSpec& spec, int j, int k);

// Taylor remainder inequalities behind the 1/n rate (fourth-order form) and
// the 1/sqrt(n) rate (third-order form). `log` is the lambda = 0 statement,
// `high_lambda` needs lambda >= 3 (L1) resp. >= 2 (L2), `mid_lambda` covers
// the remaining lambda in (-1, 3) \ {0} resp. (-1, 2) \ {0}.
enum class TaylorVariant { log, high_lambda, mid_lambda };
const char* to_string(TaylorVariant v);

MarginRecord taylor_margin_L1(TaylorVariant variant, double lambda, double x, double a);
MarginRecord taylor_margin_L2(TaylorVariant variant, double lambda, double x, double a);

// Deterministic, seedless scan grids shared by the tests and the CLI.
struct TaylorScanPoint {
  TaylorVariant variant;
  double lambda;
  double x;
  double a;
};
std::vector<TaylorScanPoint> taylor_scan_grid(bool second_lemma);

struct MomentScanPoint {
  long long n;
  double p;
};
std::vector<MomentScanPoint> moment_scan_grid();

std::vector<double> ahle_order_grid();

}  // namespace powerdiv
