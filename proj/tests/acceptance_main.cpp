// Acceptance suite: runs every certification criterion end to end and prints
// one PASS/FAIL line per criterion. Exit status is nonzero when any line
// fails. The CLI binary path is taken from argv[1] for the determinism
// criterion; that criterion is skipped (and fails) without it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "powerdiv/bounds.hpp"
#include "powerdiv/chi_square.hpp"
#include "powerdiv/io.hpp"
#include "powerdiv/scans.hpp"
#include "powerdiv/statistics.hpp"
#include "powerdiv/stein.hpp"
#include "powerdiv/verify.hpp"

using namespace powerdiv;

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(const std::string& id, bool pass, const std::string& detail, double secs) {
  std::printf("[%s] %-34s %s (%.2fs)\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str(),
              secs);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

// C1: Pearson coefficient reconstruction, exact integer match, under 1 ms.
void criterion1() {
  Timer t;
  auto t015 = reconstruct_pearson(ReconstructVariant::C15);
  auto t012 = reconstruct_pearson(ReconstructVariant::C12);
  double secs = t.seconds();
  bool pass = t015 == std::vector<long long>{122, 1970, 6943, 12731, 643710} &&
              t012 == std::vector<long long>{115, 536} && secs < 1e-3;
  std::string detail = "C15 = {";
  for (size_t i = 0; i < t015.size(); ++i) detail += (i ? "," : "") + std::to_string(t015[i]);
  detail += "}, C12 = {" + std::to_string(t012[0]) + "," + std::to_string(t012[1]) + "}";
  report("C1 constant-reconstruction", pass, detail, secs);
}

// C2 + C3: oracle dominance of the smooth bounds and the Kolmogorov bound
// over the full default grid.
void criteria23(const VerifyResult& result) {
  double min_smooth = kInf, min_kol = kInf;
  size_t smooth_rows = 0, kol_rows = 0;
  for (const auto& row : result.rows) {
    if (!row.precond_ok) continue;
    if (row.check == "kolmogorov") {
      min_kol = std::min(min_kol, row.margin);
      ++kol_rows;
    } else {
      min_smooth = std::min(min_smooth, row.margin);
      ++smooth_rows;
    }
  }
  report("C2 oracle-dominance-smooth", min_smooth >= -1e-9,
         "min margin " + format_double(min_smooth) + " over " + std::to_string(smooth_rows) +
             " checks",
         0.0);
  report("C3 oracle-dominance-kolmogorov", min_kol >= -1e-9,
         "min margin " + format_double(min_kol) + " over " + std::to_string(kol_rows) + " checks",
         0.0);
}

// C4: least-squares slope of log exact-distance vs log n for the likelihood
// ratio statistic, r = 3 uniform, h = e^-x.
void criterion4() {
  Timer t;
  const TestFunctionSpec& h = registry_find("exp_decay");
  double chi2h = chi2_expectation({2.0}, h);
  std::vector<double> lx, ly;
  for (long long n : {20, 40, 80, 160}) {
    MultinomialSpec spec = make_spec(n, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    ExactDistribution law = exact_distribution(spec, make_index(0.0));
    double dist = std::abs(exact_expectation(law, h) - chi2h);
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(dist));
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= lx.size();
  my /= ly.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  double slope = num / den;
  report("C4 rate-check", slope >= -1.35 && slope <= -0.65,
         "slope " + format_double(slope) + " in [-1.35, -0.65]?", t.seconds());
}

// C5: exact mean identity for Pearson plus the mean-gap residual rate.
void criterion5(const VerifyConfig& config) {
  Timer t;
  bool mean_ok = true;
  double worst_mean = 0.0;
  for (const auto& spec : config.specs) {
    ExactDistribution law = exact_distribution(spec, make_index(1.0), {config.cap, config.jobs});
    double err = std::abs(exact_mean(law) - (spec.r() - 1.0));
    worst_mean = std::max(worst_mean, err);
    if (err > 1e-10) mean_ok = false;
  }
  report("C5a pearson-mean-identity", mean_ok, "max |E[T_1] - (r-1)| = " + format_double(worst_mean),
         t.seconds());

  Timer t2;
  bool ratio_ok = true;
  std::string detail;
  for (double lam : {0.0, 2.0}) {
    double resid[2];
    int i = 0;
    for (long long n : {80, 160}) {
      MultinomialSpec spec = make_spec(n, {0.5, 0.5});
      ExactDistribution law = exact_distribution(spec, make_index(lam));
      double gap = mean_gap_leading(spec, make_index(lam));
      resid[i++] = std::abs(exact_mean(law) - 1.0 - gap);
    }
    double ratio = resid[0] / resid[1];
    if (!(ratio >= 2.2 && ratio <= 3.5)) ratio_ok = false;
    if (!detail.empty()) detail += ", ";
    detail += "lambda=" + format_double(lam) + ": resid80=" + format_double(resid[0]) +
              " resid160=" + format_double(resid[1]) + " ratio=" + format_double(ratio);
  }
  report("C5b mean-gap-shrink-ratio", ratio_ok, detail + " (window [2.2, 3.5])", t2.seconds());
}

// C6: lemma scans with equality detection at the Taylor x = 0 points.
void criterion6() {
  Timer t;
  ScanResult moments = scan_moments();
  ScanResult ahle = scan_ahle();
  ScanResult cross = scan_cross();
  ScanResult taylor1 = scan_taylor(false);
  ScanResult taylor2 = scan_taylor(true);
  double min_margin = std::min({moments.min_margin, ahle.min_margin, cross.min_margin,
                                taylor1.min_margin, taylor2.min_margin});
  bool equalities = taylor1.tightest <= 1e-12 && taylor2.tightest <= 1e-12;
  report("C6 lemma-scans", min_margin >= -1e-12 && equalities,
         "min margin " + format_double(min_margin) + ", taylor tightest " +
             format_double(taylor1.tightest) + "/" + format_double(taylor2.tightest),
         t.seconds());
}

// C7: residual of the Stein equation, solution norm verification, transfer
// identity on an exact law.
void criterion7() {
  Timer t;
  double worst_residual = 0.0;
  for (const auto& h : registry()) {
    for (double dof : {1.0, 2.0, 3.0, 5.0}) {
      SteinOperator op(dof, h);
      for (int i = 0; i <= 40; ++i) {
        double x = 0.01 * std::pow(100.0 / 0.01, i / 40.0);
        worst_residual = std::max(worst_residual, op.residual(x));
      }
      // Also probe around the smoothing function's kinks.
      for (double b : h.breakpoints) {
        for (double x : {b - 0.01, b, b + 0.01}) {
          if (x >= 0.01 && x <= 100.0) worst_residual = std::max(worst_residual, op.residual(x));
        }
      }
    }
  }
  bool residual_ok = worst_residual <= 1e-8;

  ScanResult norms = scan_stein_norms();
  bool norms_ok = norms.min_margin >= 0.0;

  ExactDistribution law = exact_distribution(make_spec(20, {0.5, 0.5}), make_index(1.0));
  double worst_gap = 0.0;
  for (const auto& h : registry()) {
    worst_gap = std::max(worst_gap, identity_gap(1.0, h, law));
  }
  bool gap_ok = worst_gap <= 1e-6;

  report("C7 stein-machinery", residual_ok && norms_ok && gap_ok,
         "max residual " + format_double(worst_residual) + ", min norm margin " +
             format_double(norms.min_margin) + ", max identity gap " + format_double(worst_gap),
         t.seconds());
}

// C8: bitwise and 1e-12 reductions at lambda = 1.
void criterion8(const VerifyConfig& config) {
  Timer t;
  bool bitwise_ok = true;
  for (const auto& spec : config.specs) {
    for (const auto& h : registry()) {
      NormBundle norms = NormBundle::from(h);
      if (h.has_finite_norms(0, 2)) {
        BoundReport a = rate_sqrt_n_bound(spec, make_index(1.0), norms, RateSqrtNVariant::C02);
        BoundReport b = pearson_bound(spec, norms, PearsonVariant::C02);
        if (a.value != b.value) bitwise_ok = false;
      }
      if (h.has_finite_norms(1, 2)) {
        BoundReport a = rate_sqrt_n_bound(spec, make_index(1.0), norms, RateSqrtNVariant::C12);
        BoundReport b = pearson_bound(spec, norms, PearsonVariant::C12);
        if (a.value != b.value) bitwise_ok = false;
      }
    }
  }

  MultinomialSpec spec = make_spec(30, {0.3, 0.3, 0.4});
  DivergenceIndex one = make_index(1.0);
  double worst = 0.0;
  for (CompositionIter it(spec.n, spec.r()); !it.done(); it.advance()) {
    worst = std::max(worst,
                     std::abs(power_divergence(it.value(), spec, one) - pearson(it.value(), spec)));
  }
  report("C8 lambda-1-reductions", bitwise_ok && worst <= 1e-12,
         std::string("sqrt-n bounds vs pearson bitwise ") + (bitwise_ok ? "equal" : "UNEQUAL") +
             ", max |T_1 - chi2| = " + format_double(worst),
         t.seconds());
}

// C9: byte-identical verify output across worker counts.
void criterion9(const char* cli_path) {
  Timer t;
  if (cli_path == nullptr) {
    report("C9 determinism", false, "no CLI binary path supplied", 0.0);
    return;
  }
  std::string base = std::string(cli_path) + " verify --out acceptance_det_";
  int rc1 = std::system((base + "1.csv --jobs 1 2>/dev/null").c_str());
  int rc8 = std::system((base + "8.csv --jobs 8 2>/dev/null").c_str());
  bool ran = WEXITSTATUS(rc1) == 0 && WEXITSTATUS(rc8) == 0;
  bool same = ran && read_file("acceptance_det_1.csv") == read_file("acceptance_det_8.csv");
  report("C9 determinism", same,
         ran ? (same ? "outputs byte-identical" : "outputs DIFFER") : "verify run failed",
         t.seconds());
}

}  // namespace

template <typename Fn>
void guarded(const std::string& id, Fn fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what(), 0.0);
  }
}

int main(int argc, char** argv) {
  const char* cli_path = argc > 1 ? argv[1] : nullptr;

  guarded("C1 constant-reconstruction", [] { criterion1(); });

  VerifyConfig config = default_verify_config();
  Timer t_verify;
  VerifyResult result = run_verify(config);
  double verify_secs = t_verify.seconds();
  std::printf("       (verification grid: %zu rows in %.1fs)\n", result.rows.size(), verify_secs);
  guarded("C2/C3 oracle-dominance", [&] { criteria23(result); });
  guarded("C4 rate-check", [] { criterion4(); });
  guarded("C5 mean-identity", [&] { criterion5(config); });
  guarded("C6 lemma-scans", [] { criterion6(); });
  guarded("C7 stein-machinery", [] { criterion7(); });
  guarded("C8 lambda-1-reductions", [&] { criterion8(config); });
  guarded("C9 determinism", [&] { criterion9(cli_path); });

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
