#include "powerdiv/scans.hpp"

#include <algorithm>
#include <cmath>

#include "powerdiv/bounds.hpp"
#include "powerdiv/io.hpp"

namespace powerdiv {

namespace {

void track(ScanResult& res, double margin) {
  res.min_margin = std::min(res.min_margin, margin);
  if (std::isfinite(margin)) res.tightest = std::min(res.tightest, std::abs(margin));
}

}  // namespace

ScanResult scan_taylor(bool second_lemma) {
  ScanResult res;
  res.csv = "variant,lambda,x,a,lhs,rhs,margin\n";
  for (const auto& pt : taylor_scan_grid(second_lemma)) {
    MarginRecord rec = second_lemma ? taylor_margin_L2(pt.variant, pt.lambda, pt.x, pt.a)
                                    : taylor_margin_L1(pt.variant, pt.lambda, pt.x, pt.a);
    res.csv += std::string(to_string(pt.variant)) + ',' + format_double(pt.lambda) + ',' +
               format_double(pt.x) + ',' + format_double(pt.a) + ',' + format_double(rec.lhs) +
               ',' + format_double(rec.rhs) + ',' + format_double(rec.margin) + '\n';
    track(res, rec.margin);
  }
  return res;
}

ScanResult scan_moments() {
  ScanResult res;
  res.csv = "kind,n,p,lhs,rhs,margin\n";
  const std::pair<BinMomentKind, const char*> kinds[] = {
      {BinMomentKind::abs3, "abs3"},
      {BinMomentKind::central4, "central4"},
      {BinMomentKind::central6, "central6"}};
  for (const auto& pt : moment_scan_grid()) {
    for (const auto& [kind, name] : kinds) {
      MarginRecord rec = moment_margin(pt.n, pt.p, kind);
      res.csv += std::string(name) + ',' + std::to_string(pt.n) + ',' + format_double(pt.p) +
                 ',' + format_double(rec.lhs) + ',' + format_double(rec.rhs) + ',' +
                 format_double(rec.margin) + '\n';
      track(res, rec.margin);
    }
  }
  return res;
}

ScanResult scan_ahle() {
  ScanResult res;
  res.csv = "n,p,k,lhs,rhs,margin\n";
  const long long ns[] = {1, 5, 10, 20, 50, 200};
  const double ps[] = {0.1, 0.25, 0.5, 0.9};
  for (long long n : ns) {
    for (double p : ps) {
      for (double k : ahle_order_grid()) {
        MarginRecord rec = ahle_margin(n, p, k);
        res.csv += std::to_string(n) + ',' + format_double(p) + ',' + format_double(k) + ',' +
                   format_double(rec.lhs) + ',' + format_double(rec.rhs) + ',' +
                   format_double(rec.margin) + '\n';
        track(res, rec.margin);
      }
    }
  }
  return res;
}

ScanResult scan_cross() {
  ScanResult res;
  res.csv = "n,r,probs,j,k,lhs,rhs,margin\n";
  std::vector<MultinomialSpec> specs;
  specs.push_back(make_spec(4, {0.5, 0.5}));
  specs.push_back(make_spec(12, {1.0 / 3, 1.0 / 3, 1.0 / 3}));
  specs.push_back(make_spec(30, {0.2, 0.3, 0.5}));
  specs.push_back(make_spec(40, {0.25, 0.25, 0.25, 0.25}));
  for (const auto& spec : specs) {
    for (int j = 0; j < spec.r(); ++j) {
      for (int k = 0; k < spec.r(); ++k) {
        if (j == k) continue;
        MarginRecord rec = cross_moment_margin(spec, j, k);
        std::string probs;
        for (size_t t = 0; t < spec.probs.size(); ++t) {
          if (t) probs += ' ';
          probs += format_double(spec.probs[t]);
        }
        res.csv += std::to_string(spec.n) + ',' + std::to_string(spec.r()) + ',' + probs + ',' +
                   std::to_string(j) + ',' + std::to_string(k) + ',' + format_double(rec.lhs) +
                   ',' + format_double(rec.rhs) + ',' + format_double(rec.margin) + '\n';
        track(res, rec.margin);
      }
    }
  }
  return res;
}

ScanResult scan_stein_norms() {
  ScanResult res;
  res.csv = "h,dof,k,rule,estimate,bound,margin\n";
  const double dofs[] = {1.0, 2.0, 3.0, 5.0};
  const SteinNormRule rules[] = {SteinNormRule::luk, SteinNormRule::general,
                                 SteinNormRule::simplified, SteinNormRule::order_only,
                                 SteinNormRule::two_norm};
  for (const auto& h : registry()) {
    NormBundle norms = NormBundle::from(h);
    for (double dof : dofs) {
      SteinVerifier verifier(dof, h);
      for (int k = 1; k <= 6; ++k) {
        double estimate = -1.0;
        for (SteinNormRule rule : rules) {
          if (k < (rule == SteinNormRule::luk ? 1 : 2)) continue;
          if (rule == SteinNormRule::luk && k > 5) continue;
          double bound = stein_norm_bound(k, dof, norms, rule);
          if (!std::isfinite(bound)) continue;
          if (estimate < 0.0) estimate = verifier.estimate_sup_norm(k);
          // Zero bounds arise only for derivatives that vanish identically;
          // the estimate is then checked against the noise floor.
          double margin = bound == 0.0 ? 1e-4 - estimate : bound * (1.0 + 1e-3) - estimate;
          res.csv += h.name + ',' + format_double(dof) + ',' + std::to_string(k) + ',' +
                     to_string(rule) + ',' + format_double(estimate) + ',' +
                     format_double(bound) + ',' + format_double(margin) + '\n';
          track(res, margin);
        }
      }
    }
  }
  return res;
}

}  // namespace powerdiv
