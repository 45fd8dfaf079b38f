#include "powerdiv/verify.hpp"

#include <algorithm>
#include <cmath>

#include "powerdiv/chi_square.hpp"
#include "powerdiv/io.hpp"

namespace powerdiv {

namespace {

std::string probs_label(const MultinomialSpec& spec) {
  std::string out;
  for (size_t j = 0; j < spec.probs.size(); ++j) {
    if (j) out += ' ';
    out += format_double(spec.probs[j]);
  }
  return out;
}

std::vector<MultinomialSpec> default_specs() {
  std::vector<MultinomialSpec> specs;
  for (long long n : {20, 40, 80, 160}) {
    for (int r : {2, 3, 4}) {
      specs.push_back(make_spec(n, std::vector<double>(static_cast<size_t>(r), 1.0 / r)));
    }
  }
  specs.push_back(make_spec(60, {0.2, 0.3, 0.5}));
  specs.push_back(make_spec(100, {0.1, 0.2, 0.3, 0.4}));
  return specs;
}

// Expectation of h under the chi-square reference, cached per (h, dof).
class Chi2hCache {
 public:
  double get(const TestFunctionSpec& h, double dof) {
    auto key = std::make_pair(h.name, dof);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    double v = chi2_expectation({dof, 1e-11}, h);
    cache_.emplace(key, v);
    return v;
  }

 private:
  std::map<std::pair<std::string, double>, double> cache_;
};

}  // namespace

VerifyConfig default_verify_config() {
  VerifyConfig cfg;
  cfg.specs = default_specs();
  cfg.lambdas = {-0.5, 0.0, 2.0 / 3.0, 1.0, 2.0, 3.5};
  for (const auto& f : registry()) cfg.functions.push_back(f.name);
  return cfg;
}

VerifyConfig verify_config_from(const std::map<std::string, std::string>& kv) {
  VerifyConfig cfg;
  auto get = [&kv](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  const bool have_ns = get("ns") != nullptr;
  const bool have_rs = get("rs") != nullptr;
  const bool have_extra = get("extra_specs") != nullptr;
  if (!have_ns && !have_rs && !have_extra) {
    cfg.specs = default_specs();
  } else {
    if (have_ns || have_rs) {
      std::vector<long long> ns{20, 40, 80, 160};
      std::vector<long long> rs{2, 3, 4};
      if (const auto* v = get("ns")) ns = parse_int_list(*v);
      if (const auto* v = get("rs")) rs = parse_int_list(*v);
      for (long long n : ns) {
        for (long long r : rs) {
          cfg.specs.push_back(make_spec(
              n, std::vector<double>(static_cast<size_t>(r), 1.0 / static_cast<double>(r))));
        }
      }
    }
    if (have_extra) {
      // Syntax: `n:p1,p2,...` cells separated by ';'.
      const std::string& text = *get("extra_specs");
      size_t pos = 0;
      while (pos < text.size()) {
        size_t end = text.find(';', pos);
        std::string cell =
            text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        pos = end == std::string::npos ? text.size() : end + 1;
        size_t colon = cell.find(':');
        if (colon == std::string::npos)
          fail(errc::config_error, "extra_specs cell needs `n:probs`");
        long long n = parse_int_list(cell.substr(0, colon)).at(0);
        cfg.specs.push_back(make_spec(n, parse_double_list(cell.substr(colon + 1))));
      }
    }
  }
  cfg.lambdas = {-0.5, 0.0, 2.0 / 3.0, 1.0, 2.0, 3.5};
  if (const auto* v = get("lambdas")) cfg.lambdas = parse_double_list(*v);
  for (double lam : cfg.lambdas) {
    if (!(lam > -1.0)) fail(errc::config_error, "verify needs lambda > -1");
  }
  if (const auto* v = get("functions")) {
    for (const auto& name : parse_name_list(*v)) cfg.functions.push_back(name);
  } else {
    for (const auto& f : registry()) cfg.functions.push_back(f.name);
  }
  if (const auto* v = get("cap")) cfg.cap = static_cast<std::uint64_t>(parse_int_list(*v).at(0));
  return cfg;
}

VerifyResult run_verify(const VerifyConfig& config) {
  VerifyResult result;
  Chi2hCache chi2h;
  for (const auto& spec : config.specs) {
    const double dof = spec.r() - 1;
    const ChiSquareRef ref{dof, 1e-11};
    for (double lam : config.lambdas) {
      DivergenceIndex idx = make_index(lam);
      ExactDistribution dist = exact_distribution(spec, idx, {config.cap, config.jobs, 1 << 15});
      for (const auto& name : config.functions) {
        const TestFunctionSpec& h = registry_find(name);
        NormBundle norms = NormBundle::from(h);
        double exact = std::abs(exact_expectation(dist, h) - chi2h.get(h, dof));
        auto emit = [&](const BoundReport& rep, SmoothnessClass cls) {
          if (!h.has_finite_norms(cls.j, cls.k)) return;
          VerifyRow row;
          row.n = spec.n;
          row.r = spec.r();
          row.probs = probs_label(spec);
          row.lambda = lam;
          row.h = name;
          row.check = rep.theorem;
          row.precond_ok = rep.satisfied();
          row.exact = exact;
          row.bound = rep.value;
          row.margin = rep.value - exact;
          result.rows.push_back(row);
          if (row.precond_ok) result.min_margin = std::min(result.min_margin, row.margin);
        };
        emit(rate_n_bound(spec, idx, norms, RateNVariant::C05), variant_class(RateNVariant::C05));
        emit(rate_n_bound(spec, idx, norms, RateNVariant::C15), variant_class(RateNVariant::C15));
        emit(rate_sqrt_n_bound(spec, idx, norms, RateSqrtNVariant::C02), variant_class(RateSqrtNVariant::C02));
        emit(rate_sqrt_n_bound(spec, idx, norms, RateSqrtNVariant::C12), variant_class(RateSqrtNVariant::C12));
      }
      // Kolmogorov row.
      BoundReport cor = kolmogorov_bound(spec, idx);
      VerifyRow row;
      row.n = spec.n;
      row.r = spec.r();
      row.probs = probs_label(spec);
      row.lambda = lam;
      row.h = "";
      row.check = cor.theorem;
      row.precond_ok = cor.satisfied();
      row.exact = exact_kolmogorov(dist, ref);
      row.bound = cor.value;
      row.margin = cor.value - row.exact;
      result.rows.push_back(row);
      if (row.precond_ok) result.min_margin = std::min(result.min_margin, row.margin);
    }
  }
  result.pass = result.min_margin >= -1e-9;
  return result;
}

std::string verify_rows_to_csv(const std::vector<VerifyRow>& rows) {
  std::string out = "n,r,probs,lambda,h,check,precond,exact,bound,margin\n";
  for (const auto& row : rows) {
    out += std::to_string(row.n);
    out += ',';
    out += std::to_string(row.r);
    out += ',';
    out += row.probs;
    out += ',';
    out += format_double(row.lambda);
    out += ',';
    out += row.h;
    out += ',';
    out += row.check;
    out += ',';
    out += row.precond_ok ? "ok" : "failed";
    out += ',';
    out += format_double(row.exact);
    out += ',';
    out += format_double(row.bound);
    out += ',';
    out += row.precond_ok ? format_double(row.margin) : std::string();
    out += '\n';
  }
  return out;
}

std::vector<double> family_probs(const std::string& family, long long n, int r) {
  std::vector<double> p(static_cast<size_t>(r));
  if (family == "uniform") {
    for (auto& v : p) v = 1.0 / r;
  } else if (family == "geometric") {
    // p_j proportional to 2^-j.
    double total = 0.0;
    for (int j = 0; j < r; ++j) total += std::pow(2.0, -(j + 1));
    for (int j = 0; j < r; ++j) p[static_cast<size_t>(j)] = std::pow(2.0, -(j + 1)) / total;
  } else if (family == "one_small") {
    // One vanishing cell p_1 = 1/n; the rest share the remainder equally.
    double small = 1.0 / static_cast<double>(n);
    for (auto& v : p) v = (1.0 - small) / (r - 1);
    p[0] = small;
  } else {
    fail(errc::config_error, "unknown p_family: " + family);
  }
  return p;
}

SweepConfig sweep_config_from(const std::map<std::string, std::string>& kv) {
  SweepConfig cfg;
  auto get = [&kv](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (const auto* v = get("ns")) {
    if (!v->empty()) cfg.ns = parse_int_list(*v);
  }
  if (const auto* v = get("rs")) {
    if (!v->empty())
      for (long long r : parse_int_list(*v)) cfg.rs.push_back(static_cast<int>(r));
  }
  if (const auto* v = get("p_family")) cfg.p_family = *v;
  if (const auto* v = get("lambdas")) {
    if (!v->empty()) cfg.lambdas = parse_double_list(*v);
  }
  if (const auto* v = get("functions")) {
    for (const auto& name : parse_name_list(*v)) cfg.functions.push_back(name);
  }
  if (const auto* v = get("cap")) cfg.cap = static_cast<std::uint64_t>(parse_int_list(*v).at(0));
  return cfg;
}

std::string run_sweep_csv(const SweepConfig& config) {
  std::string out =
      "n,r,p_family,lambda,h,exact_distance,pd_n_C05,pd_n_C15,pd_sqrtn_C02,pd_sqrtn_C12,dominant_term\n";
  Chi2hCache chi2h;
  for (long long n : config.ns) {
    for (int r : config.rs) {
      MultinomialSpec spec = make_spec(n, family_probs(config.p_family, n, r));
      const double dof = r - 1;
      for (double lam : config.lambdas) {
        DivergenceIndex idx = make_index(lam);
        bool enumerable = composition_count(n, r) <= config.cap;
        ExactDistribution dist;
        if (enumerable) dist = exact_distribution(spec, idx, {config.cap, config.jobs, 1 << 15});
        for (const auto& name : config.functions) {
          const TestFunctionSpec& h = registry_find(name);
          NormBundle norms = NormBundle::from(h);
          BoundReport b1 = rate_n_bound(spec, idx, norms, RateNVariant::C05);
          BoundReport b2 = rate_n_bound(spec, idx, norms, RateNVariant::C15);
          BoundReport b3 = rate_sqrt_n_bound(spec, idx, norms, RateSqrtNVariant::C02);
          BoundReport b4 = rate_sqrt_n_bound(spec, idx, norms, RateSqrtNVariant::C12);
          std::string dominant;
          const BoundReport* for_terms = b1.satisfied() ? &b1 : (b2.satisfied() ? &b2 : nullptr);
          if (for_terms) {
            double best = -1.0;
            for (const auto& [tname, tvalue] : for_terms->terms) {
              if (tvalue > best) {
                best = tvalue;
                dominant = tname;
              }
            }
          }
          std::string exact;
          if (enumerable && h.has_finite_norms(0, 0)) {
            exact = format_double(std::abs(exact_expectation(dist, h) - chi2h.get(h, dof)));
          } else if (enumerable && h.growth_degree == 1) {
            exact = format_double(std::abs(exact_mean(dist) - dof));
          }
          out += std::to_string(n) + ',' + std::to_string(r) + ',' + config.p_family + ',' +
                 format_double(lam) + ',' + name + ',' + exact + ',' + format_double(b1.value) +
                 ',' + format_double(b2.value) + ',' + format_double(b3.value) + ',' +
                 format_double(b4.value) + ',' + dominant + '\n';
        }
      }
    }
  }
  return out;
}

}  // namespace powerdiv
