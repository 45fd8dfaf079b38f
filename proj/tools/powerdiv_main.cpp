#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "powerdiv/bounds.hpp"
#include "powerdiv/chi_square.hpp"
#include "powerdiv/io.hpp"
#include "powerdiv/scans.hpp"
#include "powerdiv/statistics.hpp"
#include "powerdiv/verify.hpp"

namespace {

using namespace powerdiv;

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
  } else {
    write_file(out_path, content);
  }
}

int cmd_stat(const std::string& counts_path, const std::string& probs_arg,
             const std::string& lambda_list, const std::string& out_path) {
  Counts counts = read_counts(counts_path);
  MultinomialSpec spec = make_spec([&] {
    long long total = 0;
    for (long long c : counts) total += c;
    return total;
  }(), parse_probs(probs_arg));
  ChiSquareRef ref{static_cast<double>(spec.r() - 1), 1e-11};
  std::string out = "lambda,statistic,tail_prob\n";
  for (double lam : parse_double_list(lambda_list)) {
    DivergenceIndex idx = make_index(lam);
    double value = power_divergence(counts, spec, idx);
    double tail = std::isinf(value) ? 0.0 : chi2_tail(ref, value);
    out += format_double(lam) + ',' + format_double(value) + ',' + format_double(tail) + '\n';
  }
  emit(out_path, out);
  return 0;
}

int cmd_bound(long long n, const std::string& probs_arg, const std::string& lambda_list,
              const std::string& h_name, const std::string& out_path) {
  MultinomialSpec spec = make_spec(n, parse_probs(probs_arg));
  std::vector<std::string> names;
  if (h_name.empty()) {
    for (const auto& f : registry()) names.push_back(f.name);
  } else {
    names.push_back(h_name);
  }
  std::string out = "[";
  bool first = true;
  auto push = [&](double lam, const std::string& h, const BoundReport& rep) {
    if (!first) out += ",\n ";
    first = false;
    out += "{\"lambda\": " + format_double(lam) + ", \"h\": \"" + h +
           "\", \"report\": " + bound_report_to_json(rep) + "}";
  };
  for (double lam : parse_double_list(lambda_list)) {
    DivergenceIndex idx = make_index(lam);
    for (const auto& name : names) {
      NormBundle norms = NormBundle::from(registry_find(name));
      push(lam, name, rate_n_bound(spec, idx, norms, RateNVariant::C05));
      push(lam, name, rate_n_bound(spec, idx, norms, RateNVariant::C15));
      push(lam, name, rate_sqrt_n_bound(spec, idx, norms, RateSqrtNVariant::C02));
      push(lam, name, rate_sqrt_n_bound(spec, idx, norms, RateSqrtNVariant::C12));
      if (lam == 1.0) {
        for (PearsonVariant v : {PearsonVariant::C05, PearsonVariant::C02, PearsonVariant::C15,
                                 PearsonVariant::C12, PearsonVariant::C25,
                                 PearsonVariant::C22}) {
          push(lam, name, pearson_bound(spec, norms, v));
        }
      }
    }
    push(lam, "", kolmogorov_bound(spec, idx));
    push(lam, "", ipm15_upper(spec, idx));
  }
  out += "]\n";
  emit(out_path, out);
  return 0;
}

int cmd_verify(const std::string& config_path, const std::string& out_path, unsigned jobs,
               std::uint64_t cap) {
  VerifyConfig cfg =
      config_path.empty() ? default_verify_config() : verify_config_from(read_config(config_path));
  if (jobs) cfg.jobs = jobs;
  if (cap) cfg.cap = cap;
  VerifyResult result = run_verify(cfg);
  emit(out_path, verify_rows_to_csv(result.rows));
  std::fprintf(stderr, "verify: %zu rows, min margin %s -> %s\n", result.rows.size(),
               format_double(result.min_margin).c_str(), result.pass ? "pass" : "FAIL");
  return result.pass ? 0 : 2;
}

int cmd_sweep(const std::string& config_path, const std::string& out_path, unsigned jobs,
              std::uint64_t cap) {
  SweepConfig cfg = sweep_config_from(read_config(config_path));
  if (jobs) cfg.jobs = jobs;
  if (cap) cfg.cap = cap;
  emit(out_path, run_sweep_csv(cfg));
  return 0;
}

int cmd_lemma_scan(const std::string& which, const std::string& out_path) {
  ScanResult res;
  if (which == "taylor1") res = scan_taylor(false);
  else if (which == "taylor2") res = scan_taylor(true);
  else if (which == "moments") res = scan_moments();
  else if (which == "ahle") res = scan_ahle();
  else if (which == "cross") res = scan_cross();
  else if (which == "stein_norms") res = scan_stein_norms();
  else fail(errc::config_error, "unknown scan: " + which);
  emit(out_path, res.csv);
  std::fprintf(stderr, "lemma-scan %s: min margin %s, tightest %s\n", which.c_str(),
               format_double(res.min_margin).c_str(), format_double(res.tightest).c_str());
  return res.min_margin >= -1e-9 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"power divergence statistics, chi-square approximation bounds, exact certification"};
  app.require_subcommand(1);

  std::string counts_path, probs_arg, lambda_list = "1", out_path, config_path, which, h_name;
  long long n = 0;
  unsigned jobs = 0;
  std::uint64_t cap = 0;

  auto* stat = app.add_subcommand("stat", "statistics from a counts file");
  stat->add_option("--counts", counts_path, "counts CSV (`cell,count`) or JSON array")->required();
  stat->add_option("--probs", probs_arg, "null probabilities: list or file")->required();
  stat->add_option("--lambda", lambda_list, "comma list of index parameters (fractions allowed)");
  stat->add_option("--out", out_path, "output file (default stdout)");

  auto* bound = app.add_subcommand("bound", "bound reports for a model");
  bound->add_option("--n", n, "trial count")->required();
  bound->add_option("--probs", probs_arg, "null probabilities: list or file")->required();
  bound->add_option("--lambda", lambda_list, "comma list of index parameters");
  bound->add_option("--function", h_name, "registry test function (default: all)");
  bound->add_option("--out", out_path, "output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "oracle-vs-bound certification run");
  verify->add_option("--config", config_path, "grid config (default: built-in grid)");
  verify->add_option("--out", out_path, "output CSV (default stdout)");
  verify->add_option("--jobs", jobs, "worker threads (default: hardware)");
  verify->add_option("--cap", cap, "enumeration cap override");

  auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
  sweep->add_option("--config", config_path, "axis config")->required();
  sweep->add_option("--out", out_path, "output CSV (default stdout)");
  sweep->add_option("--jobs", jobs, "worker threads");
  sweep->add_option("--cap", cap, "enumeration cap override");

  auto* lemma = app.add_subcommand("lemma-scan", "inequality margin scans");
  lemma->add_option("--which", which,
                    "moments | ahle | cross | taylor1 | taylor2 | stein_norms")
      ->required();
  lemma->add_option("--out", out_path, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (stat->parsed()) return cmd_stat(counts_path, probs_arg, lambda_list, out_path);
    if (bound->parsed()) return cmd_bound(n, probs_arg, lambda_list, h_name, out_path);
    if (verify->parsed()) return cmd_verify(config_path, out_path, jobs, cap);
    if (sweep->parsed()) return cmd_sweep(config_path, out_path, jobs, cap);
    if (lemma->parsed()) return cmd_lemma_scan(which, out_path);
  } catch (const powerdiv::PdError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return (e.code() == powerdiv::errc::parse_error || e.code() == powerdiv::errc::config_error)
               ? 3
               : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
