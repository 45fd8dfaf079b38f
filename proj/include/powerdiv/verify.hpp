#pragma once

#include <cstdint>
#include <map>

#include "powerdiv/bounds.hpp"
#include "powerdiv/oracle.hpp"

namespace powerdiv {

// Certification grid: every (spec, lambda) cell is enumerated exactly, and
// each eligible (test function, bound variant) pair is checked for
// oracle dominance: exact distance <= bound whenever preconditions hold.
struct VerifyConfig {
  std::vector<MultinomialSpec> specs;
  std::vector<double> lambdas;
  std::vector<std::string> functions;
  std::uint64_t cap = kDefaultSupportCap;
  unsigned jobs = 0;
};

// The default grid: uniform specs n in {20,40,80,160} x r in {2,3,4}, plus
// (60, [.2,.3,.5]) and (100, [.1,.2,.3,.4]); lambda in {-1/2, 0, 2/3, 1, 2,
// 3.5}; all registry functions.
VerifyConfig default_verify_config();
VerifyConfig verify_config_from(const std::map<std::string, std::string>& kv);

struct VerifyRow {
  long long n = 0;
  int r = 0;
  std::string probs;
  double lambda = 0.0;
  std::string h;      // empty on Kolmogorov rows
  std::string check;  // bound variant name
  bool precond_ok = false;
  double exact = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - exact
};

struct VerifyResult {
  std::vector<VerifyRow> rows;
  double min_margin = kInf;  // over precondition-satisfied rows
  bool pass = true;          // min_margin >= -1e-9
};

VerifyResult run_verify(const VerifyConfig& config);
std::string verify_rows_to_csv(const std::vector<VerifyRow>& rows);

// Parameter sweep over axis grids; rows in lexicographic axis order
// (n, r, lambda, h). Cells whose support exceeds the cap leave the exact
// column empty.
struct SweepConfig {
  std::vector<long long> ns;
  std::vector<int> rs;
  std::string p_family = "uniform";  // uniform | geometric | one_small
  std::vector<double> lambdas;
  std::vector<std::string> functions;
  std::uint64_t cap = kDefaultSupportCap;
  unsigned jobs = 0;
};

SweepConfig sweep_config_from(const std::map<std::string, std::string>& kv);
std::vector<double> family_probs(const std::string& family, long long n, int r);
std::string run_sweep_csv(const SweepConfig& config);

}  // namespace powerdiv
