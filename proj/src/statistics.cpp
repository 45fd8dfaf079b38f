#include "powerdiv/statistics.hpp"

#include <cmath>

namespace powerdiv {

double likelihood_ratio(const Counts& counts, const MultinomialSpec& spec) {
  validate_counts(counts, spec);
  const double n = static_cast<double>(spec.n);
  KahanSum acc;
  for (size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] == 0) continue;  // 0 log 0 = 0
    double u = static_cast<double>(counts[j]);
    double np = n * spec.probs[j];
    // log(U/np) through log1p keeps L accurate when counts sit near the
    // expected values and the logarithms nearly cancel.
    acc.add(u * std::log1p((u - np) / np));
  }
  return 2.0 * acc.value();
}

double modified_lr(const Counts& counts, const MultinomialSpec& spec) {
  validate_counts(counts, spec);
  const double n = static_cast<double>(spec.n);
  KahanSum acc;
  for (size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] == 0) return kInf;
    double u = static_cast<double>(counts[j]);
    double np = n * spec.probs[j];
    acc.add(-spec.probs[j] * std::log1p((u - np) / np));
  }
  return 2.0 * n * acc.value();
}

double pearson(const Counts& counts, const MultinomialSpec& spec) {
  validate_counts(counts, spec);
  const double n = static_cast<double>(spec.n);
  KahanSum acc;
  for (size_t j = 0; j < counts.size(); ++j) {
    double np = n * spec.probs[j];
    double d = static_cast<double>(counts[j]) - np;
    acc.add(d * d / np);
  }
  return acc.value();
}

double freeman_tukey(const Counts& counts, const MultinomialSpec& spec) {
  validate_counts(counts, spec);
  const double n = static_cast<double>(spec.n);
  KahanSum acc;
  for (size_t j = 0; j < counts.size(); ++j) {
    double d = std::sqrt(static_cast<double>(counts[j])) - std::sqrt(n * spec.probs[j]);
    acc.add(d * d);
  }
  return 4.0 * acc.value();
}

double power_divergence(const Counts& counts, const MultinomialSpec& spec,
                        const DivergenceIndex& idx) {
  switch (idx.regime) {
    case Regime::Zero: return likelihood_ratio(counts, spec);
    case Regime::MinusOne: return modified_lr(counts, spec);
    case Regime::Generic: break;
  }
  validate_counts(counts, spec);
  const double lam = idx.lambda;
  const double n = static_cast<double>(spec.n);
  KahanSum acc;
  for (size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] == 0) continue;
    double u = static_cast<double>(counts[j]);
    double np = n * spec.probs[j];
    acc.add(std::pow(u, lam + 1.0) / std::pow(np, lam));
  }
  acc.add(-n);
  double t = 2.0 / (lam * (lam + 1.0)) * acc.value();
  // The algebraic form can round to a tiny negative at the minimum.
  return t < 0.0 && t > -1e-9 ? 0.0 : t;
}

}  // namespace powerdiv
