#include "powerdiv/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "powerdiv/statistics.hpp"

namespace powerdiv {

double log_pmf(const Counts& counts, const MultinomialSpec& spec) {
  validate_counts(counts, spec);
  double lp = std::lgamma(static_cast<double>(spec.n) + 1.0);
  for (size_t j = 0; j < counts.size(); ++j) {
    lp -= std::lgamma(static_cast<double>(counts[j]) + 1.0);
    if (counts[j] > 0) lp += static_cast<double>(counts[j]) * std::log(spec.probs[j]);
  }
  return lp;
}

namespace {

// Tabulated per-(spec, lambda) statistic evaluator. Each composition costs
// r table lookups; the pow/log calls are hoisted into tables indexed by the
// cell count.
class FastStatistic {
 public:
  FastStatistic(const MultinomialSpec& spec, const DivergenceIndex& idx)
      : regime_(idx.regime), lambda_(idx.lambda), n_(static_cast<double>(spec.n)) {
    const size_t r = spec.probs.size();
    const size_t m = static_cast<size_t>(spec.n) + 1;
    np_.resize(r);
    for (size_t j = 0; j < r; ++j) np_[j] = n_ * spec.probs[j];
    switch (regime_) {
      case Regime::Generic: {
        pow_u_.resize(m);
        for (size_t u = 0; u < m; ++u)
          pow_u_[u] = u == 0 ? 0.0 : std::pow(static_cast<double>(u), lambda_ + 1.0);
        cell_scale_.resize(r);
        for (size_t j = 0; j < r; ++j) cell_scale_[j] = std::pow(np_[j], -lambda_);
        prefactor_ = 2.0 / (lambda_ * (lambda_ + 1.0));
        break;
      }
      case Regime::Zero: {
        ulogu_.resize(m);
        for (size_t u = 0; u < m; ++u)
          ulogu_[u] = u == 0 ? 0.0 : static_cast<double>(u) * std::log(static_cast<double>(u));
        log_np_.resize(r);
        for (size_t j = 0; j < r; ++j) log_np_[j] = std::log(np_[j]);
        break;
      }
      case Regime::MinusOne: {
        logu_.resize(m);
        logu_[0] = 0.0;
        for (size_t u = 1; u < m; ++u) logu_[u] = std::log(static_cast<double>(u));
        log_np_.resize(r);
        for (size_t j = 0; j < r; ++j) log_np_[j] = std::log(np_[j]);
        p_ = spec.probs;
        break;
      }
    }
  }

  double operator()(const Counts& c) const {
    switch (regime_) {
      case Regime::Generic: {
        KahanSum acc;
        for (size_t j = 0; j < c.size(); ++j)
          acc.add(pow_u_[static_cast<size_t>(c[j])] * cell_scale_[j]);
        acc.add(-n_);
        double t = prefactor_ * acc.value();
        return t < 0.0 && t > -1e-9 ? 0.0 : t;
      }
      case Regime::Zero: {
        KahanSum acc;
        for (size_t j = 0; j < c.size(); ++j) {
          if (c[j] == 0) continue;
          acc.add(ulogu_[static_cast<size_t>(c[j])] - static_cast<double>(c[j]) * log_np_[j]);
        }
        double t = 2.0 * acc.value();
        return t < 0.0 && t > -1e-9 ? 0.0 : t;
      }
      case Regime::MinusOne: {
        KahanSum acc;
        for (size_t j = 0; j < c.size(); ++j) {
          if (c[j] == 0) return kInf;
          acc.add(p_[j] * (log_np_[j] - logu_[static_cast<size_t>(c[j])]));
        }
        double t = 2.0 * n_ * acc.value();
        return t < 0.0 && t > -1e-9 ? 0.0 : t;
      }
    }
    return 0.0;
  }

 private:
  Regime regime_;
  double lambda_;
  double n_;
  double prefactor_ = 0.0;
  std::vector<double> np_, cell_scale_, pow_u_, ulogu_, logu_, log_np_, p_;
};

struct PmfTable {
  std::vector<double> lg;     // lgamma(u + 1)
  std::vector<double> log_p;  // log p_j
  double lg_n1;

  explicit PmfTable(const MultinomialSpec& spec) {
    lg.resize(static_cast<size_t>(spec.n) + 1);
    for (size_t u = 0; u < lg.size(); ++u) lg[u] = std::lgamma(static_cast<double>(u) + 1.0);
    log_p.resize(spec.probs.size());
    for (size_t j = 0; j < log_p.size(); ++j) log_p[j] = std::log(spec.probs[j]);
    lg_n1 = std::lgamma(static_cast<double>(spec.n) + 1.0);
  }

  double prob(const Counts& c) const {
    double lp = lg_n1;
    for (size_t j = 0; j < c.size(); ++j) {
      lp -= lg[static_cast<size_t>(c[j])];
      if (c[j] > 0) lp += static_cast<double>(c[j]) * log_p[j];
    }
    return std::exp(lp);
  }
};

bool values_equal(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return std::isinf(a) && std::isinf(b);
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

using AtomList = std::vector<ExactDistribution::Atom>;

// Merge two sorted atom lists, combining values equal within tolerance.
AtomList merge_atoms(const AtomList& a, const AtomList& b) {
  AtomList out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  auto push = [&out](const ExactDistribution::Atom& atom) {
    if (!out.empty() && values_equal(out.back().value, atom.value)) {
      out.back().prob += atom.prob;
    } else {
      out.push_back(atom);
    }
  };
  while (i < a.size() && j < b.size()) {
    if (a[i].value <= b[j].value) push(a[i++]);
    else push(b[j++]);
  }
  while (i < a.size()) push(a[i++]);
  while (j < b.size()) push(b[j++]);
  return out;
}

unsigned resolve_jobs(unsigned jobs) {
  if (jobs != 0) return jobs;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

// Runs `chunk_fn(chunk_index, iter, count)` over fixed chunks of the support
// and returns the per-chunk results in chunk order.
template <typename Result, typename ChunkFn>
std::vector<Result> map_chunks(const MultinomialSpec& spec, const EnumerationOptions& opts,
                               ChunkFn chunk_fn) {
  const std::uint64_t total = composition_count(spec.n, spec.r());
  if (total > opts.cap) {
    fail(errc::support_too_large,
         "support size " + std::to_string(total) + " exceeds cap " + std::to_string(opts.cap));
  }
  const std::uint64_t chunk = std::max<std::uint64_t>(1, opts.chunk_size);
  const std::uint64_t num_chunks = (total + chunk - 1) / chunk;
  std::vector<Result> results(static_cast<size_t>(num_chunks));
  const unsigned jobs = std::min<std::uint64_t>(resolve_jobs(opts.jobs), num_chunks);

  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::uint64_t ci = next.fetch_add(1);
      if (ci >= num_chunks) return;
      std::uint64_t begin = ci * chunk;
      std::uint64_t count = std::min(chunk, total - begin);
      CompositionIter it(spec.n, spec.r(), begin);
      results[static_cast<size_t>(ci)] = chunk_fn(it, count);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return results;
}

}  // namespace

ExactDistribution exact_distribution_fn(const MultinomialSpec& spec,
                                        const std::function<double(const Counts&)>& statistic,
                                        const std::string& source,
                                        const EnumerationOptions& opts) {
  PmfTable pmf(spec);
  auto chunk_fn = [&](CompositionIter& it, std::uint64_t count) {
    std::vector<ExactDistribution::Atom> atoms;
    atoms.reserve(static_cast<size_t>(count));
    for (std::uint64_t i = 0; i < count; ++i, it.advance()) {
      atoms.push_back({statistic(it.value()), pmf.prob(it.value())});
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const auto& a, const auto& b) { return a.value < b.value; });
    AtomList merged;
    for (const auto& atom : atoms) {
      if (!merged.empty() && values_equal(merged.back().value, atom.value)) {
        merged.back().prob += atom.prob;
      } else {
        merged.push_back(atom);
      }
    }
    return merged;
  };
  std::vector<AtomList> partials = map_chunks<AtomList>(spec, opts, chunk_fn);

  AtomList combined;
  for (const auto& part : partials) combined = merge_atoms(combined, part);
  ExactDistribution dist;
  dist.atoms = std::move(combined);
  dist.source = source;
  return dist;
}

ExactDistribution exact_distribution(const MultinomialSpec& spec, const DivergenceIndex& idx,
                                     const EnumerationOptions& opts) {
  FastStatistic stat(spec, idx);
  std::string source = "T_lambda(" + std::to_string(idx.lambda) + ")";
  return exact_distribution_fn(spec, [&stat](const Counts& c) { return stat(c); }, source, opts);
}

double pmf_total(const MultinomialSpec& spec, const EnumerationOptions& opts) {
  PmfTable pmf(spec);
  auto chunk_fn = [&](CompositionIter& it, std::uint64_t count) {
    KahanSum acc;
    for (std::uint64_t i = 0; i < count; ++i, it.advance()) acc.add(pmf.prob(it.value()));
    return acc.value();
  };
  std::vector<double> partials = map_chunks<double>(spec, opts, chunk_fn);
  KahanSum total;
  for (double p : partials) total.add(p);
  return total.value();
}

double exact_expectation(const ExactDistribution& dist, const TestFunctionSpec& h) {
  KahanSum acc;
  for (const auto& atom : dist.atoms) {
    if (std::isinf(atom.value)) {
      if (!h.limit_at_inf)
        fail(errc::infinite_atom_without_limit,
             "law has an atom at +inf and h declares no limit there");
      acc.add(*h.limit_at_inf * atom.prob);
    } else {
      acc.add(h.eval(atom.value) * atom.prob);
    }
  }
  return acc.value();
}

double exact_mean(const ExactDistribution& dist) {
  KahanSum acc;
  for (const auto& atom : dist.atoms) {
    if (std::isinf(atom.value)) return kInf;
    acc.add(atom.value * atom.prob);
  }
  return acc.value();
}

double exact_kolmogorov(const ExactDistribution& dist, const ChiSquareRef& ref) {
  double best = 0.0;
  KahanSum cum;
  double f_prev = 0.0;
  for (const auto& atom : dist.atoms) {
    if (std::isinf(atom.value))
      fail(errc::infinite_atom_without_limit, "Kolmogorov distance needs finite atoms");
    cum.add(atom.prob);
    double f_here = cum.value();
    double f_chi = chi2_cdf(ref, std::max(0.0, atom.value));
    best = std::max(best, f_here - f_chi);   // jump overshoots the cdf
    best = std::max(best, f_chi - f_prev);   // cdf overshoots just below the atom
    f_prev = f_here;
  }
  return std::min(best, 1.0);
}

namespace {

double binomial_weighted_sum(long long n, double p,
                             const std::function<double(long long)>& g) {
  const double logp = std::log(p);
  const double log1mp = std::log1p(-p);
  const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
  KahanSum acc;
  for (long long u = 0; u <= n; ++u) {
    double lw = lgn - std::lgamma(static_cast<double>(u) + 1.0) -
                std::lgamma(static_cast<double>(n - u) + 1.0) +
                static_cast<double>(u) * logp + static_cast<double>(n - u) * log1mp;
    acc.add(std::exp(lw) * g(u));
  }
  return acc.value();
}

}  // namespace

double exact_binomial_moment(long long n, double p, BinMomentKind kind) {
  const double np = static_cast<double>(n) * p;
  const double scale = std::sqrt(np);
  return binomial_weighted_sum(n, p, [&](long long u) {
    double s = (static_cast<double>(u) - np) / scale;
    switch (kind) {
      case BinMomentKind::abs3: return std::abs(s * s * s);
      case BinMomentKind::central4: return s * s * s * s;
      case BinMomentKind::central6: return s * s * s * s * s * s;
    }
    return 0.0;
  });
}

double exact_binomial_raw_moment(long long n, double p, double k) {
  if (!(k > 0.0)) fail(errc::order_out_of_range, "raw moment order must be positive");
  return binomial_weighted_sum(n, p, [&](long long u) {
    return u == 0 ? 0.0 : std::pow(static_cast<double>(u), k);
  });
}

double exact_cross_moment(const MultinomialSpec& spec, int j, int k) {
  if (j == k || j < 0 || k < 0 || j >= spec.r() || k >= spec.r())
    fail(errc::index_out_of_range, "cross moment needs two distinct cell indices");
  const long long n = spec.n;
  const double pj = spec.probs[static_cast<size_t>(j)];
  const double pk = spec.probs[static_cast<size_t>(k)];
  const double npj = static_cast<double>(n) * pj;
  const double npk = static_cast<double>(n) * pk;
  const double sj = std::sqrt(npj), sk = std::sqrt(npk);
  const double p_rest = 1.0 - pj - pk;
  const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
  const double lpj = std::log(pj), lpk = std::log(pk);
  const double lpr = p_rest > 0.0 ? std::log(p_rest) : -kInf;

  std::vector<double> lg(static_cast<size_t>(n) + 1);
  for (size_t u = 0; u < lg.size(); ++u) lg[u] = std::lgamma(static_cast<double>(u) + 1.0);

  KahanSum acc;
  for (long long u = 0; u <= n; ++u) {
    double su = (static_cast<double>(u) - npj) / sj;
    double su3 = su * su * su;
    long long vmax = n - u;
    for (long long v = 0; v <= vmax; ++v) {
      long long w = vmax - v;
      if (w > 0 && p_rest <= 0.0) continue;
      double lw = lgn - lg[static_cast<size_t>(u)] - lg[static_cast<size_t>(v)] -
                  lg[static_cast<size_t>(w)] + static_cast<double>(u) * lpj +
                  static_cast<double>(v) * lpk + (w > 0 ? static_cast<double>(w) * lpr : 0.0);
      double sv = (static_cast<double>(v) - npk) / sk;
      acc.add(std::exp(lw) * su3 * sv * sv * sv);
    }
  }
  return acc.value();
}

double exact_cross_moment_full(const MultinomialSpec& spec, int j, int k,
                               const EnumerationOptions& opts) {
  if (j == k || j < 0 || k < 0 || j >= spec.r() || k >= spec.r())
    fail(errc::index_out_of_range, "cross moment needs two distinct cell indices");
  PmfTable pmf(spec);
  const double npj = static_cast<double>(spec.n) * spec.probs[static_cast<size_t>(j)];
  const double npk = static_cast<double>(spec.n) * spec.probs[static_cast<size_t>(k)];
  const double sj = std::sqrt(npj), sk = std::sqrt(npk);
  auto chunk_fn = [&](CompositionIter& it, std::uint64_t count) {
    KahanSum acc;
    for (std::uint64_t i = 0; i < count; ++i, it.advance()) {
      const Counts& c = it.value();
      double su = (static_cast<double>(c[static_cast<size_t>(j)]) - npj) / sj;
      double sv = (static_cast<double>(c[static_cast<size_t>(k)]) - npk) / sk;
      acc.add(pmf.prob(c) * su * su * su * sv * sv * sv);
    }
    return acc.value();
  };
  std::vector<double> partials = map_chunks<double>(spec, opts, chunk_fn);
  KahanSum total;
  for (double p : partials) total.add(p);
  return total.value();
}

}  // namespace powerdiv
