#include <doctest.h>

#include <cmath>

#include "powerdiv/chi_square.hpp"
#include "powerdiv/io.hpp"
#include "powerdiv/oracle.hpp"
#include "powerdiv/statistics.hpp"

using namespace powerdiv;

TEST_SUITE_BEGIN("distributions");

TEST_CASE("chi-square cdf agrees with closed forms") {
  CHECK(chi2_cdf({2.0}, 2.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-13));
  CHECK(chi2_cdf({1.0}, 1.0) == doctest::Approx(std::erf(1.0 / std::sqrt(2.0))).epsilon(1e-13));
  CHECK(chi2_cdf({7.0}, 0.0) == 0.0);
  CHECK(chi2_tail({3.0}, 0.0) == 1.0);
  CHECK_THROWS_AS(chi2_cdf({1.0}, -0.5), PdError);
  // dof = 4: F(z) = 1 - e^{-z/2}(1 + z/2)
  for (double z : {0.5, 2.0, 7.5, 31.0}) {
    CHECK(chi2_cdf({4.0}, z) ==
          doctest::Approx(1.0 - std::exp(-z / 2) * (1.0 + z / 2)).epsilon(1e-13));
    CHECK(chi2_cdf({4.0}, z) + chi2_tail({4.0}, z) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("chi-square expectations") {
  CHECK(chi2_expectation({3.0}, make_identity()) == doctest::Approx(3.0).epsilon(1e-11));
  CHECK(chi2_expectation({1.0}, make_identity()) == doctest::Approx(1.0).epsilon(1e-11));
  // MGF closed form: E[e^{-Y}] = (1 + 2)^{-dof/2}
  CHECK(chi2_expectation({1.0}, make_exp_decay()) ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-11));
  CHECK(chi2_expectation({4.0}, make_exp_decay()) == doctest::Approx(1.0 / 9.0).epsilon(1e-11));

  TestFunctionSpec constant;
  constant.name = "one";
  constant.eval = [](double) { return 1.0; };
  constant.deriv = [](int k, double) { return k == 0 ? 1.0 : 0.0; };
  constant.deriv_norms = {1, 0, 0, 0, 0, 0};
  constant.cls = {0, 5};
  constant.limit_at_inf = 1.0;
  CHECK(chi2_expectation({2.5}, constant) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("composition counts and order") {
  CHECK(composition_count(2, 2) == 3);
  CHECK(composition_count(3, 3) == 10);
  CHECK(composition_count(20, 4) == 1771);

  CompositionIter it(2, 2);
  CHECK(it.value() == Counts{0, 2});
  it.advance();
  CHECK(it.value() == Counts{1, 1});
  it.advance();
  CHECK(it.value() == Counts{2, 0});
  it.advance();
  CHECK(it.done());
}

TEST_CASE("rank and unrank round-trip") {
  std::uint64_t rank = 0;
  for (CompositionIter it(7, 4); !it.done(); it.advance(), ++rank) {
    CHECK(composition_rank(it.value()) == rank);
    CHECK(composition_unrank(7, 4, rank) == it.value());
  }
  CHECK(rank == composition_count(7, 4));
}

TEST_CASE("log pmf examples and normalization") {
  CHECK(log_pmf({1, 1}, make_spec(2, {0.5, 0.5})) == doctest::Approx(std::log(0.5)).epsilon(1e-13));
  CHECK(log_pmf({2, 0}, make_spec(2, {0.5, 0.5})) ==
        doctest::Approx(std::log(0.25)).epsilon(1e-13));
  CHECK(log_pmf({3, 1}, make_spec(4, {0.5, 0.5})) ==
        doctest::Approx(std::log(0.25)).epsilon(1e-13));

  for (const auto& spec :
       {make_spec(40, {0.2, 0.8}), make_spec(25, {0.2, 0.3, 0.5}),
        make_spec(12, {0.1, 0.2, 0.3, 0.25, 0.15}),
        make_spec(40, {0.2, 0.2, 0.2, 0.2, 0.2})}) {
    CHECK(std::abs(pmf_total(spec) - 1.0) <= 1e-12);
  }
}

TEST_CASE("exact distribution examples") {
  ExactDistribution d = exact_distribution(make_spec(2, {0.5, 0.5}), make_index(1.0));
  REQUIRE(d.atoms.size() == 2);
  CHECK(d.atoms[0].value == doctest::Approx(0.0));
  CHECK(d.atoms[0].prob == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(d.atoms[1].value == doctest::Approx(2.0));
  CHECK(d.atoms[1].prob == doctest::Approx(0.5).epsilon(1e-14));

  ExactDistribution single = exact_distribution(make_spec(1, {0.5, 0.5}), make_index(1.0));
  REQUIRE(single.atoms.size() == 1);
  CHECK(single.atoms[0].value == doctest::Approx(1.0));
  CHECK(single.atoms[0].prob == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(make_spec(0, {0.5, 0.5}), PdError);
}

TEST_CASE("distribution invariants over a grid") {
  for (const auto& spec : {make_spec(30, {0.3, 0.3, 0.4}), make_spec(20, {0.25, 0.25, 0.25, 0.25})}) {
    for (double lam : {-0.5, 0.0, 1.0, 3.5}) {
      ExactDistribution d = exact_distribution(spec, make_index(lam));
      CHECK(d.atoms.size() <= composition_count(spec.n, spec.r()));
      KahanSum total;
      double prev = -kInf;
      for (const auto& atom : d.atoms) {
        CHECK(atom.value > prev);
        CHECK(atom.prob > 0.0);
        prev = atom.value;
        total.add(atom.prob);
      }
      CHECK(std::abs(total.value() - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("exact expectation examples") {
  ExactDistribution d;
  d.atoms = {{0.0, 0.5}, {2.0, 0.5}};
  CHECK(exact_expectation(d, make_identity()) == doctest::Approx(1.0));
  ExactDistribution point;
  point.atoms = {{1.0, 1.0}};
  CHECK(exact_expectation(point, make_exp_decay()) == doctest::Approx(std::exp(-1.0)));

  // E[chi^2] = r - 1 exactly.
  ExactDistribution law = exact_distribution(make_spec(4, {0.5, 0.5}), make_index(1.0));
  CHECK(exact_expectation(law, make_identity()) == doctest::Approx(1.0).epsilon(1e-12));

  ExactDistribution with_inf;
  with_inf.atoms = {{1.0, 0.75}, {kInf, 0.25}};
  CHECK(exact_expectation(with_inf, make_exp_decay()) ==
        doctest::Approx(0.75 * std::exp(-1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(exact_expectation(with_inf, make_identity()), PdError);
  CHECK(std::isinf(exact_mean(with_inf)));
}

TEST_CASE("GM2 law of a spec with zero cells carries an infinite atom") {
  ExactDistribution d = exact_distribution(make_spec(6, {0.5, 0.5}), make_index(-1.0));
  REQUIRE(!d.atoms.empty());
  CHECK(std::isinf(d.atoms.back().value));
  // P(U in {0, 6}) = 2/64
  CHECK(d.atoms.back().prob == doctest::Approx(2.0 / 64.0).epsilon(1e-13));
}

TEST_CASE("exact Kolmogorov distance") {
  ExactDistribution d;
  d.atoms = {{0.0, 0.5}, {2.0, 0.5}};
  CHECK(exact_kolmogorov(d, {1.0}) == doctest::Approx(0.5).epsilon(1e-12));

  ExactDistribution point;
  point.atoms = {{1.0, 1.0}};
  CHECK(exact_kolmogorov(point, {1.0}) ==
        doctest::Approx(std::erf(1.0 / std::sqrt(2.0))).epsilon(1e-12));

  // A fine discretization of the reference itself has small distance.
  ExactDistribution grid;
  const int cells = 4000;
  ChiSquareRef ref{3.0};
  double prev_cdf = 0.0;
  for (int i = 1; i <= cells; ++i) {
    double z = 40.0 * i / cells;
    double c = chi2_cdf(ref, z);
    grid.atoms.push_back({z, c - prev_cdf});
    prev_cdf = c;
  }
  grid.atoms.push_back({41.0, 1.0 - prev_cdf});
  CHECK(exact_kolmogorov(grid, ref) <= 0.02);

  ExactDistribution with_inf;
  with_inf.atoms = {{1.0, 0.5}, {kInf, 0.5}};
  CHECK_THROWS_AS(exact_kolmogorov(with_inf, ChiSquareRef{1.0}), PdError);
}

TEST_CASE("Kolmogorov distance shrinks from n = 10 to n = 80") {
  double first = 0.0, last = 0.0;
  for (long long n : {10, 20, 40, 80}) {
    ExactDistribution d = exact_distribution(make_spec(n, {0.5, 0.5}), make_index(1.0));
    double kol = exact_kolmogorov(d, {1.0});
    if (n == 10) first = kol;
    last = kol;
  }
  CHECK(last < first);
}

TEST_CASE("exact binomial moments") {
  CHECK(exact_binomial_moment(4, 0.5, BinMomentKind::central4) ==
        doctest::Approx(0.625).epsilon(1e-13));
  // E|S|^3 = (24/16) / 2^{3/2} = 3 sqrt(2) / 8
  CHECK(exact_binomial_moment(4, 0.5, BinMomentKind::abs3) ==
        doctest::Approx(0.5303300858899106).epsilon(1e-13));
  CHECK(exact_binomial_raw_moment(4, 0.5, 1.0) == doctest::Approx(2.0).epsilon(1e-13));
  // E[U^2] = np(1-p) + (np)^2
  CHECK(exact_binomial_raw_moment(10, 0.5, 2.0) == doctest::Approx(27.5).epsilon(1e-13));
  // central4 <= 3 + 1/(np) on an np >= 2 grid
  for (long long n : {4, 16, 64, 256}) {
    for (double p : {0.25, 0.5, 0.75}) {
      if (n * p < 2.0) continue;
      CHECK(exact_binomial_moment(n, p, BinMomentKind::central4) <=
            3.0 + 1.0 / (static_cast<double>(n) * p) + 1e-12);
    }
  }
}

TEST_CASE("exact cross moments") {
  MultinomialSpec half = make_spec(4, {0.5, 0.5});
  // S_2 = -S_1 when r = 2 with equal cells, so E[S_1^3 S_2^3] = -E[S_1^6].
  CHECK(exact_cross_moment(half, 0, 1) == doctest::Approx(-1.0625).epsilon(1e-12));
  for (long long n : {4, 9, 17}) {
    MultinomialSpec s = make_spec(n, {0.5, 0.5});
    CHECK(exact_cross_moment(s, 0, 1) ==
          doctest::Approx(-exact_binomial_moment(n, 0.5, BinMomentKind::central6)).epsilon(1e-11));
  }
  // Trinomial reduction against the full-support enumeration.
  for (const auto& spec : {make_spec(12, {1.0 / 3, 1.0 / 3, 1.0 / 3}), make_spec(14, {0.2, 0.3, 0.5}),
                           make_spec(12, {0.25, 0.25, 0.25, 0.25})}) {
    for (int j = 0; j < spec.r(); ++j) {
      for (int k = 0; k < spec.r(); ++k) {
        if (j == k) continue;
        CHECK(std::abs(exact_cross_moment(spec, j, k) - exact_cross_moment_full(spec, j, k)) <=
              1e-10);
      }
    }
  }
  CHECK_THROWS_AS(exact_cross_moment(half, 1, 1), PdError);
}

TEST_CASE("support cap is enforced") {
  EnumerationOptions opts;
  opts.cap = 10;
  CHECK_THROWS_AS(exact_distribution(make_spec(100, {0.5, 0.5}), make_index(1.0), opts), PdError);
}

TEST_CASE("distribution export format") {
  ExactDistribution d = exact_distribution(make_spec(2, {0.5, 0.5}), make_index(1.0));
  CHECK(distribution_to_csv(d) == "value,prob\n0,0.5\n2,0.5\n");
}

TEST_CASE("parallel enumeration is bitwise deterministic") {
  MultinomialSpec spec = make_spec(60, {0.2, 0.3, 0.5});
  EnumerationOptions serial{kDefaultSupportCap, 1, 64};
  EnumerationOptions parallel{kDefaultSupportCap, 8, 64};
  ExactDistribution a = exact_distribution(spec, make_index(2.0 / 3.0), serial);
  ExactDistribution b = exact_distribution(spec, make_index(2.0 / 3.0), parallel);
  REQUIRE(a.atoms.size() == b.atoms.size());
  for (size_t i = 0; i < a.atoms.size(); ++i) {
    CHECK(a.atoms[i].value == b.atoms[i].value);
    CHECK(a.atoms[i].prob == b.atoms[i].prob);
  }
}

TEST_SUITE_END();
