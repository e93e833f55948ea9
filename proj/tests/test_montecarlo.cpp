#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <tailvar/montecarlo.hpp>
#include <tailvar/rng.hpp>

using namespace tailvar;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("sample_gnp: deterministic, respects degenerate p", "[montecarlo]") {
  const WeightedGraph a = sample_gnp(12, 0.4, 99);
  const WeightedGraph b = sample_gnp(12, 0.4, 99);
  CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() == 0.0);
  const WeightedGraph c = sample_gnp(12, 0.4, 100);
  CHECK((a.matrix() - c.matrix()).cwiseAbs().maxCoeff() > 0.0);

  CHECK(sample_gnp(8, 0.0, 7).matrix().sum() == 0.0);
  CHECK(sample_gnp(8, 1.0, 7).matrix().sum() == 8.0 * 7.0);

  CHECK_THROWS_AS(sample_gnp(0, 0.5, 1), std::domain_error);
  CHECK_THROWS_AS(sample_gnp(5, -0.1, 1), std::domain_error);
  CHECK_THROWS_AS(sample_gnp(5, 1.1, 1), std::domain_error);
}

TEST_CASE("naive_tail_estimate replays its per-trial streams exactly",
          "[montecarlo]") {
  const int n = 10;
  const double p = 0.3;
  const double delta = 0.1;
  const std::int64_t trials = 200;
  const std::uint64_t seed = 4242;
  const McEstimate est =
      naive_tail_estimate(n, p, delta, patterns::triangle(), trials, seed);

  // replay: trial i draws pairs (0,1),(0,2),...,(n-2,n-1) from
  // CounterRng(seed, i); the decision uses the 0/1 triangle count
  const double threshold = (1.0 + delta) * p * p * p;
  std::int64_t hits = 0;
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    CounterRng rng(seed, static_cast<std::uint64_t>(trial));
    int adj[10][10] = {};
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        adj[i][j] = adj[j][i] = rng.next_bernoulli(p) ? 1 : 0;
    std::int64_t cnt = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k) cnt += adj[i][j] * adj[i][k] * adj[j][k];
    const double nd = n;
    if (6.0 * static_cast<double>(cnt) / (nd * nd * nd) >= threshold) ++hits;
  }
  CHECK(est.hits == hits);
  CHECK(est.trials == trials);
  CHECK(est.estimate ==
        static_cast<double>(hits) / static_cast<double>(trials));
  if (est.hits > 0) CHECK(est.log_estimate == std::log(est.estimate));
}

TEST_CASE("degenerate thresholds short-circuit", "[montecarlo]") {
  const McEstimate certain =
      naive_tail_estimate(10, 0.5, -1.0, patterns::triangle(), 50, 1);
  CHECK(certain.certain);
  CHECK(certain.estimate == 1.0);
  CHECK(certain.ci_low == 1.0);
  CHECK(certain.ci_high == 1.0);
  CHECK(certain.log_estimate == 0.0);
  CHECK(certain.hits == 50);

  const McEstimate impossible =
      naive_tail_estimate(10, 0.5, 8.0, patterns::triangle(), 50, 1);
  CHECK(impossible.impossible);
  CHECK(impossible.estimate == 0.0);
  CHECK(impossible.ci_high == 0.0);
  CHECK(!impossible.certain);
}

TEST_CASE("confidence intervals: Wilson when hit, rule of three when not",
          "[montecarlo]") {
  const McEstimate hit =
      naive_tail_estimate(10, 0.3, 0.0, patterns::triangle(), 400, 11);
  REQUIRE(hit.hits > 0);
  const detail::WilsonInterval w = detail::wilson_interval(hit.hits, 400);
  CHECK(hit.ci_low == w.low);
  CHECK(hit.ci_high == w.high);
  CHECK(hit.ci_low <= hit.estimate);
  CHECK(hit.estimate <= hit.ci_high);

  const McEstimate none =
      naive_tail_estimate(40, 0.2, 3.0, patterns::triangle(), 200, 11);
  REQUIRE(none.hits == 0);
  CHECK(none.estimate == 0.0);
  CHECK(none.ci_low == 0.0);
  CHECK(none.ci_high == 3.0 / 200.0);
  CHECK(none.log_estimate == -std::numeric_limits<double>::infinity());
  CHECK(!none.note.empty());
}

TEST_CASE("tilt specifications validate", "[montecarlo]") {
  CHECK_THROWS_AS(planted_clique_tilt(4, 0.5, 5), std::domain_error);
  TiltSpec wrong = no_op_tilt(3, 0.5);
  CHECK_THROWS_AS(
      tilted_tail_estimate(4, 0.5, 1.0, patterns::triangle(), wrong, 10, 1),
      std::domain_error);
  TiltSpec asym = no_op_tilt(4, 0.5);
  asym.q(0, 1) = 0.7;
  CHECK_THROWS_AS(
      tilted_tail_estimate(4, 0.5, 1.0, patterns::triangle(), asym, 10, 1),
      std::domain_error);
  TiltSpec diag = no_op_tilt(4, 0.5);
  diag.q(2, 2) = 0.5;
  CHECK_THROWS_AS(
      tilted_tail_estimate(4, 0.5, 1.0, patterns::triangle(), diag, 10, 1),
      std::domain_error);
  TiltSpec zero = no_op_tilt(4, 0.5);
  zero.q(0, 1) = 0.0;
  zero.q(1, 0) = 0.0;
  CHECK_THROWS_AS(
      tilted_tail_estimate(4, 0.5, 1.0, patterns::triangle(), zero, 10, 1),
      std::domain_error);
}

TEST_CASE("no-op tilt reproduces the naive estimator", "[montecarlo]") {
  const int n = 12;
  const double p = 0.35;
  const double delta = 0.3;
  const std::int64_t trials = 2000;
  const McEstimate naive =
      naive_tail_estimate(n, p, delta, patterns::triangle(), trials, 77);
  const McEstimate tilted = tilted_tail_estimate(
      n, p, delta, patterns::triangle(), no_op_tilt(n, p), trials, 77);
  CHECK(tilted.hits == naive.hits);
  REQUIRE(naive.hits > 0);
  CHECK_THAT(tilted.estimate, WithinRel(naive.estimate, 1e-12));
  CHECK_THAT(tilted.log_estimate, WithinAbs(naive.log_estimate, 1e-12));
}

TEST_CASE("full plant recovers the exact point mass", "[montecarlo]") {
  // q = 1 everywhere: every sample is K_4, the only graph in the event, and
  // every weight is exactly p^6 = 1/64
  const McEstimate est = tilted_tail_estimate(
      4, 0.5, 1.0, patterns::triangle(), planted_clique_tilt(4, 0.5, 4), 64, 3);
  CHECK(est.hits == 64);
  CHECK_THAT(est.estimate, WithinRel(1.0 / 64.0, 1e-12));
  CHECK_THAT(est.ci_high - est.ci_low, WithinAbs(0.0, 1e-9));  // zero variance

  CHECK(exact_tail_probability(4, 0.5, 1.0, patterns::triangle()) ==
        1.0 / 64.0);
}

TEST_CASE("partial plant agrees with the exact enumeration", "[montecarlo]") {
  const double exact = exact_tail_probability(4, 0.5, 1.0, patterns::triangle());
  const McEstimate est =
      tilted_tail_estimate(4, 0.5, 1.0, patterns::triangle(),
                           planted_clique_tilt(4, 0.5, 3), 20000, 5);
  REQUIRE(est.hits > 0);
  const double se = (est.ci_high - est.estimate) / detail::kWilsonZ;
  CHECK(std::abs(est.estimate - exact) <= 5.0 * se + 1e-12);
}

TEST_CASE("exact_tail_probability: hand cases and guards", "[montecarlo]") {
  // n = 2 edge pattern: only the single-edge graph clears 0.45
  CHECK(exact_tail_probability(2, 0.3, 0.5, patterns::edge()) == 0.3);
  // certain event
  CHECK(exact_tail_probability(3, 0.5, -1.0, patterns::triangle()) == 1.0);
  // sums to 1 over complementary events: threshold just above 0 counts all
  // graphs with at least one triangle
  CHECK_THROWS_AS(exact_tail_probability(6, 0.5, 1.0, patterns::triangle()),
                  std::domain_error);
  CHECK_THROWS_AS(exact_tail_probability(4, 0.0, 1.0, patterns::triangle()),
                  std::domain_error);
}

TEST_CASE("rate_comparison mirrors its formulas", "[montecarlo]") {
  const RateComparison rc = rate_comparison(30, 0.3, 1.0, 1e-4, 9.5);
  CHECK(!rc.degenerate);
  CHECK_THAT(rc.ratio_phi, WithinRel(-std::log(1e-4) / 9.5, 1e-15));
  CHECK_THAT(rc.ratio_order,
             WithinRel(-std::log(1e-4) /
                           (900.0 * 0.09 * std::log(1.0 / 0.3)), 1e-15));

  const RateComparison deg = rate_comparison(30, 0.3, 1.0, 1.0, 9.5);
  CHECK(deg.degenerate);
  CHECK(deg.ratio_phi == 0.0);

  CHECK_THROWS_AS(rate_comparison(30, 0.3, 1.0, 0.0, 9.5), std::domain_error);
  CHECK_THROWS_AS(rate_comparison(30, 0.3, 1.0, 1e-4, 0.0), std::domain_error);
  CHECK_THROWS_AS(rate_comparison(30, 0.3, 0.0, 1e-4, 9.5), std::domain_error);
}
