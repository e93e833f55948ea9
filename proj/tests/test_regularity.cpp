#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <tailvar/regularity.hpp>
#include <tailvar/rng.hpp>

#include "support/oracles.hpp"

using namespace tailvar;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double witness_value(const Eigen::MatrixXd& d, const CutDeviation& dev) {
  double sum = 0.0;
  for (int u : dev.s)
    for (int v : dev.t) sum += d(u, v);
  return std::abs(sum);
}

}  // namespace

TEST_CASE("build_partition: hand-checked block densities", "[regularity]") {
  WeightedGraph g(4);
  g.set_weight(0, 1, 0.8);
  g.set_weight(0, 2, 0.1);
  g.set_weight(0, 3, 0.2);
  g.set_weight(1, 2, 0.3);
  g.set_weight(1, 3, 0.4);
  g.set_weight(2, 3, 0.6);
  const VertexPartition p = build_partition(g, {{0, 1}, {2, 3}});
  CHECK(p.part_count() == 2);
  CHECK(p.vertex_count() == 4);
  CHECK_THAT(p.densities(0, 0), WithinRel(0.8, 1e-15));   // one inside pair
  CHECK_THAT(p.densities(1, 1), WithinRel(0.6, 1e-15));
  CHECK_THAT(p.densities(0, 1), WithinRel(0.25, 1e-15));  // mean of 4 cross
  CHECK(p.densities(1, 0) == p.densities(0, 1));

  // singleton parts carry density 0 on the diagonal
  const VertexPartition d = discrete_partition(g);
  CHECK(d.part_count() == 4);
  for (int i = 0; i < 4; ++i) CHECK(d.densities(i, i) == 0.0);
  CHECK(d.densities(0, 1) == 0.8);

  CHECK_THROWS_AS(build_partition(g, {{0, 1}, {2}}), std::domain_error);
  CHECK_THROWS_AS(build_partition(g, {{0, 1}, {2, 3, 3}}), std::domain_error);
  CHECK_THROWS_AS(build_partition(g, {{0, 1}, {2, 4}}), std::domain_error);
  CHECK_THROWS_AS(build_partition(g, {{0, 1, 2, 3}, {}}), std::domain_error);
}

TEST_CASE("stepping matrix averages ordered blocks", "[regularity]") {
  WeightedGraph g(4);
  g.set_weight(0, 1, 0.8);
  g.set_weight(0, 2, 0.1);
  g.set_weight(0, 3, 0.2);
  g.set_weight(1, 2, 0.3);
  g.set_weight(1, 3, 0.4);
  g.set_weight(2, 3, 0.6);
  const Eigen::MatrixXd s = stepping_matrix(g, {{0, 1}, {2, 3}});
  // within-block means include the zero diagonal: 2 * 0.8 / 4
  CHECK_THAT(s(0, 0), WithinRel(0.4, 1e-15));
  CHECK_THAT(s(1, 0), WithinRel(0.4, 1e-15));
  CHECK_THAT(s(2, 2), WithinRel(0.3, 1e-15));
  CHECK_THAT(s(0, 2), WithinRel(0.25, 1e-15));
  // stepping preserves the total mass
  CHECK_THAT(s.sum(), WithinRel(g.matrix().sum(), 1e-13));
}

TEST_CASE("discrete partition reproduces the triangle density bit-for-bit",
          "[regularity]") {
  CounterRng rng(2026, 41);
  for (int n : {5, 17, 33}) {
    const WeightedGraph g = testsupport::random_graph(n, rng);
    const VertexPartition p = discrete_partition(g);
    CHECK(reduced_density_error(g, p) == 0.0);  // exact, by construction
  }
}

TEST_CASE("cut_deviation is exact against the oracle for small n",
          "[regularity]") {
  CounterRng rng(2026, 42);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);  // up to 6
    Eigen::MatrixXd d(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(i, j) = rng.next_double() - 0.5;
    const CutDeviation dev = cut_deviation(d);
    CHECK(dev.exact);
    CHECK_THAT(dev.value, WithinAbs(testsupport::cut_deviation_oracle(d), 1e-10));
    CHECK_THAT(witness_value(d, dev), WithinAbs(dev.value, 1e-12));
    CHECK(dev.upper_bound == dev.value);
  }
}

TEST_CASE("cut_deviation heuristic: genuine witness below the spectral cap",
          "[regularity]") {
  CounterRng rng(2026, 43);
  const int n = 25;
  const WeightedGraph g = testsupport::random_graph(n, rng);
  std::vector<std::vector<int>> parts(1);
  for (int v = 0; v < n; ++v) parts[0].push_back(v);
  const Eigen::MatrixXd diff = g.matrix() - stepping_matrix(g, parts);
  const CutDeviation dev = cut_deviation(diff);
  CHECK(!dev.exact);
  CHECK(dev.value > 0.0);
  CHECK_THAT(witness_value(diff, dev), WithinAbs(dev.value, 1e-9));
  CHECK(dev.value <= dev.upper_bound + 1e-12);
}

TEST_CASE("weak_regular_partition satisfies its own contract", "[regularity]") {
  CounterRng rng(2026, 44);
  for (double eps : {0.3, 0.5}) {
    const WeightedGraph g = testsupport::random_graph(30, rng);
    const VertexPartition p = weak_regular_partition(g, eps);
    CHECK(p.vertex_count() == 30);
    CHECK(static_cast<double>(p.part_count()) <=
          std::pow(4.0, 1.0 / (eps * eps)));
    const Eigen::MatrixXd diff = g.matrix() - stepping_matrix(g, p.parts);
    CHECK(cut_deviation(diff).value <= eps * 900.0 * (1.0 + 1e-12));
    // counting lemma: the reduced triangle count is within 3 eps plus the
    // O(1/n) diagonal-convention slack
    CHECK(reduced_density_error(g, p) <= 3.0 * eps + 0.2);
  }
  CHECK_THROWS_AS(weak_regular_partition(WeightedGraph::constant(5, 0.5), 0.2),
                  std::domain_error);
  CHECK_THROWS_AS(weak_regular_partition(WeightedGraph::constant(5, 0.5), 1.0),
                  std::domain_error);
}

TEST_CASE("rounded_densities floors to the eps grid", "[regularity]") {
  WeightedGraph g(4);
  g.set_weight(0, 1, 0.57);
  g.set_weight(2, 3, 0.9999);
  g.set_weight(0, 2, 0.24);
  const VertexPartition p = build_partition(g, {{0, 1}, {2, 3}});
  const Eigen::MatrixXd r = rounded_densities(p, 0.25);
  CHECK(r(0, 0) == 0.5);
  CHECK(r(1, 1) == 0.75);
  CHECK(r(0, 1) == 0.0);  // cross mean (0.24 + 0 + 0 + 0)/4 < 0.25
  CHECK_THROWS_AS(rounded_densities(p, 0.0), std::domain_error);
  CHECK_THROWS_AS(rounded_densities(p, 1.0), std::domain_error);
}

TEST_CASE("partition_event_bound: blow-up identity and frozen exponent",
          "[regularity]") {
  // one part of five vertices, target density 1: the exponent is the cost of
  // forcing all C(5,2) pairs, -10 log 2 at p = 1/2
  WeightedGraph g(5);
  const VertexPartition p = build_partition(g, {{0, 1, 2, 3, 4}});
  Eigen::MatrixXd target(1, 1);
  target << 1.0;
  const PartitionEventBound b = partition_event_bound(p, target, 0.5, 5);
  CHECK_THAT(b.exponent, WithinRel(-10.0 * std::log(2.0), 1e-13));
  CHECK(b.identity_gap <= 1e-12);
  CHECK_THAT(b.blowup_triangle, WithinRel(triangle_density(
                                    WeightedGraph::constant(5, 1.0)), 1e-15));

  // random partitions: the union-bound exponent always matches the entropy of
  // the planted blow-up graph
  CounterRng rng(2026, 45);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 12 + static_cast<int>(rng.next_u64() % 9);
    const WeightedGraph h = testsupport::random_graph(n, rng);
    std::vector<std::vector<int>> parts(3);
    for (int v = 0; v < n; ++v)
      parts[static_cast<size_t>(v % 3)].push_back(v);
    const VertexPartition q = build_partition(h, parts);
    const PartitionEventBound rb =
        partition_event_bound(q, q.densities, 0.05, n);
    CHECK(rb.identity_gap <= 1e-9);
    CHECK(rb.exponent <= 0.0);
  }
}

TEST_CASE("partition_event_bound guards", "[regularity]") {
  WeightedGraph g(4);
  const VertexPartition p = build_partition(g, {{0, 1}, {2, 3}});
  Eigen::MatrixXd bad_shape(1, 1);
  bad_shape << 0.5;
  CHECK_THROWS_AS(partition_event_bound(p, bad_shape, 0.5, 4),
                  std::domain_error);
  Eigen::MatrixXd asym(2, 2);
  asym << 0.5, 0.2, 0.3, 0.5;
  CHECK_THROWS_AS(partition_event_bound(p, asym, 0.5, 4), std::domain_error);
  Eigen::MatrixXd range(2, 2);
  range << 0.5, 1.2, 1.2, 0.5;
  CHECK_THROWS_AS(partition_event_bound(p, range, 0.5, 4), std::domain_error);
  Eigen::MatrixXd ok(2, 2);
  ok << 0.5, 0.2, 0.2, 0.5;
  CHECK_THROWS_AS(partition_event_bound(p, ok, 0.5, 5), std::domain_error);
  CHECK_THROWS_AS(partition_event_bound(p, ok, 0.0, 4), std::domain_error);

  // the blow-up guard fires before any allocation
  VertexPartition huge;
  huge.parts.push_back({});
  for (int v = 0; v < 5000; ++v) huge.parts[0].push_back(v);
  huge.densities = ok.topLeftCorner(1, 1);
  CHECK_THROWS_AS(partition_event_bound(huge, huge.densities, 0.5, 5000),
                  resource_error);
}

TEST_CASE("tail_certificate wires the union bound against phi_lower",
          "[regularity]") {
  const UnionBoundReport ub = union_bound_log_R(50, 0.5, 24.0);
  const TailCertificate vac = tail_certificate(50, 0.5, 30.0, 24.0, 5.0);
  CHECK(vac.log_r == ub.log_r);
  CHECK(vac.epsilon == ub.epsilon);
  CHECK_THAT(vac.log_bound, WithinRel(ub.log_r - 5.0, 1e-15));
  CHECK(vac.vacuous);  // log R dwarfs a desk-scale phi_lower

  const TailCertificate tight =
      tail_certificate(50, 0.5, 30.0, 24.0, ub.log_r + 10.0);
  CHECK(!tight.vacuous);
  CHECK_THAT(tight.log_bound, WithinAbs(-10.0, 1e-9));

  CHECK_THROWS_AS(tail_certificate(50, 0.5, 20.0, 24.0, 5.0),
                  std::domain_error);
  CHECK_THROWS_AS(tail_certificate(50, 0.5, 30.0, 24.0, -1.0),
                  std::domain_error);
}

TEST_CASE("tail_certificate_symbolic: the exponent ratio reaches -1",
          "[regularity]") {
  // the schedule only crosses over around ln n ~ 7e13 (below that log R
  // still dwarfs phi), so evaluate comfortably past the turnover
  const SymbolicTailCertificate c = tail_certificate_symbolic(1e15, 1.0);
  CHECK_THAT(c.p, WithinRel(std::pow(1e15, -1.0 / 7.0), 1e-15));
  CHECK_THAT(c.eta, WithinRel(std::pow(1e15, -1.0 / 100.0), 1e-15));
  CHECK(c.eta < 1.0);
  CHECK(c.ln_log_r < c.ln_phi);
  CHECK_THAT(c.exponent_ratio, WithinAbs(-1.0, 1e-12));

  CHECK_THROWS_AS(tail_certificate_symbolic(0.5, 1.0), std::domain_error);
  // eta = (ln n)^{-1/100} still exceeds a tiny delta
  CHECK_THROWS_AS(tail_certificate_symbolic(1e13, 0.5), std::domain_error);
}
