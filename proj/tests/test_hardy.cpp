#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "test_support.hpp"

using namespace graph_poincare;
using test_support::path_graph;
using test_support::random_spanning_tree;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Fixture {
  WeightedGraph graph;
  RootedTree tree;
  ShadowSummary summary;
};

Fixture edge_fixture() {
  WeightedGraph g({1.0, 1.0}, {{0, 1}});
  RootedTree tree = build_spanning_tree(g, 0, SpanningStrategy::breadth_first);
  ShadowSummary summary = shadow_summary(g, tree);
  return {std::move(g), std::move(tree), std::move(summary)};
}

}  // namespace

TEST_CASE("hardy operator on hand-checked examples", "[hardy]") {
  SECTION("constants are fixed points, up to the absolute value") {
    const auto [g, tree] = kary_tree(2, 3, 0.3);
    const ShadowSummary summary = shadow_summary(g, tree);
    const VertexFunction tf = apply_hardy(VertexFunction(g.vertex_count(), -4.0), g, tree, summary);
    for (double v : tf) CHECK_THAT(v, WithinRel(4.0, 1e-12));
  }

  SECTION("single edge") {
    const auto fx = edge_fixture();
    const VertexFunction tf = apply_hardy({2.0, 4.0}, fx.graph, fx.tree, fx.summary);
    CHECK_THAT(tf[0], WithinRel(3.0, 1e-15));
    CHECK_THAT(tf[1], WithinRel(4.0, 1e-15));
  }

  SECTION("unit spike at a leaf spreads as 1/mu(S_t) along the root path") {
    const WeightedGraph g = path_graph(4);
    const RootedTree tree = build_spanning_tree(g, 0, SpanningStrategy::breadth_first);
    const ShadowSummary summary = shadow_summary(g, tree);
    VertexFunction f(4, 0.0);
    f[3] = 1.0;
    const VertexFunction tf = apply_hardy(f, g, tree, summary);
    for (std::uint32_t t = 0; t < 4; ++t) {
      CHECK_THAT(tf[t], WithinRel(1.0 / summary.shadow_measure[t], 1e-15));
    }
  }

  SECTION("dimension mismatch is rejected") {
    const auto fx = edge_fixture();
    CHECK_THROWS_AS(apply_hardy({1.0}, fx.graph, fx.tree, fx.summary), std::invalid_argument);
  }
}

TEST_CASE("hardy operator structural properties", "[hardy]") {
  std::mt19937_64 rng(211);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 60);
    const WeightedGraph g = random_connected(n, 0.15, WeightLaw::uniform(0.3, 3.0), rng());
    const RootedTree tree = random_spanning_tree(
        g, static_cast<std::uint32_t>(uniform_index(rng, n)), rng);
    const ShadowSummary summary = shadow_summary(g, tree);
    VertexFunction f(n), h(n);
    for (double& v : f) v = normal(rng);
    for (double& v : h) v = normal(rng);

    const VertexFunction tf = apply_hardy(f, g, tree, summary);
    const VertexFunction th = apply_hardy(h, g, tree, summary);

    // T depends on f only through |f|.
    VertexFunction abs_f(f);
    for (double& v : abs_f) v = std::abs(v);
    const VertexFunction t_abs = apply_hardy(abs_f, g, tree, summary);
    for (std::size_t t = 0; t < n; ++t) CHECK(t_abs[t] == tf[t]);

    // Monotone on nonnegative inputs: |f| <= |f| + |h| pointwise.
    VertexFunction dominated(n);
    for (std::size_t t = 0; t < n; ++t) dominated[t] = std::abs(f[t]) + std::abs(h[t]);
    const VertexFunction t_dom = apply_hardy(dominated, g, tree, summary);
    for (std::size_t t = 0; t < n; ++t) CHECK(t_abs[t] <= t_dom[t] + 1e-12);

    // Sublinear: T(f + h) <= Tf + Th pointwise.
    VertexFunction sum(n);
    for (std::size_t t = 0; t < n; ++t) sum[t] = f[t] + h[t];
    const VertexFunction t_sum = apply_hardy(sum, g, tree, summary);
    for (std::size_t t = 0; t < n; ++t) {
      CHECK(t_sum[t] <= tf[t] + th[t] + 1e-12 * (tf[t] + th[t] + 1.0));
    }

    // At the root T averages the whole graph.
    CHECK_THAT(tf[tree.root()], WithinRel(lp_norm(f, 1.0, g) / g.total_measure(), 1e-12));
  }
}

TEST_CASE("hardy operator agrees with brute-force descendant sums", "[hardy]") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 49);
    const WeightedGraph g = random_connected(n, 0.2, WeightLaw::uniform(0.1, 4.0), rng());
    const RootedTree tree = random_spanning_tree(
        g, static_cast<std::uint32_t>(uniform_index(rng, n)), rng);
    const ShadowSummary summary = shadow_summary(g, tree);
    VertexFunction f(n);
    for (double& v : f) v = normal(rng) * 5.0;

    const VertexFunction fast = apply_hardy(f, g, tree, summary);
    const VertexFunction slow = test_support::brute_force_hardy(f, g, tree);
    const double scale = test_support::max_abs(slow) + 1e-30;
    for (std::size_t t = 0; t < n; ++t) {
      CHECK(std::abs(fast[t] - slow[t]) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("distribution measure level sets", "[hardy]") {
  const WeightedGraph g({1.0, 1.0}, {{0, 1}});
  CHECK(distribution_measure({0.5, 1.0}, 0.6, g) == 1.0);
  CHECK(distribution_measure({0.5, 1.0}, 1.0, g) == 0.0);   // strict inequality
  CHECK(distribution_measure({0.5, 1.0}, 1e-9, g) == 2.0);
  CHECK_THROWS_AS(distribution_measure({1.0, 1.0}, 0.0, g), std::invalid_argument);
  CHECK_THROWS_AS(distribution_measure({1.0, 1.0}, -1.0, g), std::invalid_argument);
}

TEST_CASE("strong (infinity,infinity) bound", "[hardy]") {
  const auto fx = edge_fixture();
  SECTION("equality for constants") {
    const auto report = verify_strong_infinity(fx.graph, fx.tree, fx.summary, {1.0, 1.0});
    CHECK_THAT(report.measured, WithinRel(1.0, 1e-12));
    CHECK_THAT(report.theoretical, WithinRel(1.0, 1e-12));
    CHECK(report.passed);
  }
  SECTION("zero function") {
    const auto report = verify_strong_infinity(fx.graph, fx.tree, fx.summary, {0.0, 0.0});
    CHECK(report.measured == 0.0);
    CHECK(report.passed);
  }
  SECTION("random trials never violate the bound") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t n = 2 + uniform_index(rng, 199);
      const WeightedGraph g = random_connected(n, 0.1, WeightLaw::uniform(0.2, 5.0), rng());
      const RootedTree tree = random_spanning_tree(
          g, static_cast<std::uint32_t>(uniform_index(rng, n)), rng);
      const ShadowSummary summary = shadow_summary(g, tree);
      const VertexFunction f = random_test_function(g, tree, trial, rng);
      const auto report = verify_strong_infinity(g, tree, summary, f);
      CHECK(report.passed);
      CHECK(report.margin >= -1e-12 * (report.theoretical + 1.0));
    }
  }
}

TEST_CASE("weak (1,1) bound is strict", "[hardy]") {
  const auto fx = edge_fixture();
  SECTION("worked single-edge example") {
    const auto reports = verify_weak_11(fx.graph, fx.tree, fx.summary, {0.0, 1.0}, {0.6});
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].measured == 1.0);
    CHECK_THAT(reports[0].theoretical, WithinRel(1.0 / 0.6, 1e-15));
    CHECK(reports[0].passed);
  }
  SECTION("large lambda empties the level set") {
    const auto reports = verify_weak_11(fx.graph, fx.tree, fx.summary, {0.0, 1.0}, {5.0});
    CHECK(reports[0].measured == 0.0);
    CHECK(reports[0].passed);
  }
  SECTION("the zero function is rejected") {
    CHECK_THROWS_AS(verify_weak_11(fx.graph, fx.tree, fx.summary, {0.0, 0.0}, {1.0}),
                    std::invalid_argument);
  }
  SECTION("random trials over a log-spaced grid") {
    std::mt19937_64 rng(7);
    std::vector<double> grid;
    for (int j = 0; j < 10; ++j) grid.push_back(0.1 * std::pow(10.0, j / 4.5));
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 2 + uniform_index(rng, 199);
      const WeightedGraph g = random_connected(n, 0.1, WeightLaw::uniform(0.2, 5.0), rng());
      const RootedTree tree = random_spanning_tree(
          g, static_cast<std::uint32_t>(uniform_index(rng, n)), rng);
      const ShadowSummary summary = shadow_summary(g, tree);
      VertexFunction f = random_test_function(g, tree, trial, rng);
      if (lp_norm(f, kInf, g) == 0.0) f[0] = 1.0;
      for (const auto& report : verify_weak_11(g, tree, summary, f, grid)) {
        CHECK(report.passed);
      }
    }
  }
}

TEST_CASE("strong (q,q) bound", "[hardy]") {
  const auto fx = edge_fixture();
  SECTION("the q = 2 constant is 2 sqrt 2") {
    const auto report = verify_strong_qq(fx.graph, fx.tree, fx.summary, {1.0, 0.0}, 2.0);
    const double factor = report.theoretical / lp_norm({1.0, 0.0}, 2.0, fx.graph);
    CHECK_THAT(factor, WithinAbs(2.0 * std::sqrt(2.0), 1e-12));
    CHECK_THAT(factor, WithinAbs(2.8284, 5e-5));
  }
  SECTION("constants pass with slack") {
    const auto report = verify_strong_qq(fx.graph, fx.tree, fx.summary, {1.0, 1.0}, 2.0);
    CHECK_THAT(report.measured, WithinRel(std::sqrt(2.0), 1e-12));
    CHECK(report.passed);
  }
  SECTION("q is validated") {
    CHECK_THROWS_AS(verify_strong_qq(fx.graph, fx.tree, fx.summary, {1.0, 0.0}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(verify_strong_qq(fx.graph, fx.tree, fx.summary, {1.0, 0.0}, kInf),
                    std::invalid_argument);
  }
  SECTION("random trials for several q") {
    std::mt19937_64 rng(5150);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 2 + uniform_index(rng, 199);
      const WeightedGraph g = random_connected(n, 0.1, WeightLaw::uniform(0.2, 5.0), rng());
      const RootedTree tree = random_spanning_tree(
          g, static_cast<std::uint32_t>(uniform_index(rng, n)), rng);
      const ShadowSummary summary = shadow_summary(g, tree);
      const VertexFunction f = random_test_function(g, tree, trial, rng);
      for (const double q : {1.5, 2.0, 3.0, 10.0}) {
        const auto report = verify_strong_qq(g, tree, summary, f, q);
        CHECK(report.passed);
        CHECK(report.margin >= 0.0);
      }
    }
  }
}
