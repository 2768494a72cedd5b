#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "test_support.hpp"

using namespace graph_poincare;
using test_support::cycle_graph;
using test_support::path_graph;
using test_support::random_spanning_tree;
using Catch::Matchers::WithinRel;

TEST_CASE("breadth-first spanning trees are deterministic", "[tree]") {
  const WeightedGraph triangle = cycle_graph(3);
  const RootedTree tree = build_spanning_tree(triangle, 0, SpanningStrategy::breadth_first);
  CHECK(tree.root() == 0);
  CHECK(tree.parent(1) == 0);
  CHECK(tree.parent(2) == 0);

  const WeightedGraph edge({1.0, 1.0}, {{0, 1}});
  CHECK(build_spanning_tree(edge, 0, SpanningStrategy::breadth_first).parent(1) == 0);

  CHECK_THROWS_AS(build_spanning_tree(edge, 5, SpanningStrategy::breadth_first),
                  std::invalid_argument);
}

TEST_CASE("a tree-shaped graph has itself as the unique spanning tree", "[tree]") {
  const WeightedGraph g({1.0, 1.0, 1.0, 1.0}, {{0, 1}, {1, 2}, {1, 3}});
  for (const auto strategy : {SpanningStrategy::breadth_first, SpanningStrategy::depth_first}) {
    const RootedTree tree = build_spanning_tree(g, 1, strategy);
    CHECK(tree.edges() == std::vector<Edge>{{0, 1}, {1, 2}, {1, 3}});
  }
}

TEST_CASE("rooted tree construction validates parent links", "[tree]") {
  const WeightedGraph path3 = path_graph(3);
  CHECK_THROWS_AS(RootedTree(path3, 0, {kNoVertex, 0}), std::invalid_argument);        // size
  CHECK_THROWS_AS(RootedTree(path3, 0, {kNoVertex, 0, 0}), std::invalid_argument);     // not an edge
  CHECK_THROWS_AS(RootedTree(path3, 0, {1, 0, 1}), std::invalid_argument);             // root parented
  CHECK_THROWS_AS(RootedTree(path3, 0, {kNoVertex, 2, 1}), std::invalid_argument);     // cycle

  const RootedTree tree(path3, 1, {1, kNoVertex, 1});
  CHECK(tree.depth(0) == 1);
  CHECK(tree.children(1) == std::vector<std::uint32_t>{0, 2});
}

TEST_CASE("descendant queries follow the tree order", "[tree]") {
  const WeightedGraph path3 = path_graph(3);
  const RootedTree tree = build_spanning_tree(path3, 0, SpanningStrategy::breadth_first);
  CHECK(is_descendant(2, 2, tree));              // reflexive
  CHECK(is_descendant(2, 0, tree));              // everything sits over the root
  CHECK(is_descendant(1, 0, tree));
  CHECK_FALSE(is_descendant(0, 2, tree));        // order direction
  CHECK_THROWS_AS(is_descendant(0, 9, tree), std::invalid_argument);
}

TEST_CASE("descendant queries agree with parent walking on random trees", "[tree]") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 199);
    const WeightedGraph g = random_connected(n, 0.05, WeightLaw::uniform(0.5, 2.0), rng());
    const auto root = static_cast<std::uint32_t>(uniform_index(rng, n));
    const RootedTree tree = random_spanning_tree(g, root, rng);
    for (int probe = 0; probe < 200; ++probe) {
      const auto s = static_cast<std::uint32_t>(uniform_index(rng, n));
      const auto t = static_cast<std::uint32_t>(uniform_index(rng, n));
      CHECK(tree.is_descendant(s, t) == test_support::on_root_path(tree, s, t));
    }
  }
}

TEST_CASE("shadow summary on small examples", "[tree]") {
  SECTION("single vertex") {
    const WeightedGraph g({2.5}, {});
    const RootedTree tree(g, 0, {kNoVertex});
    const ShadowSummary s = shadow_summary(g, tree);
    CHECK_THAT(s.shadow_measure[0], WithinRel(2.5, 1e-15));
    CHECK(s.john_constant == 1.0);
    CHECK(s.tree_degree_bound == 0);
  }

  SECTION("binary tree of depth 2 with alpha = 1/4") {
    const auto [g, tree] = kary_tree(2, 2, 0.25);
    const ShadowSummary s = shadow_summary(g, tree);
    CHECK_THAT(g.total_measure(), WithinRel(1.75, 1e-12));
    CHECK_THAT(s.john_constant, WithinRel(1.75, 1e-12));
    CHECK_THAT(s.ratio[0], WithinRel(1.75, 1e-12));
    CHECK_THAT(s.ratio[1], WithinRel(1.5, 1e-12));     // child of the root
    CHECK_THAT(s.ratio[3], WithinRel(1.0, 1e-12));     // leaf
    // Below the closed-form bound for the infinite tree.
    CHECK(s.john_constant <= 1.0 / (1.0 - 2 * 0.25) + 1e-12);
  }

  SECTION("unit path rooted at an endpoint") {
    const WeightedGraph g = path_graph(3);
    const ShadowSummary s =
        shadow_summary(g, build_spanning_tree(g, 0, SpanningStrategy::breadth_first));
    CHECK_THAT(s.john_constant, WithinRel(3.0, 1e-15));
    CHECK(s.tree_degree_bound == 2);
  }
}

TEST_CASE("shadow recurrence is exact and bounded by the trivial constant", "[tree]") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 120);
    const WeightedGraph g = random_connected(n, 0.1, WeightLaw::uniform(0.2, 5.0), rng());
    const auto root = static_cast<std::uint32_t>(uniform_index(rng, n));
    const RootedTree tree = random_spanning_tree(g, root, rng);
    const ShadowSummary s = shadow_summary(g, tree);

    CHECK_THAT(s.shadow_measure[root], WithinRel(g.total_measure(), 1e-12));
    for (std::uint32_t t = 0; t < n; ++t) {
      double expected = g.weight(t);
      for (std::uint32_t c : tree.children(t)) expected += s.shadow_measure[c];
      CHECK(std::abs(s.shadow_measure[t] - expected) <= 1e-12 * g.total_measure());
      CHECK(s.shadow_measure[t] >= g.weight(t) - 1e-12 * g.total_measure());
    }
    CHECK(s.john_constant >= 1.0);

    double min_weight = g.weight(0);
    for (std::uint32_t t = 1; t < n; ++t) min_weight = std::min(min_weight, g.weight(t));
    CHECK(s.john_constant <= g.total_measure() / min_weight * (1.0 + 1e-12));
  }
}

TEST_CASE("antichain shadows cover at most the whole measure", "[tree]") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + uniform_index(rng, 100);
    const WeightedGraph g = random_connected(n, 0.08, WeightLaw::uniform(0.5, 2.0), rng());
    const RootedTree tree = random_spanning_tree(g, 0, rng);
    const ShadowSummary s = shadow_summary(g, tree);

    // Greedily pick pairwise non-nested vertices.
    std::vector<std::uint32_t> antichain;
    std::vector<std::uint32_t> candidates(n);
    for (std::uint32_t v = 0; v < n; ++v) candidates[v] = v;
    for (std::size_t i = candidates.size(); i > 1; --i) {
      std::swap(candidates[i - 1], candidates[uniform_index(rng, i)]);
    }
    for (std::uint32_t v : candidates) {
      bool comparable = false;
      for (std::uint32_t u : antichain) {
        if (shadow_disjointness_check(tree, u, v) == ShadowRelation::nested) {
          comparable = true;
          break;
        }
      }
      if (!comparable) antichain.push_back(v);
    }
    double covered = 0.0;
    for (std::uint32_t v : antichain) covered += s.shadow_measure[v];
    CHECK(covered <= g.total_measure() * (1.0 + 1e-12));
  }
}

TEST_CASE("shadow nesting relation", "[tree]") {
  const auto [g, tree] = kary_tree(2, 2, 0.25);
  CHECK(shadow_disjointness_check(tree, 3, 3) == ShadowRelation::nested);
  CHECK(shadow_disjointness_check(tree, 0, 5) == ShadowRelation::nested);   // root vs anything
  CHECK(shadow_disjointness_check(tree, 1, 2) == ShadowRelation::disjoint); // siblings
  CHECK(shadow_disjointness_check(tree, 3, 2) == ShadowRelation::disjoint);
  CHECK_THROWS_AS(shadow_disjointness_check(tree, 0, 99), std::invalid_argument);
}

TEST_CASE("spanning tree enumeration matches Kirchhoff counts", "[tree]") {
  const WeightedGraph triangle = cycle_graph(3);
  std::size_t count = 0;
  for_each_spanning_tree(triangle, [&count](const std::vector<Edge>&) { ++count; });
  CHECK(count == 3);
  CHECK(static_cast<std::size_t>(count_spanning_trees(triangle) + 0.5L) == 3);

  const WeightedGraph square = cycle_graph(4);
  count = 0;
  for_each_spanning_tree(square, [&count](const std::vector<Edge>&) { ++count; });
  CHECK(count == 4);

  // Complete graph on 4 vertices: 4^2 = 16 trees.
  const WeightedGraph k4({1, 1, 1, 1}, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  std::set<std::vector<Edge>> seen;
  for_each_spanning_tree(k4, [&seen](const std::vector<Edge>& edges) { seen.insert(edges); });
  CHECK(seen.size() == 16);
  CHECK(static_cast<std::size_t>(count_spanning_trees(k4) + 0.5L) == 16);
}

TEST_CASE("exhaustive tree search is optimal", "[tree]") {
  SECTION("unique tree on a tree-shaped graph") {
    const WeightedGraph g({1.0, 1.0, 1.0}, {{0, 1}, {1, 2}});
    const auto result = optimize_tree(g, 100, 0, TreeSearchMode::exhaustive);
    CHECK(result.tree.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
    CHECK_THAT(result.summary.john_constant, WithinRel(3.0, 1e-15));
  }

  SECTION("unit path: every root gives c = 3") {
    const WeightedGraph g = path_graph(3);
    const auto result = optimize_tree(g, 100, 0, TreeSearchMode::exhaustive);
    CHECK_THAT(result.summary.john_constant, WithinRel(3.0, 1e-15));
  }

  SECTION("unit 3-cycle: best c = 3 with M = 2") {
    const WeightedGraph g = cycle_graph(3);
    const auto result = optimize_tree(g, 100, 0, TreeSearchMode::exhaustive);
    CHECK_THAT(result.summary.john_constant, WithinRel(3.0, 1e-15));
    CHECK(result.summary.tree_degree_bound == 2);
  }

  SECTION("result is at most every enumerated tree-root pair") {
    std::mt19937_64 rng(13);
    const WeightedGraph g = random_connected(6, 0.4, WeightLaw::uniform(0.5, 3.0), 77);
    const auto result = optimize_tree(g, 100, 0, TreeSearchMode::exhaustive);
    for_each_spanning_tree(g, [&](const std::vector<Edge>& edges) {
      for (std::uint32_t root = 0; root < g.vertex_count(); ++root) {
        const RootedTree tree(g, root,
                              detail::parents_from_edges(g.vertex_count(), edges, root));
        CHECK(result.summary.john_constant <=
              shadow_summary(g, tree).john_constant * (1.0 + 1e-12));
      }
    });
  }

  SECTION("cap on enumeration size") {
    const WeightedGraph g = cycle_graph(5);
    CHECK_THROWS_AS(optimize_tree(g, 100, 0, TreeSearchMode::exhaustive, 4),
                    std::invalid_argument);
  }

  SECTION("budget must be positive") {
    const WeightedGraph g = cycle_graph(3);
    CHECK_THROWS_AS(optimize_tree(g, 0, 0, TreeSearchMode::exhaustive), std::invalid_argument);
  }
}

TEST_CASE("greedy search never loses to its starting point", "[tree]") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + uniform_index(rng, 20);
    const WeightedGraph g = random_connected(n, 0.3, WeightLaw::uniform(0.2, 4.0), rng());
    double best_bfs = std::numeric_limits<double>::infinity();
    for (std::uint32_t root = 0; root < n; ++root) {
      best_bfs = std::min(best_bfs,
                          shadow_summary(g, build_spanning_tree(
                                                g, root, SpanningStrategy::breadth_first))
                              .john_constant);
    }
    const auto result = optimize_tree(g, 500, rng(), TreeSearchMode::greedy_local);
    CHECK(result.summary.john_constant <= best_bfs * (1.0 + 1e-12));
  }
}

TEST_CASE("greedy matches the exhaustive optimum on small graphs", "[tree]") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 4 + uniform_index(rng, 4);
    const WeightedGraph g = random_connected(n, 0.4, WeightLaw::uniform(0.5, 2.0), rng());
    const auto exact = optimize_tree(g, 1, 0, TreeSearchMode::exhaustive);
    const auto greedy = optimize_tree(g, 5000, 11, TreeSearchMode::greedy_local);
    CHECK(greedy.summary.john_constant >= exact.summary.john_constant * (1.0 - 1e-12));
  }
}
