#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <random>
#include <unordered_set>
#include <vector>

#include "graph_poincare/graph.hpp"
#include "graph_poincare/rng.hpp"
#include "graph_poincare/tree.hpp"

namespace graph_poincare {

/// Graph plus its canonical rooted spanning tree (the tree itself, for
/// tree-shaped families).
struct GeneratedTree {
  WeightedGraph graph;
  RootedTree tree;
};

/// Complete k-ary tree truncated at the given depth, with weights
/// mu(t) = alpha^{dist(t, root)} for 0 < alpha < 1/k. The infinite tree's
/// John constant is bounded by 1/(1 - k alpha); truncations approach it from
/// below, monotonically in depth.
inline GeneratedTree kary_tree(std::size_t k, std::size_t depth, double alpha) {
  detail::require(k >= 1, "kary_tree: k must satisfy k >= 1");
  detail::require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0 / static_cast<double>(k),
                  "kary_tree: alpha must lie in (0, 1/k)");
  // n = 1 + k + ... + k^depth
  std::size_t n = 1;
  std::size_t level = 1;
  for (std::size_t d = 0; d < depth; ++d) {
    detail::require(level <= (std::size_t{1} << 40) / k, "kary_tree: size overflow");
    level *= k;
    n += level;
    detail::require(n <= (std::size_t{1} << 26), "kary_tree: truncation too large");
  }

  std::vector<double> weights(n, 1.0);
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  std::vector<std::uint32_t> parent(n, kNoVertex);
  // Level-contiguous ids: the root is 0, each level follows its parent level.
  std::size_t level_start = 0;
  std::size_t level_size = 1;
  std::size_t next_id = 1;
  for (std::size_t d = 1; d <= depth; ++d) {
    const double w = std::pow(alpha, static_cast<double>(d));
    for (std::size_t i = 0; i < level_size; ++i) {
      const auto p = static_cast<std::uint32_t>(level_start + i);
      for (std::size_t c = 0; c < k; ++c) {
        const auto child = static_cast<std::uint32_t>(next_id++);
        weights[child] = w;
        parent[child] = p;
        edges.emplace_back(p, child);
      }
    }
    level_start += level_size;
    level_size *= k;
  }

  WeightedGraph graph(std::move(weights), edges);
  RootedTree tree(graph, 0, std::move(parent));
  return {std::move(graph), std::move(tree)};
}

/// Truncation of the weighted path on the naturals n >= 2 with
/// mu(n) = 1/(n ln(n)^gamma), gamma > 1: finite total measure, but the shadow
/// ratios mu(S_n)/mu(n) grow without bound as the truncation extends. Internal
/// ids are 0-based; labels keeps the paper-style vertex numbers.
struct LogPathResult {
  WeightedGraph graph;
  RootedTree tree;
  std::vector<std::uint32_t> labels;  // labels[id] = id + 2
};

inline LogPathResult log_path(std::size_t n_max, double gamma) {
  detail::require(n_max >= 3, "log_path: N must satisfy N >= 3");
  detail::require(std::isfinite(gamma) && gamma > 1.0, "log_path: gamma must satisfy gamma > 1");
  const std::size_t n = n_max - 1;  // labels 2..N
  std::vector<double> weights(n);
  std::vector<std::uint32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double label = static_cast<double>(i + 2);
    labels[i] = static_cast<std::uint32_t>(i + 2);
    weights[i] = 1.0 / (label * std::pow(std::log(label), gamma));
  }
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  std::vector<std::uint32_t> parent(n, kNoVertex);
  for (std::uint32_t i = 1; i < n; ++i) {
    edges.emplace_back(i - 1, i);
    parent[i] = i - 1;
  }
  WeightedGraph graph(std::move(weights), edges);
  RootedTree tree(graph, 0, std::move(parent));
  return {std::move(graph), std::move(tree), std::move(labels)};
}

/// Vertex weight law for random graphs.
struct WeightLaw {
  enum class Kind { uniform, exponential_of_depth };
  Kind kind = Kind::uniform;
  double a = 1.0;  // uniform: lower bound; exponential: base alpha
  double b = 1.0;  // uniform: upper bound

  static WeightLaw uniform(double a, double b) {
    detail::require(std::isfinite(a) && std::isfinite(b) && 0.0 < a && a <= b,
                    "WeightLaw::uniform: need 0 < a <= b");
    return {Kind::uniform, a, b};
  }
  static WeightLaw exponential_of_depth(double alpha) {
    detail::require(std::isfinite(alpha) && alpha > 0.0,
                    "WeightLaw::exponential_of_depth: alpha must be positive");
    return {Kind::exponential_of_depth, alpha, alpha};
  }
};

/// Erdos-Renyi style random graph forced connected by seeding it with a random
/// spanning tree. Deterministic per seed: tree links, then extra edges in
/// lexicographic pair order, then weights.
inline WeightedGraph random_connected(std::size_t n, double edge_probability,
                                      const WeightLaw& law, std::uint64_t seed) {
  detail::require(n >= 1, "random_connected: n must satisfy n >= 1");
  detail::require(edge_probability >= 0.0 && edge_probability <= 1.0,
                  "random_connected: edge probability must lie in [0, 1]");
  std::mt19937_64 rng(seed);

  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> present;
  auto key = [n](std::uint32_t u, std::uint32_t v) {
    return static_cast<std::uint64_t>(std::min(u, v)) * n + std::max(u, v);
  };
  for (std::uint32_t v = 1; v < n; ++v) {
    const auto u = static_cast<std::uint32_t>(uniform_index(rng, v));
    edges.emplace_back(u, v);
    present.insert(key(u, v));
  }
  if (edge_probability > 0.0) {
    for (std::uint32_t u = 0; u + 1 < n; ++u) {
      for (std::uint32_t v = u + 1; v < n; ++v) {
        const double draw = uniform01(rng);
        if (draw < edge_probability && !present.contains(key(u, v))) {
          edges.emplace_back(u, v);
          present.insert(key(u, v));
        }
      }
    }
  }

  std::vector<double> weights(n, 1.0);
  if (law.kind == WeightLaw::Kind::uniform) {
    for (double& w : weights) w = uniform_real(rng, law.a, law.b);
  } else {
    // BFS depth from vertex 0 in the final graph.
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (const auto& [u, v] : edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    std::vector<std::uint32_t> depth(n, 0);
    std::vector<char> seen(n, 0);
    seen[0] = 1;
    std::deque<std::uint32_t> queue{0};
    while (!queue.empty()) {
      const std::uint32_t v = queue.front();
      queue.pop_front();
      for (std::uint32_t w : adj[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          depth[w] = depth[v] + 1;
          queue.push_back(w);
        }
      }
    }
    for (std::uint32_t v = 0; v < n; ++v) {
      weights[v] = std::pow(law.a, static_cast<double>(depth[v]));
    }
  }
  return WeightedGraph(std::move(weights), edges);
}

/// nx-by-ny lattice with 4-neighbor adjacency and unit weights.
inline WeightedGraph grid(std::size_t nx, std::size_t ny) {
  detail::require(nx >= 1 && ny >= 1, "grid: dimensions must be positive");
  const std::size_t n = nx * ny;
  std::vector<Edge> edges;
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t x = 0; x < nx; ++x) {
      const auto id = static_cast<std::uint32_t>(y * nx + x);
      if (x + 1 < nx) edges.emplace_back(id, id + 1);
      if (y + 1 < ny) edges.emplace_back(id, static_cast<std::uint32_t>(id + nx));
    }
  }
  return WeightedGraph(std::vector<double>(n, 1.0), edges);
}

/// Same lattice with supplied weights.
inline WeightedGraph grid(std::size_t nx, std::size_t ny, std::vector<double> weights) {
  detail::require(nx >= 1 && ny >= 1, "grid: dimensions must be positive");
  detail::require(weights.size() == nx * ny, "grid: weight array size mismatch");
  std::vector<Edge> edges;
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t x = 0; x < nx; ++x) {
      const auto id = static_cast<std::uint32_t>(y * nx + x);
      if (x + 1 < nx) edges.emplace_back(id, id + 1);
      if (y + 1 < ny) edges.emplace_back(id, static_cast<std::uint32_t>(id + nx));
    }
  }
  return WeightedGraph(std::move(weights), edges);
}

/// Families of random test functions. Spikes at deep leaves stress the weak
/// (1,1) bound hardest; subtree indicators align with the shadow structure.
enum class TestFunctionFamily { signed_gaussian, sparse_spikes, subtree_indicator };

inline VertexFunction random_test_function(const WeightedGraph& g, const RootedTree& tree,
                                           TestFunctionFamily family, std::mt19937_64& rng) {
  const std::size_t n = g.vertex_count();
  VertexFunction f(n, 0.0);
  switch (family) {
    case TestFunctionFamily::signed_gaussian:
      for (double& v : f) v = normal(rng);
      break;
    case TestFunctionFamily::sparse_spikes: {
      const std::size_t spikes = 1 + uniform_index(rng, std::max<std::size_t>(1, n / 10));
      for (std::size_t i = 0; i < spikes; ++i) {
        const auto v = static_cast<std::uint32_t>(uniform_index(rng, n));
        const double magnitude = uniform_real(rng, 1.0, 10.0);
        f[v] = uniform01(rng) < 0.5 ? -magnitude : magnitude;
      }
      break;
    }
    case TestFunctionFamily::subtree_indicator: {
      const auto top = static_cast<std::uint32_t>(uniform_index(rng, n));
      std::vector<std::uint32_t> stack{top};
      while (!stack.empty()) {
        const std::uint32_t v = stack.back();
        stack.pop_back();
        f[v] = 1.0;
        for (std::uint32_t c : tree.children(v)) stack.push_back(c);
      }
      break;
    }
  }
  return f;
}

/// Rotates through the three families by trial index.
inline VertexFunction random_test_function(const WeightedGraph& g, const RootedTree& tree,
                                           std::size_t trial, std::mt19937_64& rng) {
  const auto family = static_cast<TestFunctionFamily>(trial % 3);
  return random_test_function(g, tree, family, rng);
}

}  // namespace graph_poincare
