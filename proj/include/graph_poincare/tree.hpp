#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graph_poincare/graph.hpp"
#include "graph_poincare/rng.hpp"

namespace graph_poincare {

enum class SpanningStrategy { breadth_first, depth_first };

/// Rooted spanning tree of a WeightedGraph. Stores parent links, children
/// lists (ascending), a topological order in which every parent precedes its
/// children, and preorder intervals for O(1) descendant queries. Immutable
/// after construction.
///
/// The induced partial order: s >= t iff the unique tree path from s to the
/// root contains t. The shadow S_t is the set of such s.
class RootedTree {
 public:
  /// Builds from explicit parent links; parent[root] must be kNoVertex.
  /// Validates that every link is a graph edge and that the links span the
  /// whole vertex set without cycles.
  RootedTree(const WeightedGraph& g, std::uint32_t root, std::vector<std::uint32_t> parent)
      : root_(root), parent_(std::move(parent)) {
    const std::size_t n = g.vertex_count();
    detail::require(root_ < n, "RootedTree: root out of range");
    detail::require(parent_.size() == n, "RootedTree: parent array size mismatch");
    detail::require(parent_[root_] == kNoVertex, "RootedTree: root must have no parent");
    children_.assign(n, {});
    for (std::uint32_t v = 0; v < n; ++v) {
      if (v == root_) continue;
      const std::uint32_t p = parent_[v];
      detail::require(p < n, "RootedTree: parent of vertex " + std::to_string(v) + " out of range");
      detail::require(g.has_edge(v, p),
                      "RootedTree: link " + std::to_string(v) + "-" + std::to_string(p) +
                          " is not a graph edge");
      children_[p].push_back(v);  // ascending since v iterates ascending
    }

    // BFS over children both checks that every vertex reaches the root and
    // yields a parent-before-children order.
    topo_order_.reserve(n);
    topo_order_.push_back(root_);
    depth_.assign(n, 0);
    for (std::size_t head = 0; head < topo_order_.size(); ++head) {
      const std::uint32_t v = topo_order_[head];
      for (std::uint32_t c : children_[v]) {
        depth_[c] = depth_[v] + 1;
        topo_order_.push_back(c);
      }
    }
    detail::require(topo_order_.size() == n,
                    "RootedTree: parent links do not span the graph (cycle or unreachable vertex)");

    // Iterative preorder for descendant intervals; recursion would overflow on
    // deep paths (n up to 1e6).
    tin_.assign(n, 0);
    subtree_size_.assign(n, 1);
    std::vector<std::uint32_t> stack{root_};
    std::uint32_t clock = 0;
    while (!stack.empty()) {
      const std::uint32_t v = stack.back();
      stack.pop_back();
      tin_[v] = clock++;
      const auto& cs = children_[v];
      for (auto it = cs.rbegin(); it != cs.rend(); ++it) stack.push_back(*it);
    }
    for (auto it = topo_order_.rbegin(); it != topo_order_.rend(); ++it) {
      if (*it != root_) subtree_size_[parent_[*it]] += subtree_size_[*it];
    }
  }

  std::uint32_t root() const { return root_; }
  std::size_t vertex_count() const { return parent_.size(); }

  /// Parent id, or kNoVertex for the root.
  std::uint32_t parent(std::uint32_t v) const {
    detail::require(v < parent_.size(), "RootedTree::parent: vertex out of range");
    return parent_[v];
  }

  const std::vector<std::uint32_t>& children(std::uint32_t v) const {
    detail::require(v < children_.size(), "RootedTree::children: vertex out of range");
    return children_[v];
  }

  /// Vertex order in which every parent precedes its children.
  const std::vector<std::uint32_t>& topo_order() const { return topo_order_; }

  std::uint32_t depth(std::uint32_t v) const {
    detail::require(v < depth_.size(), "RootedTree::depth: vertex out of range");
    return depth_[v];
  }

  /// True iff s >= t in the tree order (reflexive).
  bool is_descendant(std::uint32_t s, std::uint32_t t) const {
    detail::require(s < parent_.size() && t < parent_.size(),
                    "RootedTree::is_descendant: vertex out of range");
    return tin_[t] <= tin_[s] && tin_[s] < tin_[t] + subtree_size_[t];
  }

  /// Degree within the tree edge set (children plus the parent edge).
  std::size_t degree(std::uint32_t v) const {
    detail::require(v < children_.size(), "RootedTree::degree: vertex out of range");
    return children_[v].size() + (v == root_ ? 0 : 1);
  }

  std::size_t max_degree() const {
    std::size_t m = 0;
    for (std::uint32_t v = 0; v < children_.size(); ++v) m = std::max(m, degree(v));
    return m;
  }

  /// Tree edges as (min,max) pairs in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(parent_.size() - 1);
    for (std::uint32_t v = 0; v < parent_.size(); ++v) {
      if (v == root_) continue;
      out.emplace_back(std::min(v, parent_[v]), std::max(v, parent_[v]));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::uint32_t root_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::vector<std::uint32_t>> children_;
  std::vector<std::uint32_t> topo_order_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint32_t> tin_;
  std::vector<std::uint32_t> subtree_size_;
};

/// Free-function form of the descendant query (s >= t).
inline bool is_descendant(std::uint32_t s, std::uint32_t t, const RootedTree& tree) {
  return tree.is_descendant(s, t);
}

/// Spanning tree by breadth-first or depth-first search from the root.
/// Neighbor iteration is ascending by vertex id, so the result is
/// deterministic without a seed.
inline RootedTree build_spanning_tree(const WeightedGraph& g, std::uint32_t root,
                                      SpanningStrategy strategy) {
  const std::size_t n = g.vertex_count();
  detail::require(root < n, "build_spanning_tree: root out of range");
  std::vector<std::uint32_t> parent(n, kNoVertex);
  std::vector<char> seen(n, 0);
  seen[root] = 1;
  if (strategy == SpanningStrategy::breadth_first) {
    std::deque<std::uint32_t> queue{root};
    while (!queue.empty()) {
      const std::uint32_t v = queue.front();
      queue.pop_front();
      for (std::uint32_t w : g.neighbors(v)) {
        if (!seen[w]) {
          seen[w] = 1;
          parent[w] = v;
          queue.push_back(w);
        }
      }
    }
  } else {
    // Entries carry the discovering vertex; lowest-id neighbor is visited
    // first because neighbors are pushed in descending order.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> stack;
    const auto& first = g.neighbors(root);
    for (auto it = first.rbegin(); it != first.rend(); ++it) stack.emplace_back(*it, root);
    while (!stack.empty()) {
      const auto [v, from] = stack.back();
      stack.pop_back();
      if (seen[v]) continue;
      seen[v] = 1;
      parent[v] = from;
      const auto& nb = g.neighbors(v);
      for (auto it = nb.rbegin(); it != nb.rend(); ++it) {
        if (!seen[*it]) stack.emplace_back(*it, v);
      }
    }
  }
  return RootedTree(g, root, std::move(parent));
}

/// Shadow measures mu(S_t), the per-vertex ratios mu(S_t)/mu(t), the John
/// constant c = max ratio, and the tree degree bound M.
struct ShadowSummary {
  std::vector<double> shadow_measure;
  std::vector<double> ratio;
  double john_constant = 1.0;
  std::size_t tree_degree_bound = 0;
};

/// One reverse-topological pass: mu(S_t) = mu(t) + sum over children of
/// mu(S_child). O(n); never per-vertex subtree sums.
inline ShadowSummary shadow_summary(const WeightedGraph& g, const RootedTree& tree) {
  detail::require(tree.vertex_count() == g.vertex_count(),
                  "shadow_summary: tree does not match graph");
  const std::size_t n = g.vertex_count();
  ShadowSummary out;
  out.shadow_measure.assign(n, 0.0);
  const auto& topo = tree.topo_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const std::uint32_t t = *it;
    double acc = g.weight(t);
    for (std::uint32_t c : tree.children(t)) acc += out.shadow_measure[c];
    out.shadow_measure[t] = acc;
  }
  out.ratio.assign(n, 0.0);
  double c = 0.0;
  for (std::uint32_t t = 0; t < n; ++t) {
    out.ratio[t] = out.shadow_measure[t] / g.weight(t);
    c = std::max(c, out.ratio[t]);
  }
  out.john_constant = c;
  out.tree_degree_bound = tree.max_degree();
  return out;
}

enum class ShadowRelation { nested, disjoint };

/// Two shadows either nest or are disjoint; they nest exactly when the
/// vertices are comparable in the tree order.
inline ShadowRelation shadow_disjointness_check(const RootedTree& tree, std::uint32_t t1,
                                                std::uint32_t t2) {
  if (tree.is_descendant(t1, t2) || tree.is_descendant(t2, t1)) {
    return ShadowRelation::nested;
  }
  return ShadowRelation::disjoint;
}

/// Number of spanning trees via Kirchhoff's theorem (determinant of a
/// Laplacian minor). long double so the count survives dense graphs; only the
/// comparison against the enumeration cap needs to be faithful.
inline long double count_spanning_trees(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 1) return 1.0L;
  const std::size_t m = n - 1;
  std::vector<long double> a(m * m, 0.0L);
  for (std::uint32_t u = 1; u < n; ++u) {
    a[(u - 1) * m + (u - 1)] = static_cast<long double>(g.degree(u));
    for (std::uint32_t v : g.neighbors(u)) {
      if (v >= 1) a[(u - 1) * m + (v - 1)] -= 1.0L;
    }
  }
  // Gaussian elimination with partial pivoting.
  long double det = 1.0L;
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::abs(a[r * m + col]) > std::abs(a[pivot * m + col])) pivot = r;
    }
    if (a[pivot * m + col] == 0.0L) return 0.0L;
    if (pivot != col) {
      for (std::size_t k = 0; k < m; ++k) std::swap(a[pivot * m + k], a[col * m + k]);
      det = -det;
    }
    det *= a[col * m + col];
    for (std::size_t r = col + 1; r < m; ++r) {
      const long double factor = a[r * m + col] / a[col * m + col];
      for (std::size_t k = col; k < m; ++k) a[r * m + k] -= factor * a[col * m + k];
    }
  }
  return det;
}

namespace detail {

struct TreeEnumerationState {
  const WeightedGraph* graph = nullptr;
  std::vector<Edge> edges;
  std::vector<char> included;
  std::size_t included_count = 0;
  std::vector<std::uint32_t> dsu;

  std::uint32_t find(std::vector<std::uint32_t>& parent, std::uint32_t x) const {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
};

/// Backtracking over include/exclude decisions per edge. Each spanning tree is
/// emitted exactly once; the exclude branch is pruned when the remaining edges
/// can no longer connect the graph.
inline void enumerate_trees_rec(TreeEnumerationState& st, std::size_t index,
                                const std::function<void(const std::vector<Edge>&)>& emit) {
  const std::size_t n = st.graph->vertex_count();
  if (st.included_count == n - 1) {
    std::vector<Edge> tree;
    tree.reserve(n - 1);
    for (std::size_t i = 0; i < st.edges.size(); ++i) {
      if (st.included[i]) tree.push_back(st.edges[i]);
    }
    emit(tree);
    return;
  }
  if (index == st.edges.size()) return;

  const auto [u, v] = st.edges[index];
  // Include branch, unless it closes a cycle.
  auto dsu_backup = st.dsu;
  if (st.find(st.dsu, u) != st.find(st.dsu, v)) {
    st.dsu[st.find(st.dsu, u)] = st.find(st.dsu, v);
    st.included[index] = 1;
    ++st.included_count;
    enumerate_trees_rec(st, index + 1, emit);
    st.included[index] = 0;
    --st.included_count;
  }
  st.dsu = std::move(dsu_backup);

  // Exclude branch, unless connectivity becomes impossible.
  auto probe = st.dsu;
  std::size_t components = 0;
  for (std::uint32_t x = 0; x < n; ++x) {
    if (st.find(probe, x) == x) ++components;
  }
  for (std::size_t i = index + 1; i < st.edges.size(); ++i) {
    const auto [a, b] = st.edges[i];
    const std::uint32_t ra = st.find(probe, a);
    const std::uint32_t rb = st.find(probe, b);
    if (ra != rb) {
      probe[ra] = rb;
      --components;
    }
  }
  if (components == 1) {
    enumerate_trees_rec(st, index + 1, emit);
  }
}

}  // namespace detail

/// Visits every spanning tree of g (as a sorted edge list) exactly once.
/// Intended for small graphs; pair with count_spanning_trees to bound work.
inline void for_each_spanning_tree(const WeightedGraph& g,
                                   const std::function<void(const std::vector<Edge>&)>& emit) {
  if (g.vertex_count() == 1) {
    emit({});
    return;
  }
  detail::TreeEnumerationState st;
  st.graph = &g;
  st.edges = g.edges();
  st.included.assign(st.edges.size(), 0);
  st.dsu.resize(g.vertex_count());
  std::iota(st.dsu.begin(), st.dsu.end(), 0);
  detail::enumerate_trees_rec(st, 0, emit);
}

namespace detail {

/// Parent links for a given tree edge set, rooted at root.
inline std::vector<std::uint32_t> parents_from_edges(std::size_t n, const std::vector<Edge>& edges,
                                                     std::uint32_t root) {
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());
  std::vector<std::uint32_t> parent(n, kNoVertex);
  std::vector<char> seen(n, 0);
  seen[root] = 1;
  std::deque<std::uint32_t> queue{root};
  while (!queue.empty()) {
    const std::uint32_t v = queue.front();
    queue.pop_front();
    for (std::uint32_t w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        parent[w] = v;
        queue.push_back(w);
      }
    }
  }
  return parent;
}

}  // namespace detail

enum class TreeSearchMode { exhaustive, greedy_local };

struct TreeSearchResult {
  RootedTree tree;
  ShadowSummary summary;
};

/// Searches for a rooted spanning tree with small John constant.
///
/// exhaustive: enumerates every (tree, root) pair; provably optimal. Requires
/// count_spanning_trees(g) * n <= cap. Result ties are broken by smaller
/// degree bound, then lower root id, then lexicographic edge list.
///
/// greedy_local: starts from the best breadth-first tree over all roots, then
/// first-improvement edge swaps (only swaps that strictly lower c are taken,
/// candidate order ascending), restarting over the remaining roots in a
/// seed-shuffled order. budget caps the number of shadow-summary evaluations.
/// Never returns a tree worse than its starting point.
inline TreeSearchResult optimize_tree(const WeightedGraph& g, std::size_t budget,
                                      std::uint64_t seed, TreeSearchMode mode,
                                      std::size_t exhaustive_cap = 1000000) {
  detail::require(budget > 0, "optimize_tree: budget must be positive");
  const std::size_t n = g.vertex_count();

  std::optional<TreeSearchResult> best;
  auto consider = [&](RootedTree&& tree, ShadowSummary&& summary) {
    if (!best || summary.john_constant < best->summary.john_constant ||
        (summary.john_constant == best->summary.john_constant &&
         (summary.tree_degree_bound < best->summary.tree_degree_bound ||
          (summary.tree_degree_bound == best->summary.tree_degree_bound &&
           tree.root() < best->tree.root())))) {
      best = TreeSearchResult{std::move(tree), std::move(summary)};
    }
  };

  if (mode == TreeSearchMode::exhaustive) {
    const long double total = count_spanning_trees(g) * static_cast<long double>(n);
    detail::require(total <= static_cast<long double>(exhaustive_cap),
                    "optimize_tree: spanning tree count times roots exceeds the exhaustive cap");
    for_each_spanning_tree(g, [&](const std::vector<Edge>& edges) {
      for (std::uint32_t root = 0; root < n; ++root) {
        RootedTree tree(g, root, detail::parents_from_edges(n, edges, root));
        ShadowSummary summary = shadow_summary(g, tree);
        consider(std::move(tree), std::move(summary));
      }
    });
    return std::move(*best);
  }

  // Greedy-local. Start: best breadth-first tree over all roots.
  std::vector<std::uint32_t> roots(n);
  std::iota(roots.begin(), roots.end(), 0);
  for (std::uint32_t root : roots) {
    RootedTree tree = build_spanning_tree(g, root, SpanningStrategy::breadth_first);
    ShadowSummary summary = shadow_summary(g, tree);
    consider(std::move(tree), std::move(summary));
  }

  std::mt19937_64 rng(seed);
  // Explore the best start first, then the rest in seeded order.
  std::vector<std::uint32_t> order;
  order.push_back(best->tree.root());
  {
    std::vector<std::uint32_t> rest;
    for (std::uint32_t r : roots) {
      if (r != order[0]) rest.push_back(r);
    }
    for (std::size_t i = rest.size(); i > 1; --i) {
      std::swap(rest[i - 1], rest[uniform_index(rng, i)]);
    }
    order.insert(order.end(), rest.begin(), rest.end());
  }

  std::size_t evaluations = 0;
  const std::vector<Edge> all_edges = g.edges();
  for (std::uint32_t root : order) {
    if (evaluations >= budget) break;
    RootedTree current = build_spanning_tree(g, root, SpanningStrategy::breadth_first);
    ShadowSummary current_summary = shadow_summary(g, current);
    bool improved = true;
    while (improved && evaluations < budget) {
      improved = false;
      for (const auto& [u, v] : all_edges) {
        if (current.parent(u) == v || current.parent(v) == u) continue;  // tree edge
        // Walk the u-v tree cycle; removing any edge on it keeps a spanning tree.
        std::vector<Edge> cycle;
        {
          std::uint32_t a = u;
          std::uint32_t b = v;
          std::vector<Edge> from_b;
          while (a != b) {
            if (current.depth(a) >= current.depth(b)) {
              cycle.emplace_back(a, current.parent(a));
              a = current.parent(a);
            } else {
              from_b.emplace_back(b, current.parent(b));
              b = current.parent(b);
            }
          }
          cycle.insert(cycle.end(), from_b.begin(), from_b.end());
        }
        std::sort(cycle.begin(), cycle.end(), [](const Edge& x, const Edge& y) {
          const Edge nx{std::min(x.first, x.second), std::max(x.first, x.second)};
          const Edge ny{std::min(y.first, y.second), std::max(y.first, y.second)};
          return nx < ny;
        });
        for (const auto& [child, par] : cycle) {
          if (evaluations >= budget) break;
          std::vector<std::uint32_t> parent_links(n);
          for (std::uint32_t x = 0; x < n; ++x) parent_links[x] = current.parent(x);
          std::vector<Edge> candidate_edges;
          candidate_edges.reserve(n - 1);
          for (std::uint32_t x = 0; x < n; ++x) {
            if (parent_links[x] == kNoVertex) continue;
            if ((x == child && parent_links[x] == par)) continue;
            candidate_edges.emplace_back(x, parent_links[x]);
          }
          candidate_edges.emplace_back(u, v);
          RootedTree candidate(g, root, detail::parents_from_edges(n, candidate_edges, root));
          ShadowSummary cand_summary = shadow_summary(g, candidate);
          ++evaluations;
          if (cand_summary.john_constant < current_summary.john_constant) {
            current = std::move(candidate);
            current_summary = std::move(cand_summary);
            improved = true;
            break;
          }
        }
        if (improved || evaluations >= budget) break;
      }
    }
    consider(std::move(current), std::move(current_summary));
  }
  return std::move(*best);
}

/// Length of the gradient restricted to the spanning tree edge set:
/// |grad_T f|(t) = sum_{s ~_T t} |f(s) - f(t)|.
inline VertexFunction gradient_length(const VertexFunction& f, const WeightedGraph& g,
                                      const RootedTree& tree) {
  detail::require_dimension(f, g, "gradient_length");
  detail::require(tree.vertex_count() == g.vertex_count(),
                  "gradient_length: tree does not match graph");
  VertexFunction out(f.size(), 0.0);
  for (std::uint32_t t = 0; t < f.size(); ++t) {
    double acc = 0.0;
    if (t != tree.root()) acc += std::abs(f[tree.parent(t)] - f[t]);
    for (std::uint32_t c : tree.children(t)) acc += std::abs(f[c] - f[t]);
    out[t] = acc;
  }
  return out;
}

}  // namespace graph_poincare
