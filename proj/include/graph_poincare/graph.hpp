#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace graph_poincare {

/// Real-valued function on the vertex set, indexed by dense vertex id.
using VertexFunction = std::vector<double>;

/// Undirected edge as an id pair.
using Edge = std::pair<std::uint32_t, std::uint32_t>;

/// Sentinel id, used e.g. for the parent of a root.
inline constexpr std::uint32_t kNoVertex = std::numeric_limits<std::uint32_t>::max();

/// Which edge set a gradient-type operation runs over.
enum class GradientMode { full, tree_restricted };

inline const char* to_string(GradientMode mode) {
  return mode == GradientMode::full ? "full" : "tree-restricted";
}

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace detail

/// Finite connected weighted graph: dense vertex ids 0..n-1, strictly positive
/// vertex weights mu acting as a measure, symmetric loop-free adjacency.
/// Immutable after construction; all accessors are safe for concurrent use.
class WeightedGraph {
 public:
  WeightedGraph(std::vector<double> weights, const std::vector<Edge>& edges)
      : mu_(std::move(weights)) {
    const std::size_t n = mu_.size();
    detail::require(n >= 1, "WeightedGraph: vertex set must be nonempty");
    for (std::size_t v = 0; v < n; ++v) {
      detail::require(std::isfinite(mu_[v]) && mu_[v] > 0.0,
                      "WeightedGraph: weight of vertex " + std::to_string(v) +
                          " must be positive and finite");
    }
    adj_.assign(n, {});
    for (const auto& [u, v] : edges) {
      detail::require(u < n && v < n, "WeightedGraph: edge endpoint out of range");
      detail::require(u != v, "WeightedGraph: self-loops are not allowed");
      adj_[u].push_back(v);
      adj_[v].push_back(u);
    }
    for (std::size_t v = 0; v < n; ++v) {
      auto& nb = adj_[v];
      std::sort(nb.begin(), nb.end());
      detail::require(std::adjacent_find(nb.begin(), nb.end()) == nb.end(),
                      "WeightedGraph: duplicate edge at vertex " + std::to_string(v));
    }
    edge_count_ = edges.size();
    total_measure_ = 0.0;
    for (double w : mu_) total_measure_ += w;
    detail::require(is_connected_(), "WeightedGraph: graph must be connected");
  }

  std::size_t vertex_count() const { return mu_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  double weight(std::uint32_t v) const { return mu_[v]; }
  const std::vector<double>& weights() const { return mu_; }

  /// mu(V), the total measure.
  double total_measure() const { return total_measure_; }

  /// mu(subset).
  double measure(std::span<const std::uint32_t> subset) const {
    double acc = 0.0;
    for (std::uint32_t v : subset) {
      detail::require(v < mu_.size(), "WeightedGraph::measure: vertex out of range");
      acc += mu_[v];
    }
    return acc;
  }

  /// Neighbors in ascending id order.
  const std::vector<std::uint32_t>& neighbors(std::uint32_t v) const { return adj_[v]; }

  std::size_t degree(std::uint32_t v) const { return adj_[v].size(); }

  std::size_t max_degree() const {
    std::size_t m = 0;
    for (const auto& nb : adj_) m = std::max(m, nb.size());
    return m;
  }

  bool has_edge(std::uint32_t u, std::uint32_t v) const {
    if (u >= adj_.size() || v >= adj_.size()) return false;
    const auto& nb = adj_[u];
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// Edges as (min,max) pairs in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (std::uint32_t u = 0; u < adj_.size(); ++u) {
      for (std::uint32_t v : adj_[u]) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

 private:
  bool is_connected_() const {
    std::vector<char> seen(mu_.size(), 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    std::size_t visited = 1;
    while (!stack.empty()) {
      const std::uint32_t v = stack.back();
      stack.pop_back();
      for (std::uint32_t w : adj_[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          ++visited;
          stack.push_back(w);
        }
      }
    }
    return visited == mu_.size();
  }

  std::vector<double> mu_;
  std::vector<std::vector<std::uint32_t>> adj_;
  double total_measure_ = 0.0;
  std::size_t edge_count_ = 0;
};

namespace detail {

inline void require_dimension(const VertexFunction& f, const WeightedGraph& g,
                              const char* where) {
  require(f.size() == g.vertex_count(),
          std::string(where) + ": function dimension does not match vertex count");
}

}  // namespace detail

/// Weighted lp norm over the whole vertex set:
/// (sum_s |f(s)|^p mu(s))^{1/p} for finite p, and the plain (unweighted)
/// supremum sup_s |f(s)| for p = infinity.
inline double lp_norm(const VertexFunction& f, double p, const WeightedGraph& g) {
  detail::require_dimension(f, g, "lp_norm");
  detail::require(!std::isnan(p) && p >= 1.0, "lp_norm: p must satisfy p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  for (std::size_t s = 0; s < f.size(); ++s) {
    acc += std::pow(std::abs(f[s]), p) * g.weight(static_cast<std::uint32_t>(s));
  }
  return std::pow(acc, 1.0 / p);
}

/// Same norm restricted to a subset of vertices.
inline double lp_norm(const VertexFunction& f, double p, const WeightedGraph& g,
                      std::span<const std::uint32_t> subset) {
  detail::require_dimension(f, g, "lp_norm");
  detail::require(!std::isnan(p) && p >= 1.0, "lp_norm: p must satisfy p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::uint32_t s : subset) {
      detail::require(s < f.size(), "lp_norm: subset vertex out of range");
      m = std::max(m, std::abs(f[s]));
    }
    return m;
  }
  double acc = 0.0;
  for (std::uint32_t s : subset) {
    detail::require(s < f.size(), "lp_norm: subset vertex out of range");
    acc += std::pow(std::abs(f[s]), p) * g.weight(s);
  }
  return std::pow(acc, 1.0 / p);
}

/// mu-average of f over the whole vertex set.
inline double weighted_mean(const VertexFunction& f, const WeightedGraph& g) {
  detail::require_dimension(f, g, "weighted_mean");
  double acc = 0.0;
  for (std::size_t s = 0; s < f.size(); ++s) {
    acc += f[s] * g.weight(static_cast<std::uint32_t>(s));
  }
  return acc / g.total_measure();
}

/// mu-average of f over a nonempty subset.
inline double weighted_mean(const VertexFunction& f, const WeightedGraph& g,
                            std::span<const std::uint32_t> subset) {
  detail::require_dimension(f, g, "weighted_mean");
  detail::require(!subset.empty(), "weighted_mean: subset must be nonempty");
  double acc = 0.0;
  double mass = 0.0;
  for (std::uint32_t s : subset) {
    detail::require(s < f.size(), "weighted_mean: subset vertex out of range");
    acc += f[s] * g.weight(s);
    mass += g.weight(s);
  }
  return acc / mass;
}

/// f - f_V, which sums zero with respect to mu on V.
inline VertexFunction project_zero_mean(const VertexFunction& f, const WeightedGraph& g) {
  const double mean = weighted_mean(f, g);
  VertexFunction out(f);
  for (double& v : out) v -= mean;
  return out;
}

/// Length of the gradient over the full edge set:
/// |grad f|(t) = sum_{s ~ t} |f(s) - f(t)|.
inline VertexFunction gradient_length(const VertexFunction& f, const WeightedGraph& g) {
  detail::require_dimension(f, g, "gradient_length");
  VertexFunction out(f.size(), 0.0);
  for (std::uint32_t t = 0; t < f.size(); ++t) {
    double acc = 0.0;
    for (std::uint32_t s : g.neighbors(t)) acc += std::abs(f[s] - f[t]);
    out[t] = acc;
  }
  return out;
}

/// f on the subset, zero elsewhere.
inline VertexFunction restrict_support(const VertexFunction& f,
                                       std::span<const std::uint32_t> subset) {
  VertexFunction out(f.size(), 0.0);
  for (std::uint32_t s : subset) {
    detail::require(s < f.size(), "restrict_support: subset vertex out of range");
    out[s] = f[s];
  }
  return out;
}

inline bool all_finite(const VertexFunction& f) {
  for (double v : f) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace graph_poincare
