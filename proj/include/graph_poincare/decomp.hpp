#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "graph_poincare/graph.hpp"
#include "graph_poincare/report.hpp"
#include "graph_poincare/tree.hpp"

namespace graph_poincare {

/// Sparse edge-supported decomposition {f_t}_{t in V*}, V* = V minus the root.
/// Each piece f_t lives on the segment {t, t_p}:
///   f_t(t)   = (1/mu(t))   * sum_{k >= t} f(k) mu(k)
///   f_t(t_p) = -(1/mu(t_p)) * sum_{k >= t} f(k) mu(k)
/// so every piece sums zero with respect to mu. Stored as one pair per
/// non-root vertex; the root slots are unused.
struct EdgeDecomposition {
  std::uint32_t root = 0;
  std::vector<std::uint32_t> parent;    // parent[t] = t_p; kNoVertex at the root
  std::vector<double> value_at_vertex;  // f_t(t)
  std::vector<double> value_at_parent;  // f_t(t_p)

  std::size_t piece_count() const { return parent.empty() ? 0 : parent.size() - 1; }
};

/// One signed subtree-sum pass (no absolute values; the Hardy accumulator is
/// deliberately not reused, its |f| would silently change the sign structure).
/// Zero mean is not required here; it only matters for the reconstruction
/// identity.
inline EdgeDecomposition decompose(const VertexFunction& f, const WeightedGraph& g,
                                   const RootedTree& tree) {
  detail::require_dimension(f, g, "decompose");
  detail::require(tree.vertex_count() == g.vertex_count(), "decompose: tree does not match graph");
  const std::size_t n = g.vertex_count();
  std::vector<double> subtree_sum(n, 0.0);  // sum_{k >= t} f(k) mu(k)
  const auto& topo = tree.topo_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const std::uint32_t t = *it;
    double acc = f[t] * g.weight(t);
    for (std::uint32_t c : tree.children(t)) acc += subtree_sum[c];
    subtree_sum[t] = acc;
  }
  EdgeDecomposition d;
  d.root = tree.root();
  d.parent.assign(n, kNoVertex);
  d.value_at_vertex.assign(n, 0.0);
  d.value_at_parent.assign(n, 0.0);
  for (std::uint32_t t = 0; t < n; ++t) {
    if (t == tree.root()) continue;
    const std::uint32_t p = tree.parent(t);
    d.parent[t] = p;
    d.value_at_vertex[t] = subtree_sum[t] / g.weight(t);
    d.value_at_parent[t] = -subtree_sum[t] / g.weight(p);
  }
  return d;
}

/// s -> sum_t f_t(s). Equals the source f when the source sums zero on V;
/// otherwise the defect sits at the root, where the reconstruction returns
/// -(1/mu(a)) sum_{k > a} f(k) mu(k) instead of f(a).
inline VertexFunction reconstruct(const EdgeDecomposition& d, const WeightedGraph& g,
                                  const RootedTree& tree) {
  detail::require(d.parent.size() == g.vertex_count(), "reconstruct: decomposition size mismatch");
  detail::require(tree.vertex_count() == g.vertex_count(), "reconstruct: tree does not match graph");
  VertexFunction out(g.vertex_count(), 0.0);
  for (std::uint32_t t = 0; t < d.parent.size(); ++t) {
    if (t == d.root) continue;
    out[t] += d.value_at_vertex[t];
    out[d.parent[t]] += d.value_at_parent[t];
  }
  return out;
}

/// sum_{t in V*} ( |f_t(t)|^q mu(t) + |f_t(t_p)|^q mu(t_p) ), the left side of
/// the decomposition energy bound.
inline double q_energy(const EdgeDecomposition& d, const WeightedGraph& g, double q) {
  detail::require(d.parent.size() == g.vertex_count(), "q_energy: decomposition size mismatch");
  detail::require(std::isfinite(q) && q > 1.0, "q_energy: q must satisfy 1 < q < infinity");
  double acc = 0.0;
  for (std::uint32_t t = 0; t < d.parent.size(); ++t) {
    if (t == d.root) continue;
    acc += std::pow(std::abs(d.value_at_vertex[t]), q) * g.weight(t);
    acc += std::pow(std::abs(d.value_at_parent[t]), q) * g.weight(d.parent[t]);
  }
  return acc;
}

/// Energy bound of the decomposition:
///   sum_t ||f_t||_q^q <= c^q M (2^q q/(q-1)) ||f||_q^q,
/// with c and M taken from the shadow summary.
inline VerificationReport verify_energy_bound(const VertexFunction& f, const WeightedGraph& g,
                                              const RootedTree& tree, const ShadowSummary& summary,
                                              double q, std::uint64_t seed = 0) {
  detail::require(std::isfinite(q) && q > 1.0,
                  "verify_energy_bound: q must satisfy 1 < q < infinity");
  const EdgeDecomposition d = decompose(f, g, tree);
  const double c = summary.john_constant;
  const double m = static_cast<double>(summary.tree_degree_bound);
  const double fq = lp_norm(f, q, g);
  VerificationReport report;
  report.check_name = "decomp.energy_bound";
  report.param_real("q", q);
  report.param_real("c", c);
  report.param_int("M", static_cast<std::int64_t>(summary.tree_degree_bound));
  report.measured = q_energy(d, g, q);
  report.theoretical =
      std::pow(c, q) * m * (std::pow(2.0, q) * q / (q - 1.0)) * std::pow(fq, q);
  report.passed = report.measured <= report.theoretical;
  report.seed = seed;
  return report;
}

}  // namespace graph_poincare
