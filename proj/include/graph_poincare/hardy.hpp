#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "graph_poincare/graph.hpp"
#include "graph_poincare/tree.hpp"

namespace graph_poincare {

/// Outcome of one continuity check of the averaging operator T.
/// margin = theoretical - measured; a passing trial keeps it nonnegative up to
/// the check's stated rounding tolerance.
struct HardyBoundReport {
  enum class Kind { strong_infinity, weak_1_1, strong_qq };

  Kind bound_kind = Kind::strong_infinity;
  double q = std::numeric_limits<double>::quiet_NaN();       // strong_qq only
  double lambda = std::numeric_limits<double>::quiet_NaN();  // weak_1_1 only
  double measured = 0.0;
  double theoretical = 0.0;
  double margin = 0.0;
  std::uint64_t trial_seed = 0;
  bool passed = false;
};

inline const char* to_string(HardyBoundReport::Kind kind) {
  switch (kind) {
    case HardyBoundReport::Kind::strong_infinity:
      return "strong-infinity";
    case HardyBoundReport::Kind::weak_1_1:
      return "weak-1-1";
    default:
      return "strong-qq";
  }
}

/// Averaging operator over shadows:
///   Tf(t) = (1/mu(S_t)) * sum_{s >= t} |f(s)| mu(s).
/// One reverse-topological accumulation of |f| mu followed by division, sharing
/// the tree's topo order with shadow_summary. Tf >= 0 pointwise.
inline VertexFunction apply_hardy(const VertexFunction& f, const WeightedGraph& g,
                                  const RootedTree& tree, const ShadowSummary& summary) {
  detail::require_dimension(f, g, "apply_hardy");
  detail::require(tree.vertex_count() == g.vertex_count(), "apply_hardy: tree does not match graph");
  detail::require(summary.shadow_measure.size() == g.vertex_count(),
                  "apply_hardy: summary does not match tree");
  const std::size_t n = g.vertex_count();
  VertexFunction acc(n, 0.0);
  const auto& topo = tree.topo_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const std::uint32_t t = *it;
    double s = std::abs(f[t]) * g.weight(t);
    for (std::uint32_t c : tree.children(t)) s += acc[c];
    acc[t] = s;
  }
  for (std::uint32_t t = 0; t < n; ++t) acc[t] /= summary.shadow_measure[t];
  return acc;
}

/// mu({t : |f(t)| > lambda}), with the strict inequality of the level-set
/// definition.
inline double distribution_measure(const VertexFunction& f, double lambda,
                                   const WeightedGraph& g) {
  detail::require_dimension(f, g, "distribution_measure");
  detail::require(lambda > 0.0, "distribution_measure: lambda must be positive");
  double acc = 0.0;
  for (std::uint32_t t = 0; t < f.size(); ++t) {
    if (std::abs(f[t]) > lambda) acc += g.weight(t);
  }
  return acc;
}

/// Strong (infinity, infinity) continuity with constant 1:
/// ||Tf||_inf <= ||f||_inf.
inline HardyBoundReport verify_strong_infinity(const WeightedGraph& g, const RootedTree& tree,
                                               const ShadowSummary& summary,
                                               const VertexFunction& f,
                                               std::uint64_t trial_seed = 0) {
  detail::require(all_finite(f), "verify_strong_infinity: f must be finite");
  const VertexFunction tf = apply_hardy(f, g, tree, summary);
  HardyBoundReport report;
  report.bound_kind = HardyBoundReport::Kind::strong_infinity;
  report.measured = lp_norm(tf, std::numeric_limits<double>::infinity(), g);
  report.theoretical = lp_norm(f, std::numeric_limits<double>::infinity(), g);
  report.margin = report.theoretical - report.measured;
  report.trial_seed = trial_seed;
  // The averaging quotient can exceed the sup by rounding only.
  report.passed = report.measured <= report.theoretical + 1e-12 * report.theoretical;
  return report;
}

/// Weak (1,1) continuity with constant 1, strict as in the theorem:
/// mu(V_{Tf}(lambda)) < ||f||_1 / lambda. The zero function is rejected;
/// strictness degenerates to 0 < 0 there.
inline std::vector<HardyBoundReport> verify_weak_11(const WeightedGraph& g,
                                                    const RootedTree& tree,
                                                    const ShadowSummary& summary,
                                                    const VertexFunction& f,
                                                    const std::vector<double>& lambda_grid,
                                                    std::uint64_t trial_seed = 0) {
  detail::require(all_finite(f), "verify_weak_11: f must be finite");
  detail::require(lp_norm(f, std::numeric_limits<double>::infinity(), g) > 0.0,
                  "verify_weak_11: f must not be identically zero");
  const VertexFunction tf = apply_hardy(f, g, tree, summary);
  const double l1 = lp_norm(f, 1.0, g);
  std::vector<HardyBoundReport> reports;
  reports.reserve(lambda_grid.size());
  for (double lambda : lambda_grid) {
    detail::require(lambda > 0.0, "verify_weak_11: lambda must be positive");
    HardyBoundReport report;
    report.bound_kind = HardyBoundReport::Kind::weak_1_1;
    report.lambda = lambda;
    report.measured = distribution_measure(tf, lambda, g);
    report.theoretical = l1 / lambda;
    report.margin = report.theoretical - report.measured;
    report.trial_seed = trial_seed;
    report.passed = report.measured < report.theoretical;
    reports.push_back(report);
  }
  return reports;
}

/// Strong (q,q) continuity for 1 < q < infinity:
/// ||Tf||_q <= (2^q q/(q-1))^{1/q} ||f||_q = 2 (q/(q-1))^{1/q} ||f||_q.
inline HardyBoundReport verify_strong_qq(const WeightedGraph& g, const RootedTree& tree,
                                         const ShadowSummary& summary, const VertexFunction& f,
                                         double q, std::uint64_t trial_seed = 0) {
  detail::require(all_finite(f), "verify_strong_qq: f must be finite");
  detail::require(std::isfinite(q) && q > 1.0, "verify_strong_qq: q must satisfy 1 < q < infinity");
  const VertexFunction tf = apply_hardy(f, g, tree, summary);
  HardyBoundReport report;
  report.bound_kind = HardyBoundReport::Kind::strong_qq;
  report.q = q;
  report.measured = lp_norm(tf, q, g);
  report.theoretical = 2.0 * std::pow(q / (q - 1.0), 1.0 / q) * lp_norm(f, q, g);
  report.margin = report.theoretical - report.measured;
  report.trial_seed = trial_seed;
  report.passed = report.measured <= report.theoretical;
  return report;
}

}  // namespace graph_poincare
