#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "graph_poincare/graph.hpp"
#include "graph_poincare/rng.hpp"
#include "graph_poincare/tree.hpp"

namespace graph_poincare {

/// Outcome of one Poincare inequality check.
/// For local (segment) checks the theoretical constant is 1 and the c/M fields
/// are filled with their trivial values.
struct PoincareReport {
  double p = 1.0;
  double ratio = 0.0;              // ||f||_p / || |grad f| ||_p
  double theoretical_cp = 0.0;
  double john_constant_c = 1.0;
  std::size_t degree_bound_M = 1;
  GradientMode gradient_mode = GradientMode::full;
  bool passes = false;
};

/// Upper bound for the global Poincare constant:
///   2c              for p = 1
///   c * M * 2 p^{1-1/p}  for p > 1.
/// As p -> 1+ the second formula tends to 2cM; each formula is applied only in
/// its stated range.
inline double theoretical_constant(double c, std::size_t degree_bound, double p) {
  detail::require(std::isfinite(c) && c >= 1.0, "theoretical_constant: c must satisfy c >= 1");
  detail::require(degree_bound >= 1, "theoretical_constant: M must be a positive integer");
  detail::require(std::isfinite(p) && p >= 1.0, "theoretical_constant: p must satisfy p >= 1");
  if (p == 1.0) return 2.0 * c;
  return c * static_cast<double>(degree_bound) * 2.0 * std::pow(p, 1.0 - 1.0 / p);
}

namespace detail {

// Zero-mean acceptance tolerance: |sum f mu| <= 1e-10 * ||f||_inf * mass.
inline bool sums_zero_within_tolerance(double weighted_sum, double sup_norm, double mass) {
  return std::abs(weighted_sum) <= 1e-10 * sup_norm * mass;
}

}  // namespace detail

/// Local Poincare check on the segment {t, t_p}: with f zero-mean on the
/// segment, ||f||_p over the segment is at most the norm of the gradient of
/// the restricted function (constant 1). Degenerate zero segments report
/// ratio 0.
inline PoincareReport local_edge_check(const VertexFunction& f, const WeightedGraph& g,
                                       const RootedTree& tree, std::uint32_t t, double p) {
  detail::require_dimension(f, g, "local_edge_check");
  detail::require(t < g.vertex_count() && t != tree.root(),
                  "local_edge_check: t must be a non-root vertex");
  detail::require(std::isfinite(p) && p >= 1.0, "local_edge_check: p must satisfy p >= 1");
  const std::uint32_t tp = tree.parent(t);
  const double mu_t = g.weight(t);
  const double mu_p = g.weight(tp);
  const double segment_sum = f[t] * mu_t + f[tp] * mu_p;
  const double sup = std::max(std::abs(f[t]), std::abs(f[tp]));
  detail::require(detail::sums_zero_within_tolerance(segment_sum, sup, mu_t + mu_p),
                  "local_edge_check: f must sum zero with respect to mu on the segment");

  // Gradient of the restriction over the single segment edge.
  const double diff = std::abs(f[t] - f[tp]);
  const double numerator = std::pow(std::pow(std::abs(f[t]), p) * mu_t +
                                        std::pow(std::abs(f[tp]), p) * mu_p,
                                    1.0 / p);
  const double denominator =
      std::pow(std::pow(diff, p) * mu_t + std::pow(diff, p) * mu_p, 1.0 / p);

  PoincareReport report;
  report.p = p;
  report.theoretical_cp = 1.0;
  report.gradient_mode = GradientMode::tree_restricted;
  report.ratio = denominator == 0.0 ? 0.0 : numerator / denominator;
  report.passes = report.ratio <= report.theoretical_cp * (1.0 + 1e-12);
  return report;
}

/// Global Poincare ratio ||f||_p / || |grad f| ||_p for zero-mean f, checked
/// against theoretical_constant(c, M, p). The tree-restricted gradient mode is
/// the stronger check: the tree gradient is pointwise no larger than the full
/// one, so its ratio is larger, and the bound still holds for it.
inline PoincareReport global_ratio(const VertexFunction& f, const WeightedGraph& g,
                                   const RootedTree& tree, const ShadowSummary& summary,
                                   double p, GradientMode mode) {
  detail::require_dimension(f, g, "global_ratio");
  detail::require(std::isfinite(p) && p >= 1.0, "global_ratio: p must satisfy p >= 1");
  const double sup = lp_norm(f, std::numeric_limits<double>::infinity(), g);
  detail::require(sup > 0.0, "global_ratio: f must not be identically zero");
  double weighted_sum = 0.0;
  for (std::uint32_t s = 0; s < f.size(); ++s) weighted_sum += f[s] * g.weight(s);
  detail::require(detail::sums_zero_within_tolerance(weighted_sum, sup, g.total_measure()),
                  "global_ratio: f must sum zero with respect to mu on V");

  const VertexFunction grad =
      mode == GradientMode::full ? gradient_length(f, g) : gradient_length(f, g, tree);
  PoincareReport report;
  report.p = p;
  report.gradient_mode = mode;
  report.john_constant_c = summary.john_constant;
  report.degree_bound_M = summary.tree_degree_bound;
  report.theoretical_cp = theoretical_constant(summary.john_constant,
                                               summary.tree_degree_bound, p);
  const double denom = lp_norm(grad, p, g);
  report.ratio = denom == 0.0 ? std::numeric_limits<double>::infinity()
                              : lp_norm(f, p, g) / denom;
  report.passes = report.ratio <= report.theoretical_cp * (1.0 + 1e-12);
  return report;
}

struct SharpEstimate {
  double ratio = 0.0;
  VertexFunction witness;
};

namespace detail {

inline double ratio_objective(const VertexFunction& f, const WeightedGraph& g, double p,
                              GradientMode mode, const RootedTree* tree) {
  const VertexFunction grad =
      mode == GradientMode::full ? gradient_length(f, g) : gradient_length(f, g, *tree);
  const double denom = lp_norm(grad, p, g);
  if (denom == 0.0) return 0.0;
  return lp_norm(f, p, g) / denom;
}

inline double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Subgradient of log(||f||_p / || |grad f| ||_p). Kinks of the absolute
// values use sign(0) = 0.
inline VertexFunction ratio_log_subgradient(const VertexFunction& f, const WeightedGraph& g,
                                            double p, GradientMode mode, const RootedTree* tree) {
  const std::size_t n = f.size();
  const double num = lp_norm(f, p, g);
  const VertexFunction grad =
      mode == GradientMode::full ? gradient_length(f, g) : gradient_length(f, g, *tree);
  const double den = lp_norm(grad, p, g);

  VertexFunction out(n, 0.0);
  if (num == 0.0 || den == 0.0) return out;

  // d||f||_p / df(u) = |f(u)|^{p-1} sign(f(u)) mu(u) / ||f||_p^{p-1}
  for (std::uint32_t u = 0; u < n; ++u) {
    const double base = p == 1.0 ? 1.0 : std::pow(std::abs(f[u]), p - 1.0);
    out[u] += base * sign_of(f[u]) * g.weight(u) / (std::pow(num, p - 1.0) * num);
  }

  // d|| |grad f| ||_p / df(u) = sum_{s ~ u} (w(s) + w(u)) sign(f(u) - f(s)),
  // w(t) = |grad f|(t)^{p-1} mu(t) / ||grad f||_p^{p-1}.
  std::vector<double> w(n, 0.0);
  for (std::uint32_t t = 0; t < n; ++t) {
    const double base = p == 1.0 ? 1.0 : std::pow(grad[t], p - 1.0);
    w[t] = base * g.weight(t) / std::pow(den, p - 1.0);
  }
  auto accumulate_edge = [&](std::uint32_t u, std::uint32_t s) {
    out[u] -= (w[s] + w[u]) * sign_of(f[u] - f[s]) / den;
  };
  if (mode == GradientMode::full) {
    for (std::uint32_t u = 0; u < n; ++u) {
      for (std::uint32_t s : g.neighbors(u)) accumulate_edge(u, s);
    }
  } else {
    for (std::uint32_t u = 0; u < n; ++u) {
      if (u != tree->root()) accumulate_edge(u, tree->parent(u));
      for (std::uint32_t c : tree->children(u)) accumulate_edge(u, c);
    }
  }
  return out;
}

inline void normalize_feasible(VertexFunction& f, const WeightedGraph& g, std::mt19937_64& rng) {
  f = project_zero_mean(f, g);
  double norm = lp_norm(f, 2.0, g);
  while (norm < 1e-300) {
    for (double& v : f) v = normal(rng);
    f = project_zero_mean(f, g);
    norm = lp_norm(f, 2.0, g);
  }
  for (double& v : f) v /= norm;
}

}  // namespace detail

/// Empirical lower bound for the sharp Poincare constant: maximizes
/// R(f) = ||f||_p / || |grad f| ||_p over zero-mean f by projected subgradient
/// ascent on the unit sphere (step 1/sqrt(iter)), best over restarts. Every
/// iterate is feasible, so the result never exceeds the true optimum, and
/// best-so-far semantics make it monotone in the restart count.
inline SharpEstimate estimate_sharp_constant(const WeightedGraph& g, double p,
                                             std::size_t restarts, std::size_t iters,
                                             std::uint64_t seed,
                                             GradientMode mode = GradientMode::full,
                                             const RootedTree* tree = nullptr) {
  detail::require(std::isfinite(p) && p >= 1.0,
                  "estimate_sharp_constant: p must satisfy p >= 1");
  detail::require(g.vertex_count() >= 2, "estimate_sharp_constant: graph must have n >= 2");
  detail::require(restarts >= 1 && iters >= 1,
                  "estimate_sharp_constant: restarts and iters must be positive");
  detail::require(mode == GradientMode::full || tree != nullptr,
                  "estimate_sharp_constant: tree-restricted mode needs a tree");

  std::mt19937_64 rng(seed);
  SharpEstimate best;
  for (std::size_t r = 0; r < restarts; ++r) {
    VertexFunction f(g.vertex_count());
    for (double& v : f) v = normal(rng);
    detail::normalize_feasible(f, g, rng);
    for (std::size_t iter = 1; iter <= iters; ++iter) {
      const double value = detail::ratio_objective(f, g, p, mode, tree);
      if (value > best.ratio) {
        best.ratio = value;
        best.witness = f;
      }
      const VertexFunction step = detail::ratio_log_subgradient(f, g, p, mode, tree);
      const double scale = 1.0 / std::sqrt(static_cast<double>(iter));
      for (std::size_t i = 0; i < f.size(); ++i) f[i] += scale * step[i];
      detail::normalize_feasible(f, g, rng);
    }
    const double value = detail::ratio_objective(f, g, p, mode, tree);
    if (value > best.ratio) {
      best.ratio = value;
      best.witness = f;
    }
  }
  return best;
}

/// Exhaustive oracle for the sharp constant on graphs with n <= 4: the
/// zero-mean subspace has dimension at most 3, so the unit sphere is a point
/// pair, a circle, or a 2-sphere, and a polar grid enumerates it. Doubling the
/// resolution keeps all previous sample points, so the result is monotone
/// under doubling.
inline double brute_force_sharp_constant(const WeightedGraph& g, double p,
                                         std::size_t grid_resolution) {
  const std::size_t n = g.vertex_count();
  detail::require(n >= 2 && n <= 4, "brute_force_sharp_constant: requires 2 <= n <= 4");
  detail::require(std::isfinite(p) && p >= 1.0,
                  "brute_force_sharp_constant: p must satisfy p >= 1");
  detail::require(grid_resolution >= 1, "brute_force_sharp_constant: resolution must be positive");

  // Euclidean-orthonormal basis of {x : sum x(t) mu(t) = 0}.
  std::vector<VertexFunction> basis;
  for (std::size_t i = 0; i < n && basis.size() < n - 1; ++i) {
    VertexFunction v(n, 0.0);
    v[i] = 1.0;
    double dot_mu = 0.0;
    double mu_sq = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      dot_mu += v[t] * g.weight(static_cast<std::uint32_t>(t));
      mu_sq += g.weight(static_cast<std::uint32_t>(t)) * g.weight(static_cast<std::uint32_t>(t));
    }
    for (std::size_t t = 0; t < n; ++t) {
      v[t] -= dot_mu / mu_sq * g.weight(static_cast<std::uint32_t>(t));
    }
    for (const auto& b : basis) {
      double dot = 0.0;
      for (std::size_t t = 0; t < n; ++t) dot += v[t] * b[t];
      for (std::size_t t = 0; t < n; ++t) v[t] -= dot * b[t];
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 1e-9) {
      for (double& x : v) x /= norm;
      basis.push_back(v);
    }
  }

  auto evaluate = [&](const VertexFunction& f) {
    return detail::ratio_objective(f, g, p, GradientMode::full, nullptr);
  };

  double best = 0.0;
  const std::size_t dim = basis.size();
  if (dim == 1) {
    best = evaluate(basis[0]);
  } else if (dim == 2) {
    // Antipodal points give the same ratio; half a turn suffices.
    for (std::size_t j = 0; j < grid_resolution; ++j) {
      const double theta = std::numbers::pi * static_cast<double>(j) /
                           static_cast<double>(grid_resolution);
      VertexFunction f(n, 0.0);
      for (std::size_t t = 0; t < n; ++t) {
        f[t] = std::cos(theta) * basis[0][t] + std::sin(theta) * basis[1][t];
      }
      best = std::max(best, evaluate(f));
    }
  } else {
    for (std::size_t j = 0; j <= grid_resolution; ++j) {
      const double theta = std::numbers::pi * static_cast<double>(j) /
                           static_cast<double>(grid_resolution);
      for (std::size_t k = 0; k < 2 * grid_resolution; ++k) {
        const double phi = std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(grid_resolution);
        VertexFunction f(n, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
          f[t] = std::sin(theta) * std::cos(phi) * basis[0][t] +
                 std::sin(theta) * std::sin(phi) * basis[1][t] + std::cos(theta) * basis[2][t];
        }
        best = std::max(best, evaluate(f));
      }
    }
  }
  return best;
}

/// p = 2 cross-check against the quadratic (Dirichlet-style) form
///   D(f) = sum_t mu(t) sum_{s ~ t} (f(s) - f(t))^2,
/// maximizing ||f||_2 / sqrt(D(f)) by the same projected ascent. Heuristically
/// related to the Poincare ratio only: the length of the gradient is a sum of
/// absolute differences, not a Dirichlet form, and D(f) <= || |grad f| ||_2^2
/// pointwise, so this estimate upper-bounds the p = 2 ratio at the same f.
inline SharpEstimate quadratic_form_sharp_p2(const WeightedGraph& g, std::size_t restarts,
                                             std::size_t iters, std::uint64_t seed) {
  detail::require(g.vertex_count() >= 2, "quadratic_form_sharp_p2: graph must have n >= 2");
  detail::require(restarts >= 1 && iters >= 1,
                  "quadratic_form_sharp_p2: restarts and iters must be positive");
  const std::size_t n = g.vertex_count();

  auto dirichlet = [&](const VertexFunction& f) {
    double acc = 0.0;
    for (std::uint32_t t = 0; t < n; ++t) {
      double local = 0.0;
      for (std::uint32_t s : g.neighbors(t)) {
        const double d = f[s] - f[t];
        local += d * d;
      }
      acc += g.weight(t) * local;
    }
    return acc;
  };
  auto objective = [&](const VertexFunction& f) {
    const double d = dirichlet(f);
    return d == 0.0 ? 0.0 : lp_norm(f, 2.0, g) / std::sqrt(d);
  };

  std::mt19937_64 rng(seed);
  SharpEstimate best;
  for (std::size_t r = 0; r < restarts; ++r) {
    VertexFunction f(n);
    for (double& v : f) v = normal(rng);
    detail::normalize_feasible(f, g, rng);
    for (std::size_t iter = 1; iter <= iters; ++iter) {
      const double value = objective(f);
      if (value > best.ratio) {
        best.ratio = value;
        best.witness = f;
      }
      // grad log(||f||_2) - (1/2) grad log(D)
      const double num_sq = lp_norm(f, 2.0, g);
      const double den = dirichlet(f);
      VertexFunction step(n, 0.0);
      for (std::uint32_t u = 0; u < n; ++u) {
        step[u] += f[u] * g.weight(u) / (num_sq * num_sq);
        double dd = 0.0;
        for (std::uint32_t s : g.neighbors(u)) {
          dd += 2.0 * (g.weight(u) + g.weight(s)) * (f[u] - f[s]);
        }
        step[u] -= dd / (2.0 * den);
      }
      const double scale = 1.0 / std::sqrt(static_cast<double>(iter));
      for (std::size_t i = 0; i < f.size(); ++i) f[i] += scale * step[i];
      detail::normalize_feasible(f, g, rng);
    }
    const double value = objective(f);
    if (value > best.ratio) {
      best.ratio = value;
      best.witness = f;
    }
  }
  return best;
}

}  // namespace graph_poincare
