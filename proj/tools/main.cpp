// Command-line surface: generate example graphs, build/optimize spanning
// trees, inspect the John condition, run verification suites, and estimate
// sharp Poincare constants. Reports are line-delimited JSON records; graphs
// travel as versioned JSON documents.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graph_poincare/graph_poincare.hpp"

namespace gp = graph_poincare;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("GRAPH_POINCARE_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      std::cerr << "warning: ignoring malformed GRAPH_POINCARE_SEED\n";
    }
  }
  return 0;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t trial) {
  return base + 0x9e3779b97f4a7c15ULL * (trial + 1);
}

struct ReportSink {
  std::string out_path;
  std::string csv_path;
  bool timing = false;
  std::string lines;
  std::string csv;
  bool all_passed = true;

  void add(const gp::VerificationReport& report) {
    lines += gp::report_to_json_line(report, timing) + "\n";
    if (!csv_path.empty()) csv += gp::report_to_csv_row(report) + "\n";
    all_passed = all_passed && report.passed;
  }

  int flush() {
    write_text(out_path, lines);
    if (!csv_path.empty()) write_text(csv_path, gp::report_csv_header() + "\n" + csv);
    return all_passed ? 0 : 1;
  }
};

// Shared options for the `verify` and `sharp` trial loops.
struct TrialSource {
  std::string in_path;
  std::size_t max_vertices = 200;

  std::optional<gp::GraphDocument> fixed;

  void prepare() {
    if (!in_path.empty()) fixed = gp::load_graph(in_path);
  }

  // Graph + tree for one trial; random graphs alternate weight laws.
  std::pair<gp::WeightedGraph, gp::RootedTree> get(std::size_t trial, std::mt19937_64& rng) {
    if (fixed) {
      gp::WeightedGraph graph = fixed->graph;
      gp::RootedTree tree = fixed->tree ? *fixed->tree
                                        : gp::build_spanning_tree(
                                              graph, 0, gp::SpanningStrategy::breadth_first);
      return {std::move(graph), std::move(tree)};
    }
    const std::size_t n = 2 + gp::uniform_index(rng, max_vertices - 1);
    const double edge_prob = gp::uniform_real(rng, 0.0, 0.15);
    const auto law = trial % 2 == 0
                         ? gp::WeightLaw::uniform(0.5, 2.0)
                         : gp::WeightLaw::exponential_of_depth(gp::uniform_real(rng, 0.4, 0.9));
    gp::WeightedGraph graph = gp::random_connected(n, edge_prob, law, rng());
    gp::RootedTree tree = gp::build_spanning_tree(
        graph, static_cast<std::uint32_t>(gp::uniform_index(rng, n)),
        gp::SpanningStrategy::breadth_first);
    return {std::move(graph), std::move(tree)};
  }
};

std::vector<double> log_lambda_grid(double center, std::size_t count) {
  std::vector<double> grid;
  grid.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double exponent =
        count == 1 ? 0.0 : 2.0 * (static_cast<double>(j) / static_cast<double>(count - 1) - 0.5);
    grid.push_back(center * std::pow(10.0, exponent));
  }
  return grid;
}

gp::VerificationReport from_hardy(const gp::HardyBoundReport& r, std::size_t trial,
                                  std::uint64_t seed) {
  gp::VerificationReport report;
  report.check_name = std::string("hardy.") + (r.bound_kind == gp::HardyBoundReport::Kind::strong_infinity
                                                   ? "strong_infinity"
                                                   : r.bound_kind == gp::HardyBoundReport::Kind::weak_1_1
                                                         ? "weak_1_1"
                                                         : "strong_qq");
  report.param_int("trial", static_cast<std::int64_t>(trial));
  if (!std::isnan(r.q)) report.param_real("q", r.q);
  if (!std::isnan(r.lambda)) report.param_real("lambda", r.lambda);
  report.measured = r.measured;
  report.theoretical = r.theoretical;
  report.passed = r.passed;
  report.seed = seed;
  return report;
}

gp::VerificationReport from_poincare(const gp::PoincareReport& r, const char* name,
                                     std::size_t trial, std::uint64_t seed) {
  gp::VerificationReport report;
  report.check_name = name;
  report.param_int("trial", static_cast<std::int64_t>(trial));
  report.param_real("p", r.p);
  report.param_string("gradient_mode", gp::to_string(r.gradient_mode));
  report.param_real("c", r.john_constant_c);
  report.param_int("M", static_cast<std::int64_t>(r.degree_bound_M));
  report.measured = r.ratio;
  report.theoretical = r.theoretical_cp;
  report.passed = r.passes;
  report.seed = seed;
  return report;
}

int run_verify(const std::string& suite, TrialSource& source, std::size_t trials,
               std::uint64_t seed, double p, double q, std::size_t lambda_count,
               ReportSink& sink) {
  source.prepare();
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = mix_seed(seed, trial);
    std::mt19937_64 rng(trial_seed);
    auto [graph, tree] = source.get(trial, rng);
    const gp::ShadowSummary summary = gp::shadow_summary(graph, tree);

    if (suite == "hardy") {
      gp::VertexFunction f = gp::random_test_function(graph, tree, trial, rng);
      sink.add(from_hardy(gp::verify_strong_infinity(graph, tree, summary, f, trial_seed), trial,
                          seed));
      if (gp::lp_norm(f, std::numeric_limits<double>::infinity(), graph) > 0.0) {
        const double center = gp::lp_norm(f, 1.0, graph) / graph.total_measure();
        for (const auto& r :
             gp::verify_weak_11(graph, tree, summary, f, log_lambda_grid(center, lambda_count),
                                trial_seed)) {
          sink.add(from_hardy(r, trial, seed));
        }
      }
      sink.add(from_hardy(gp::verify_strong_qq(graph, tree, summary, f, q, trial_seed), trial,
                          seed));
    } else if (suite == "decomp") {
      gp::VertexFunction f =
          gp::project_zero_mean(gp::random_test_function(graph, tree, trial, rng), graph);
      const gp::EdgeDecomposition d = gp::decompose(f, graph, tree);
      const gp::VertexFunction rebuilt = gp::reconstruct(d, graph, tree);
      const double sup = gp::lp_norm(f, std::numeric_limits<double>::infinity(), graph);
      const double tolerance = 1e-10 * sup * graph.total_measure();

      gp::VerificationReport reconstruction;
      reconstruction.check_name = "decomp.reconstruction";
      reconstruction.param_int("trial", static_cast<std::int64_t>(trial));
      double max_err = 0.0;
      for (std::size_t s = 0; s < rebuilt.size(); ++s) {
        max_err = std::max(max_err, std::abs(rebuilt[s] - f[s]));
      }
      reconstruction.measured = max_err;
      reconstruction.theoretical = tolerance;
      reconstruction.passed = max_err <= tolerance;
      reconstruction.seed = seed;
      sink.add(reconstruction);

      gp::VerificationReport zero_sum;
      zero_sum.check_name = "decomp.zero_sum";
      zero_sum.param_int("trial", static_cast<std::int64_t>(trial));
      double max_piece = 0.0;
      for (std::uint32_t t = 0; t < graph.vertex_count(); ++t) {
        if (t == d.root) continue;
        max_piece = std::max(max_piece, std::abs(d.value_at_vertex[t] * graph.weight(t) +
                                                 d.value_at_parent[t] * graph.weight(d.parent[t])));
      }
      zero_sum.measured = max_piece;
      zero_sum.theoretical = tolerance;
      zero_sum.passed = max_piece <= tolerance;
      zero_sum.seed = seed;
      sink.add(zero_sum);

      auto energy = gp::verify_energy_bound(f, graph, tree, summary, q, trial_seed);
      energy.param_int("trial", static_cast<std::int64_t>(trial));
      energy.seed = seed;
      sink.add(energy);
    } else if (suite == "poincare") {
      gp::VertexFunction f =
          gp::project_zero_mean(gp::random_test_function(graph, tree, trial, rng), graph);
      if (gp::lp_norm(f, std::numeric_limits<double>::infinity(), graph) == 0.0) continue;
      sink.add(from_poincare(gp::global_ratio(f, graph, tree, summary, p, gp::GradientMode::full),
                             "poincare.global", trial, seed));
      sink.add(from_poincare(
          gp::global_ratio(f, graph, tree, summary, p, gp::GradientMode::tree_restricted),
          "poincare.global", trial, seed));
    } else if (suite == "local") {
      if (graph.vertex_count() < 2) continue;
      std::uint32_t t = static_cast<std::uint32_t>(gp::uniform_index(rng, graph.vertex_count()));
      while (t == tree.root()) {
        t = static_cast<std::uint32_t>(gp::uniform_index(rng, graph.vertex_count()));
      }
      const std::uint32_t tp = tree.parent(t);
      gp::VertexFunction f(graph.vertex_count(), 0.0);
      const double scale = gp::uniform_real(rng, 0.1, 10.0);
      f[t] = scale * graph.weight(tp);
      f[tp] = -scale * graph.weight(t);
      auto report = from_poincare(gp::local_edge_check(f, graph, tree, t, p), "poincare.local",
                                  trial, seed);
      sink.add(report);
    } else {
      throw std::runtime_error("unknown verify suite '" + suite + "'");
    }
  }
  return sink.flush();
}

void print_john_summary(const gp::GraphDocument& doc, double warn_threshold) {
  const gp::WeightedGraph& graph = doc.graph;
  gp::RootedTree tree = doc.tree ? *doc.tree
                                 : gp::build_spanning_tree(graph, 0,
                                                           gp::SpanningStrategy::breadth_first);
  if (!doc.tree) {
    std::cerr << "note: document has no tree; using breadth-first tree rooted at 0\n";
  }
  const gp::ShadowSummary summary = gp::shadow_summary(graph, tree);
  std::cout << "vertices = " << graph.vertex_count() << "\n";
  std::cout << "total measure = " << gp::real_literal(graph.total_measure()) << "\n";
  std::cout << "root = " << tree.root() << "\n";
  std::cout << "john constant c = " << gp::real_literal(summary.john_constant) << "\n";
  std::cout << "tree degree bound M = " << summary.tree_degree_bound << "\n";

  std::vector<std::uint32_t> order(graph.vertex_count());
  for (std::uint32_t v = 0; v < order.size(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&summary](std::uint32_t a, std::uint32_t b) {
    return summary.ratio[a] > summary.ratio[b];
  });
  std::cout << "worst ratios mu(S_t)/mu(t):\n";
  for (std::size_t i = 0; i < std::min<std::size_t>(5, order.size()); ++i) {
    const std::uint32_t v = order[i];
    std::cout << "  vertex " << v;
    if (v < doc.labels.size() && !doc.labels[v].empty()) {
      std::cout << " (label " << doc.labels[v] << ")";
    }
    std::cout << ": " << gp::real_literal(summary.ratio[v]) << "\n";
  }
  if (summary.john_constant > warn_threshold) {
    std::cout << "warning: john constant exceeds " << gp::real_literal(warn_threshold)
              << "; the family may not be uniformly John (ratios grow with truncation)\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rooted-tree John condition, Hardy averaging operator, and Poincare "
               "inequality toolkit for finite weighted graphs"};
  app.require_subcommand(1);
  std::uint64_t seed = default_seed();

  // --- gen ---
  auto* gen = app.add_subcommand("gen", "Generate a graph document");
  gen->require_subcommand(1);
  std::string gen_out;

  auto* gen_kary = gen->add_subcommand("kary", "Weighted rooted k-ary tree, mu = alpha^depth");
  std::size_t kary_k = 2, kary_depth = 2;
  double kary_alpha = 0.25;
  gen_kary->add_option("--k", kary_k, "children per vertex")->capture_default_str();
  gen_kary->add_option("--depth", kary_depth, "truncation depth")->capture_default_str();
  gen_kary->add_option("--alpha", kary_alpha, "weight base, 0 < alpha < 1/k")
      ->capture_default_str();
  gen_kary->add_option("--out", gen_out, "output path (default stdout)");

  auto* gen_logpath = gen->add_subcommand(
      "logpath", "Path on labels 2..N with mu(n) = 1/(n ln(n)^gamma)");
  std::size_t logpath_n = 1000;
  double logpath_gamma = 2.0;
  gen_logpath->add_option("--n", logpath_n, "largest label N")->capture_default_str();
  gen_logpath->add_option("--gamma", logpath_gamma, "exponent gamma > 1")->capture_default_str();
  gen_logpath->add_option("--out", gen_out, "output path (default stdout)");

  auto* gen_random = gen->add_subcommand("random", "Random connected graph");
  std::size_t random_n = 50;
  double random_prob = 0.1;
  std::string random_law = "uniform";
  double random_a = 0.5, random_b = 2.0, random_alpha = 0.6;
  gen_random->add_option("--n", random_n, "vertex count")->capture_default_str();
  gen_random->add_option("--edge-prob", random_prob, "extra edge probability")
      ->capture_default_str();
  gen_random->add_option("--law", random_law, "weight law: uniform | expdepth")
      ->capture_default_str();
  gen_random->add_option("--a", random_a, "uniform law lower bound")->capture_default_str();
  gen_random->add_option("--b", random_b, "uniform law upper bound")->capture_default_str();
  gen_random->add_option("--alpha", random_alpha, "expdepth law base")->capture_default_str();
  gen_random->add_option("--seed", seed, "RNG seed (overrides GRAPH_POINCARE_SEED)");
  gen_random->add_option("--out", gen_out, "output path (default stdout)");

  auto* gen_grid = gen->add_subcommand("grid", "nx-by-ny lattice, unit weights");
  std::size_t grid_nx = 3, grid_ny = 3;
  gen_grid->add_option("--nx", grid_nx, "columns")->capture_default_str();
  gen_grid->add_option("--ny", grid_ny, "rows")->capture_default_str();
  gen_grid->add_option("--out", gen_out, "output path (default stdout)");

  // --- tree ---
  auto* tree_cmd = app.add_subcommand("tree", "Build or optimize a rooted spanning tree");
  std::string tree_in, tree_out, tree_strategy = "bfs", tree_optimize;
  std::uint32_t tree_root = 0;
  std::size_t tree_budget = 10000;
  tree_cmd->add_option("--in", tree_in, "input graph document")->required();
  tree_cmd->add_option("--out", tree_out, "output path (default stdout)");
  tree_cmd->add_option("--root", tree_root, "root vertex id")->capture_default_str();
  tree_cmd->add_option("--strategy", tree_strategy, "bfs | dfs")->capture_default_str();
  tree_cmd->add_option("--optimize", tree_optimize,
                       "search for a low-c tree instead: exhaustive | greedy");
  tree_cmd->add_option("--budget", tree_budget, "greedy evaluation budget")->capture_default_str();
  tree_cmd->add_option("--seed", seed, "RNG seed (overrides GRAPH_POINCARE_SEED)");

  // --- john ---
  auto* john = app.add_subcommand("john", "Print the shadow summary of a rooted tree");
  std::string john_in;
  double john_warn = 10.0;
  john->add_option("--in", john_in, "input graph document")->required();
  john->add_option("--warn-threshold", john_warn, "warn when c exceeds this")
      ->capture_default_str();

  // --- verify ---
  auto* verify = app.add_subcommand("verify", "Run a verification suite, one JSON record per check");
  std::string verify_suite, verify_in, verify_out, verify_csv;
  std::size_t verify_trials = 100, verify_lambdas = 20, verify_nmax = 200;
  double verify_p = 2.0, verify_q = 2.0;
  bool verify_timing = false;
  verify->add_option("suite", verify_suite, "hardy | decomp | poincare | local")->required();
  verify->add_option("--in", verify_in, "verify this graph (default: random corpus)");
  verify->add_option("--trials", verify_trials, "number of trials")->capture_default_str();
  verify->add_option("--seed", seed, "RNG seed (overrides GRAPH_POINCARE_SEED)");
  verify->add_option("--p", verify_p, "Poincare exponent")->capture_default_str();
  verify->add_option("--q", verify_q, "Hardy/energy exponent")->capture_default_str();
  verify->add_option("--lambdas", verify_lambdas, "weak (1,1) grid size")->capture_default_str();
  verify->add_option("--n-max", verify_nmax, "random corpus size cap")->capture_default_str();
  verify->add_option("--out", verify_out, "report stream path (default stdout)");
  verify->add_option("--csv", verify_csv, "also write a CSV sweep");
  verify->add_flag("--timing", verify_timing, "include runtime_ms in records");

  // --- sharp ---
  auto* sharp = app.add_subcommand("sharp", "Estimate the sharp Poincare constant");
  std::string sharp_in, sharp_out, sharp_csv;
  double sharp_p = 2.0;
  std::size_t sharp_restarts = 8, sharp_iters = 300;
  sharp->add_option("--in", sharp_in, "input graph document")->required();
  sharp->add_option("--p", sharp_p, "exponent")->capture_default_str();
  sharp->add_option("--restarts", sharp_restarts, "ascent restarts")->capture_default_str();
  sharp->add_option("--iters", sharp_iters, "iterations per restart")->capture_default_str();
  sharp->add_option("--seed", seed, "RNG seed (overrides GRAPH_POINCARE_SEED)");
  sharp->add_option("--out", sharp_out, "report stream path (default stdout)");
  sharp->add_option("--csv", sharp_csv, "also write a CSV row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      gp::GraphDocument doc = [&]() -> gp::GraphDocument {
        if (gen_kary->parsed()) {
          auto [graph, tree] = gp::kary_tree(kary_k, kary_depth, kary_alpha);
          return {std::move(graph), std::move(tree), {}, gp::kGraphFormatVersion};
        }
        if (gen_logpath->parsed()) {
          auto result = gp::log_path(logpath_n, logpath_gamma);
          std::vector<std::string> labels;
          labels.reserve(result.labels.size());
          for (std::uint32_t label : result.labels) labels.push_back(std::to_string(label));
          return {std::move(result.graph), std::move(result.tree), std::move(labels),
                  gp::kGraphFormatVersion};
        }
        if (gen_random->parsed()) {
          const auto law = random_law == "uniform"
                               ? gp::WeightLaw::uniform(random_a, random_b)
                               : gp::WeightLaw::exponential_of_depth(random_alpha);
          return {gp::random_connected(random_n, random_prob, law, seed), std::nullopt, {},
                  gp::kGraphFormatVersion};
        }
        return {gp::grid(grid_nx, grid_ny), std::nullopt, {}, gp::kGraphFormatVersion};
      }();
      write_text(gen_out, gp::render_graph_document(doc));
      return 0;
    }

    if (tree_cmd->parsed()) {
      gp::GraphDocument doc = gp::load_graph(tree_in);
      if (!tree_optimize.empty()) {
        const auto mode = tree_optimize == "exhaustive" ? gp::TreeSearchMode::exhaustive
                                                        : gp::TreeSearchMode::greedy_local;
        auto result = gp::optimize_tree(doc.graph, tree_budget, seed, mode);
        std::cerr << "c = " << gp::real_literal(result.summary.john_constant)
                  << ", M = " << result.summary.tree_degree_bound
                  << ", root = " << result.tree.root() << "\n";
        doc.tree = std::move(result.tree);
      } else {
        const auto strategy = tree_strategy == "dfs" ? gp::SpanningStrategy::depth_first
                                                     : gp::SpanningStrategy::breadth_first;
        doc.tree = gp::build_spanning_tree(doc.graph, tree_root, strategy);
        const auto summary = gp::shadow_summary(doc.graph, *doc.tree);
        std::cerr << "c = " << gp::real_literal(summary.john_constant)
                  << ", M = " << summary.tree_degree_bound << ", root = " << doc.tree->root()
                  << "\n";
      }
      write_text(tree_out, gp::render_graph_document(doc));
      return 0;
    }

    if (john->parsed()) {
      print_john_summary(gp::load_graph(john_in), john_warn);
      return 0;
    }

    if (verify->parsed()) {
      TrialSource source;
      source.in_path = verify_in;
      source.max_vertices = verify_nmax;
      ReportSink sink;
      sink.out_path = verify_out;
      sink.csv_path = verify_csv;
      sink.timing = verify_timing;
      return run_verify(verify_suite, source, verify_trials, seed, verify_p, verify_q,
                        verify_lambdas, sink);
    }

    if (sharp->parsed()) {
      gp::GraphDocument doc = gp::load_graph(sharp_in);
      gp::RootedTree tree = doc.tree ? *doc.tree
                                     : gp::build_spanning_tree(
                                           doc.graph, 0, gp::SpanningStrategy::breadth_first);
      const gp::ShadowSummary summary = gp::shadow_summary(doc.graph, tree);
      const auto estimate =
          gp::estimate_sharp_constant(doc.graph, sharp_p, sharp_restarts, sharp_iters, seed);
      const double bound = gp::theoretical_constant(summary.john_constant,
                                                    summary.tree_degree_bound, sharp_p);
      gp::VerificationReport report;
      report.check_name = "poincare.sharp_estimate";
      report.param_real("p", sharp_p);
      report.param_int("restarts", static_cast<std::int64_t>(sharp_restarts));
      report.param_int("iters", static_cast<std::int64_t>(sharp_iters));
      report.param_real("c", summary.john_constant);
      report.param_int("M", static_cast<std::int64_t>(summary.tree_degree_bound));
      report.measured = estimate.ratio;
      report.theoretical = bound;
      report.passed = estimate.ratio <= bound;
      report.seed = seed;
      ReportSink sink;
      sink.out_path = sharp_out;
      sink.csv_path = sharp_csv;
      sink.add(report);
      std::cerr << "sharp estimate = " << gp::real_literal(estimate.ratio)
                << ", theoretical bound = " << gp::real_literal(bound) << "\n";
      return sink.flush();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
