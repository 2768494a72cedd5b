#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "graph_poincare/graph.hpp"
#include "graph_poincare/report.hpp"
#include "graph_poincare/tree.hpp"

namespace graph_poincare {

inline constexpr int kGraphFormatVersion = 1;

/// On-disk graph document: a weighted graph, an optional rooted spanning tree,
/// and optional per-vertex labels (empty string = no label). Ids are dense
/// 0..n-1 after load normalization.
struct GraphDocument {
  WeightedGraph graph;
  std::optional<RootedTree> tree;
  std::vector<std::string> labels;
  int format_version = kGraphFormatVersion;
};

namespace detail {

[[noreturn]] inline void doc_error(const std::string& context, const std::string& message) {
  throw std::runtime_error("graph document: " + context + ": " + message);
}

inline const nlohmann::json& doc_field(const nlohmann::json& obj, const char* key,
                                       const std::string& context) {
  if (!obj.contains(key)) doc_error(context, std::string("missing field '") + key + "'");
  return obj.at(key);
}

}  // namespace detail

/// Parses and validates a graph document. Vertex ids in the file may be any
/// distinct nonnegative integers; they are normalized to 0..n-1 in ascending
/// order of the original id. Errors carry the offending field.
inline GraphDocument parse_graph_document(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("graph document: parse failure: ") + e.what());
  }
  if (!doc.is_object()) detail::doc_error("root", "expected an object");

  const auto& version = detail::doc_field(doc, "format_version", "root");
  if (!version.is_number_integer() || version.get<int>() != kGraphFormatVersion) {
    detail::doc_error("format_version", "unsupported version");
  }

  const auto& vertices = detail::doc_field(doc, "vertices", "root");
  if (!vertices.is_array() || vertices.empty()) {
    detail::doc_error("vertices", "expected a nonempty array");
  }

  std::map<std::int64_t, std::pair<double, std::string>> by_id;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string context = "vertices[" + std::to_string(i) + "]";
    const auto& v = vertices[i];
    if (!v.is_object()) detail::doc_error(context, "expected an object");
    const auto& id = detail::doc_field(v, "id", context);
    if (!id.is_number_integer() || id.get<std::int64_t>() < 0) {
      detail::doc_error(context + ".id", "expected a nonnegative integer");
    }
    const auto& mu = detail::doc_field(v, "mu", context);
    if (!mu.is_number()) detail::doc_error(context + ".mu", "expected a number");
    const double w = mu.get<double>();
    if (!(w > 0.0) || !std::isfinite(w)) detail::doc_error(context + ".mu", "nonpositive weight");
    std::string label;
    if (v.contains("label")) {
      if (!v.at("label").is_string()) detail::doc_error(context + ".label", "expected a string");
      label = v.at("label").get<std::string>();
    }
    if (!by_id.emplace(id.get<std::int64_t>(), std::make_pair(w, label)).second) {
      detail::doc_error(context + ".id", "duplicate vertex id");
    }
  }

  std::map<std::int64_t, std::uint32_t> dense;
  std::vector<double> weights;
  std::vector<std::string> labels;
  bool any_label = false;
  for (const auto& [id, entry] : by_id) {
    dense[id] = static_cast<std::uint32_t>(weights.size());
    weights.push_back(entry.first);
    labels.push_back(entry.second);
    any_label = any_label || !entry.second.empty();
  }
  if (!any_label) labels.clear();

  auto lookup = [&dense](const nlohmann::json& id, const std::string& context) {
    if (!id.is_number_integer()) detail::doc_error(context, "expected an integer vertex id");
    const auto it = dense.find(id.get<std::int64_t>());
    if (it == dense.end()) detail::doc_error(context, "dangling vertex id");
    return it->second;
  };

  const auto& edges_json = detail::doc_field(doc, "edges", "root");
  if (!edges_json.is_array()) detail::doc_error("edges", "expected an array");
  std::vector<Edge> edges;
  edges.reserve(edges_json.size());
  for (std::size_t i = 0; i < edges_json.size(); ++i) {
    const std::string context = "edges[" + std::to_string(i) + "]";
    const auto& e = edges_json[i];
    if (!e.is_array() || e.size() != 2) detail::doc_error(context, "expected an [id, id] pair");
    edges.emplace_back(lookup(e[0], context + "[0]"), lookup(e[1], context + "[1]"));
  }

  std::optional<WeightedGraph> graph;
  try {
    graph.emplace(std::move(weights), edges);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("graph document: ") + e.what());
  }

  std::optional<RootedTree> tree;
  if (doc.contains("tree") && !doc.at("tree").is_null()) {
    const auto& tree_json = doc.at("tree");
    if (!tree_json.is_object()) detail::doc_error("tree", "expected an object");
    const std::uint32_t root = lookup(detail::doc_field(tree_json, "root", "tree"), "tree.root");
    const auto& parent_json = detail::doc_field(tree_json, "parent", "tree");
    if (!parent_json.is_object()) detail::doc_error("tree.parent", "expected an id-to-id map");
    std::vector<std::uint32_t> parent(graph->vertex_count(), kNoVertex);
    for (const auto& [raw_key, value] : parent_json.items()) {
      std::int64_t key_id = 0;
      try {
        key_id = std::stoll(raw_key);
      } catch (...) {
        detail::doc_error("tree.parent", "non-integer key '" + raw_key + "'");
      }
      const auto it = dense.find(key_id);
      if (it == dense.end()) detail::doc_error("tree.parent", "dangling vertex id " + raw_key);
      const std::uint32_t child = it->second;
      if (child == root) detail::doc_error("tree.parent", "root must not have a parent entry");
      parent[child] = lookup(value, "tree.parent[" + raw_key + "]");
    }
    try {
      tree.emplace(*graph, root, std::move(parent));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(std::string("graph document: tree: ") + e.what());
    }
  }

  GraphDocument out{std::move(*graph), std::move(tree), std::move(labels), kGraphFormatVersion};
  return out;
}

/// Renders the document in the canonical byte-stable form: fixed key order,
/// vertices ascending by id, edges as sorted (min,max) pairs, reals with 17
/// significant digits.
inline std::string render_graph_document(const GraphDocument& doc) {
  const WeightedGraph& g = doc.graph;
  std::string out;
  out += "{\n";
  out += "  \"format_version\": " + int_literal(doc.format_version) + ",\n";
  out += "  \"vertices\": [\n";
  for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
    out += "    {\"id\": " + int_literal(v) + ", \"mu\": " + real_literal(g.weight(v));
    if (v < doc.labels.size() && !doc.labels[v].empty()) {
      out += ", \"label\": " + string_literal(doc.labels[v]);
    }
    out += v + 1 < g.vertex_count() ? "},\n" : "}\n";
  }
  out += "  ],\n";
  const std::vector<Edge> edges = g.edges();
  out += "  \"edges\": [";
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i % 8 == 0) out += "\n    ";
    out += "[" + int_literal(edges[i].first) + ", " + int_literal(edges[i].second) + "]";
    if (i + 1 < edges.size()) out += ", ";
  }
  out += edges.empty() ? "]" : "\n  ]";
  if (doc.tree) {
    out += ",\n  \"tree\": {\"root\": " + int_literal(doc.tree->root()) + ", \"parent\": {";
    bool first = true;
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
      if (v == doc.tree->root()) continue;
      if (!first) out += ", ";
      first = false;
      out += "\"" + int_literal(v) + "\": " + int_literal(doc.tree->parent(v));
    }
    out += "}}";
  }
  out += "\n}\n";
  return out;
}

inline GraphDocument load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("graph document: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_graph_document(buffer.str());
}

inline void save_graph(const GraphDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("graph document: cannot open '" + path + "' for writing");
  out << render_graph_document(doc);
  if (!out) throw std::runtime_error("graph document: write failure on '" + path + "'");
}

/// One report record as a single JSON line, keys in fixed order. runtime_ms is
/// emitted only on request so that repeated runs stay byte-identical.
inline std::string report_to_json_line(const VerificationReport& report,
                                       bool include_runtime = false) {
  std::string out = "{\"check_name\": " + string_literal(report.check_name) + ", \"parameters\": {";
  for (std::size_t i = 0; i < report.parameters.size(); ++i) {
    if (i > 0) out += ", ";
    out += string_literal(report.parameters[i].first) + ": " + report.parameters[i].second;
  }
  out += "}, \"measured\": " + real_literal(report.measured);
  out += ", \"theoretical\": " + real_literal(report.theoretical);
  out += std::string(", \"passed\": ") + (report.passed ? "true" : "false");
  out += ", \"seed\": " + int_literal(static_cast<std::int64_t>(report.seed));
  if (include_runtime) out += ", \"runtime_ms\": " + int_literal(report.runtime_ms);
  out += "}";
  return out;
}

/// Fixed-schema CSV row for ratio sweeps; absent parameters stay blank.
inline std::string report_csv_header() {
  return "check_name,trial,p,q,lambda,measured,theoretical,passed,seed";
}

inline std::string report_to_csv_row(const VerificationReport& report) {
  auto find = [&report](const char* key) -> std::string {
    for (const auto& [k, v] : report.parameters) {
      if (k == key) return v;
    }
    return "";
  };
  std::string out = report.check_name;
  out += "," + find("trial");
  out += "," + find("p");
  out += "," + find("q");
  out += "," + find("lambda");
  out += "," + real_literal(report.measured);
  out += "," + real_literal(report.theoretical);
  out += report.passed ? ",true" : ",false";
  out += "," + int_literal(static_cast<std::int64_t>(report.seed));
  return out;
}

}  // namespace graph_poincare
