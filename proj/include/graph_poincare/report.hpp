#pragma once

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace graph_poincare {

/// Renders a double with up to 17 significant digits, enough for exact
/// round-trips through text.
inline std::string real_literal(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

inline std::string int_literal(std::int64_t value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%" PRId64, value);
  return buf;
}

/// JSON string literal with the escapes the graph/report formats need.
inline std::string string_literal(const std::string& value) {
  std::string out;
  out.reserve(value.size() + 2);
  out.push_back('"');
  for (char c : value) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
  return out;
}

/// Structured record of one inequality check. parameters holds pre-rendered
/// JSON literals in insertion order so serialized records are byte-stable.
struct VerificationReport {
  std::string check_name;
  std::vector<std::pair<std::string, std::string>> parameters;
  double measured = 0.0;
  double theoretical = 0.0;
  bool passed = false;
  std::uint64_t seed = 0;
  std::int64_t runtime_ms = 0;

  void param_real(const std::string& key, double value) {
    parameters.emplace_back(key, real_literal(value));
  }
  void param_int(const std::string& key, std::int64_t value) {
    parameters.emplace_back(key, int_literal(value));
  }
  void param_string(const std::string& key, const std::string& value) {
    parameters.emplace_back(key, string_literal(value));
  }
};

}  // namespace graph_poincare
