#pragma once

// Text writers for command outputs. Doubles go out as %.17g so every value
// round-trips exactly and files compare byte for byte.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lrb/bridge.hpp"

namespace lrb::io {

inline std::string g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// `path_id,time,value`, sorted by (path_id, time).
inline void write_paths_csv(std::ostream& os, std::span<const SamplePath> paths) {
  os << "path_id,time,value\n";
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& p = paths[i];
    for (std::size_t k = 0; k < p.times.size(); ++k) os << i << ',' << g17(p.times[k]) << ',' << g17(p.values[k]) << '\n';
  }
}

/// Flat JSON object writer for records of named doubles, booleans and strings.
class JsonRecord {
 public:
  JsonRecord& num(const std::string& key, double v) {
    add(key, std::isfinite(v) ? g17(v) : std::string("null"));
    return *this;
  }
  JsonRecord& boolean(const std::string& key, bool v) {
    add(key, v ? "true" : "false");
    return *this;
  }
  JsonRecord& str(const std::string& key, const std::string& v) {
    add(key, quote(v));
    return *this;
  }
  JsonRecord& raw(const std::string& key, const std::string& v) {
    add(key, v);
    return *this;
  }
  std::string text() const { return "{" + body_ + "}"; }

  static std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      if (static_cast<unsigned char>(c) < 0x20) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "\\u%04x", c);
        out += buf;
        continue;
      }
      out += c;
    }
    return out + "\"";
  }

 private:
  void add(const std::string& key, const std::string& v) {
    if (!body_.empty()) body_ += ", ";
    body_ += quote(key) + ": " + v;
  }
  std::string body_;
};

inline std::string json_array(const std::vector<std::string>& items, bool multiline = true) {
  if (items.empty()) return "[]";
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (multiline) out += "\n  ";
    out += items[i];
    if (i + 1 < items.size()) out += ",";
  }
  return out + (multiline ? "\n]" : "]");
}

}  // namespace lrb::io
