#pragma once

// Reproducible JSON text: sorted keys, two-space indent, 17 significant
// digits for every float. Arrays holding only scalars stay on one line so
// matrix rows remain readable.

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "errors.hpp"

namespace pathoam {

using json = nlohmann::json;

namespace detail {

inline std::string format_double(double v) {
  if (!std::isfinite(v)) throw DomainError("cannot serialize non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

inline bool is_scalar(const json& j) { return !j.is_array() && !j.is_object(); }

inline void dump_value(const json& j, int depth, std::string& out) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close_pad(2 * depth, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {  // std::map order: sorted
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += json(key).dump();
        out += ": ";
        dump_value(value, depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool flat = true;
      for (const auto& e : j) flat = flat && is_scalar(e);
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump_value(j[i], depth + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_value(j[i], depth + 1, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace detail

inline std::string dump_pretty(const json& j) {
  std::string out;
  detail::dump_value(j, 0, out);
  out += "\n";
  return out;
}

inline json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what, e.what());
  }
}

// Field accessors raising ParseError with the JSON path of the offending key.

inline const json& require_field(const json& obj, const std::string& key,
                                 const std::string& path) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "." + key, "missing field");
  return *it;
}

inline double require_double(const json& obj, const std::string& key,
                             const std::string& path) {
  const json& v = require_field(obj, key, path);
  if (!v.is_number()) throw ParseError(path + "." + key, "expected a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(path + "." + key, "non-finite value");
  return d;
}

inline long long require_int(const json& obj, const std::string& key,
                             const std::string& path) {
  const json& v = require_field(obj, key, path);
  if (!v.is_number_integer()) throw ParseError(path + "." + key, "expected an integer");
  return v.get<long long>();
}

inline bool require_bool(const json& obj, const std::string& key,
                         const std::string& path) {
  const json& v = require_field(obj, key, path);
  if (!v.is_boolean()) throw ParseError(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

inline std::string require_string(const json& obj, const std::string& key,
                                  const std::string& path) {
  const json& v = require_field(obj, key, path);
  if (!v.is_string()) throw ParseError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

inline const json& require_array(const json& obj, const std::string& key,
                                 const std::string& path) {
  const json& v = require_field(obj, key, path);
  if (!v.is_array()) throw ParseError(path + "." + key, "expected an array");
  return v;
}

}  // namespace pathoam
