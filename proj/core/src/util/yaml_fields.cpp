#include "qlink/util/yaml_fields.hpp"

#include <algorithm>
#include <cmath>

#include "qlink/error.hpp"

namespace qlink::yaml {

std::string position(const YAML::Node& node, const std::string& source) {
  const auto mark = node.Mark();
  if (mark.is_null()) return source;
  return source + ":" + std::to_string(mark.line + 1) + ":" + std::to_string(mark.column + 1);
}

void fail(const YAML::Node& node, const std::string& source, const std::string& message) {
  throw ConfigError(position(node, source) + ": " + message);
}

YAML::Node parse(const std::string& text, const std::string& source) {
  try {
    return YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ":" +
                      std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
}

void check_keys(const YAML::Node& map, const std::string& source,
                std::initializer_list<std::string_view> allowed) {
  if (!map.IsMap()) fail(map, source, "expected a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      std::string list;
      for (auto a : allowed) {
        if (!list.empty()) list += ", ";
        list += a;
      }
      fail(kv.first, source, "unknown key '" + key + "' (expected one of: " + list + ")");
    }
  }
}

const YAML::Node require_map(const YAML::Node& parent, const std::string& key,
                             const std::string& source) {
  const YAML::Node child = parent[key];
  if (!child) fail(parent, source, "missing section '" + key + "'");
  if (!child.IsMap()) fail(child, source, "'" + key + "' must be a mapping");
  return child;
}

namespace {

double as_number(const YAML::Node& value, const std::string& key, const std::string& source) {
  if (!value.IsScalar()) fail(value, source, "'" + key + "' must be a number");
  double x = 0.0;
  try {
    x = value.as<double>();
  } catch (const YAML::Exception&) {
    fail(value, source, "'" + key + "' must be a number, got '" + value.Scalar() + "'");
  }
  if (!std::isfinite(x)) fail(value, source, "'" + key + "' must be finite");
  return x;
}

}  // namespace

double number(const YAML::Node& map, const std::string& key, const std::string& source) {
  const YAML::Node v = map[key];
  if (!v) fail(map, source, "missing required key '" + key + "'");
  return as_number(v, key, source);
}

double number_or(const YAML::Node& map, const std::string& key, double fallback,
                 const std::string& source) {
  const YAML::Node v = map[key];
  return v ? as_number(v, key, source) : fallback;
}

std::optional<double> maybe_number(const YAML::Node& map, const std::string& key,
                                   const std::string& source) {
  const YAML::Node v = map[key];
  if (!v) return std::nullopt;
  return as_number(v, key, source);
}

int integer(const YAML::Node& map, const std::string& key, const std::string& source) {
  const YAML::Node v = map[key];
  if (!v) fail(map, source, "missing required key '" + key + "'");
  const double x = as_number(v, key, source);
  if (x != std::floor(x) || std::abs(x) > 2e9) fail(v, source, "'" + key + "' must be an integer");
  return static_cast<int>(x);
}

int integer_or(const YAML::Node& map, const std::string& key, int fallback,
               const std::string& source) {
  return map[key] ? integer(map, key, source) : fallback;
}

std::string string(const YAML::Node& map, const std::string& key, const std::string& source) {
  const YAML::Node v = map[key];
  if (!v) fail(map, source, "missing required key '" + key + "'");
  if (!v.IsScalar()) fail(v, source, "'" + key + "' must be a string");
  return v.Scalar();
}

std::string string_or(const YAML::Node& map, const std::string& key,
                      const std::string& fallback, const std::string& source) {
  return map[key] ? string(map, key, source) : fallback;
}

bool boolean_or(const YAML::Node& map, const std::string& key, bool fallback,
                const std::string& source) {
  const YAML::Node v = map[key];
  if (!v) return fallback;
  try {
    return v.as<bool>();
  } catch (const YAML::Exception&) {
    fail(v, source, "'" + key + "' must be true or false");
  }
}

}  // namespace qlink::yaml
