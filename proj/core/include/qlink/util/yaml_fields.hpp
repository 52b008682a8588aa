#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

#include <yaml-cpp/yaml.h>

// Typed field access on yaml-cpp nodes. Every failure is a qlink::ConfigError
// whose message starts with "source:line:col:".

namespace qlink::yaml {

std::string position(const YAML::Node& node, const std::string& source);

[[noreturn]] void fail(const YAML::Node& node, const std::string& source,
                       const std::string& message);

/// Parse text into a root node; syntax errors become ConfigError with position.
YAML::Node parse(const std::string& text, const std::string& source);

/// Reject keys not in `allowed`.
void check_keys(const YAML::Node& map, const std::string& source,
                std::initializer_list<std::string_view> allowed);

const YAML::Node require_map(const YAML::Node& parent, const std::string& key,
                             const std::string& source);

double number(const YAML::Node& map, const std::string& key, const std::string& source);
double number_or(const YAML::Node& map, const std::string& key, double fallback,
                 const std::string& source);
std::optional<double> maybe_number(const YAML::Node& map, const std::string& key,
                                   const std::string& source);
int integer(const YAML::Node& map, const std::string& key, const std::string& source);
int integer_or(const YAML::Node& map, const std::string& key, int fallback,
               const std::string& source);
std::string string(const YAML::Node& map, const std::string& key, const std::string& source);
std::string string_or(const YAML::Node& map, const std::string& key,
                      const std::string& fallback, const std::string& source);
bool boolean_or(const YAML::Node& map, const std::string& key, bool fallback,
                const std::string& source);

}  // namespace qlink::yaml
