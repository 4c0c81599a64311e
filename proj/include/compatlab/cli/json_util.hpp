#pragma once

// Strict accessors for config documents: unknown keys and wrong types are
// configuration errors, never silent defaults.

#include "compatlab/error.hpp"

#include "json.hpp"

#include <initializer_list>
#include <string>

namespace compatlab::cli {

inline void require_keys(const nlohmann::json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get_or(const nlohmann::json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ConfigError("'" + key + "' must be a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer() || (std::is_unsigned_v<T> && v.get<long long>() < 0))
      throw ConfigError("'" + key + "' must be a non-negative integer");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  } else {
    if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
  }
  return v.get<T>();
}

template <class T>
T get_required(const nlohmann::json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing '" + key + "' in " + where);
  return get_or<T>(obj, key, T{});
}

}  // namespace compatlab::cli
