// Copyright 2026 The fwadv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Internal helpers shared by the config, report and params readers.

#pragma once

#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>

#include <json.hpp>

#include "fwadv/config.hpp"
#include "fwadv/error.hpp"

namespace fwadv::detail {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] inline void schema_error(const std::string& path, const std::string& message) {
  throw ValidationError("schema: " + (path.empty() ? std::string("<root>") : path) + ": " +
                        message);
}

inline json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what(), e.byte);
  }
}

inline std::string child_path(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

template <class T>
T as(const json& j, const std::string& path) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!j.is_boolean()) schema_error(path, "expected a boolean");
    return j.get<bool>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!j.is_string()) schema_error(path, "expected a string");
    return j.get<std::string>();
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!j.is_number()) schema_error(path, "expected a number");
    return j.get<T>();
  } else if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
    if (j.is_number_unsigned()) {
      const auto v = j.get<std::uint64_t>();
      if (v > std::numeric_limits<T>::max()) schema_error(path, "value out of range");
      return static_cast<T>(v);
    }
    if (j.is_number_integer()) schema_error(path, "must be >= 0");
    schema_error(path, "expected a non-negative integer");
  } else {
    static_assert(std::is_integral_v<T>);
    if (!j.is_number_integer()) schema_error(path, "expected an integer");
    const auto v = j.get<std::int64_t>();
    if (v < std::numeric_limits<T>::min() || v > std::numeric_limits<T>::max())
      schema_error(path, "value out of range");
    return static_cast<T>(v);
  }
}

/// Strict object reader: every key must be consumed before finish().
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) schema_error(path_, "expected an object");
  }

  const json* find(std::string_view key) {
    auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    used_.insert(std::string(key));
    return &*it;
  }
  const json& require(std::string_view key) {
    const json* p = find(key);
    if (p == nullptr) schema_error(path(key), "missing required field");
    return *p;
  }
  bool has(std::string_view key) const { return j_.contains(key); }
  std::string path(std::string_view key) const { return child_path(path_, key); }

  template <class T>
  T get(std::string_view key) {
    return as<T>(require(key), path(key));
  }
  template <class T>
  T get(std::string_view key, T fallback) {
    const json* p = find(key);
    return p != nullptr ? as<T>(*p, path(key)) : fallback;
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!used_.contains(item.key())) schema_error(path(item.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string, std::less<>> used_;
};

ordered_json attack_to_json(const AttackConfig& config);
AttackConfig attack_from_json(const json& j, const std::string& path, std::uint64_t default_seed);
ordered_json dataset_to_json(const DatasetSource& source);
DatasetSource dataset_from_json(const json& j, const std::string& path, std::uint64_t default_seed);

}  // namespace fwadv::detail
