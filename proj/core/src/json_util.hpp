// Copyright 2026 The mgtloc Authors.
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

#ifndef MGTLOC_SRC_JSON_UTIL_HPP_
#define MGTLOC_SRC_JSON_UTIL_HPP_

#include <string>
#include <string_view>

#include "json.hpp"
#include "mgtloc/errors.hpp"
#include "mgtloc/types.hpp"

namespace mgtloc::detail {

using Json = nlohmann::ordered_json;

inline Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DataError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

inline const Json& require(const Json& object, const char* key,
                           std::string_view what) {
  if (!object.is_object()) {
    throw DataError(std::string(what) + ": expected a JSON object");
  }
  const auto it = object.find(key);
  if (it == object.end()) {
    throw DataError(std::string(what) + ": missing key '" + key + "'");
  }
  return *it;
}

template <typename T>
T get_as(const Json& value, const char* key, std::string_view what) {
  try {
    return value.get<T>();
  } catch (const Json::exception& e) {
    throw DataError(std::string(what) + ": key '" + key +
                    "' has the wrong type: " + e.what());
  }
}

template <typename T>
T require_as(const Json& object, const char* key, std::string_view what) {
  return get_as<T>(require(object, key, what), key, what);
}

inline std::string dump_line(const Json& j) {
  return j.dump(-1, ' ', false, Json::error_handler_t::strict);
}

inline Json sampling_to_json(const Sampling& sampling) {
  Json j;
  j["method"] = std::string(sampling_method_name(sampling.method));
  j["k"] = sampling.k ? Json(*sampling.k) : Json(nullptr);
  j["p"] = sampling.p ? Json(*sampling.p) : Json(nullptr);
  return j;
}

// A null value gives the default (external) descriptor.
inline Sampling sampling_from_json(const Json& j, std::string_view what) {
  Sampling sampling;
  if (j.is_null()) return sampling;
  sampling.method =
      parse_sampling_method(require_as<std::string>(j, "method", what));
  if (const auto k = j.find("k"); k != j.end() && !k->is_null()) {
    sampling.k = get_as<int>(*k, "k", what);
  }
  if (const auto p = j.find("p"); p != j.end() && !p->is_null()) {
    sampling.p = get_as<double>(*p, "p", what);
  }
  return sampling;
}

}  // namespace mgtloc::detail

#endif  // MGTLOC_SRC_JSON_UTIL_HPP_
