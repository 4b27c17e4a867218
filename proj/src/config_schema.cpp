// Copyright 2026 The Hotspot IPP Authors
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

// Minimal JSON-schema checker covering the keywords configs/schema.json uses:
// type, enum, properties, required, additionalProperties (boolean),
// items, minItems, maxItems, minimum, maximum, exclusiveMinimum,
// exclusiveMaximum.

#include <string>
#include <vector>

#include <json.hpp>

#include "hotspot/experiment.hpp"

namespace hotspot {
namespace detail {
extern const char kExperimentSchema[];
}

namespace {

using nlohmann::json;

bool has_type(const json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  return false;
}

std::string at(const std::string& path) { return path.empty() ? "/" : path; }

void check(const json& v, const json& schema, const std::string& path, std::vector<std::string>& out) {
  if (schema.contains("type")) {
    const json& t = schema["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = has_type(v, t.get<std::string>());
    } else {
      for (const json& alt : t) ok = ok || has_type(v, alt.get<std::string>());
    }
    if (!ok) {
      out.push_back(at(path) + ": expected " + t.dump() + ", got " + v.type_name());
      return;
    }
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const json& e : schema["enum"]) found = found || e == v;
    if (!found) out.push_back(at(path) + ": " + v.dump() + " is not one of " + schema["enum"].dump());
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (schema.contains("minimum") && x < schema["minimum"].get<double>()) {
      out.push_back(at(path) + ": " + v.dump() + " is below the minimum " + schema["minimum"].dump());
    }
    if (schema.contains("maximum") && x > schema["maximum"].get<double>()) {
      out.push_back(at(path) + ": " + v.dump() + " is above the maximum " + schema["maximum"].dump());
    }
    if (schema.contains("exclusiveMinimum") && x <= schema["exclusiveMinimum"].get<double>()) {
      out.push_back(at(path) + ": " + v.dump() + " must be greater than " + schema["exclusiveMinimum"].dump());
    }
    if (schema.contains("exclusiveMaximum") && x >= schema["exclusiveMaximum"].get<double>()) {
      out.push_back(at(path) + ": " + v.dump() + " must be less than " + schema["exclusiveMaximum"].dump());
    }
  }
  if (v.is_array()) {
    if (schema.contains("minItems") && v.size() < schema["minItems"].get<std::size_t>()) {
      out.push_back(at(path) + ": needs at least " + schema["minItems"].dump() + " items");
    }
    if (schema.contains("maxItems") && v.size() > schema["maxItems"].get<std::size_t>()) {
      out.push_back(at(path) + ": allows at most " + schema["maxItems"].dump() + " items");
    }
    if (schema.contains("items")) {
      for (std::size_t i = 0; i < v.size(); ++i) check(v[i], schema["items"], path + "/" + std::to_string(i), out);
    }
  }
  if (v.is_object()) {
    const json empty = json::object();
    const json& props = schema.contains("properties") ? schema["properties"] : empty;
    if (schema.contains("required")) {
      for (const json& r : schema["required"]) {
        if (!v.contains(r.get<std::string>())) out.push_back(at(path) + ": missing required key '" + r.get<std::string>() + "'");
      }
    }
    const bool closed = schema.contains("additionalProperties") && schema["additionalProperties"] == false;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (props.contains(it.key())) {
        check(it.value(), props[it.key()], path + "/" + it.key(), out);
      } else if (closed) {
        out.push_back(at(path) + ": unknown key '" + it.key() + "'");
      }
    }
  }
}

}  // namespace

const std::string& experiment_schema() {
  static const std::string text(detail::kExperimentSchema);
  return text;
}

std::vector<std::string> validate_config_text(const std::string& json_text) {
  static const json schema = json::parse(experiment_schema());
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    return {std::string("invalid JSON: ") + e.what()};
  }
  std::vector<std::string> out;
  check(doc, schema, "", out);
  return out;
}

}  // namespace hotspot
