/*
 * Copyright 2026 The agreesim Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "json_util.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "agreesim/errors.h"

namespace agreesim::internal {

Json SchemeToJsonValue(const LabelScheme& scheme) {
  Json labels = Json::array();
  for (auto it = scheme.labels().rbegin(); it != scheme.labels().rend();
       ++it) {
    labels.push_back(Json::array({it->value, it->name}));
  }
  Json out = Json::object();
  out["labels"] = std::move(labels);
  out["positive_threshold"] = scheme.positive_threshold();
  return out;
}

LabelScheme SchemeFromJsonValue(const Json& value) {
  const Json& body = value.contains("scheme") ? value.at("scheme") : value;
  if (!body.is_object() || !body.contains("labels")) {
    throw ParseError("scheme: expected an object with a \"labels\" array");
  }
  const Json& labels = body.at("labels");
  if (!labels.is_array()) throw ParseError("scheme: \"labels\" must be an array");
  std::vector<Label> parsed;
  for (const Json& entry : labels) {
    if (entry.is_array() && entry.size() == 2 &&
        entry[0].is_number_integer() && entry[1].is_string()) {
      parsed.push_back({entry[0].get<int>(), entry[1].get<std::string>()});
    } else if (entry.is_number_integer()) {
      parsed.push_back({entry.get<int>(), std::to_string(entry.get<int>())});
    } else {
      throw ParseError("scheme: label entries must be [value, name] pairs");
    }
  }
  if (!body.contains("positive_threshold") ||
      !body.at("positive_threshold").is_number()) {
    throw ParseError("scheme: missing numeric \"positive_threshold\"");
  }
  return LabelScheme(std::move(parsed),
                     body.at("positive_threshold").get<double>());
}

std::string ReadFileToString(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFileAtomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      std::remove(tmp.c_str());
      throw IoError("write failed for " + path);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw IoError("cannot move output into place at " + path + ": " +
                  ec.message());
  }
}

}  // namespace agreesim::internal
