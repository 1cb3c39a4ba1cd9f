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

// Private JSON helpers shared by the serializers.

#ifndef AGREESIM_SRC_JSON_UTIL_H_
#define AGREESIM_SRC_JSON_UTIL_H_

#include <string>

#include "agreesim/label_core.h"
#include "json.hpp"

namespace agreesim::internal {

using Json = nlohmann::ordered_json;

// Labels listed highest value first, the order readers expect to see.
Json SchemeToJsonValue(const LabelScheme& scheme);
LabelScheme SchemeFromJsonValue(const Json& value);

std::string ReadFileToString(const std::string& path);

// Writes through a temporary sibling and renames, so a failed write never
// leaves a truncated file at `path`.
void WriteFileAtomic(const std::string& path, const std::string& contents);

}  // namespace agreesim::internal

#endif  // AGREESIM_SRC_JSON_UTIL_H_
