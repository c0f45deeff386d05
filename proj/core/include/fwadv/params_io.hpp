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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "fwadv/tinynet.hpp"

namespace fwadv {

inline constexpr int kParamsFormatVersion = 1;

/// JSON manifest with the spec, seed, format version and per-layer arrays as
/// base64 of little-endian IEEE-754 doubles.
std::string serialize_params(const NetParams& params);

/// Throws FormatError for syntax errors (byte offset), VersionError for an
/// unsupported version and ValidationError (with the JSON path) for
/// structural problems. Never returns partially filled parameters.
NetParams deserialize_params(std::string_view text);

void save_params(const NetParams& params, const std::filesystem::path& path);
NetParams load_params(const std::filesystem::path& path);

}  // namespace fwadv
