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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fwadv/dataset.hpp"

namespace fwadv {

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

/// Unsigned-byte IDX container: big-endian magic and dimensions, raw payload.
struct IdxArray {
  std::uint32_t magic = 0;
  std::vector<std::uint32_t> dims;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const IdxArray&, const IdxArray&) = default;
};

/// Decodes an IDX byte stream. Throws FormatError (with byte offset) on a bad
/// magic number, truncated header/payload or trailing bytes.
IdxArray decode_idx(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_idx(const IdxArray& array);

IdxArray read_idx(const std::filesystem::path& path);
void write_idx(const IdxArray& array, const std::filesystem::path& path);

/// Pairs an image array (magic 0x803, dims n x h x w) with a label array
/// (magic 0x801, dim n). Pixels map to [0,1] by /255.
Dataset dataset_from_idx(const IdxArray& images, const IdxArray& labels, std::size_t classes = 10);

Dataset parse_idx(const std::filesystem::path& images_path,
                  const std::filesystem::path& labels_path, std::size_t classes = 10);

/// Inverse of dataset_from_idx; pixels are quantized by round(255 x).
/// Single-channel datasets only.
std::pair<IdxArray, IdxArray> dataset_to_idx(const Dataset& data);

}  // namespace fwadv
