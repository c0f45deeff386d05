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
#include <string>
#include <vector>

#include "fwadv/tensor.hpp"

namespace fwadv {

/// Binary PGM (1 channel) or PPM (3 channels), maxval 255, pixel = round(255 x)
/// after clamping to [0,1].
std::vector<std::uint8_t> encode_pnm(const ImageTensor& image);

/// Signed perturbation rendered per channel as round(128 + 127 d / max(|d|, 1e-12)).
std::vector<std::uint8_t> encode_perturbation_pnm(const ImageTensor& delta);

struct ImagePaths {
  std::filesystem::path original;
  std::filesystem::path adversarial;
  std::filesystem::path perturbation;
};

/// Writes <stem>_orig, <stem>_adv and <stem>_delta images into dir.
ImagePaths write_images(const ImageTensor& x_ori, const ImageTensor& x_adv,
                        const ImageTensor& delta, const std::filesystem::path& dir,
                        const std::string& stem);

/// Writes bytes to path, surfacing IO failures with the path in the message.
void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void write_file(const std::filesystem::path& path, const std::string& text);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace fwadv
