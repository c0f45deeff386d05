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

#include "fwadv/idx.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "fwadv/error.hpp"
#include "fwadv/pnm.hpp"

namespace fwadv {
namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) |
         (std::uint32_t{b[at + 2]} << 8) | std::uint32_t{b[at + 3]};
}

void write_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::string hex(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08x", v);
  return buf;
}

IdxArray decode_named(std::span<const std::uint8_t> bytes, const std::string& name) {
  if (bytes.size() < 4) throw FormatError(name + ": truncated IDX magic", bytes.size());
  IdxArray out;
  out.magic = read_be32(bytes, 0);
  if (bytes[0] != 0 || bytes[1] != 0) throw FormatError(name + ": bad IDX magic " + hex(out.magic), 0);
  if (bytes[2] != 0x08)
    throw FormatError(name + ": unsupported IDX element type (only unsigned bytes)", 2);
  const std::size_t ndims = bytes[3];
  if (ndims == 0) throw FormatError(name + ": IDX magic declares zero dimensions", 3);
  const std::size_t header = 4 + 4 * ndims;
  if (bytes.size() < header) throw FormatError(name + ": truncated IDX dimensions", bytes.size());
  std::size_t expected = 1;
  for (std::size_t d = 0; d < ndims; ++d) {
    const std::uint32_t n = read_be32(bytes, 4 + 4 * d);
    out.dims.push_back(n);
    if (n != 0 && expected > (std::size_t{1} << 40) / n)
      throw FormatError(name + ": IDX dimensions too large", 4 + 4 * d);
    expected *= n;
  }
  const std::size_t payload = bytes.size() - header;
  if (payload < expected)
    throw FormatError(name + ": truncated IDX payload, expected " + std::to_string(expected) +
                          " bytes, found " + std::to_string(payload),
                      bytes.size());
  if (payload > expected)
    throw FormatError(name + ": " + std::to_string(payload - expected) +
                          " trailing bytes after IDX payload",
                      header + expected);
  out.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header), bytes.end());
  return out;
}

}  // namespace

IdxArray decode_idx(std::span<const std::uint8_t> bytes) { return decode_named(bytes, "IDX"); }

std::vector<std::uint8_t> encode_idx(const IdxArray& array) {
  std::size_t expected = 1;
  for (auto d : array.dims) expected *= d;
  if (array.dims.empty() || array.dims.size() > 255 || expected != array.payload.size())
    throw ValidationError("IDX payload length does not match its dimensions");
  if (array.magic != (0x00000800u | static_cast<std::uint32_t>(array.dims.size())))
    throw ValidationError("IDX magic " + hex(array.magic) + " does not describe " +
                          std::to_string(array.dims.size()) + " unsigned-byte dimensions");
  std::vector<std::uint8_t> out;
  out.reserve(4 + 4 * array.dims.size() + array.payload.size());
  write_be32(out, array.magic);
  for (auto d : array.dims) write_be32(out, d);
  out.insert(out.end(), array.payload.begin(), array.payload.end());
  return out;
}

IdxArray read_idx(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return decode_named(bytes, path.string());
}

void write_idx(const IdxArray& array, const std::filesystem::path& path) {
  write_file(path, encode_idx(array));
}

Dataset dataset_from_idx(const IdxArray& images, const IdxArray& labels, std::size_t classes) {
  if (images.magic != kIdxImagesMagic || images.dims.size() != 3)
    throw FormatError("image file: expected magic " + hex(kIdxImagesMagic) + ", found " +
                          hex(images.magic),
                      0);
  if (labels.magic != kIdxLabelsMagic || labels.dims.size() != 1)
    throw FormatError("label file: expected magic " + hex(kIdxLabelsMagic) + ", found " +
                          hex(labels.magic),
                      0);
  const std::size_t n = images.dims[0];
  if (labels.dims[0] != n)
    throw FormatError("label file: label count " + std::to_string(labels.dims[0]) +
                          " does not match image count " + std::to_string(n),
                      4);
  if (classes < 2) throw ValidationError("class count must be >= 2");
  Dataset data;
  data.shape = {1, images.dims[1], images.dims[2]};
  data.classes = classes;
  data.samples.reserve(n);
  const std::size_t pixels = data.shape.size();
  for (std::size_t i = 0; i < n; ++i) {
    const int label = labels.payload[i];
    if (static_cast<std::size_t>(label) >= classes)
      throw FormatError("label file: label " + std::to_string(label) + " outside [0, " +
                            std::to_string(classes) + ")",
                        8 + i);
    std::vector<double> px(pixels);
    for (std::size_t p = 0; p < pixels; ++p) px[p] = images.payload[i * pixels + p] / 255.0;
    data.samples.push_back({ImageTensor(data.shape, std::move(px)), label});
  }
  return data;
}

Dataset parse_idx(const std::filesystem::path& images_path,
                  const std::filesystem::path& labels_path, std::size_t classes) {
  return dataset_from_idx(read_idx(images_path), read_idx(labels_path), classes);
}

std::pair<IdxArray, IdxArray> dataset_to_idx(const Dataset& data) {
  if (data.shape.channels != 1) throw ValidationError("IDX export supports single-channel images");
  IdxArray images{kIdxImagesMagic,
                  {static_cast<std::uint32_t>(data.size()),
                   static_cast<std::uint32_t>(data.shape.height),
                   static_cast<std::uint32_t>(data.shape.width)},
                  {}};
  IdxArray labels{kIdxLabelsMagic, {static_cast<std::uint32_t>(data.size())}, {}};
  images.payload.reserve(data.size() * data.shape.size());
  for (const auto& s : data.samples) {
    if (s.label < 0 || s.label > 255) throw ValidationError("label does not fit in one byte");
    labels.payload.push_back(static_cast<std::uint8_t>(s.label));
    for (double x : s.image.data())
      images.payload.push_back(static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(x, 0.0, 1.0))));
  }
  return {std::move(images), std::move(labels)};
}

}  // namespace fwadv
