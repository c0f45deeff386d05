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

#include "fwadv/pnm.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "fwadv/error.hpp"

namespace fwadv {
namespace {

std::vector<std::uint8_t> header(const Shape& shape) {
  if (shape.channels != 1 && shape.channels != 3)
    throw ValidationError("PNM output needs 1 or 3 channels, got " + std::to_string(shape.channels));
  const std::string h = std::string(shape.channels == 1 ? "P5" : "P6") + "\n" +
                        std::to_string(shape.width) + " " + std::to_string(shape.height) + "\n255\n";
  return {h.begin(), h.end()};
}

// Interleaves channel-major values into PNM pixel order.
template <class F>
std::vector<std::uint8_t> encode(const ImageTensor& t, F&& to_byte) {
  const Shape& s = t.shape();
  auto out = header(s);
  for (std::size_t r = 0; r < s.height; ++r)
    for (std::size_t k = 0; k < s.width; ++k)
      for (std::size_t c = 0; c < s.channels; ++c) out.push_back(to_byte(c, t.at(c, r, k)));
  return out;
}

[[noreturn]] void io_error(const std::string& action, const std::filesystem::path& path) {
  throw Error("cannot " + action + " '" + path.string() + "': " + std::strerror(errno));
}

}  // namespace

std::vector<std::uint8_t> encode_pnm(const ImageTensor& image) {
  return encode(image, [](std::size_t, double x) {
    return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(x, 0.0, 1.0)));
  });
}

std::vector<std::uint8_t> encode_perturbation_pnm(const ImageTensor& delta) {
  const Shape& s = delta.shape();
  std::vector<double> scale(s.channels, 1e-12);
  for (std::size_t c = 0; c < s.channels; ++c)
    for (std::size_t r = 0; r < s.height; ++r)
      for (std::size_t k = 0; k < s.width; ++k) scale[c] = std::max(scale[c], std::abs(delta.at(c, r, k)));
  return encode(delta, [&](std::size_t c, double d) {
    return static_cast<std::uint8_t>(std::lround(128.0 + 127.0 * d / scale[c]));
  });
}

ImagePaths write_images(const ImageTensor& x_ori, const ImageTensor& x_adv,
                        const ImageTensor& delta, const std::filesystem::path& dir,
                        const std::string& stem) {
  const char* ext = x_ori.shape().channels == 1 ? ".pgm" : ".ppm";
  ImagePaths paths{dir / (stem + "_orig" + ext), dir / (stem + "_adv" + ext),
                   dir / (stem + "_delta" + ext)};
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory '" + dir.string() + "': " + ec.message());
  write_file(paths.original, encode_pnm(x_ori));
  write_file(paths.adversarial, encode_pnm(x_adv));
  write_file(paths.perturbation, encode_perturbation_pnm(delta));
  return paths;
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) io_error("open for writing", path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) io_error("write", path);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error("open", path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) io_error("read", path);
  return bytes;
}

std::string read_text_file(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return {bytes.begin(), bytes.end()};
}

}  // namespace fwadv
