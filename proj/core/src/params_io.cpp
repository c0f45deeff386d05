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

#include "fwadv/params_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include <sodium.h>

#include "fwadv/error.hpp"
#include "fwadv/pnm.hpp"
#include "json_util.hpp"

namespace fwadv {
namespace {

using detail::Fields;
using detail::json;
using detail::ordered_json;

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

std::string encode_doubles(const std::vector<double>& values) {
  std::vector<unsigned char> raw(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto bits = std::bit_cast<std::uint64_t>(values[i]);
    for (int b = 0; b < 8; ++b) raw[8 * i + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  const std::size_t cap = sodium_base64_encoded_len(raw.size(), sodium_base64_VARIANT_ORIGINAL);
  std::string out(cap, '\0');
  sodium_bin2base64(out.data(), cap, raw.data(), raw.size(), sodium_base64_VARIANT_ORIGINAL);
  out.resize(cap - 1);
  return out;
}

std::vector<double> decode_doubles(const std::string& text, std::size_t expected,
                                   const std::string& path) {
  std::vector<unsigned char> raw(text.size() / 4 * 3 + 3);
  std::size_t len = 0;
  const char* end = nullptr;
  if (sodium_base642bin(raw.data(), raw.size(), text.data(), text.size(), nullptr, &len, &end,
                        sodium_base64_VARIANT_ORIGINAL) != 0 ||
      end != text.data() + text.size())
    detail::schema_error(path, "invalid base64");
  if (len % 8 != 0) detail::schema_error(path, "byte length is not a multiple of 8");
  if (len / 8 != expected)
    detail::schema_error(path, "expected " + std::to_string(expected) + " values, found " +
                                   std::to_string(len / 8));
  std::vector<double> values(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= std::uint64_t{raw[8 * i + b]} << (8 * b);
    values[i] = std::bit_cast<double>(bits);
    if (!std::isfinite(values[i])) detail::schema_error(path, "non-finite parameter");
  }
  return values;
}

NetSpec spec_from(const json& j) {
  Fields f(j, "spec");
  NetSpec spec;
  const json& input = f.require("input");
  if (!input.is_array() || input.size() != 3) detail::schema_error("spec.input", "expected [c, h, w]");
  spec.input = {detail::as<std::size_t>(input[0], "spec.input[0]"),
                detail::as<std::size_t>(input[1], "spec.input[1]"),
                detail::as<std::size_t>(input[2], "spec.input[2]")};
  spec.classes = f.get<std::size_t>("classes");
  const json& layers = f.require("layers");
  if (!layers.is_array()) detail::schema_error("spec.layers", "expected an array");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto p = detail::index_path("spec.layers", i);
    Fields lf(layers[i], p);
    LayerSpec l;
    const auto type = lf.get<std::string>("type");
    try {
      l.kind = layer_kind_from_string(type);
    } catch (const ValidationError& e) {
      detail::schema_error(lf.path("type"), e.what());
    }
    l.out = lf.get<std::size_t>("out", 0);
    lf.finish();
    spec.layers.push_back(l);
  }
  f.finish();
  try {
    spec.activation_shapes();
  } catch (const ValidationError& e) {
    detail::schema_error("spec", e.what());
  }
  return spec;
}

}  // namespace

std::string serialize_params(const NetParams& params) {
  if (sodium_init() < 0) throw Error("libsodium initialization failed");
  ordered_json j;
  j["format"] = "fwadv-params";
  j["version"] = kParamsFormatVersion;
  j["seed"] = params.seed;
  ordered_json spec;
  spec["input"] = {params.spec.input.channels, params.spec.input.height, params.spec.input.width};
  spec["classes"] = params.spec.classes;
  spec["layers"] = ordered_json::array();
  for (const auto& l : params.spec.layers) {
    ordered_json lj;
    lj["type"] = to_string(l.kind);
    if (l.kind == LayerKind::Conv2d || l.kind == LayerKind::Dense) lj["out"] = l.out;
    spec["layers"].push_back(std::move(lj));
  }
  j["spec"] = std::move(spec);
  j["layers"] = ordered_json::array();
  for (const auto& l : params.layers)
    j["layers"].push_back({{"weight", encode_doubles(l.weight)}, {"bias", encode_doubles(l.bias)}});
  return j.dump(1) + "\n";
}

NetParams deserialize_params(std::string_view text) {
  if (sodium_init() < 0) throw Error("libsodium initialization failed");
  const json j = detail::parse_json(text);
  if (!j.is_object()) detail::schema_error("", "expected an object");
  Fields f(j, "");
  if (f.get<std::string>("format") != "fwadv-params")
    detail::schema_error("format", "expected \"fwadv-params\"");
  const int version = f.get<int>("version");
  if (version != kParamsFormatVersion)
    throw VersionError("unsupported parameter file version " + std::to_string(version) +
                       " (this build reads version " + std::to_string(kParamsFormatVersion) + ")");
  NetParams params;
  params.seed = f.get<std::uint64_t>("seed");
  params.spec = spec_from(f.require("spec"));
  // Expected sizes come from a freshly shaped zero model.
  const NetParams shape = zero_params(params.spec);
  const json& layers = f.require("layers");
  if (!layers.is_array() || layers.size() != shape.layers.size())
    detail::schema_error("layers", "expected " + std::to_string(shape.layers.size()) + " entries");
  params.layers.resize(shape.layers.size());
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto p = detail::index_path("layers", i);
    Fields lf(layers[i], p);
    params.layers[i].weight = decode_doubles(lf.get<std::string>("weight"),
                                             shape.layers[i].weight.size(), lf.path("weight"));
    params.layers[i].bias = decode_doubles(lf.get<std::string>("bias"),
                                           shape.layers[i].bias.size(), lf.path("bias"));
    lf.finish();
  }
  f.finish();
  return params;
}

void save_params(const NetParams& params, const std::filesystem::path& path) {
  write_file(path, serialize_params(params));
}

NetParams load_params(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return deserialize_params(text);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": malformed parameter file", e.offset());
  }
}

}  // namespace fwadv
