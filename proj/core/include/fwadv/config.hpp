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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fwadv/dataset.hpp"
#include "fwadv/harness.hpp"
#include "fwadv/synth.hpp"
#include "fwadv/training.hpp"

namespace fwadv {

/// Where samples come from: an IDX image/label pair or a synthetic generator.
struct DatasetSource {
  enum class Kind { Idx, Synth };
  Kind kind = Kind::Synth;
  std::string images;
  std::string labels;
  std::size_t classes = 10;
  std::size_t offset = 0;
  /// 0 keeps every sample after offset.
  std::size_t limit = 0;
  SynthOptions synth;

  friend bool operator==(const DatasetSource&, const DatasetSource&) = default;
};

/// Relative IDX paths resolve against base_dir.
Dataset load_dataset(const DatasetSource& source, const std::filesystem::path& base_dir = {});

struct TrainConfig {
  std::uint64_t seed = 1;
  DatasetSource data;
  std::optional<DatasetSource> validation;
  std::string preset = "cnn";
  int epochs = 5;
  double lr = 0.05;
  std::size_t batch = 32;
  std::optional<PgdTrainingAttack> adversarial;
  std::string output = "model.json";
  /// Line-delimited JSON epoch log; empty disables it.
  std::string log;
};

struct AttackRunConfig {
  std::uint64_t seed = 1;
  std::string model;
  DatasetSource data;
  std::vector<AttackConfig> attacks;
  std::string output_dir = "out";
  unsigned threads = 1;
  /// Number of leading samples whose images are written per attack.
  std::size_t save_images = 0;
};

/// Strict parsers: unknown keys, wrong types and out-of-range values raise
/// ValidationError naming the offending JSON path; malformed JSON raises
/// FormatError with the byte offset. An attack without "seed" inherits the
/// global seed.
TrainConfig parse_train_config(std::string_view json_text);
AttackRunConfig parse_attack_config(std::string_view json_text);
AttackConfig parse_attack_entry(std::string_view json_text, std::uint64_t default_seed = 1);

std::string to_json(const AttackConfig& config);
std::string to_json(const DatasetSource& source);

}  // namespace fwadv
