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
#include <string_view>

#include "fwadv/dataset.hpp"

namespace fwadv {

enum class SynthKind { Blobs, Bars };

std::string_view to_string(SynthKind kind);
SynthKind synth_kind_from_string(std::string_view name);

struct SynthOptions {
  SynthKind kind = SynthKind::Bars;
  std::size_t n = 200;
  std::uint64_t seed = 1;
  /// 0 picks the default: 3 for blobs, 2 for bars (bars allows up to 4).
  std::size_t classes = 0;
  Shape shape{1, 12, 12};
  /// Gaussian pixel noise standard deviation.
  double noise = 0.05;

  friend bool operator==(const SynthOptions&, const SynthOptions&) = default;
};

/// Deterministic synthetic datasets.
///
/// blobs: Gaussian clusters around class prototypes, clipped to [0,1]. Every
/// sample is closer to its own prototype than to any other by a fixed margin,
/// so nearest-prototype (a linear rule) classifies the set perfectly.
///
/// bars: one bright bar on a dark noisy background; the class is the bar
/// orientation (horizontal, vertical, diagonal, anti-diagonal).
Dataset synth_dataset(const SynthOptions& options);

}  // namespace fwadv
