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

#include <cstddef>
#include <vector>

#include "fwadv/tensor.hpp"

namespace fwadv {

struct LabeledSample {
  ImageTensor image;
  int label = 0;
};

/// Images of a common shape with integer labels in [0, classes).
struct Dataset {
  Shape shape;
  std::size_t classes = 0;
  std::vector<LabeledSample> samples;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  const LabeledSample& operator[](std::size_t i) const { return samples[i]; }

  /// Copy of samples [offset, offset + count), truncated at the end.
  Dataset slice(std::size_t offset, std::size_t count) const;
  /// Throws ValidationError if any sample has the wrong shape, an
  /// out-of-range label or pixels outside [0,1].
  void validate() const;
};

}  // namespace fwadv
