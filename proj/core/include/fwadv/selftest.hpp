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
#include <string>
#include <vector>

#include "fwadv/distortion.hpp"

namespace fwadv {

struct LmoBatteryOptions {
  std::uint64_t seed = 7;
  /// Random directions per ball kind.
  std::size_t directions = 200;
  /// Feasible points sampled per tensor shape.
  std::size_t samples = 10000;
  /// Distinct tensor shapes per ball kind; directions are spread across them.
  std::size_t shapes = 4;
  double radius = 1.0;
};

struct LmoKindResult {
  BallKind kind = BallKind::Nuclear;
  std::size_t directions = 0;
  /// max over directions of <d, lmo(d)> - min over sampled feasible points,
  /// plus any relative infeasibility of the returned vertex.
  double max_violation = 0.0;
  /// max relative deviation of <d, lmo(d)> from the closed-form minimum
  /// (dual norm of d times the radius).
  double max_closed_form_error = 0.0;
};

struct LmoBatteryResult {
  std::vector<LmoKindResult> kinds;
  double max_violation = 0.0;
  double max_closed_form_error = 0.0;
};

/// Optimality battery for every ball kind on random tensors up to 3x8x8.
LmoBatteryResult lmo_battery(const LmoBatteryOptions& options = {});

struct GradcheckOptions {
  std::uint64_t seed = 1;
  /// Coordinates probed per input or parameter array.
  std::size_t coordinates = 100;
  double h = 1e-5;
};

struct GradcheckEntry {
  std::string name;
  std::size_t checked = 0;
  double max_rel_error = 0.0;
};

struct GradcheckResult {
  std::vector<GradcheckEntry> entries;
  double max_rel_error = 0.0;
};

/// |a - b| / max(|a|, |b|, 1e-6).
double gradient_relative_error(double analytic, double numeric);

/// Central finite differences against backpropagation for input and
/// parameter gradients of small dense, convolutional and pooled networks.
GradcheckResult gradient_check(const GradcheckOptions& options = {});

}  // namespace fwadv
