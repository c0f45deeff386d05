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
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fwadv/distortion.hpp"
#include "fwadv/tensor.hpp"

namespace fwadv {

/// Objective value and gradient at a point.
struct LossValue {
  double loss = 0.0;
  ImageTensor grad;
};

/// Loss-and-gradient oracle. Must be deterministic in x and return a
/// gradient with x's shape.
using LossOracle = std::function<LossValue(const ImageTensor& x)>;

/// Predicate on a box-clamped candidate image; true means the attack succeeded.
using SuccessPredicate = std::function<bool(const ImageTensor& x)>;

struct StepRule {
  enum class Kind { ShortStep, Decaying, Backtracking };

  Kind kind = Kind::ShortStep;
  /// Lipschitz bound for ShortStep; estimated from the oracle when absent.
  std::optional<double> lipschitz;
  double shrink = 0.5;
  int max_halvings = 30;

  static StepRule short_step(std::optional<double> lipschitz = std::nullopt) {
    return {Kind::ShortStep, lipschitz, 0.5, 30};
  }
  static StepRule decaying() { return {Kind::Decaying, std::nullopt, 0.5, 30}; }
  static StepRule backtracking(double shrink = 0.5, int max_halvings = 30) {
    return {Kind::Backtracking, std::nullopt, shrink, max_halvings};
  }

  friend bool operator==(const StepRule&, const StepRule&) = default;
};

std::string_view to_string(StepRule::Kind kind);
StepRule::Kind step_kind_from_string(std::string_view name);

struct FwOptions {
  int max_iters = 20;
  double gap_tol = 0.0;
  /// Start from u * lmo(random direction) with u ~ U[0,1] instead of zero.
  std::optional<std::uint64_t> random_start_seed;
  /// Restrict every LMO to a uniformly drawn nonempty channel subset.
  std::optional<std::uint64_t> channel_subsample_seed;
  /// Explicit starting perturbation; refused when outside the ball.
  std::optional<ImageTensor> initial_delta;
  SuccessPredicate success;
  bool stop_on_success = false;
  PowerIterationOptions power;
  int lipschitz_pairs = 50;
  std::uint64_t lipschitz_seed = 0x3c6ef372fe94f82bULL;
  /// Keep every perturbation iterate in the trace (memory grows with max_iters).
  bool record_iterates = false;
};

struct FwIterate {
  int iter = 0;
  double loss = 0.0;
  double gap = 0.0;
  double gamma = 0.0;
  std::optional<std::size_t> selected;
};

enum class StopReason { GapTolerance, MaxIterations, Success };
std::string_view to_string(StopReason reason);

struct FwTrace {
  std::vector<FwIterate> iterations;
  /// Loss at the final iterate.
  double final_loss = 0.0;
  /// Final perturbation before the box clamp; always inside the ball.
  ImageTensor delta;
  /// clamp_[0,1](x_ori + delta), the only clamped quantity.
  ImageTensor adversarial;
  StopReason reason = StopReason::MaxIterations;
  std::optional<int> first_success_iter;
  /// Channel/group of the random start vertex, when one was used.
  std::optional<std::size_t> start_selected;
  double lipschitz = 0.0;
  std::string lipschitz_source;
  std::string step_rule;
  /// delta_0, delta_1, ... as visited, when FwOptions::record_iterates is set.
  std::vector<ImageTensor> iterates;

  double final_gap() const { return iterations.empty() ? 0.0 : iterations.back().gap; }
};

/// Vanilla Frank-Wolfe in perturbation coordinates: delta_{t+1} =
/// (1 - gamma_t) delta_t + gamma_t lmo(grad L(x_ori + delta_t)). Iterates are
/// never box-clamped; the returned adversarial image is clamped once.
FwTrace frank_wolfe(const LossOracle& oracle, const ImageTensor& x_ori, const DistortionBall& ball,
                    const StepRule& step, const FwOptions& options = {});

/// Twice the largest observed gradient difference ratio over random pairs of
/// feasible points around x_ori.
double estimate_lipschitz(const LossOracle& oracle, const ImageTensor& x_ori,
                          const DistortionBall& ball, int pairs, std::uint64_t seed,
                          const PowerIterationOptions& power = {});

/// clamp(x_ori - epsilon * sign(grad L(x_ori))).
ImageTensor fgsm(const LossOracle& oracle, const ImageTensor& x_ori, double epsilon);

struct PgdOptions {
  double epsilon = 0.3;
  double alpha = 0.01;
  int iters = 20;
  std::optional<std::uint64_t> random_start_seed;
  SuccessPredicate success;
};

struct PgdResult {
  ImageTensor adversarial;
  std::optional<int> first_success_iter;
  std::vector<std::string> warnings;
};

/// Signed-gradient descent on L with projection onto the LInf(epsilon) ball
/// and a box clamp after every step. Runs exactly `iters` steps.
PgdResult pgd(const LossOracle& oracle, const ImageTensor& x_ori, const PgdOptions& options);

}  // namespace fwadv
