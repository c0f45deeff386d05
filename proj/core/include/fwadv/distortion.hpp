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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fwadv/linalg.hpp"
#include "fwadv/partition.hpp"
#include "fwadv/tensor.hpp"

namespace fwadv {

enum class BallKind { Nuclear, GroupNuclear, WeightedGroupNuclear, LInf, L2, L1 };

std::string_view to_string(BallKind kind);
BallKind ball_kind_from_string(std::string_view name);

/// How the group LMO picks its group.
///
/// TopSingularValue is the exact LMO of the l1-aggregated group norm:
/// argmax_g sigma_1(d[g]) / w_g. FullNuclearNorm ranks groups by
/// ||d[g]||_S1 / w_g instead, which matches the rule as it is often written
/// but is not the exact minimizer.
enum class GroupSelection { TopSingularValue, FullNuclearNorm };

/// Feasible set {delta : norm(delta) <= radius}, centered at the origin.
class DistortionBall {
 public:
  static DistortionBall nuclear(double radius);
  static DistortionBall group_nuclear(double radius, GroupPartition partition,
                                      GroupSelection selection = GroupSelection::TopSingularValue);
  static DistortionBall weighted_group_nuclear(
      double radius, GroupPartition partition, std::vector<double> weights,
      GroupSelection selection = GroupSelection::TopSingularValue);
  static DistortionBall linf(double radius);
  static DistortionBall l2(double radius);
  static DistortionBall l1(double radius);

  BallKind kind() const noexcept { return kind_; }
  double radius() const noexcept { return radius_; }
  bool is_group() const noexcept {
    return kind_ == BallKind::GroupNuclear || kind_ == BallKind::WeightedGroupNuclear;
  }
  const GroupPartition& partition() const noexcept { return partition_; }
  /// One weight per group; all ones for the unweighted group ball.
  const std::vector<double>& weights() const noexcept { return weights_; }
  GroupSelection selection() const noexcept { return selection_; }

  /// Same ball with a different radius.
  DistortionBall with_radius(double radius) const;

 private:
  DistortionBall(BallKind kind, double radius);

  BallKind kind_;
  double radius_;
  GroupPartition partition_;
  std::vector<double> weights_;
  GroupSelection selection_ = GroupSelection::TopSingularValue;
};

/// The gauge of the ball evaluated at x (channel-summed nuclear norm, group
/// sums, or the flattened lp norm).
double ball_norm(const DistortionBall& ball, const ImageTensor& x);

/// True when ball_norm(x) <= radius * (1 + rel_tol).
bool ball_contains(const DistortionBall& ball, const ImageTensor& x, double rel_tol = 1e-7);

struct LmoOptions {
  PowerIterationOptions power;
  /// When nonempty, only channels flagged true may carry the vertex.
  std::vector<bool> channel_mask;
};

/// Output of the linear minimization oracle.
struct Vertex {
  ImageTensor delta;
  /// Channel (Nuclear) or group (group kinds) that carries the atom.
  std::optional<std::size_t> selected;
  /// Value of the selection statistic for the chosen channel/group.
  double score = 0.0;
};

/// argmin over the ball of <d, v>. Returns the zero vertex when d vanishes
/// on every admissible coordinate. Ties go to the lowest index.
Vertex lmo(const DistortionBall& ball, const ImageTensor& d, const LmoOptions& options = {});

/// Euclidean projection onto an LInf or L2 ball. Other kinds are refused.
ImageTensor project(const DistortionBall& ball, const ImageTensor& x);

/// Per-group weights inversely related to the local pixel standard deviation:
/// w_g = (mean_h s_h + delta_reg) / (s_g + delta_reg). A flat image gets unit
/// weights.
std::vector<double> variance_weights(const ImageTensor& x_ori, const GroupPartition& partition,
                                     double delta_reg = 1e-3);

}  // namespace fwadv
