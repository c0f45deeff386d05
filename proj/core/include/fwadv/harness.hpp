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
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "fwadv/dataset.hpp"
#include "fwadv/distortion.hpp"
#include "fwadv/frank_wolfe.hpp"
#include "fwadv/tinynet.hpp"

namespace fwadv {

enum class AttackMethod { FwNuclear, GroupFwNuclear, WeightedGroupFwNuclear, Pgd, Fgsm };

std::string_view to_string(AttackMethod method);
AttackMethod attack_method_from_string(std::string_view name);
bool is_frank_wolfe(AttackMethod method);

enum class WeightSource { None, Explicit, Variance };

std::string_view to_string(WeightSource source);
WeightSource weight_source_from_string(std::string_view name);

/// Either a regular grid per channel or an explicit list of boxes.
struct PartitionSpec {
  std::optional<std::pair<std::size_t, std::size_t>> grid;
  std::vector<GroupBox> boxes;

  GroupPartition build(const Shape& shape) const;
  friend bool operator==(const PartitionSpec&, const PartitionSpec&) = default;
};

struct AttackConfig {
  AttackMethod method = AttackMethod::FwNuclear;
  /// Nuclear radius for the FW methods, LInf epsilon for PGD/FGSM.
  double radius = 1.0;
  int iterations = 20;
  StepRule step = StepRule::short_step();
  double pgd_alpha = 2.55 / 255.0;
  std::optional<PartitionSpec> partition;
  WeightSource weights = WeightSource::None;
  std::vector<double> explicit_weights;
  double variance_delta = 1e-3;
  GroupSelection selection = GroupSelection::TopSingularValue;
  std::uint64_t seed = 0;
  bool random_start = false;
  bool channel_subsample = false;
  double nonzero_threshold = 1.0 / 255.0;
  bool stop_on_success = false;
  double gap_tol = 0.0;

  /// Throws ValidationError when a method-specific field is missing or out of range.
  void validate() const;

  friend bool operator==(const AttackConfig&, const AttackConfig&) = default;
};

struct SampleResult {
  std::size_t index = 0;
  int label = 0;
  int clean_prediction = 0;
  int adv_prediction = 0;
  bool clean_correct = false;
  bool adv_correct = false;
  /// First iteration whose clamped iterate was misclassified; absent when
  /// the final adversarial image is still classified correctly.
  std::optional<int> first_success_iter;
  /// Norms of the applied perturbation clamp(x_ori + delta) - x_ori.
  double l2 = 0.0;
  double linf = 0.0;
  double nuclear = 0.0;
  std::size_t nonzero_pixels = 0;
  std::optional<double> fw_gap;
  /// Ball norm of the perturbation before the final clamp.
  double pre_clamp_ball_norm = 0.0;

  friend bool operator==(const SampleResult&, const SampleResult&) = default;
};

struct AttackOutcome {
  SampleResult result;
  ImageTensor adversarial;
  ImageTensor delta_pre_clamp;
  /// Channels/groups that received an atom during the run (FW methods).
  std::vector<std::size_t> selected;
  std::optional<FwTrace> trace;
};

struct NormSummary {
  double mean = 0.0;
  double median = 0.0;
  friend bool operator==(const NormSummary&, const NormSummary&) = default;
};

struct AggregateReport {
  AttackConfig config;
  std::size_t attacked = 0;
  double clean_accuracy = 0.0;
  double adversarial_accuracy = 0.0;
  /// Adversarial accuracy restricted to clean-correct samples.
  std::optional<double> robust_accuracy_given_clean;
  NormSummary l2;
  NormSummary linf;
  NormSummary nuclear;
  double mean_nonzero_pixels = 0.0;
  std::optional<double> mean_fw_gap;
  /// Summed per-sample wall time; not part of the deterministic report body.
  double runtime_seconds = 0.0;
  std::vector<SampleResult> samples;
};

/// Adversarial accuracy as a function of radius for configs that differ only
/// in radius.
struct RadiusSeries {
  AttackMethod method = AttackMethod::FwNuclear;
  std::vector<std::size_t> report_indices;
  std::vector<std::pair<double, double>> points;  // (radius, adversarial accuracy)
};

struct CampaignResult {
  std::vector<AggregateReport> reports;
  std::vector<RadiusSeries> series;
};

/// L(x) = -CE(f(x), y) and its gradient. Minimizing it maximizes the
/// classification loss. `params` must outlive the oracle.
LossOracle make_adversarial_oracle(const NetParams& params, int label);

/// Distortion ball for one sample (variance weights depend on the image).
DistortionBall make_ball(const AttackConfig& config, const ImageTensor& x_ori);

AttackOutcome run_attack(const NetParams& params, const LabeledSample& sample, std::size_t index,
                         const AttackConfig& config);
SampleResult attack_sample(const NetParams& params, const LabeledSample& sample,
                           std::size_t index, const AttackConfig& config);

AggregateReport aggregate(const AttackConfig& config, std::vector<SampleResult> samples);

struct CampaignOptions {
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 1;
};

CampaignResult run_campaign(const NetParams& params, const Dataset& data,
                            const std::vector<AttackConfig>& configs,
                            const CampaignOptions& options = {});

std::vector<RadiusSeries> radius_series(const std::vector<AggregateReport>& reports);

}  // namespace fwadv
