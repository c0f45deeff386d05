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
#include <vector>

#include "fwadv/dataset.hpp"
#include "fwadv/tinynet.hpp"

namespace fwadv {

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;
  /// Running accuracy (percent) on the inputs actually used for the updates.
  double train_accuracy = 0.0;
  std::optional<double> validation_accuracy;
};

struct TrainOptions {
  int epochs = 5;
  double lr = 0.05;
  std::size_t batch = 32;
  std::uint64_t seed = 1;
  const Dataset* validation = nullptr;
  std::function<void(const EpochMetrics&)> on_epoch;
};

/// Inner attack used by adversarial training (signed-gradient PGD in LInf).
struct PgdTrainingAttack {
  double epsilon = 0.3;
  double alpha = 0.01;
  int iters = 7;
  bool random_start = true;
};

struct TrainResult {
  NetParams params;
  std::vector<EpochMetrics> history;
};

/// Mini-batch SGD on softmax cross-entropy from Glorot initialization.
TrainResult train_sgd(const NetSpec& spec, const Dataset& data, const TrainOptions& options);
/// Continues training from existing parameters.
TrainResult train_sgd(NetParams initial, const Dataset& data, const TrainOptions& options);

/// Like train_sgd, but each batch image is replaced by its PGD perturbation
/// (computed against the current parameters) before the gradient step.
TrainResult adversarial_train(const NetSpec& spec, const Dataset& data,
                              const TrainOptions& options, const PgdTrainingAttack& attack);

/// Percent of samples whose argmax prediction equals the label.
double accuracy(const NetParams& params, const Dataset& data);

}  // namespace fwadv
