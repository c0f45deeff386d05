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

#include "fwadv/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fwadv/error.hpp"
#include "fwadv/frank_wolfe.hpp"
#include "fwadv/harness.hpp"
#include "fwadv/random.hpp"

namespace fwadv {

namespace {

using BatchTransform =
    std::function<ImageTensor(const NetParams&, const LabeledSample&, std::uint64_t sample_seed)>;

TrainResult train_impl(NetParams params, const Dataset& data, const TrainOptions& options,
                       const BatchTransform& transform) {
  if (data.empty()) throw ValidationError("training dataset is empty");
  if (options.epochs < 0) throw ValidationError("epochs must be >= 0");
  if (options.batch == 0) throw ValidationError("batch size must be >= 1");
  if (!std::isfinite(options.lr) || options.lr < 0.0)
    throw ValidationError("learning rate must be finite and >= 0");
  data.validate();
  if (data.shape != params.spec.input || data.classes != params.spec.classes)
    throw ValidationError("dataset shape/classes do not match the network");

  TrainResult result;
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<LayerParams> accum(params.layers.size());

  std::uint64_t sample_counter = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    Rng shuffle_rng(derive_seed(options.seed, static_cast<std::uint64_t>(epoch) + 1));
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[shuffle_rng.index(i)]);

    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += options.batch) {
      const std::size_t end = std::min(order.size(), start + options.batch);
      for (std::size_t l = 0; l < params.layers.size(); ++l) {
        accum[l].weight.assign(params.layers[l].weight.size(), 0.0);
        accum[l].bias.assign(params.layers[l].bias.size(), 0.0);
      }
      for (std::size_t b = start; b < end; ++b) {
        const LabeledSample& s = data[order[b]];
        const std::uint64_t sample_seed = derive_seed(options.seed ^ 0xadu, sample_counter++);
        FullGradient g = transform ? loss_and_grads(params, transform(params, s, sample_seed), s.label)
                                   : loss_and_grads(params, s.image, s.label);
        if (!std::isfinite(g.loss))
          throw NumericalError("training diverged: non-finite loss at epoch " +
                               std::to_string(epoch + 1) + ", sample " +
                               std::to_string(order[b]));
        loss_sum += g.loss;
        const auto pred = std::max_element(g.logits.begin(), g.logits.end()) - g.logits.begin();
        if (pred == s.label) ++correct;
        for (std::size_t l = 0; l < accum.size(); ++l) {
          for (std::size_t k = 0; k < accum[l].weight.size(); ++k)
            accum[l].weight[k] += g.grad_params[l].weight[k];
          for (std::size_t k = 0; k < accum[l].bias.size(); ++k)
            accum[l].bias[k] += g.grad_params[l].bias[k];
        }
      }
      if (options.lr == 0.0) continue;
      const double step = options.lr / static_cast<double>(end - start);
      for (std::size_t l = 0; l < accum.size(); ++l) {
        for (std::size_t k = 0; k < accum[l].weight.size(); ++k)
          params.layers[l].weight[k] -= step * accum[l].weight[k];
        for (std::size_t k = 0; k < accum[l].bias.size(); ++k)
          params.layers[l].bias[k] -= step * accum[l].bias[k];
      }
    }

    EpochMetrics m;
    m.epoch = epoch + 1;
    m.train_loss = loss_sum / static_cast<double>(data.size());
    m.train_accuracy = 100.0 * static_cast<double>(correct) / static_cast<double>(data.size());
    if (options.validation) m.validation_accuracy = accuracy(params, *options.validation);
    result.history.push_back(m);
    if (options.on_epoch) options.on_epoch(m);
  }
  result.params = std::move(params);
  return result;
}

}  // namespace

TrainResult train_sgd(const NetSpec& spec, const Dataset& data, const TrainOptions& options) {
  return train_impl(init_params(spec, derive_seed(options.seed, 0)), data, options, {});
}

TrainResult train_sgd(NetParams initial, const Dataset& data, const TrainOptions& options) {
  return train_impl(std::move(initial), data, options, {});
}

TrainResult adversarial_train(const NetSpec& spec, const Dataset& data,
                              const TrainOptions& options, const PgdTrainingAttack& attack) {
  if (!std::isfinite(attack.epsilon) || attack.epsilon < 0.0)
    throw ValidationError("adversarial training epsilon must be >= 0");
  BatchTransform transform = [attack](const NetParams& params, const LabeledSample& s,
                                      std::uint64_t sample_seed) {
    PgdOptions o;
    o.epsilon = attack.epsilon;
    o.alpha = attack.alpha;
    o.iters = attack.iters;
    if (attack.random_start) o.random_start_seed = sample_seed;
    return pgd(make_adversarial_oracle(params, s.label), s.image, o).adversarial;
  };
  return train_impl(init_params(spec, derive_seed(options.seed, 0)), data, options, transform);
}

double accuracy(const NetParams& params, const Dataset& data) {
  if (data.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& s : data.samples)
    if (predict(params, s.image) == s.label) ++correct;
  return 100.0 * static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace fwadv
