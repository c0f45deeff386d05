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
#include <span>
#include <string_view>
#include <vector>

#include "fwadv/tensor.hpp"

namespace fwadv {

/// Conv2d is 3x3, stride 1, zero padding 1. MaxPool2 floors odd extents.
enum class LayerKind { Conv2d, ReLU, MaxPool2, Flatten, Dense };

std::string_view to_string(LayerKind kind);
LayerKind layer_kind_from_string(std::string_view name);

struct LayerSpec {
  LayerKind kind = LayerKind::ReLU;
  /// Output channels (Conv2d) or output width (Dense); unused otherwise.
  std::size_t out = 0;
  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

struct NetSpec {
  Shape input;
  std::size_t classes = 0;
  std::vector<LayerSpec> layers;

  /// "mlp": Flatten-Dense128-ReLU-Dense K.
  /// "cnn": Conv8-ReLU-Pool-Conv16-ReLU-Pool-Flatten-Dense K.
  static NetSpec preset(std::string_view name, Shape input, std::size_t classes);

  /// Activation shapes, input first; throws ValidationError when the layers
  /// do not chain or the last layer does not emit `classes` logits.
  std::vector<Shape> activation_shapes() const;

  friend bool operator==(const NetSpec&, const NetSpec&) = default;
};

/// Weights and biases of one layer. Conv2d: weight[out][in][3][3];
/// Dense: weight[out][in]. Parameter-free layers hold empty arrays.
struct LayerParams {
  std::vector<double> weight;
  std::vector<double> bias;
  friend bool operator==(const LayerParams&, const LayerParams&) = default;
};

struct NetParams {
  NetSpec spec;
  std::vector<LayerParams> layers;
  std::uint64_t seed = 0;

  std::size_t parameter_count() const;
  friend bool operator==(const NetParams&, const NetParams&) = default;
};

/// Glorot-uniform weights, zero biases.
NetParams init_params(const NetSpec& spec, std::uint64_t seed);
NetParams zero_params(const NetSpec& spec);

std::vector<double> forward(const NetParams& params, const ImageTensor& x);
int predict(const NetParams& params, const ImageTensor& x);

std::vector<double> softmax(std::span<const double> logits);
/// Softmax cross-entropy, computed with a max shift.
double cross_entropy(std::span<const double> logits, int label);

struct InputGradient {
  double loss = 0.0;
  ImageTensor grad;
};

/// Cross-entropy loss and its gradient with respect to the input.
InputGradient loss_and_input_grad(const NetParams& params, const ImageTensor& x, int label);

struct FullGradient {
  double loss = 0.0;
  std::vector<double> logits;
  ImageTensor grad_input;
  std::vector<LayerParams> grad_params;
};

/// Cross-entropy loss with input and parameter gradients.
FullGradient loss_and_grads(const NetParams& params, const ImageTensor& x, int label);

}  // namespace fwadv
