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

#include "fwadv/tinynet.hpp"

#include <algorithm>
#include <cmath>

#include "fwadv/dataset.hpp"
#include "fwadv/error.hpp"
#include "fwadv/random.hpp"

namespace fwadv {

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::Conv2d: return "conv2d";
    case LayerKind::ReLU: return "relu";
    case LayerKind::MaxPool2: return "maxpool2";
    case LayerKind::Flatten: return "flatten";
    case LayerKind::Dense: return "dense";
  }
  return "unknown";
}

LayerKind layer_kind_from_string(std::string_view name) {
  for (auto k : {LayerKind::Conv2d, LayerKind::ReLU, LayerKind::MaxPool2, LayerKind::Flatten,
                 LayerKind::Dense})
    if (to_string(k) == name) return k;
  throw ValidationError("unknown layer type '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Dataset

Dataset Dataset::slice(std::size_t offset, std::size_t count) const {
  Dataset out{shape, classes, {}};
  const std::size_t end = std::min(samples.size(), offset + count);
  for (std::size_t i = std::min(offset, end); i < end; ++i) out.samples.push_back(samples[i]);
  return out;
}

void Dataset::validate() const {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.image.shape() != shape)
      throw ValidationError("sample " + std::to_string(i) + " has shape " +
                            s.image.shape().str() + ", expected " + shape.str());
    if (s.label < 0 || static_cast<std::size_t>(s.label) >= classes)
      throw ValidationError("sample " + std::to_string(i) + " label " +
                            std::to_string(s.label) + " outside [0," + std::to_string(classes) +
                            ")");
    if (!s.image.in_unit_box())
      throw ValidationError("sample " + std::to_string(i) + " has pixels outside [0,1]");
  }
}

// ---------------------------------------------------------------------------
// Spec

NetSpec NetSpec::preset(std::string_view name, Shape input, std::size_t classes) {
  NetSpec s{input, classes, {}};
  if (name == "mlp") {
    s.layers = {{LayerKind::Flatten, 0}, {LayerKind::Dense, 128}, {LayerKind::ReLU, 0},
                {LayerKind::Dense, classes}};
  } else if (name == "cnn") {
    s.layers = {{LayerKind::Conv2d, 8},   {LayerKind::ReLU, 0},    {LayerKind::MaxPool2, 0},
                {LayerKind::Conv2d, 16},  {LayerKind::ReLU, 0},    {LayerKind::MaxPool2, 0},
                {LayerKind::Flatten, 0},  {LayerKind::Dense, classes}};
  } else {
    throw ValidationError("unknown network preset '" + std::string(name) + "'");
  }
  s.activation_shapes();
  return s;
}

std::vector<Shape> NetSpec::activation_shapes() const {
  if (input.size() == 0) throw ValidationError("network input shape is empty");
  if (classes < 1) throw ValidationError("network needs at least one class");
  std::vector<Shape> shapes{input};
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Shape in = shapes.back();
    Shape out = in;
    switch (layers[l].kind) {
      case LayerKind::Conv2d:
        if (layers[l].out == 0) throw ValidationError("conv2d layer needs out > 0");
        out.channels = layers[l].out;
        break;
      case LayerKind::ReLU:
        break;
      case LayerKind::MaxPool2:
        if (in.height < 2 || in.width < 2)
          throw ValidationError("maxpool2 at layer " + std::to_string(l) + " on shape " +
                                in.str());
        out.height = in.height / 2;
        out.width = in.width / 2;
        break;
      case LayerKind::Flatten:
        out = Shape{in.size(), 1, 1};
        break;
      case LayerKind::Dense:
        if (layers[l].out == 0) throw ValidationError("dense layer needs out > 0");
        out = Shape{layers[l].out, 1, 1};
        break;
    }
    shapes.push_back(out);
  }
  if (shapes.back().size() != classes)
    throw ValidationError("network emits " + std::to_string(shapes.back().size()) +
                          " values, expected " + std::to_string(classes) + " logits");
  return shapes;
}

std::size_t NetParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

namespace {

std::pair<std::size_t, std::size_t> param_sizes(const LayerSpec& layer, const Shape& in) {
  switch (layer.kind) {
    case LayerKind::Conv2d: return {layer.out * in.channels * 9, layer.out};
    case LayerKind::Dense: return {layer.out * in.size(), layer.out};
    default: return {0, 0};
  }
}

}  // namespace

NetParams zero_params(const NetSpec& spec) {
  const auto shapes = spec.activation_shapes();
  NetParams p{spec, {}, 0};
  for (std::size_t l = 0; l < spec.layers.size(); ++l) {
    auto [nw, nb] = param_sizes(spec.layers[l], shapes[l]);
    p.layers.push_back({std::vector<double>(nw, 0.0), std::vector<double>(nb, 0.0)});
  }
  return p;
}

NetParams init_params(const NetSpec& spec, std::uint64_t seed) {
  const auto shapes = spec.activation_shapes();
  NetParams p = zero_params(spec);
  p.seed = seed;
  Rng rng(seed);
  for (std::size_t l = 0; l < spec.layers.size(); ++l) {
    const auto& layer = spec.layers[l];
    double fan_in = 0.0, fan_out = 0.0;
    if (layer.kind == LayerKind::Conv2d) {
      fan_in = static_cast<double>(shapes[l].channels * 9);
      fan_out = static_cast<double>(layer.out * 9);
    } else if (layer.kind == LayerKind::Dense) {
      fan_in = static_cast<double>(shapes[l].size());
      fan_out = static_cast<double>(layer.out);
    } else {
      continue;
    }
    const double a = std::sqrt(6.0 / (fan_in + fan_out));
    for (double& w : p.layers[l].weight) w = rng.uniform(-a, a);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Forward / backward

namespace {

struct Tape {
  std::vector<Shape> shapes;
  std::vector<std::vector<double>> acts;          // acts[l] is the input of layer l
  std::vector<std::vector<std::size_t>> argmax;   // per-layer pool winners
};

void conv_forward(const LayerParams& p, const Shape& in_s, std::size_t out_ch,
                  const std::vector<double>& in, std::vector<double>& out) {
  const std::size_t H = in_s.height, W = in_s.width, Cin = in_s.channels;
  const std::size_t plane = H * W;
  out.assign(out_ch * plane, 0.0);
  for (std::size_t o = 0; o < out_ch; ++o) {
    double* op = out.data() + o * plane;
    std::fill(op, op + plane, p.bias[o]);
    for (std::size_t i = 0; i < Cin; ++i) {
      const double* ip = in.data() + i * plane;
      const double* wk = p.weight.data() + (o * Cin + i) * 9;
      for (std::size_t ky = 0; ky < 3; ++ky) {
        for (std::size_t kx = 0; kx < 3; ++kx) {
          const double w = wk[ky * 3 + kx];
          if (w == 0.0) continue;
          const std::size_t y0 = ky == 0 ? 1 : 0, y1 = ky == 2 ? H - 1 : H;
          const std::size_t x0 = kx == 0 ? 1 : 0, x1 = kx == 2 ? W - 1 : W;
          for (std::size_t y = y0; y < y1; ++y) {
            double* orow = op + y * W;
            const double* irow = ip + (y + ky - 1) * W;
            for (std::size_t x = x0; x < x1; ++x) orow[x] += w * irow[x + kx - 1];
          }
        }
      }
    }
  }
}

// Accumulates input and (optionally) parameter gradients of a conv layer.
void conv_backward(const LayerParams& p, const Shape& in_s, std::size_t out_ch,
                   const std::vector<double>& in, const std::vector<double>& gout,
                   std::vector<double>& gin, LayerParams* gp) {
  const std::size_t H = in_s.height, W = in_s.width, Cin = in_s.channels;
  const std::size_t plane = H * W;
  gin.assign(Cin * plane, 0.0);
  for (std::size_t o = 0; o < out_ch; ++o) {
    const double* gop = gout.data() + o * plane;
    if (gp) {
      double sb = 0.0;
      for (std::size_t q = 0; q < plane; ++q) sb += gop[q];
      gp->bias[o] += sb;
    }
    for (std::size_t i = 0; i < Cin; ++i) {
      const double* ip = in.data() + i * plane;
      double* gip = gin.data() + i * plane;
      const double* wk = p.weight.data() + (o * Cin + i) * 9;
      double* gwk = gp ? gp->weight.data() + (o * Cin + i) * 9 : nullptr;
      for (std::size_t ky = 0; ky < 3; ++ky) {
        for (std::size_t kx = 0; kx < 3; ++kx) {
          const double w = wk[ky * 3 + kx];
          const std::size_t y0 = ky == 0 ? 1 : 0, y1 = ky == 2 ? H - 1 : H;
          const std::size_t x0 = kx == 0 ? 1 : 0, x1 = kx == 2 ? W - 1 : W;
          for (std::size_t y = y0; y < y1; ++y) {
            const double* grow = gop + y * W;
            double* girow = gip + (y + ky - 1) * W;
            for (std::size_t x = x0; x < x1; ++x) girow[x + kx - 1] += w * grow[x];
          }
          if (!gwk) continue;
          double gw = 0.0;
          for (std::size_t y = y0; y < y1; ++y) {
            const double* grow = gop + y * W;
            const double* irow = ip + (y + ky - 1) * W;
            for (std::size_t x = x0; x < x1; ++x) gw += grow[x] * irow[x + kx - 1];
          }
          gwk[ky * 3 + kx] += gw;
        }
      }
    }
  }
}

void run_forward(const NetParams& params, const ImageTensor& x, Tape& tape) {
  if (x.shape() != params.spec.input)
    throw ValidationError("input shape " + x.shape().str() + " does not match network input " +
                          params.spec.input.str());
  tape.shapes = params.spec.activation_shapes();
  const std::size_t L = params.spec.layers.size();
  if (params.layers.size() != L) throw ValidationError("parameter/spec layer count mismatch");
  tape.acts.assign(L + 1, {});
  tape.argmax.assign(L, {});
  tape.acts[0].assign(x.data().begin(), x.data().end());

  for (std::size_t l = 0; l < L; ++l) {
    const LayerSpec& layer = params.spec.layers[l];
    const Shape& in_s = tape.shapes[l];
    const Shape& out_s = tape.shapes[l + 1];
    const std::vector<double>& in = tape.acts[l];
    std::vector<double>& out = tape.acts[l + 1];
    const LayerParams& p = params.layers[l];
    switch (layer.kind) {
      case LayerKind::Conv2d:
        conv_forward(p, in_s, layer.out, in, out);
        break;
      case LayerKind::ReLU:
        out.resize(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
        break;
      case LayerKind::MaxPool2: {
        out.assign(out_s.size(), 0.0);
        auto& arg = tape.argmax[l];
        arg.assign(out_s.size(), 0);
        for (std::size_t c = 0; c < out_s.channels; ++c)
          for (std::size_t y = 0; y < out_s.height; ++y)
            for (std::size_t xx = 0; xx < out_s.width; ++xx) {
              std::size_t best = (c * in_s.height + 2 * y) * in_s.width + 2 * xx;
              for (std::size_t dy = 0; dy < 2; ++dy)
                for (std::size_t dx = 0; dx < 2; ++dx) {
                  const std::size_t idx = (c * in_s.height + 2 * y + dy) * in_s.width + 2 * xx + dx;
                  if (in[idx] > in[best]) best = idx;
                }
              const std::size_t o = (c * out_s.height + y) * out_s.width + xx;
              out[o] = in[best];
              arg[o] = best;
            }
        break;
      }
      case LayerKind::Flatten:
        out = in;
        break;
      case LayerKind::Dense: {
        const std::size_t n_in = in.size();
        out.assign(layer.out, 0.0);
        for (std::size_t j = 0; j < layer.out; ++j) {
          const double* wr = p.weight.data() + j * n_in;
          double s = p.bias[j];
          for (std::size_t k = 0; k < n_in; ++k) s += wr[k] * in[k];
          out[j] = s;
        }
        break;
      }
    }
  }
}

// Back-propagates d loss / d logits; fills the input gradient and, when
// requested, the parameter gradients.
void run_backward(const NetParams& params, const Tape& tape, std::vector<double> grad,
                  std::vector<LayerParams>* grad_params, std::vector<double>& grad_input) {
  const std::size_t L = params.spec.layers.size();
  std::vector<double> gin;
  for (std::size_t l = L; l-- > 0;) {
    const LayerSpec& layer = params.spec.layers[l];
    const Shape& in_s = tape.shapes[l];
    const std::vector<double>& in = tape.acts[l];
    const LayerParams& p = params.layers[l];
    LayerParams* gp = grad_params ? &(*grad_params)[l] : nullptr;
    switch (layer.kind) {
      case LayerKind::Conv2d:
        conv_backward(p, in_s, layer.out, in, grad, gin, gp);
        break;
      case LayerKind::ReLU:
        gin.resize(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) gin[i] = in[i] > 0.0 ? grad[i] : 0.0;
        break;
      case LayerKind::MaxPool2: {
        gin.assign(in.size(), 0.0);
        const auto& arg = tape.argmax[l];
        for (std::size_t o = 0; o < grad.size(); ++o) gin[arg[o]] += grad[o];
        break;
      }
      case LayerKind::Flatten:
        gin = grad;
        break;
      case LayerKind::Dense: {
        const std::size_t n_in = in.size();
        gin.assign(n_in, 0.0);
        for (std::size_t j = 0; j < layer.out; ++j) {
          const double g = grad[j];
          if (g == 0.0) continue;
          const double* wr = p.weight.data() + j * n_in;
          for (std::size_t k = 0; k < n_in; ++k) gin[k] += wr[k] * g;
          if (gp) {
            double* gw = gp->weight.data() + j * n_in;
            for (std::size_t k = 0; k < n_in; ++k) gw[k] += g * in[k];
            gp->bias[j] += g;
          }
        }
        break;
      }
    }
    grad.swap(gin);
  }
  grad_input = std::move(grad);
}

void check_label(const NetParams& params, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= params.spec.classes)
    throw ValidationError("label " + std::to_string(label) + " outside [0," +
                          std::to_string(params.spec.classes) + ")");
}

}  // namespace

std::vector<double> forward(const NetParams& params, const ImageTensor& x) {
  Tape tape;
  run_forward(params, x, tape);
  return std::move(tape.acts.back());
}

int predict(const NetParams& params, const ImageTensor& x) {
  const auto logits = forward(params, x);
  return static_cast<int>(std::max_element(logits.begin(), logits.end()) - logits.begin());
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double m = *std::max_element(p.begin(), p.end());
  double z = 0.0;
  for (double& v : p) z += (v = std::exp(v - m));
  for (double& v : p) v /= z;
  return p;
}

double cross_entropy(std::span<const double> logits, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= logits.size())
    throw ValidationError("label " + std::to_string(label) + " outside [0, " +
                          std::to_string(logits.size()) + ")");
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double v : logits) z += std::exp(v - m);
  return std::log(z) - (logits[static_cast<std::size_t>(label)] - m);
}

InputGradient loss_and_input_grad(const NetParams& params, const ImageTensor& x, int label) {
  check_label(params, label);
  Tape tape;
  run_forward(params, x, tape);
  const auto& logits = tape.acts.back();
  InputGradient out;
  out.loss = cross_entropy(logits, label);
  std::vector<double> g = softmax(logits);
  g[static_cast<std::size_t>(label)] -= 1.0;
  std::vector<double> gx;
  run_backward(params, tape, std::move(g), nullptr, gx);
  out.grad = ImageTensor(x.shape(), std::move(gx));
  return out;
}

FullGradient loss_and_grads(const NetParams& params, const ImageTensor& x, int label) {
  check_label(params, label);
  Tape tape;
  run_forward(params, x, tape);
  FullGradient out;
  out.logits = tape.acts.back();
  out.loss = cross_entropy(out.logits, label);
  std::vector<double> g = softmax(out.logits);
  g[static_cast<std::size_t>(label)] -= 1.0;
  out.grad_params.resize(params.layers.size());
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    out.grad_params[l].weight.assign(params.layers[l].weight.size(), 0.0);
    out.grad_params[l].bias.assign(params.layers[l].bias.size(), 0.0);
  }
  std::vector<double> gx;
  run_backward(params, tape, std::move(g), &out.grad_params, gx);
  out.grad_input = ImageTensor(x.shape(), std::move(gx));
  return out;
}

}  // namespace fwadv
