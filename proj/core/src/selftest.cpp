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

#include "fwadv/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fwadv/linalg.hpp"
#include "fwadv/random.hpp"
#include "fwadv/tinynet.hpp"

namespace fwadv {
namespace {

constexpr BallKind kAllKinds[] = {BallKind::Nuclear, BallKind::GroupNuclear,
                                  BallKind::WeightedGroupNuclear, BallKind::LInf,
                                  BallKind::L2, BallKind::L1};

DistortionBall random_ball(BallKind kind, const Shape& shape, double radius, Rng& rng) {
  switch (kind) {
    case BallKind::Nuclear: return DistortionBall::nuclear(radius);
    case BallKind::LInf: return DistortionBall::linf(radius);
    case BallKind::L2: return DistortionBall::l2(radius);
    case BallKind::L1: return DistortionBall::l1(radius);
    default: break;
  }
  const std::size_t tr = 1 + rng.index(shape.height);
  const std::size_t tc = 1 + rng.index(shape.width);
  auto partition = GroupPartition::grid(shape, tr, tc);
  if (kind == BallKind::GroupNuclear) return DistortionBall::group_nuclear(radius, partition);
  std::vector<double> w(partition.size());
  for (double& x : w) x = rng.uniform(0.5, 2.0);
  return DistortionBall::weighted_group_nuclear(radius, std::move(partition), std::move(w));
}

ImageTensor gaussian(const Shape& shape, Rng& rng) {
  ImageTensor t(shape);
  for (double& x : t.data()) x = rng.normal();
  return t;
}

// Extreme point of the ball built without any norm evaluation.
ImageTensor random_extreme_point(const DistortionBall& ball, const Shape& shape, Rng& rng) {
  ImageTensor t(shape);
  const double r = ball.radius();
  auto rank_one = [&](std::size_t c, std::size_t r0, std::size_t r1, std::size_t k0,
                      std::size_t k1, double scale) {
    std::vector<double> u(r1 - r0), v(k1 - k0);
    double nu = 0.0, nv = 0.0;
    for (double& x : u) {
      x = rng.normal();
      nu += x * x;
    }
    for (double& x : v) {
      x = rng.normal();
      nv += x * x;
    }
    const double s = scale / std::sqrt(std::max(nu * nv, 1e-300));
    for (std::size_t i = r0; i < r1; ++i)
      for (std::size_t j = k0; j < k1; ++j) t.at(c, i, j) = s * u[i - r0] * v[j - k0];
  };
  switch (ball.kind()) {
    case BallKind::Nuclear:
      rank_one(rng.index(shape.channels), 0, shape.height, 0, shape.width, r);
      break;
    case BallKind::GroupNuclear:
    case BallKind::WeightedGroupNuclear: {
      const std::size_t g = rng.index(ball.partition().size());
      const GroupBox& b = ball.partition()[g];
      rank_one(b.c0, b.r0, b.r1, b.k0, b.k1, r / ball.weights()[g]);
      break;
    }
    case BallKind::LInf:
      for (double& x : t.data()) x = rng.uniform() < 0.5 ? -r : r;
      break;
    case BallKind::L2: {
      t = gaussian(shape, rng);
      const double n = vector_norms(t).l2;
      for (double& x : t.data()) x *= r / n;
      break;
    }
    case BallKind::L1:
      t.data()[rng.index(shape.size())] = rng.uniform() < 0.5 ? -r : r;
      break;
  }
  return t;
}

double closed_form_minimum(const DistortionBall& ball, const ImageTensor& d) {
  const double r = ball.radius();
  switch (ball.kind()) {
    case BallKind::Nuclear: {
      double best = 0.0;
      for (std::size_t c = 0; c < d.shape().channels; ++c)
        best = std::max(best, full_svd_small(d.channel(c)).s.front());
      return -r * best;
    }
    case BallKind::GroupNuclear:
    case BallKind::WeightedGroupNuclear: {
      double best = 0.0;
      for (std::size_t g = 0; g < ball.partition().size(); ++g) {
        const GroupBox& b = ball.partition()[g];
        const double s = full_svd_small(d.block(b.c0, b.r0, b.r1, b.k0, b.k1)).s.front();
        best = std::max(best, s / ball.weights()[g]);
      }
      return -r * best;
    }
    case BallKind::LInf: return -r * vector_norms(d).l1;
    case BallKind::L2: return -r * vector_norms(d).l2;
    case BallKind::L1: return -r * vector_norms(d).linf;
  }
  return 0.0;
}

}  // namespace

LmoBatteryResult lmo_battery(const LmoBatteryOptions& options) {
  LmoBatteryResult out;
  for (BallKind kind : kAllKinds) {
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(kind)));
    LmoKindResult res;
    res.kind = kind;
    const std::size_t shapes = std::max<std::size_t>(1, options.shapes);
    for (std::size_t s = 0; s < shapes; ++s) {
      const Shape shape{1 + rng.index(3), 1 + rng.index(8), 1 + rng.index(8)};
      const DistortionBall ball = random_ball(kind, shape, options.radius, rng);
      std::vector<ImageTensor> pool;
      pool.reserve(options.samples);
      for (std::size_t i = 0; i < options.samples; ++i) {
        if (i % 2 == 0) {
          pool.push_back(random_extreme_point(ball, shape, rng));
        } else {
          ImageTensor z = gaussian(shape, rng);
          const double n = ball_norm(ball, z);
          const double scale = n > 0.0 ? options.radius * rng.uniform() / n : 0.0;
          for (double& x : z.data()) x *= scale;
          pool.push_back(std::move(z));
        }
      }
      const std::size_t count = options.directions / shapes + (s < options.directions % shapes ? 1 : 0);
      for (std::size_t k = 0; k < count; ++k) {
        const ImageTensor d = gaussian(shape, rng);
        const Vertex v = lmo(ball, d);
        const double value = inner_product(d, v.delta);
        double sampled = std::numeric_limits<double>::infinity();
        for (const auto& p : pool) sampled = std::min(sampled, inner_product(d, p));
        const double infeasible =
            std::max(0.0, ball_norm(ball, v.delta) - options.radius) / std::max(options.radius, 1e-300);
        res.max_violation = std::max({res.max_violation, value - sampled, infeasible});
        const double exact = closed_form_minimum(ball, d);
        const double rel = std::abs(value - exact) / std::max(std::abs(exact), 1e-300);
        res.max_closed_form_error = std::max(res.max_closed_form_error, rel);
        ++res.directions;
      }
    }
    out.max_violation = std::max(out.max_violation, res.max_violation);
    out.max_closed_form_error = std::max(out.max_closed_form_error, res.max_closed_form_error);
    out.kinds.push_back(res);
  }
  return out;
}

double gradient_relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-6});
}

GradcheckResult gradient_check(const GradcheckOptions& options) {
  struct Case {
    std::string name;
    NetSpec spec;
  };
  const std::vector<Case> cases = {
      {"dense", {{1, 5, 5}, 3, {{LayerKind::Flatten, 0}, {LayerKind::Dense, 6}, {LayerKind::ReLU, 0}, {LayerKind::Dense, 3}}}},
      {"conv", {{2, 6, 6}, 3, {{LayerKind::Conv2d, 4}, {LayerKind::ReLU, 0}, {LayerKind::MaxPool2, 0}, {LayerKind::Flatten, 0}, {LayerKind::Dense, 3}}}},
      {"cnn", NetSpec::preset("cnn", {1, 8, 8}, 4)},
      {"mlp", NetSpec::preset("mlp", {3, 4, 4}, 5)},
  };
  GradcheckResult out;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const auto& c = cases[ci];
    Rng rng(derive_seed(options.seed, ci));
    NetParams params = init_params(c.spec, rng.next());
    for (auto& l : params.layers)
      for (double& b : l.bias) b = rng.uniform(-0.1, 0.1);
    ImageTensor x(c.spec.input);
    for (double& v : x.data()) v = rng.uniform();
    const int label = static_cast<int>(rng.index(c.spec.classes));
    const FullGradient g = loss_and_grads(params, x, label);
    const double h = options.h;

    auto probe = [&](const std::string& name, std::span<double> values, std::span<const double> analytic,
                     auto&& loss_at) {
      GradcheckEntry e{c.name + "/" + name, 0, 0.0};
      const std::size_t n = values.size();
      const std::size_t count = std::min(n, options.coordinates);
      for (std::size_t k = 0; k < count; ++k) {
        const std::size_t i = count == n ? k : rng.index(n);
        const double saved = values[i];
        values[i] = saved + h;
        const double up = loss_at();
        values[i] = saved - h;
        const double down = loss_at();
        values[i] = saved;
        e.max_rel_error = std::max(e.max_rel_error, gradient_relative_error(analytic[i], (up - down) / (2 * h)));
        ++e.checked;
      }
      out.max_rel_error = std::max(out.max_rel_error, e.max_rel_error);
      out.entries.push_back(std::move(e));
    };

    auto loss_now = [&] { return cross_entropy(forward(params, x), label); };
    probe("input", x.data(), g.grad_input.data(), loss_now);
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
      if (params.layers[l].weight.empty()) continue;
      const std::string tag = "layer" + std::to_string(l) + "." + std::string(to_string(c.spec.layers[l].kind));
      probe(tag + ".weight", params.layers[l].weight, g.grad_params[l].weight, loss_now);
      probe(tag + ".bias", params.layers[l].bias, g.grad_params[l].bias, loss_now);
    }
  }
  return out;
}

}  // namespace fwadv
