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

#include "fwadv/frank_wolfe.hpp"

#include <algorithm>
#include <cmath>

#include "fwadv/error.hpp"
#include "fwadv/random.hpp"

namespace fwadv {

std::string_view to_string(StepRule::Kind kind) {
  switch (kind) {
    case StepRule::Kind::ShortStep: return "short";
    case StepRule::Kind::Decaying: return "decaying";
    case StepRule::Kind::Backtracking: return "backtracking";
  }
  return "unknown";
}

StepRule::Kind step_kind_from_string(std::string_view name) {
  for (auto k : {StepRule::Kind::ShortStep, StepRule::Kind::Decaying, StepRule::Kind::Backtracking})
    if (to_string(k) == name) return k;
  throw ValidationError("unknown step rule '" + std::string(name) + "'");
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::GapTolerance: return "gap_tol";
    case StopReason::MaxIterations: return "max_iters";
    case StopReason::Success: return "success_stop";
  }
  return "unknown";
}

namespace {

LossValue evaluate(const LossOracle& oracle, const ImageTensor& x) {
  LossValue v = oracle(x);
  if (v.grad.shape() != x.shape())
    throw ValidationError("oracle gradient shape " + v.grad.shape().str() +
                          " does not match input " + x.shape().str());
  if (!std::isfinite(v.loss) || !v.grad.all_finite())
    throw NumericalError("loss oracle returned a non-finite value (loss = " +
                         std::to_string(v.loss) + ")");
  return v;
}

Vertex random_feasible_point(const DistortionBall& ball, const Shape& shape, Rng& rng,
                             const PowerIterationOptions& power) {
  ImageTensor d(shape);
  for (double& x : d.data()) x = rng.normal();
  LmoOptions o;
  o.power = power;
  Vertex v = lmo(ball, d, o);
  const double u = rng.uniform();
  for (double& x : v.delta.data()) x *= u;
  return v;
}

std::vector<bool> draw_channel_subset(std::size_t channels, Rng& rng) {
  // Uniform over the 2^C - 1 nonempty subsets.
  std::vector<bool> mask(channels, false);
  bool any = false;
  while (!any) {
    for (std::size_t c = 0; c < channels; ++c) {
      mask[c] = (rng.next() >> 63) != 0;
      any = any || mask[c];
    }
  }
  return mask;
}

}  // namespace

double estimate_lipschitz(const LossOracle& oracle, const ImageTensor& x_ori,
                          const DistortionBall& ball, int pairs, std::uint64_t seed,
                          const PowerIterationOptions& power) {
  Rng rng(seed);
  double best = 0.0;
  for (int p = 0; p < pairs; ++p) {
    const ImageTensor a = random_feasible_point(ball, x_ori.shape(), rng, power).delta;
    const ImageTensor b = random_feasible_point(ball, x_ori.shape(), rng, power).delta;
    const double dist = vector_norms(a - b).l2;
    if (dist == 0.0) continue;
    const LossValue ga = evaluate(oracle, x_ori + a);
    const LossValue gb = evaluate(oracle, x_ori + b);
    best = std::max(best, vector_norms(ga.grad - gb.grad).l2 / dist);
  }
  return 2.0 * best;
}

FwTrace frank_wolfe(const LossOracle& oracle, const ImageTensor& x_ori, const DistortionBall& ball,
                    const StepRule& step, const FwOptions& options) {
  if (!x_ori.in_unit_box()) throw ValidationError("original image must lie in [0,1]");
  if (options.max_iters < 1) throw ValidationError("max_iters must be >= 1");
  if (!(options.gap_tol >= 0.0)) throw ValidationError("gap_tol must be >= 0");
  if (step.kind == StepRule::Kind::Backtracking &&
      (!(step.shrink > 0.0 && step.shrink < 1.0) || step.max_halvings < 0))
    throw ValidationError("backtracking needs shrink in (0,1) and max_halvings >= 0");
  if (step.lipschitz && !(*step.lipschitz > 0.0))
    throw ValidationError("lipschitz constant must be positive");

  FwTrace trace;
  trace.step_rule = std::string(to_string(step.kind));

  ImageTensor delta(x_ori.shape());
  if (options.initial_delta) {
    if (options.initial_delta->shape() != x_ori.shape())
      throw ValidationError("initial perturbation shape mismatch");
    if (!ball_contains(ball, *options.initial_delta))
      throw ValidationError("initial perturbation lies outside the distortion ball");
    delta = *options.initial_delta;
  } else if (options.random_start_seed) {
    Rng rng(*options.random_start_seed);
    Vertex start = random_feasible_point(ball, x_ori.shape(), rng, options.power);
    delta = std::move(start.delta);
    trace.start_selected = start.selected;
    if (!ball_contains(ball, delta)) throw ValidationError("random start is infeasible");
  }

  if (step.kind == StepRule::Kind::ShortStep) {
    if (step.lipschitz) {
      trace.lipschitz = *step.lipschitz;
      trace.lipschitz_source = "config";
    } else {
      trace.lipschitz = estimate_lipschitz(oracle, x_ori, ball, options.lipschitz_pairs,
                                           options.lipschitz_seed, options.power);
      trace.lipschitz_source =
          "estimated: 2 x max gradient ratio over " + std::to_string(options.lipschitz_pairs) +
          " random feasible pairs";
    }
  }

  std::optional<Rng> subsample;
  if (options.channel_subsample_seed) subsample.emplace(*options.channel_subsample_seed);

  LmoOptions lmo_options;
  lmo_options.power = options.power;

  std::optional<LossValue> cached;
  for (int t = 0;; ++t) {
    if (options.record_iterates) trace.iterates.push_back(delta);
    const ImageTensor x = x_ori + delta;
    LossValue cur = cached ? std::move(*cached) : evaluate(oracle, x);
    cached.reset();
    trace.final_loss = cur.loss;

    if (options.success && !trace.first_success_iter && options.success(clamp_unit(x))) {
      trace.first_success_iter = t;
      if (options.stop_on_success) {
        trace.reason = StopReason::Success;
        break;
      }
    }
    if (t == options.max_iters) {
      trace.reason = StopReason::MaxIterations;
      break;
    }

    if (subsample) lmo_options.channel_mask = draw_channel_subset(x_ori.channels(), *subsample);
    Vertex s = lmo(ball, cur.grad, lmo_options);
    const ImageTensor dir = s.delta - delta;
    const double gap = -inner_product(cur.grad, dir);

    FwIterate rec;
    rec.iter = t;
    rec.loss = cur.loss;
    rec.gap = gap;
    rec.selected = s.selected;

    // A gap from a channel-restricted oracle is not a stationarity certificate.
    if (!subsample && gap <= options.gap_tol) {
      trace.iterations.push_back(rec);
      trace.reason = StopReason::GapTolerance;
      break;
    }

    double gamma = 0.0;
    std::optional<ImageTensor> accepted;
    const double dir_sq = inner_product(dir, dir);
    switch (step.kind) {
      case StepRule::Kind::ShortStep:
        if (dir_sq > 0.0 && gap > 0.0)
          gamma = trace.lipschitz > 0.0
                      ? std::clamp(gap / (trace.lipschitz * dir_sq), 0.0, 1.0)
                      : 1.0;
        break;
      case StepRule::Kind::Decaying:
        gamma = 2.0 / (static_cast<double>(t) + 2.0);
        break;
      case StepRule::Kind::Backtracking: {
        double trial_gamma = 1.0;
        for (int h = 0; h <= step.max_halvings; ++h, trial_gamma *= step.shrink) {
          ImageTensor trial_delta = (1.0 - trial_gamma) * delta + trial_gamma * s.delta;
          LossValue trial = evaluate(oracle, x_ori + trial_delta);
          if (trial.loss <= cur.loss - 0.5 * trial_gamma * gap) {
            gamma = trial_gamma;
            cached = std::move(trial);
            accepted = std::move(trial_delta);
            break;
          }
        }
        break;
      }
    }
    rec.gamma = gamma;
    trace.iterations.push_back(rec);

    if (accepted) {
      delta = std::move(*accepted);
    } else if (gamma > 0.0) {
      for (std::size_t i = 0; i < delta.size(); ++i)
        delta[i] = (1.0 - gamma) * delta[i] + gamma * s.delta[i];
    }
  }

  trace.adversarial = clamp_unit(x_ori + delta);
  trace.delta = std::move(delta);
  return trace;
}

ImageTensor fgsm(const LossOracle& oracle, const ImageTensor& x_ori, double epsilon) {
  if (!x_ori.in_unit_box()) throw ValidationError("original image must lie in [0,1]");
  if (!std::isfinite(epsilon) || epsilon < 0.0) throw ValidationError("fgsm epsilon must be >= 0");
  const LossValue v = evaluate(oracle, x_ori);
  ImageTensor out = x_ori;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double g = v.grad[i];
    const double s = g > 0.0 ? 1.0 : (g < 0.0 ? -1.0 : 0.0);
    out[i] = std::clamp(x_ori[i] - epsilon * s, 0.0, 1.0);
  }
  return out;
}

PgdResult pgd(const LossOracle& oracle, const ImageTensor& x_ori, const PgdOptions& options) {
  if (!x_ori.in_unit_box()) throw ValidationError("original image must lie in [0,1]");
  if (!std::isfinite(options.epsilon) || options.epsilon < 0.0)
    throw ValidationError("pgd epsilon must be >= 0");
  if (!std::isfinite(options.alpha) || options.alpha <= 0.0)
    throw ValidationError("pgd step size must be positive");
  if (options.iters < 0) throw ValidationError("pgd iteration count must be >= 0");

  PgdResult out;
  const double eps = options.epsilon;
  if (options.alpha > 2.0 * eps)
    out.warnings.push_back("pgd step size " + std::to_string(options.alpha) +
                           " exceeds twice the radius " + std::to_string(eps));

  ImageTensor x = x_ori;
  if (options.random_start_seed) {
    Rng rng(*options.random_start_seed);
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = std::clamp(x_ori[i] + rng.uniform(-eps, eps), 0.0, 1.0);
  }
  if (options.success && options.success(x)) out.first_success_iter = 0;

  for (int it = 0; it < options.iters; ++it) {
    const LossValue v = evaluate(oracle, x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double g = v.grad[i];
      const double s = g > 0.0 ? 1.0 : (g < 0.0 ? -1.0 : 0.0);
      const double d = std::clamp((x[i] - x_ori[i]) - options.alpha * s, -eps, eps);
      x[i] = std::clamp(x_ori[i] + d, 0.0, 1.0);
    }
    if (options.success && !out.first_success_iter && options.success(x))
      out.first_success_iter = it + 1;
  }
  out.adversarial = std::move(x);
  return out;
}

}  // namespace fwadv
