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

#include "fwadv/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "fwadv/error.hpp"
#include "fwadv/random.hpp"

namespace fwadv {

std::string_view to_string(AttackMethod method) {
  switch (method) {
    case AttackMethod::FwNuclear: return "fw_nuclear";
    case AttackMethod::GroupFwNuclear: return "group_fw_nuclear";
    case AttackMethod::WeightedGroupFwNuclear: return "weighted_group_fw_nuclear";
    case AttackMethod::Pgd: return "pgd";
    case AttackMethod::Fgsm: return "fgsm";
  }
  return "unknown";
}

AttackMethod attack_method_from_string(std::string_view name) {
  for (auto m : {AttackMethod::FwNuclear, AttackMethod::GroupFwNuclear,
                 AttackMethod::WeightedGroupFwNuclear, AttackMethod::Pgd, AttackMethod::Fgsm})
    if (to_string(m) == name) return m;
  if (name == "FWnucl") return AttackMethod::FwNuclear;
  if (name == "GroupFWnucl") return AttackMethod::GroupFwNuclear;
  if (name == "WeightedGroupFWnucl") return AttackMethod::WeightedGroupFwNuclear;
  if (name == "PGD") return AttackMethod::Pgd;
  if (name == "FGSM") return AttackMethod::Fgsm;
  throw ValidationError("unknown attack method '" + std::string(name) + "'");
}

bool is_frank_wolfe(AttackMethod method) {
  return method == AttackMethod::FwNuclear || method == AttackMethod::GroupFwNuclear ||
         method == AttackMethod::WeightedGroupFwNuclear;
}

std::string_view to_string(WeightSource source) {
  switch (source) {
    case WeightSource::None: return "none";
    case WeightSource::Explicit: return "explicit";
    case WeightSource::Variance: return "variance";
  }
  return "unknown";
}

WeightSource weight_source_from_string(std::string_view name) {
  for (auto w : {WeightSource::None, WeightSource::Explicit, WeightSource::Variance})
    if (to_string(w) == name) return w;
  throw ValidationError("unknown weight source '" + std::string(name) + "'");
}

GroupPartition PartitionSpec::build(const Shape& shape) const {
  if (grid) return GroupPartition::grid(shape, grid->first, grid->second);
  return GroupPartition(shape, boxes);
}

void AttackConfig::validate() const {
  if (!std::isfinite(radius) || radius < 0.0)
    throw ValidationError("radius must be finite and >= 0, got " + std::to_string(radius));
  if (iterations < 1 && method != AttackMethod::Fgsm)
    throw ValidationError("iterations must be >= 1");
  if (!(nonzero_threshold > 0.0)) throw ValidationError("nonzero_threshold must be > 0");
  if (!(gap_tol >= 0.0)) throw ValidationError("gap_tol must be >= 0");
  if (method == AttackMethod::Pgd && !(pgd_alpha > 0.0))
    throw ValidationError("pgd step size (alpha) must be > 0");
  if (step.lipschitz && !(*step.lipschitz > 0.0))
    throw ValidationError("lipschitz must be > 0");
  if (step.kind == StepRule::Kind::Backtracking && !(step.shrink > 0.0 && step.shrink < 1.0))
    throw ValidationError("backtracking shrink must lie in (0,1)");
  const bool group = method == AttackMethod::GroupFwNuclear ||
                     method == AttackMethod::WeightedGroupFwNuclear;
  if (group && !partition) throw ValidationError(std::string(to_string(method)) + " needs a partition");
  if (method == AttackMethod::WeightedGroupFwNuclear) {
    if (weights == WeightSource::None)
      throw ValidationError("weighted_group_fw_nuclear needs weights: explicit or variance");
    if (weights == WeightSource::Explicit && explicit_weights.empty())
      throw ValidationError("explicit weights are empty");
  }
  if (!(variance_delta > 0.0)) throw ValidationError("variance_delta must be > 0");
}

LossOracle make_adversarial_oracle(const NetParams& params, int label) {
  return [&params, label](const ImageTensor& x) {
    InputGradient g = loss_and_input_grad(params, x, label);
    LossValue v;
    v.loss = -g.loss;
    v.grad = std::move(g.grad);
    for (double& d : v.grad.data()) d = -d;
    return v;
  };
}

DistortionBall make_ball(const AttackConfig& config, const ImageTensor& x_ori) {
  switch (config.method) {
    case AttackMethod::FwNuclear:
      return DistortionBall::nuclear(config.radius);
    case AttackMethod::GroupFwNuclear:
      return DistortionBall::group_nuclear(config.radius, config.partition->build(x_ori.shape()),
                                           config.selection);
    case AttackMethod::WeightedGroupFwNuclear: {
      GroupPartition part = config.partition->build(x_ori.shape());
      std::vector<double> w = config.weights == WeightSource::Variance
                                  ? variance_weights(x_ori, part, config.variance_delta)
                                  : config.explicit_weights;
      return DistortionBall::weighted_group_nuclear(config.radius, std::move(part), std::move(w),
                                                    config.selection);
    }
    case AttackMethod::Pgd:
    case AttackMethod::Fgsm:
      return DistortionBall::linf(config.radius);
  }
  throw ValidationError("unknown attack method");
}

namespace {

// Stream ids for per-sample seeds.
enum : std::uint64_t { kStreamStart = 1, kStreamSubsample = 2, kStreamLipschitz = 3, kStreamPower = 4 };

std::uint64_t sample_seed(const AttackConfig& c, std::size_t index, std::uint64_t stream) {
  return derive_seed(derive_seed(c.seed, index), stream);
}

}  // namespace

AttackOutcome run_attack(const NetParams& params, const LabeledSample& sample, std::size_t index,
                         const AttackConfig& config) {
  config.validate();
  const ImageTensor& x_ori = sample.image;
  const int label = sample.label;
  const LossOracle oracle = make_adversarial_oracle(params, label);
  const SuccessPredicate fooled = [&params, label](const ImageTensor& x) {
    return predict(params, x) != label;
  };
  const DistortionBall ball = make_ball(config, x_ori);

  AttackOutcome out;
  SampleResult& r = out.result;
  r.index = index;
  r.label = label;
  r.clean_prediction = predict(params, x_ori);
  r.clean_correct = r.clean_prediction == label;

  std::optional<int> first_success;
  if (is_frank_wolfe(config.method)) {
    FwOptions o;
    o.max_iters = config.iterations;
    o.gap_tol = config.gap_tol;
    o.success = fooled;
    o.stop_on_success = config.stop_on_success;
    o.power.seed = sample_seed(config, index, kStreamPower);
    o.lipschitz_seed = sample_seed(config, index, kStreamLipschitz);
    if (config.random_start) o.random_start_seed = sample_seed(config, index, kStreamStart);
    if (config.channel_subsample)
      o.channel_subsample_seed = sample_seed(config, index, kStreamSubsample);
    FwTrace trace = frank_wolfe(oracle, x_ori, ball, config.step, o);
    out.adversarial = trace.adversarial;
    out.delta_pre_clamp = trace.delta;
    std::set<std::size_t> chosen;
    for (const auto& it : trace.iterations)
      if (it.selected && it.gamma > 0.0) chosen.insert(*it.selected);
    if (trace.start_selected) chosen.insert(*trace.start_selected);
    out.selected.assign(chosen.begin(), chosen.end());
    r.fw_gap = trace.final_gap();
    first_success = trace.first_success_iter;
    out.trace = std::move(trace);
  } else if (config.method == AttackMethod::Pgd) {
    PgdOptions o;
    o.epsilon = config.radius;
    o.alpha = config.pgd_alpha;
    o.iters = config.iterations;
    o.success = fooled;
    if (config.random_start) o.random_start_seed = sample_seed(config, index, kStreamStart);
    PgdResult res = pgd(oracle, x_ori, o);
    out.adversarial = std::move(res.adversarial);
    out.delta_pre_clamp = out.adversarial - x_ori;
    first_success = res.first_success_iter;
  } else {
    out.adversarial = fgsm(oracle, x_ori, config.radius);
    out.delta_pre_clamp = out.adversarial - x_ori;
    if (!r.clean_correct) first_success = 0;
    else if (fooled(out.adversarial)) first_success = 1;
  }

  r.adv_prediction = predict(params, out.adversarial);
  r.adv_correct = r.adv_prediction == label;
  if (!r.adv_correct) {
    // The final image is misclassified; fall back to the last step if no
    // intermediate iterate was checked as fooled.
    r.first_success_iter = first_success ? *first_success : config.iterations;
  }

  const ImageTensor applied = out.adversarial - x_ori;
  const VectorNorms n = vector_norms(applied);
  r.l2 = n.l2;
  r.linf = n.linf;
  r.nuclear = tensor_nuclear_norm(applied);
  r.nonzero_pixels = static_cast<std::size_t>(std::count_if(
      applied.data().begin(), applied.data().end(),
      [&](double v) { return std::abs(v) > config.nonzero_threshold; }));
  r.pre_clamp_ball_norm = ball_norm(ball, out.delta_pre_clamp);
  return out;
}

SampleResult attack_sample(const NetParams& params, const LabeledSample& sample,
                           std::size_t index, const AttackConfig& config) {
  return run_attack(params, sample, index, config).result;
}

namespace {

NormSummary summarize(std::vector<double> v) {
  NormSummary s;
  if (v.empty()) return s;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  s.median = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  return s;
}

}  // namespace

AggregateReport aggregate(const AttackConfig& config, std::vector<SampleResult> samples) {
  std::sort(samples.begin(), samples.end(),
            [](const SampleResult& a, const SampleResult& b) { return a.index < b.index; });
  AggregateReport rep;
  rep.config = config;
  rep.attacked = samples.size();
  if (samples.empty()) return rep;
  std::size_t clean = 0, adv = 0, robust = 0;
  double nz = 0.0, gap = 0.0;
  std::size_t gaps = 0;
  std::vector<double> l2, linf, nuc;
  for (const auto& s : samples) {
    clean += s.clean_correct;
    adv += s.adv_correct;
    if (s.clean_correct && s.adv_correct) ++robust;
    nz += static_cast<double>(s.nonzero_pixels);
    if (s.fw_gap) {
      gap += *s.fw_gap;
      ++gaps;
    }
    l2.push_back(s.l2);
    linf.push_back(s.linf);
    nuc.push_back(s.nuclear);
  }
  const double n = static_cast<double>(samples.size());
  rep.clean_accuracy = 100.0 * static_cast<double>(clean) / n;
  rep.adversarial_accuracy = 100.0 * static_cast<double>(adv) / n;
  if (clean > 0)
    rep.robust_accuracy_given_clean = 100.0 * static_cast<double>(robust) / static_cast<double>(clean);
  rep.l2 = summarize(std::move(l2));
  rep.linf = summarize(std::move(linf));
  rep.nuclear = summarize(std::move(nuc));
  rep.mean_nonzero_pixels = nz / n;
  if (gaps > 0) rep.mean_fw_gap = gap / static_cast<double>(gaps);
  rep.samples = std::move(samples);
  return rep;
}

CampaignResult run_campaign(const NetParams& params, const Dataset& data,
                            const std::vector<AttackConfig>& configs,
                            const CampaignOptions& options) {
  if (data.empty()) throw ValidationError("campaign dataset is empty");
  for (const auto& c : configs) c.validate();

  const std::size_t n = data.size();
  const std::size_t jobs = n * configs.size();
  std::vector<std::vector<SampleResult>> results(configs.size(), std::vector<SampleResult>(n));
  std::vector<std::vector<double>> seconds(configs.size(), std::vector<double>(n, 0.0));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= jobs) return;
      const std::size_t ci = job / n;
      const std::size_t si = job % n;
      try {
        const auto t0 = std::chrono::steady_clock::now();
        results[ci][si] = attack_sample(params, data[si], si, configs[ci]);
        seconds[ci][si] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(jobs);
        return;
      }
    }
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  CampaignResult out;
  for (std::size_t ci = 0; ci < configs.size(); ++ci) {
    AggregateReport rep = aggregate(configs[ci], std::move(results[ci]));
    for (double s : seconds[ci]) rep.runtime_seconds += s;
    out.reports.push_back(std::move(rep));
  }
  out.series = radius_series(out.reports);
  return out;
}

std::vector<RadiusSeries> radius_series(const std::vector<AggregateReport>& reports) {
  std::vector<RadiusSeries> out;
  std::vector<bool> used(reports.size(), false);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (used[i]) continue;
    AttackConfig key = reports[i].config;
    key.radius = 0.0;
    RadiusSeries s;
    s.method = key.method;
    for (std::size_t j = i; j < reports.size(); ++j) {
      AttackConfig other = reports[j].config;
      other.radius = 0.0;
      if (used[j] || !(other == key)) continue;
      used[j] = true;
      s.report_indices.push_back(j);
    }
    std::set<double> radii;
    for (std::size_t j : s.report_indices) radii.insert(reports[j].config.radius);
    if (radii.size() < 2) continue;
    std::stable_sort(s.report_indices.begin(), s.report_indices.end(), [&](auto a, auto b) {
      return reports[a].config.radius < reports[b].config.radius;
    });
    for (std::size_t j : s.report_indices)
      s.points.emplace_back(reports[j].config.radius, reports[j].adversarial_accuracy);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace fwadv
