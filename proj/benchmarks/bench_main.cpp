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

#include <benchmark/benchmark.h>

#include "fwadv/distortion.hpp"
#include "fwadv/frank_wolfe.hpp"
#include "fwadv/harness.hpp"
#include "fwadv/linalg.hpp"
#include "fwadv/random.hpp"
#include "fwadv/tinynet.hpp"

namespace {

using namespace fwadv;

ImageTensor random_tensor(Shape shape, std::uint64_t seed) {
  Rng rng(seed);
  ImageTensor t(shape);
  for (double& x : t.data()) x = rng.normal();
  return t;
}

void BM_PowerIteration(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix m = random_tensor({1, n, n}, 1).channel(0);
  for (auto _ : state) benchmark::DoNotOptimize(top_singular_pair(m).sigma);
}
BENCHMARK(BM_PowerIteration)->Arg(8)->Arg(28)->Arg(64);

void BM_JacobiSvd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix m = random_tensor({1, n, n}, 2).channel(0);
  for (auto _ : state) benchmark::DoNotOptimize(singular_values(m));
}
BENCHMARK(BM_JacobiSvd)->Arg(8)->Arg(28);

void BM_NuclearLmo(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const ImageTensor d = random_tensor({c, 28, 28}, 3);
  const DistortionBall ball = DistortionBall::nuclear(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(lmo(ball, d).score);
}
BENCHMARK(BM_NuclearLmo)->Arg(1)->Arg(3);

void BM_GroupLmo(benchmark::State& state) {
  const ImageTensor d = random_tensor({1, 28, 28}, 4);
  const DistortionBall ball =
      DistortionBall::group_nuclear(1.0, GroupPartition::grid(d.shape(), 4, 4));
  for (auto _ : state) benchmark::DoNotOptimize(lmo(ball, d).score);
}
BENCHMARK(BM_GroupLmo);

NetParams mnist_cnn() { return init_params(NetSpec::preset("cnn", {1, 28, 28}, 10), 5); }

void BM_CnnForward(benchmark::State& state) {
  const NetParams p = mnist_cnn();
  const ImageTensor x = random_tensor({1, 28, 28}, 6);
  for (auto _ : state) benchmark::DoNotOptimize(forward(p, x));
}
BENCHMARK(BM_CnnForward);

void BM_CnnInputGradient(benchmark::State& state) {
  const NetParams p = mnist_cnn();
  const ImageTensor x = random_tensor({1, 28, 28}, 7);
  for (auto _ : state) benchmark::DoNotOptimize(loss_and_input_grad(p, x, 3).loss);
}
BENCHMARK(BM_CnnInputGradient);

void BM_CnnFullGradient(benchmark::State& state) {
  const NetParams p = mnist_cnn();
  const ImageTensor x = random_tensor({1, 28, 28}, 8);
  for (auto _ : state) benchmark::DoNotOptimize(loss_and_grads(p, x, 3).loss);
}
BENCHMARK(BM_CnnFullGradient);

void BM_FwNuclearAttack(benchmark::State& state) {
  const NetParams p = mnist_cnn();
  LabeledSample s{clamp_unit(random_tensor({1, 28, 28}, 9)), 3};
  AttackConfig cfg;
  cfg.radius = 3.0;
  cfg.step = StepRule::short_step(state.range(0) ? std::optional<double>(10.0) : std::nullopt);
  for (auto _ : state) benchmark::DoNotOptimize(attack_sample(p, s, 0, cfg).l2);
}
BENCHMARK(BM_FwNuclearAttack)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
