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

#include "fwadv/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fwadv/error.hpp"
#include "fwadv/random.hpp"

namespace fwadv {
namespace {

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

Dataset blobs(const SynthOptions& o, Rng& rng) {
  const std::size_t k_classes = o.classes == 0 ? 3 : o.classes;
  const std::size_t dim = o.shape.size();
  std::vector<ImageTensor> protos;
  for (std::size_t k = 0; k < k_classes; ++k) {
    ImageTensor p(o.shape);
    for (double& v : p.data()) v = rng.uniform(0.2, 0.8);
    protos.push_back(std::move(p));
  }
  double min_sep = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < k_classes; ++a)
    for (std::size_t b = a + 1; b < k_classes; ++b)
      min_sep = std::min(min_sep, distance(protos[a].data(), protos[b].data()));
  // Own prototype must be nearer than any other by this much.
  const double margin = 0.25 * min_sep;

  Dataset data{o.shape, k_classes, {}};
  data.samples.reserve(o.n);
  for (std::size_t i = 0; i < o.n; ++i) {
    const int y = static_cast<int>(i % k_classes);
    ImageTensor x(o.shape);
    bool accepted = false;
    for (int attempt = 0; attempt < 1000 && !accepted; ++attempt) {
      for (std::size_t p = 0; p < dim; ++p)
        x.data()[p] = std::clamp(protos[y].data()[p] + o.noise * rng.normal(), 0.0, 1.0);
      const double own = distance(x.data(), protos[y].data());
      accepted = true;
      for (std::size_t k = 0; k < k_classes && accepted; ++k)
        if (static_cast<int>(k) != y && distance(x.data(), protos[k].data()) < own + margin)
          accepted = false;
    }
    if (!accepted) throw ValidationError("blob noise too large to keep the class margin");
    data.samples.push_back({std::move(x), y});
  }
  return data;
}

Dataset bars(const SynthOptions& o, Rng& rng) {
  const std::size_t k_classes = o.classes == 0 ? 2 : o.classes;
  if (k_classes > 4) throw ValidationError("bars supports at most 4 orientation classes");
  const auto h = static_cast<long>(o.shape.height);
  const auto w = static_cast<long>(o.shape.width);
  if (h < 3 || w < 3) throw ValidationError("bars needs images of at least 3x3");

  Dataset data{o.shape, k_classes, {}};
  data.samples.reserve(o.n);
  for (std::size_t i = 0; i < o.n; ++i) {
    const int y = static_cast<int>(i % k_classes);
    const double level = rng.uniform(0.7, 1.0);
    const long row = 1 + static_cast<long>(rng.index(static_cast<std::size_t>(h - 2)));
    const long col = 1 + static_cast<long>(rng.index(static_cast<std::size_t>(w - 2)));
    const long span = std::max(1L, std::min(h, w) / 3);
    const long shift = static_cast<long>(rng.index(static_cast<std::size_t>(2 * span + 1))) - span;
    ImageTensor x(o.shape);
    for (std::size_t c = 0; c < o.shape.channels; ++c) {
      for (long r = 0; r < h; ++r) {
        for (long k = 0; k < w; ++k) {
          bool on = false;
          switch (y) {
            case 0: on = r == row; break;
            case 1: on = k == col; break;
            case 2: on = k - r == shift; break;
            default: on = r + k == std::min(h, w) - 1 + shift; break;
          }
          const double v = (on ? level : 0.0) + o.noise * std::abs(rng.normal());
          x.at(c, static_cast<std::size_t>(r), static_cast<std::size_t>(k)) = std::clamp(v, 0.0, 1.0);
        }
      }
    }
    data.samples.push_back({std::move(x), y});
  }
  return data;
}

}  // namespace

std::string_view to_string(SynthKind kind) { return kind == SynthKind::Blobs ? "blobs" : "bars"; }

SynthKind synth_kind_from_string(std::string_view name) {
  if (name == "blobs") return SynthKind::Blobs;
  if (name == "bars") return SynthKind::Bars;
  throw ValidationError("unknown synthetic generator '" + std::string(name) + "'");
}

Dataset synth_dataset(const SynthOptions& options) {
  if (options.n == 0) throw ValidationError("synthetic dataset needs n >= 1");
  if (options.shape.size() == 0) throw ValidationError("synthetic dataset needs a nonempty shape");
  if (options.classes == 1) throw ValidationError("synthetic dataset needs at least 2 classes");
  if (!(options.noise >= 0.0)) throw ValidationError("noise must be >= 0");
  Rng rng(options.seed);
  return options.kind == SynthKind::Blobs ? blobs(options, rng) : bars(options, rng);
}

}  // namespace fwadv
