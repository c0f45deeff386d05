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

#include "fwadv/config.hpp"

#include <filesystem>
#include <string>

#include "fwadv/error.hpp"
#include "fwadv/idx.hpp"
#include "json_util.hpp"

namespace fwadv {
namespace detail {
namespace {

std::string_view selection_name(GroupSelection s) {
  return s == GroupSelection::TopSingularValue ? "top_singular_value" : "nuclear_norm";
}

GroupSelection selection_from(const json& j, const std::string& path) {
  const auto name = as<std::string>(j, path);
  if (name == "top_singular_value") return GroupSelection::TopSingularValue;
  if (name == "nuclear_norm") return GroupSelection::FullNuclearNorm;
  schema_error(path, "expected \"top_singular_value\" or \"nuclear_norm\"");
}

// Rethrows enum-name lookups with the offending path.
template <class F>
auto named(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    schema_error(path, e.what());
  }
}

StepRule step_from(const json& j, const std::string& path) {
  if (j.is_string())
    return {named(path, [&] { return step_kind_from_string(j.get<std::string>()); }),
            std::nullopt, 0.5, 30};
  Fields f(j, path);
  StepRule rule;
  const auto rule_name = f.get<std::string>("rule");
  rule.kind = named(f.path("rule"), [&] { return step_kind_from_string(rule_name); });
  if (const json* l = f.find("lipschitz"); l != nullptr && !l->is_null())
    rule.lipschitz = as<double>(*l, f.path("lipschitz"));
  rule.shrink = f.get<double>("shrink", rule.shrink);
  rule.max_halvings = f.get<int>("max_halvings", rule.max_halvings);
  f.finish();
  return rule;
}

ordered_json step_to_json(const StepRule& rule) {
  ordered_json j;
  j["rule"] = to_string(rule.kind);
  j["lipschitz"] = rule.lipschitz ? ordered_json(*rule.lipschitz) : ordered_json(nullptr);
  j["shrink"] = rule.shrink;
  j["max_halvings"] = rule.max_halvings;
  return j;
}

PartitionSpec partition_from(const json& j, const std::string& path) {
  Fields f(j, path);
  PartitionSpec spec;
  const bool has_grid = f.has("grid");
  const bool has_boxes = f.has("boxes");
  if (has_grid == has_boxes) schema_error(path, "exactly one of \"grid\" or \"boxes\" is required");
  if (has_grid) {
    const json& g = f.require("grid");
    const auto gp = f.path("grid");
    if (g.is_array()) {
      if (g.size() != 2) schema_error(gp, "expected [tiles_down, tiles_across]");
      spec.grid = {{as<std::size_t>(g[0], index_path(gp, 0)), as<std::size_t>(g[1], index_path(gp, 1))}};
    } else {
      const auto n = as<std::size_t>(g, gp);
      spec.grid = {{n, n}};
    }
    if (spec.grid->first == 0 || spec.grid->second == 0) schema_error(gp, "tile counts must be >= 1");
  } else {
    const json& boxes = f.require("boxes");
    const auto bp = f.path("boxes");
    if (!boxes.is_array() || boxes.empty()) schema_error(bp, "expected a nonempty array of boxes");
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const auto p = index_path(bp, i);
      if (!boxes[i].is_array() || boxes[i].size() != 6)
        schema_error(p, "expected [c0, c1, r0, r1, col0, col1]");
      std::size_t v[6];
      for (std::size_t k = 0; k < 6; ++k) v[k] = as<std::size_t>(boxes[i][k], index_path(p, k));
      spec.boxes.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
    }
  }
  f.finish();
  return spec;
}

ordered_json partition_to_json(const PartitionSpec& spec) {
  ordered_json j;
  if (spec.grid) {
    j["grid"] = {spec.grid->first, spec.grid->second};
  } else {
    ordered_json boxes = ordered_json::array();
    for (const auto& b : spec.boxes) boxes.push_back({b.c0, b.c1, b.r0, b.r1, b.k0, b.k1});
    j["boxes"] = std::move(boxes);
  }
  return j;
}

}  // namespace

ordered_json attack_to_json(const AttackConfig& c) {
  ordered_json j;
  j["method"] = to_string(c.method);
  j["radius"] = c.radius;
  j["iterations"] = c.iterations;
  j["step"] = step_to_json(c.step);
  j["alpha"] = c.pgd_alpha;
  j["partition"] = c.partition ? partition_to_json(*c.partition) : ordered_json(nullptr);
  if (c.weights == WeightSource::Explicit)
    j["weights"] = c.explicit_weights;
  else
    j["weights"] = to_string(c.weights);
  j["variance_delta"] = c.variance_delta;
  j["group_selection"] = selection_name(c.selection);
  j["seed"] = c.seed;
  j["random_start"] = c.random_start;
  j["channel_subsample"] = c.channel_subsample;
  j["nonzero_threshold"] = c.nonzero_threshold;
  j["stop_on_success"] = c.stop_on_success;
  j["gap_tol"] = c.gap_tol;
  return j;
}

AttackConfig attack_from_json(const json& j, const std::string& path, std::uint64_t default_seed) {
  Fields f(j, path);
  AttackConfig c;
  const auto method = f.get<std::string>("method");
  c.method = named(f.path("method"), [&] { return attack_method_from_string(method); });
  c.radius = f.get<double>("radius");
  c.iterations = f.get<int>("iterations", c.iterations);
  if (const json* s = f.find("step")) c.step = step_from(*s, f.path("step"));
  c.pgd_alpha = f.get<double>("alpha", c.pgd_alpha);
  if (const json* p = f.find("partition"); p != nullptr && !p->is_null())
    c.partition = partition_from(*p, f.path("partition"));
  if (const json* w = f.find("weights")) {
    const auto wp = f.path("weights");
    if (w->is_array()) {
      c.weights = WeightSource::Explicit;
      for (std::size_t i = 0; i < w->size(); ++i)
        c.explicit_weights.push_back(as<double>((*w)[i], index_path(wp, i)));
    } else {
      const auto name = as<std::string>(*w, wp);
      c.weights = named(wp, [&] { return weight_source_from_string(name); });
      if (c.weights == WeightSource::Explicit)
        schema_error(wp, "explicit weights are given as an array of numbers");
    }
  }
  c.variance_delta = f.get<double>("variance_delta", c.variance_delta);
  if (const json* s = f.find("group_selection")) c.selection = selection_from(*s, f.path("group_selection"));
  c.seed = f.get<std::uint64_t>("seed", default_seed);
  c.random_start = f.get<bool>("random_start", c.random_start);
  c.channel_subsample = f.get<bool>("channel_subsample", c.channel_subsample);
  c.nonzero_threshold = f.get<double>("nonzero_threshold", c.nonzero_threshold);
  c.stop_on_success = f.get<bool>("stop_on_success", c.stop_on_success);
  c.gap_tol = f.get<double>("gap_tol", c.gap_tol);
  f.finish();
  try {
    c.validate();
  } catch (const ValidationError& e) {
    schema_error(path, e.what());
  }
  return c;
}

ordered_json dataset_to_json(const DatasetSource& s) {
  ordered_json j;
  if (s.kind == DatasetSource::Kind::Idx) {
    j["kind"] = "idx";
    j["images"] = s.images;
    j["labels"] = s.labels;
    j["classes"] = s.classes;
  } else {
    j["kind"] = "synth";
    j["generator"] = to_string(s.synth.kind);
    j["n"] = s.synth.n;
    j["seed"] = s.synth.seed;
    j["classes"] = s.synth.classes;
    j["shape"] = {s.synth.shape.channels, s.synth.shape.height, s.synth.shape.width};
    j["noise"] = s.synth.noise;
  }
  j["offset"] = s.offset;
  j["limit"] = s.limit;
  return j;
}

DatasetSource dataset_from_json(const json& j, const std::string& path, std::uint64_t default_seed) {
  Fields f(j, path);
  DatasetSource s;
  const auto kind = f.get<std::string>("kind");
  if (kind == "idx") {
    s.kind = DatasetSource::Kind::Idx;
    s.images = f.get<std::string>("images");
    s.labels = f.get<std::string>("labels");
    s.classes = f.get<std::size_t>("classes", s.classes);
    if (s.classes < 2) schema_error(f.path("classes"), "must be >= 2");
  } else if (kind == "synth") {
    s.kind = DatasetSource::Kind::Synth;
    const auto gen = f.get<std::string>("generator");
    s.synth.kind = named(f.path("generator"), [&] { return synth_kind_from_string(gen); });
    s.synth.n = f.get<std::size_t>("n", s.synth.n);
    if (s.synth.n == 0) schema_error(f.path("n"), "must be >= 1");
    s.synth.seed = f.get<std::uint64_t>("seed", default_seed);
    s.synth.classes = f.get<std::size_t>("classes", s.synth.classes);
    if (const json* sh = f.find("shape")) {
      const auto sp = f.path("shape");
      if (!sh->is_array() || sh->size() != 3) schema_error(sp, "expected [channels, height, width]");
      s.synth.shape = {as<std::size_t>((*sh)[0], index_path(sp, 0)),
                       as<std::size_t>((*sh)[1], index_path(sp, 1)),
                       as<std::size_t>((*sh)[2], index_path(sp, 2))};
      if (s.synth.shape.size() == 0) schema_error(sp, "dimensions must be >= 1");
    }
    s.synth.noise = f.get<double>("noise", s.synth.noise);
    if (!(s.synth.noise >= 0.0)) schema_error(f.path("noise"), "must be >= 0");
  } else {
    schema_error(f.path("kind"), "expected \"idx\" or \"synth\"");
  }
  s.offset = f.get<std::size_t>("offset", s.offset);
  s.limit = f.get<std::size_t>("limit", s.limit);
  f.finish();
  return s;
}

}  // namespace detail

using detail::Fields;
using detail::json;

Dataset load_dataset(const DatasetSource& source, const std::filesystem::path& base_dir) {
  Dataset full;
  if (source.kind == DatasetSource::Kind::Idx) {
    auto resolve = [&](const std::string& p) {
      std::filesystem::path path(p);
      return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
    };
    full = parse_idx(resolve(source.images), resolve(source.labels), source.classes);
  } else {
    full = synth_dataset(source.synth);
  }
  if (source.offset >= full.size())
    throw ValidationError("dataset offset " + std::to_string(source.offset) +
                          " is past the last sample (" + std::to_string(full.size()) + ")");
  const std::size_t count = source.limit == 0 ? full.size() : source.limit;
  if (source.offset == 0 && count >= full.size()) return full;
  return full.slice(source.offset, count);
}

TrainConfig parse_train_config(std::string_view json_text) {
  const auto j = detail::parse_json(json_text);
  Fields f(j, "");
  TrainConfig c;
  c.seed = f.get<std::uint64_t>("seed", c.seed);
  c.data = detail::dataset_from_json(f.require("data"), "data", c.seed);
  if (const json* v = f.find("validation"); v != nullptr && !v->is_null())
    c.validation = detail::dataset_from_json(*v, "validation", c.seed);
  c.preset = f.get<std::string>("preset", c.preset);
  if (c.preset != "mlp" && c.preset != "cnn") detail::schema_error("preset", "expected \"mlp\" or \"cnn\"");
  c.epochs = f.get<int>("epochs", c.epochs);
  if (c.epochs < 0) detail::schema_error("epochs", "must be >= 0");
  c.lr = f.get<double>("lr", c.lr);
  if (!(c.lr >= 0.0)) detail::schema_error("lr", "must be >= 0");
  c.batch = f.get<std::size_t>("batch", c.batch);
  if (c.batch == 0) detail::schema_error("batch", "must be >= 1");
  if (const json* a = f.find("adversarial"); a != nullptr && !a->is_null()) {
    Fields af(*a, "adversarial");
    PgdTrainingAttack atk;
    atk.epsilon = af.get<double>("epsilon", atk.epsilon);
    atk.alpha = af.get<double>("alpha", atk.alpha);
    atk.iters = af.get<int>("iters", atk.iters);
    atk.random_start = af.get<bool>("random_start", atk.random_start);
    af.finish();
    if (!(atk.epsilon >= 0.0)) detail::schema_error("adversarial.epsilon", "must be >= 0");
    if (!(atk.alpha > 0.0)) detail::schema_error("adversarial.alpha", "must be > 0");
    if (atk.iters < 1) detail::schema_error("adversarial.iters", "must be >= 1");
    c.adversarial = atk;
  }
  c.output = f.get<std::string>("output", c.output);
  c.log = f.get<std::string>("log", c.log);
  f.finish();
  return c;
}

AttackRunConfig parse_attack_config(std::string_view json_text) {
  const auto j = detail::parse_json(json_text);
  Fields f(j, "");
  AttackRunConfig c;
  c.seed = f.get<std::uint64_t>("seed", c.seed);
  c.model = f.get<std::string>("model");
  c.data = detail::dataset_from_json(f.require("data"), "data", c.seed);
  const bool one = f.has("attack");
  const bool many = f.has("attacks");
  if (one == many) detail::schema_error("", "exactly one of \"attack\" or \"attacks\" is required");
  if (one) {
    c.attacks.push_back(detail::attack_from_json(f.require("attack"), "attack", c.seed));
  } else {
    const json& list = f.require("attacks");
    if (!list.is_array() || list.empty()) detail::schema_error("attacks", "expected a nonempty array");
    for (std::size_t i = 0; i < list.size(); ++i)
      c.attacks.push_back(detail::attack_from_json(list[i], detail::index_path("attacks", i), c.seed));
  }
  if (const json* r = f.find("radii")) {
    if (!r->is_array() || r->empty()) detail::schema_error("radii", "expected a nonempty array");
    std::vector<AttackConfig> expanded;
    for (const auto& base : c.attacks) {
      for (std::size_t i = 0; i < r->size(); ++i) {
        AttackConfig a = base;
        a.radius = detail::as<double>((*r)[i], detail::index_path("radii", i));
        try {
          a.validate();
        } catch (const ValidationError& e) {
          detail::schema_error(detail::index_path("radii", i), e.what());
        }
        expanded.push_back(std::move(a));
      }
    }
    c.attacks = std::move(expanded);
  }
  c.output_dir = f.get<std::string>("output_dir", c.output_dir);
  c.threads = f.get<unsigned>("threads", c.threads);
  c.save_images = f.get<std::size_t>("save_images", c.save_images);
  f.finish();
  return c;
}

AttackConfig parse_attack_entry(std::string_view json_text, std::uint64_t default_seed) {
  return detail::attack_from_json(detail::parse_json(json_text), "", default_seed);
}

std::string to_json(const AttackConfig& config) { return detail::attack_to_json(config).dump(); }
std::string to_json(const DatasetSource& source) { return detail::dataset_to_json(source).dump(); }

}  // namespace fwadv
