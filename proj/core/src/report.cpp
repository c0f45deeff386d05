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

#include "fwadv/report.hpp"

#include <charconv>
#include <string>

#include "fwadv/error.hpp"
#include "fwadv/pnm.hpp"
#include "json_util.hpp"

namespace fwadv {
namespace {

using detail::Fields;
using detail::json;
using detail::ordered_json;

std::string fmt(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

ordered_json summary_json(const NormSummary& s) { return {{"mean", s.mean}, {"median", s.median}}; }

template <class T>
ordered_json optional_json(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json sample_json(const SampleResult& s) {
  ordered_json j;
  j["index"] = s.index;
  j["label"] = s.label;
  j["clean_prediction"] = s.clean_prediction;
  j["adv_prediction"] = s.adv_prediction;
  j["clean_correct"] = s.clean_correct;
  j["adv_correct"] = s.adv_correct;
  j["first_success_iter"] = optional_json(s.first_success_iter);
  j["l2"] = s.l2;
  j["linf"] = s.linf;
  j["nuclear"] = s.nuclear;
  j["nonzero_pixels"] = s.nonzero_pixels;
  j["fw_gap"] = optional_json(s.fw_gap);
  j["pre_clamp_ball_norm"] = s.pre_clamp_ball_norm;
  return j;
}

template <class T>
std::optional<T> optional_from(Fields& f, std::string_view key) {
  const json& v = f.require(key);
  if (v.is_null()) return std::nullopt;
  return detail::as<T>(v, f.path(key));
}

SampleResult sample_from(const json& j, const std::string& path) {
  Fields f(j, path);
  SampleResult s;
  s.index = f.get<std::size_t>("index");
  s.label = f.get<int>("label");
  s.clean_prediction = f.get<int>("clean_prediction");
  s.adv_prediction = f.get<int>("adv_prediction");
  s.clean_correct = f.get<bool>("clean_correct");
  s.adv_correct = f.get<bool>("adv_correct");
  s.first_success_iter = optional_from<int>(f, "first_success_iter");
  s.l2 = f.get<double>("l2");
  s.linf = f.get<double>("linf");
  s.nuclear = f.get<double>("nuclear");
  s.nonzero_pixels = f.get<std::size_t>("nonzero_pixels");
  s.fw_gap = optional_from<double>(f, "fw_gap");
  s.pre_clamp_ball_norm = f.get<double>("pre_clamp_ball_norm");
  f.finish();
  return s;
}

NormSummary summary_from(const json& j, const std::string& path) {
  Fields f(j, path);
  NormSummary s{f.get<double>("mean"), f.get<double>("median")};
  f.finish();
  return s;
}

std::string csv_row(std::size_t index, bool clean, bool adv, std::optional<int> first, double l2,
                    double linf, double nuclear, std::size_t nonzero) {
  std::string row = std::to_string(index) + "," + (clean ? "1" : "0") + "," + (adv ? "1" : "0") + ",";
  if (first) row += std::to_string(*first);
  row += "," + fmt(l2) + "," + fmt(linf) + "," + fmt(nuclear) + "," + std::to_string(nonzero) + "\n";
  return row;
}

}  // namespace

std::string report_json(const RunInfo& run, const std::vector<AggregateReport>& reports,
                        const std::vector<RadiusSeries>& series) {
  ordered_json j;
  j["format"] = "fwadv-report";
  j["version"] = 1;
  j["run"] = {{"seed", run.seed}, {"model", run.model}, {"data", detail::dataset_to_json(run.data)}};
  j["reports"] = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json rj;
    rj["config"] = detail::attack_to_json(r.config);
    rj["attacked"] = r.attacked;
    rj["clean_accuracy"] = r.clean_accuracy;
    rj["adversarial_accuracy"] = r.adversarial_accuracy;
    rj["robust_accuracy_given_clean"] = optional_json(r.robust_accuracy_given_clean);
    rj["l2"] = summary_json(r.l2);
    rj["linf"] = summary_json(r.linf);
    rj["nuclear"] = summary_json(r.nuclear);
    rj["mean_nonzero_pixels"] = r.mean_nonzero_pixels;
    rj["mean_fw_gap"] = optional_json(r.mean_fw_gap);
    rj["samples"] = ordered_json::array();
    for (const auto& s : r.samples) rj["samples"].push_back(sample_json(s));
    j["reports"].push_back(std::move(rj));
  }
  j["series"] = ordered_json::array();
  for (const auto& s : series) {
    ordered_json sj;
    sj["method"] = to_string(s.method);
    sj["report_indices"] = s.report_indices;
    sj["points"] = ordered_json::array();
    for (const auto& [radius, acc] : s.points) sj["points"].push_back({radius, acc});
    j["series"].push_back(std::move(sj));
  }
  return j.dump(1) + "\n";
}

std::string report_csv(const AggregateReport& report) {
  std::string out(kReportCsvHeader);
  out += "\n";
  for (const auto& s : report.samples)
    out += csv_row(s.index, s.clean_correct, s.adv_correct, s.first_success_iter, s.l2, s.linf,
                   s.nuclear, s.nonzero_pixels);
  return out;
}

std::string csv_from_report_json(std::string_view json_text, std::size_t index) {
  const json j = detail::parse_json(json_text);
  if (!j.is_object() || !j.contains("reports") || !j["reports"].is_array())
    detail::schema_error("reports", "missing reports array");
  const json& reports = j["reports"];
  if (index >= reports.size())
    throw ValidationError("report index " + std::to_string(index) + " out of range");
  std::string out(kReportCsvHeader);
  out += "\n";
  const auto path = detail::index_path("reports", index);
  if (!reports[index].contains("samples")) detail::schema_error(path, "missing samples");
  const json& samples = reports[index]["samples"];
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const SampleResult s = sample_from(samples[i], detail::index_path(path + ".samples", i));
    out += csv_row(s.index, s.clean_correct, s.adv_correct, s.first_success_iter, s.l2, s.linf,
                   s.nuclear, s.nonzero_pixels);
  }
  return out;
}

std::string series_csv(const RadiusSeries& series) {
  std::string out = "radius,adversarial_accuracy\n";
  for (const auto& [radius, acc] : series.points) out += fmt(radius) + "," + fmt(acc) + "\n";
  return out;
}

ReportDocument parse_report_json(std::string_view json_text) {
  const json j = detail::parse_json(json_text);
  Fields f(j, "");
  if (f.get<std::string>("format") != "fwadv-report")
    detail::schema_error("format", "expected \"fwadv-report\"");
  if (const int v = f.get<int>("version"); v != 1)
    throw VersionError("unsupported report version " + std::to_string(v));
  ReportDocument doc;
  Fields run(f.require("run"), "run");
  doc.run.seed = run.get<std::uint64_t>("seed");
  doc.run.model = run.get<std::string>("model");
  doc.run.data = detail::dataset_from_json(run.require("data"), "run.data", doc.run.seed);
  run.finish();
  const json& reports = f.require("reports");
  if (!reports.is_array()) detail::schema_error("reports", "expected an array");
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto p = detail::index_path("reports", i);
    Fields rf(reports[i], p);
    AggregateReport r;
    r.config = detail::attack_from_json(rf.require("config"), rf.path("config"), doc.run.seed);
    r.attacked = rf.get<std::size_t>("attacked");
    r.clean_accuracy = rf.get<double>("clean_accuracy");
    r.adversarial_accuracy = rf.get<double>("adversarial_accuracy");
    r.robust_accuracy_given_clean = optional_from<double>(rf, "robust_accuracy_given_clean");
    r.l2 = summary_from(rf.require("l2"), rf.path("l2"));
    r.linf = summary_from(rf.require("linf"), rf.path("linf"));
    r.nuclear = summary_from(rf.require("nuclear"), rf.path("nuclear"));
    r.mean_nonzero_pixels = rf.get<double>("mean_nonzero_pixels");
    r.mean_fw_gap = optional_from<double>(rf, "mean_fw_gap");
    const json& samples = rf.require("samples");
    if (!samples.is_array()) detail::schema_error(rf.path("samples"), "expected an array");
    for (std::size_t s = 0; s < samples.size(); ++s)
      r.samples.push_back(sample_from(samples[s], detail::index_path(rf.path("samples"), s)));
    rf.finish();
    doc.reports.push_back(std::move(r));
  }
  f.require("series");
  f.finish();
  return doc;
}

ReportFiles write_report(const RunInfo& run, const std::vector<AggregateReport>& reports,
                         const std::vector<RadiusSeries>& series,
                         const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory '" + dir.string() + "': " + ec.message());
  ReportFiles files;
  files.json = dir / "report.json";
  write_file(files.json, report_json(run, reports, series));
  for (std::size_t k = 0; k < reports.size(); ++k) {
    auto path = reports.size() == 1 ? dir / "report.csv" : dir / ("report_" + std::to_string(k) + ".csv");
    write_file(path, report_csv(reports[k]));
    files.csv.push_back(std::move(path));
  }
  for (std::size_t k = 0; k < series.size(); ++k)
    write_file(dir / ("series_" + std::to_string(k) + ".csv"), series_csv(series[k]));
  ordered_json timing;
  timing["runtime_seconds"] = ordered_json::array();
  for (const auto& r : reports) timing["runtime_seconds"].push_back(r.runtime_seconds);
  files.timing = dir / "timing.json";
  write_file(files.timing, timing.dump(1) + "\n");
  return files;
}

}  // namespace fwadv
