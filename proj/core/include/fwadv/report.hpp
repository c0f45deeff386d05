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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fwadv/config.hpp"
#include "fwadv/harness.hpp"

namespace fwadv {

/// Run-level context echoed into report.json.
struct RunInfo {
  std::uint64_t seed = 0;
  std::string model;
  DatasetSource data;
};

/// Deterministic report body: no timing, no host information.
std::string report_json(const RunInfo& run, const std::vector<AggregateReport>& reports,
                        const std::vector<RadiusSeries>& series);

inline constexpr std::string_view kReportCsvHeader =
    "index,clean_correct,adv_correct,first_success_iter,l2,linf,nuclear,nonzero_pixels";

/// One row per attacked sample, LF line endings, empty field for an absent
/// first_success_iter, doubles in shortest round-trip form.
std::string report_csv(const AggregateReport& report);

/// Rebuilds the CSV of reports[index] from report.json text alone.
std::string csv_from_report_json(std::string_view json_text, std::size_t index = 0);

std::string series_csv(const RadiusSeries& series);

/// Parsed view of report.json used by the render subcommand.
struct ReportDocument {
  RunInfo run;
  std::vector<AggregateReport> reports;
};
ReportDocument parse_report_json(std::string_view json_text);

struct ReportFiles {
  std::filesystem::path json;
  std::vector<std::filesystem::path> csv;
  std::filesystem::path timing;
};

/// Writes report.json, report.csv (report_<k>.csv when there are several
/// configs), series_<k>.csv for each radius series and a separate
/// timing.json holding the runtimes.
ReportFiles write_report(const RunInfo& run, const std::vector<AggregateReport>& reports,
                         const std::vector<RadiusSeries>& series,
                         const std::filesystem::path& dir);

}  // namespace fwadv
