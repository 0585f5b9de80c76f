// Copyright 2026 The hrhg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HRHG_REPORT_HPP
#define HRHG_REPORT_HPP

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hrhg/memory_experiment.hpp"
#include "hrhg/mux_estimator.hpp"
#include "hrhg/threshold_fit.hpp"

namespace hrhg {

std::string csv_header();
std::string csv_row(const TrialBatch &batch);

/// Shortest round-trip decimal; infinities print as `inf`.
std::string format_number(double v);

/// Appends rows, writing the header first only when the file is new or empty.
/// Throws std::runtime_error if the file cannot be written.
void append_csv(const std::filesystem::path &path, std::span<const TrialBatch> batches);

nlohmann::json to_json(const TrialBatch &batch);
nlohmann::json to_json(const ThresholdEstimate &fit);
nlohmann::json to_json(const MuxPlan &plan);

/// Writes `value` as pretty JSON, replacing any existing file.
void write_json(const std::filesystem::path &path, const nlohmann::json &value);
/// Adds one compact JSON record per line.
void append_json_line(const std::filesystem::path &path, const nlohmann::json &value);

/// p_fail against the swept axis with error bars per distance, plus the fitted curves.
std::string threshold_svg(const ThresholdEstimate &fit);

struct RegionPoint {
    double delta_db = 0.0;  // +inf for the degenerate model
    double p0 = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    SweepAxis axis = SweepAxis::DeltaDb;
};

RegionPoint region_point(const ThresholdEstimate &fit);

/// Threshold points in the (delta_db, p0) plane with the correctable side shaded.
std::string region_svg(std::span<const RegionPoint> points);

}  // namespace hrhg

#endif
