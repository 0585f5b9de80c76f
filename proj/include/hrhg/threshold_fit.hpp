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

#ifndef HRHG_THRESHOLD_FIT_HPP
#define HRHG_THRESHOLD_FIT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hrhg/memory_experiment.hpp"

namespace hrhg {

enum class SweepAxis { DeltaDb, P0 };

std::string_view to_string(SweepAxis a);

struct FitPoint {
    int d = 0;
    double x = 0.0;
    int64_t trials = 0;
    int64_t failures = 0;

    double p() const {
        return static_cast<double>(failures) / static_cast<double>(trials);
    }
};

struct FitOptions {
    int bootstrap_samples = 200;
    double confidence = 0.95;
    uint64_t seed = 1;
};

struct ThresholdEstimate {
    SweepAxis axis = SweepAxis::DeltaDb;
    double fixed_value = 0.0;
    bool crossing_found = false;
    std::string message;
    double x_c = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double nu = 0.0;
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double chi2 = 0.0;
    int dof = 0;
    int bootstrap_used = 0;
    double x_min = 0.0;
    double x_max = 0.0;
    std::vector<double> residuals;  // (observed - model) / sigma, in point order
    std::vector<FitPoint> points;
};

/// A + B u + C u^2 with u = (x - x_c) d^(1/nu).
double scaling_model(const ThresholdEstimate &fit, double x, int d);

/// Weighted least squares of the scaling ansatz, with a percentile bootstrap on x_c from
/// binomially resampled failure counts. Needs at least 3 distances and 4 sweep values
/// (std::invalid_argument otherwise). When the smallest- and largest-distance curves do not
/// swap order across the range, or the fitted crossing falls outside it, `crossing_found` is
/// false and `message` says "no crossing detected".
ThresholdEstimate fit_threshold(std::span<const FitPoint> points, SweepAxis axis, double fixed_value,
                                const FitOptions &options = {});

/// Convenience overload: the swept coordinate of each batch is read from its config.
ThresholdEstimate fit_threshold(std::span<const TrialBatch> batches, SweepAxis axis, const FitOptions &options = {});

std::vector<FitPoint> fit_points(std::span<const TrialBatch> batches, SweepAxis axis);

}  // namespace hrhg

#endif
