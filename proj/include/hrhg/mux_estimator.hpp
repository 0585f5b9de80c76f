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

#ifndef HRHG_MUX_ESTIMATOR_HPP
#define HRHG_MUX_ESTIMATOR_HPP

#include <cstdint>
#include <string>

namespace hrhg {

/// Parallel heralded GKP sources behind a binary switch tree.
struct MuxPlan {
    double p_gbs = 0.0;
    double p0 = 0.0;
    int64_t n_gbs = 0;
    int depth = 0;
    int64_t switches = 0;
};

/// Smallest n_gbs with 1 - (1 - p_gbs)^n_gbs >= 1 - p0. Throws std::invalid_argument unless
/// both probabilities lie strictly inside (0, 1).
MuxPlan plan_mux(double p_gbs, double p0);

/// 1 - (1 - p_gbs)^n.
double herald_probability(double p_gbs, int64_t n);

/// (1 - p_gbs)^n, the chance that no device heralds. plan_mux compares this with p0.
double miss_probability(double p_gbs, int64_t n);

std::string format_mux_table(const MuxPlan &plan);

}  // namespace hrhg

#endif
