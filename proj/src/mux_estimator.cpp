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

#include "hrhg/mux_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hrhg {

double herald_probability(double p_gbs, int64_t n) {
    return -std::expm1(static_cast<double>(n) * std::log1p(-p_gbs));
}

double miss_probability(double p_gbs, int64_t n) {
    if (n == 1) {
        return 1 - p_gbs;
    }
    return std::exp(static_cast<double>(n) * std::log1p(-p_gbs));
}

MuxPlan plan_mux(double p_gbs, double p0) {
    if (!(p_gbs > 0 && p_gbs < 1) || !(p0 > 0 && p0 < 1)) {
        throw std::invalid_argument("p_gbs and p0 must lie strictly between 0 and 1");
    }
    MuxPlan plan;
    plan.p_gbs = p_gbs;
    plan.p0 = p0;
    int64_t n = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(std::log(p0) / std::log1p(-p_gbs))));
    // The closed form can land one off in floating point; settle it against the inequality.
    while (miss_probability(p_gbs, n) > p0) {
        n++;
    }
    while (n > 1 && miss_probability(p_gbs, n - 1) <= p0) {
        n--;
    }
    plan.n_gbs = n;
    int depth = 0;
    while ((int64_t{1} << depth) < n + 1) {
        depth++;
    }
    plan.depth = depth;
    plan.switches = (int64_t{1} << depth) - 1;
    return plan;
}

std::string format_mux_table(const MuxPlan &plan) {
    std::ostringstream out;
    out << "p_gbs     " << plan.p_gbs << "\n"
        << "p0        " << plan.p0 << "\n"
        << "n_gbs     " << plan.n_gbs << "\n"
        << "depth     " << plan.depth << "\n"
        << "switches  " << plan.switches << "\n";
    return out.str();
}

}  // namespace hrhg
