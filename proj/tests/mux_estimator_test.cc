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

#include <gtest/gtest.h>

#include <cmath>

using namespace hrhg;

TEST(Mux, WorkedValues) {
    auto plan = plan_mux(0.021, 0.01);
    EXPECT_EQ(plan.n_gbs, 217);
    EXPECT_EQ(plan.depth, 8);
    EXPECT_EQ(plan.switches, 255);
    auto half = plan_mux(0.5, 0.5);
    EXPECT_EQ(half.n_gbs, 1);
    EXPECT_EQ(half.depth, 1);
    EXPECT_EQ(half.switches, 1);
}

TEST(Mux, SingleDeviceWhenTargetIsLoose) {
    EXPECT_EQ(plan_mux(0.3, 0.7).n_gbs, 1);
    EXPECT_EQ(plan_mux(0.25, 0.75).n_gbs, 1);
    EXPECT_EQ(plan_mux(0.1, 0.9).n_gbs, 1);
    EXPECT_EQ(plan_mux(0.3, 0.9).n_gbs, 1);
    EXPECT_EQ(plan_mux(0.3, 0.6).n_gbs, 2);
}

TEST(Mux, MinimalAndMonotone) {
    std::vector<std::vector<int64_t>> n(100, std::vector<int64_t>(100));
    for (int i = 0; i < 100; i++) {
        for (int j = 0; j < 100; j++) {
            double pg = (i + 0.5) / 100.0;
            double p0 = (j + 0.5) / 100.0;
            auto plan = plan_mux(pg, p0);
            n[i][j] = plan.n_gbs;
            EXPECT_LE(miss_probability(pg, plan.n_gbs), p0);
            if (plan.n_gbs > 1) {
                EXPECT_GT(miss_probability(pg, plan.n_gbs - 1), p0);
            }
            EXPECT_GE((int64_t{1} << plan.depth), plan.n_gbs + 1);
            EXPECT_LT((int64_t{1} << (plan.depth - 1)), plan.n_gbs + 1);
            EXPECT_EQ(plan.switches, (int64_t{1} << plan.depth) - 1);
        }
    }
    for (int i = 0; i < 100; i++) {
        for (int j = 0; j < 100; j++) {
            if (i > 0) {
                EXPECT_LE(n[i][j], n[i - 1][j]);
            }
            if (j > 0) {
                EXPECT_LE(n[i][j], n[i][j - 1]);
            }
        }
    }
}

TEST(Mux, HeraldProbability) {
    EXPECT_DOUBLE_EQ(herald_probability(0.5, 1), 0.5);
    EXPECT_NEAR(herald_probability(0.021, 217), 1 - std::pow(0.979, 217), 1e-14);
    EXPECT_NEAR(herald_probability(1e-9, 1000), 1e-6, 1e-12);
}

TEST(Mux, RejectsDegenerateProbabilities) {
    for (auto [pg, p0] : {std::pair{0.0, 0.1}, {1.0, 0.1}, {0.1, 0.0}, {0.1, 1.0}, {-0.1, 0.5}, {NAN, 0.5}}) {
        EXPECT_THROW(plan_mux(pg, p0), std::invalid_argument);
    }
}

TEST(Mux, Table) {
    auto text = format_mux_table(plan_mux(0.021, 0.01));
    EXPECT_NE(text.find("n_gbs     217"), std::string::npos);
    EXPECT_NE(text.find("switches  255"), std::string::npos);
}
