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

#include "hrhg/memory_experiment.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace hrhg;

namespace {

TrialConfig config(int d, double db, double p0, uint64_t seed = 7) {
    TrialConfig cfg;
    cfg.d = d;
    cfg.delta = delta_from_db(db);
    cfg.p0 = p0;
    cfg.master_seed = seed;
    return cfg;
}

}  // namespace

TEST(MemoryExperiment, NoiselessTrialSucceeds) {
    auto lat = build_lattice(3);
    auto cfg = config(3, 60, 0);
    for (uint64_t t = 0; t < 20; t++) {
        cfg.trial_index = t;
        auto rec = run_trial_detailed(lat, cfg);
        EXPECT_TRUE(rec.syndrome.defects.empty());
        EXPECT_EQ(rec.outcome, TrialOutcome::Success);
    }
}

TEST(MemoryExperiment, CellFlipDecodesToSuccess) {
    // Flipping a cell's faces lights up its neighbors; away from the sinks the cheapest
    // explanation is the flip itself, so decoding undoes it.
    auto lat = build_lattice(7);
    auto cfg = config(7, 60, 0);
    int tested = 0;
    for (const auto &st : lat.stabilizers()) {
        if (st.location.x < 5 || st.location.x > 9) {
            continue;
        }
        auto rec = run_trial_detailed(lat, cfg, st.qubits);
        EXPECT_FALSE(rec.syndrome.defects.empty());
        EXPECT_EQ(rec.recovery.flipped_qubits.size(), st.qubits.size()) << "cell " << st.id;
        EXPECT_EQ(rec.outcome, TrialOutcome::Success) << "cell " << st.id;
        tested++;
    }
    EXPECT_EQ(tested, 3 * 49);
}

TEST(MemoryExperiment, RingInjectionNeverChangesOutcome) {
    auto lat = build_lattice(3);
    std::vector<int> duals;
    for (const auto &n : lat.nodes()) {
        if (n.parity == Parity::Dual) {
            duals.push_back(n.id);
        }
    }
    std::mt19937_64 gen(3);
    auto cfg = config(3, 9.5, 0.1, 21);
    for (uint64_t t = 0; t < 200; t++) {
        cfg.trial_index = t;
        auto base = run_trial_detailed(lat, cfg);
        auto ring = dual_ring(lat, duals[gen() % duals.size()]);
        auto flipped = run_trial_detailed(lat, cfg, ring);
        EXPECT_EQ(flipped.syndrome.defects, base.syndrome.defects);
        EXPECT_EQ(flipped.outcome, base.outcome);
    }
}

TEST(MemoryExperiment, InjectionRejectsDualNodes) {
    auto lat = build_lattice(3);
    int dual = -1;
    for (const auto &n : lat.nodes()) {
        if (n.parity == Parity::Dual) {
            dual = n.id;
            break;
        }
    }
    std::vector<int> flips{dual};
    EXPECT_THROW(run_trial(lat, config(3, 12, 0), flips), std::invalid_argument);
}

TEST(MemoryExperiment, SpanningChainIsLogicalFailure) {
    for (int d : {3, 5}) {
        auto lat = build_lattice(d);
        std::vector<uint8_t> bits(lat.node_count(), 0);
        for (int n : x_spanning_chain(lat, d, d)) {
            bits[n] = 1;
        }
        EXPECT_EQ(decode_bits(lat, bits), TrialOutcome::Failure);
        std::vector<uint8_t> zero(lat.node_count(), 0);
        EXPECT_EQ(decode_bits(lat, zero), TrialOutcome::Success);
    }
}

TEST(MemoryExperiment, ShortChainsAreCorrected) {
    auto lat = build_lattice(5);
    auto chain = x_spanning_chain(lat, 5, 5);
    // Fewer than half the chain's qubits: the decoder closes the gap the short way.
    for (size_t len = 1; 2 * len < chain.size(); len++) {
        std::vector<uint8_t> bits(lat.node_count(), 0);
        for (size_t i = 0; i < len; i++) {
            bits[chain[i]] = 1;
        }
        EXPECT_EQ(decode_bits(lat, bits), TrialOutcome::Success) << len;
    }
}

TEST(MemoryExperiment, EstimateRateValidation) {
    auto cfg = config(3, 12, 0);
    EXPECT_THROW(estimate_rate(cfg, 0), std::invalid_argument);
    auto lat = build_lattice(5);
    EXPECT_THROW(estimate_rate(lat, cfg, 10), std::invalid_argument);
    cfg.p0 = 1.5;
    EXPECT_THROW(estimate_rate(cfg, 10), std::invalid_argument);
    cfg.p0 = 0;
    cfg.delta = -1;
    EXPECT_THROW(estimate_rate(cfg, 10), std::invalid_argument);
}

TEST(MemoryExperiment, EstimatesAreDeterministicAcrossWorkers) {
    auto lat = build_lattice(3);
    auto cfg = config(3, 9.5, 0.05, 99);
    auto a = estimate_rate(lat, cfg, 600, 1);
    auto b = estimate_rate(lat, cfg, 600, 1);
    auto c = estimate_rate(lat, cfg, 600, 3);
    EXPECT_EQ(a.failures, b.failures);
    EXPECT_EQ(a.failures, c.failures);
    EXPECT_GT(a.failures, 0);
    int64_t manual = 0;
    for (uint64_t t = 0; t < 600; t++) {
        cfg.trial_index = t;
        manual += run_trial(lat, cfg) == TrialOutcome::Failure;
    }
    EXPECT_EQ(manual, a.failures);
}

TEST(MemoryExperiment, MoreSqueezingFailsLess) {
    auto lat = build_lattice(5);
    auto noisy = estimate_rate(lat, config(5, 8, 0), 400);
    auto clean = estimate_rate(lat, config(5, 13, 0), 400);
    EXPECT_GT(noisy.p_fail(), clean.p_fail());
    EXPECT_GT(noisy.p_fail(), 0.2);
    EXPECT_LT(clean.p_fail(), 0.02);
}

TEST(MemoryExperiment, AnalogBeatsUniformWeights) {
    auto lat = build_lattice(5);
    auto cfg = config(5, 10.5, 0);
    auto analog = estimate_rate(lat, cfg, 800);
    cfg.weights = WeightMode::Uniform;
    auto uniform = estimate_rate(lat, cfg, 800);
    EXPECT_LT(analog.failures, uniform.failures);
}

TEST(MemoryExperiment, BatchStatistics) {
    TrialBatch b;
    b.trials = 400;
    b.failures = 100;
    EXPECT_DOUBLE_EQ(b.p_fail(), 0.25);
    EXPECT_DOUBLE_EQ(b.stderr_mean(), std::sqrt(0.25 * 0.75 / 400));
    EXPECT_FALSE(b.low_confidence());
    b.failures = 24;
    EXPECT_TRUE(b.low_confidence());
    b.failures = 25;
    EXPECT_FALSE(b.low_confidence());
    b.failures = 0;
    EXPECT_EQ(b.stderr_mean(), 0.0);
}

TEST(MemoryExperiment, RingParity) {
    EXPECT_EQ(ring_parity_violation(1, 5000), 0.0);
    EXPECT_NEAR(ring_parity_violation(2, 20000), 0.25, 0.02);
    EXPECT_NEAR(ring_parity_violation(4, 20000), 0.40, 0.02);
    EXPECT_THROW(ring_parity_violation(0, 10), std::invalid_argument);
    EXPECT_THROW(ring_parity_violation(5, 10), std::invalid_argument);
    EXPECT_THROW(ring_parity_violation(2, 0), std::invalid_argument);
    EXPECT_EQ(ring_parity_violation(3, 1000, 5), ring_parity_violation(3, 1000, 5));
}

TEST(MemoryExperiment, SignConventionDoesNotChangeRates) {
    auto plain = build_lattice(3);
    auto alt = build_lattice(3, BoundaryConvention::PrimalSinksX, SignConvention::alternating());
    auto cfg = config(3, 10, 0.05, 5);
    auto a = estimate_rate(plain, cfg, 3000);
    auto b = estimate_rate(alt, cfg, 3000);
    double se = std::sqrt(a.stderr_mean() * a.stderr_mean() + b.stderr_mean() * b.stderr_mean());
    EXPECT_LT(std::abs(a.p_fail() - b.p_fail()), 3 * se);
}
