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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "hrhg/rng.hpp"

namespace hrhg {

TrialOutcome logical_outcome(const Lattice &lattice, const std::vector<uint8_t> &bits, const Recovery &recovery) {
    uint8_t parity = 0;
    for (int node : lattice.correlation_surface().qubits) {
        parity ^= bits[node] & 1;
    }
    std::vector<uint8_t> on_surface(lattice.node_count(), 0);
    for (int node : lattice.correlation_surface().qubits) {
        on_surface[node] = 1;
    }
    for (int q : recovery.flipped_qubits) {
        parity ^= on_surface[lattice.primal_qubits()[q]];
    }
    return parity ? TrialOutcome::Failure : TrialOutcome::Success;
}

namespace {

void check_recovery(const Lattice &lattice, std::vector<uint8_t> bits, const Recovery &rec) {
    for (int q : rec.flipped_qubits) {
        bits[lattice.primal_qubits()[q]] ^= 1;
    }
    if (!syndrome(lattice, bits).defects.empty()) {
        throw InvariantViolation("recovery left a non-empty syndrome");
    }
}

void validate(const Lattice &lattice, const TrialConfig &cfg) {
    if (cfg.d != lattice.distance()) {
        throw std::invalid_argument("trial distance does not match the lattice");
    }
    if (!(cfg.delta >= 0) || !std::isfinite(cfg.delta)) {
        throw std::invalid_argument("delta must be finite and non-negative");
    }
    if (!(cfg.p0 >= 0 && cfg.p0 <= 1)) {
        throw std::invalid_argument("p0 must lie in [0, 1]");
    }
}

}  // namespace

TrialRecord run_trial_detailed(const Lattice &lattice, const TrialConfig &cfg, std::span<const int> injected_flips) {
    validate(lattice, cfg);
    TrialRng rng{cfg.master_seed, cfg.trial_index};
    TrialRecord rec;
    rec.assignment = assign_states(lattice, cfg.p0, rng);
    rec.sample = sample_homodyne(lattice, rec.assignment, cfg.delta, rng);
    rec.bits = decode_inner(lattice, rec.assignment, rec.sample, cfg.inner).bits;
    for (int node : injected_flips) {
        if (lattice.node(node).parity != Parity::Primal) {
            throw std::invalid_argument("injected flips must be primal nodes");
        }
        rec.bits[node] ^= 1;
    }
    rec.syndrome = syndrome(lattice, rec.bits);
    auto dg = build_decoding_graph(lattice, rec.assignment, rec.sample, cfg.delta, cfg.weights);
    auto mg = matching_graph(dg, rec.syndrome);
    rec.recovery = recovery(dg, mg, mwpm(mg));
    check_recovery(lattice, rec.bits, rec.recovery);
    rec.outcome = logical_outcome(lattice, rec.bits, rec.recovery);
    return rec;
}

TrialOutcome run_trial(const Lattice &lattice, const TrialConfig &cfg, std::span<const int> injected_flips) {
    return run_trial_detailed(lattice, cfg, injected_flips).outcome;
}

TrialOutcome run_trial(const TrialConfig &cfg) {
    return run_trial(build_lattice(cfg.d), cfg);
}

TrialOutcome decode_bits(const Lattice &lattice, const std::vector<uint8_t> &bits, WeightMode mode) {
    if (mode != WeightMode::Uniform) {
        throw std::invalid_argument("decode_bits has no analog outcomes to weigh");
    }
    auto dg = decoding_graph_with_weights(lattice, std::vector<double>(lattice.qubit_count(), 1.0));
    auto rec = decode_outer(lattice, dg, bits);
    check_recovery(lattice, bits, rec);
    return logical_outcome(lattice, bits, rec);
}

double TrialBatch::stderr_mean() const {
    if (trials <= 0) {
        return 0.0;
    }
    double p = p_fail();
    return std::sqrt(p * (1 - p) / static_cast<double>(trials));
}

TrialBatch estimate_rate(const Lattice &lattice, const TrialConfig &cfg, int64_t trials, int workers) {
    if (trials < 1) {
        throw std::invalid_argument("at least one trial is required");
    }
    validate(lattice, cfg);
    workers = std::clamp<int64_t>(workers, 1, trials);
    constexpr int64_t kChunk = 64;
    std::atomic<int64_t> next{0};
    std::atomic<int64_t> failures{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        TrialConfig local = cfg;
        int64_t mine = 0;
        try {
            while (true) {
                int64_t start = next.fetch_add(kChunk);
                if (start >= trials) {
                    break;
                }
                int64_t stop = std::min(trials, start + kChunk);
                for (int64_t t = start; t < stop; t++) {
                    local.trial_index = static_cast<uint64_t>(t);
                    mine += run_trial(lattice, local) == TrialOutcome::Failure;
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) {
                error = std::current_exception();
            }
            next.store(trials);
        }
        failures += mine;
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; w++) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    TrialBatch batch;
    batch.config = cfg;
    batch.config.trial_index = 0;
    batch.trials = trials;
    batch.failures = failures.load();
    return batch;
}

TrialBatch estimate_rate(const TrialConfig &cfg, int64_t trials, int workers) {
    return estimate_rate(build_lattice(cfg.d), cfg, trials, workers);
}

double ring_parity_violation(int m, int64_t trials, uint64_t seed) {
    if (m < 1 || m > 4) {
        throw std::invalid_argument("m must be in 1..4");
    }
    if (trials < 1) {
        throw std::invalid_argument("at least one trial is required");
    }
    const double kPeriod = 2 * kSqrtPi;
    int64_t odd = 0;
    for (int64_t t = 0; t < trials; t++) {
        RandomStream rs(seed, static_cast<uint64_t>(t), 0, rng_purpose::kAuxiliary);
        double total = 0;
        uint8_t parity = 0;
        for (int i = 0; i < m; i++) {
            double di = kPeriod * rs.uniform();
            total += di;
            parity ^= standard_bin(di);
        }
        parity ^= standard_bin(total);
        odd += parity;
    }
    return static_cast<double>(odd) / static_cast<double>(trials);
}

}  // namespace hrhg
