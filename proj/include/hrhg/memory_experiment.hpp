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

#ifndef HRHG_MEMORY_EXPERIMENT_HPP
#define HRHG_MEMORY_EXPERIMENT_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrhg/inner_decoder.hpp"
#include "hrhg/lattice.hpp"
#include "hrhg/noise.hpp"
#include "hrhg/outer_decoder.hpp"

namespace hrhg {

/// delta == 0 selects the degenerate noise model (perfect GKP states, uniform squeezed outcomes).
struct TrialConfig {
    int d = 3;
    double delta = 0.0;
    double p0 = 0.0;
    InnerVariant inner = InnerVariant::StandardOnly;
    WeightMode weights = WeightMode::Analog;
    uint64_t master_seed = 0;
    uint64_t trial_index = 0;

    double delta_db() const {
        return db_from_delta(delta);
    }
};

enum class TrialOutcome { Success, Failure };

/// Thrown when the decoder produces something that cannot happen in a correct implementation,
/// such as a recovery leaving defects behind.
class InvariantViolation : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

/// Every intermediate of one trial. `bits` is indexed by node id and already includes any
/// injected flips; `recovery` flips are primal qubit indices.
struct TrialRecord {
    StateAssignment assignment;
    HomodyneSample sample;
    std::vector<uint8_t> bits;
    Syndrome syndrome;
    Recovery recovery;
    TrialOutcome outcome = TrialOutcome::Success;
};

/// Parity of (bits XOR flips) over the correlation surface: 0 is Success.
TrialOutcome logical_outcome(const Lattice &lattice, const std::vector<uint8_t> &bits, const Recovery &recovery);

/// `injected_flips` are primal node ids whose bits are toggled after inner decoding.
TrialRecord run_trial_detailed(const Lattice &lattice, const TrialConfig &cfg, std::span<const int> injected_flips = {});
TrialOutcome run_trial(const Lattice &lattice, const TrialConfig &cfg, std::span<const int> injected_flips = {});
TrialOutcome run_trial(const TrialConfig &cfg);

/// Skips sampling: decodes the given bits directly (zero noise elsewhere).
TrialOutcome decode_bits(const Lattice &lattice, const std::vector<uint8_t> &bits, WeightMode mode = WeightMode::Uniform);

inline constexpr int64_t kMinConfidentFailures = 25;

struct TrialBatch {
    TrialConfig config;  // trial_index unused
    int64_t trials = 0;
    int64_t failures = 0;

    double p_fail() const {
        return trials > 0 ? static_cast<double>(failures) / static_cast<double>(trials) : 0.0;
    }
    double stderr_mean() const;
    bool low_confidence() const {
        return failures < kMinConfidentFailures;
    }
};

/// Trials 0..trials-1 of `cfg.master_seed`, split over `workers` threads. The count does not
/// depend on the worker count. Throws std::invalid_argument for trials < 1.
TrialBatch estimate_rate(const Lattice &lattice, const TrialConfig &cfg, int64_t trials, int workers = 1);
TrialBatch estimate_rate(const TrialConfig &cfg, int64_t trials, int workers = 1);

/// Single swapped node with m squeezed-limit displacements, everything else exact: the
/// frequency with which its ring of five bins has odd parity.
double ring_parity_violation(int m, int64_t trials, uint64_t seed = 1);

}  // namespace hrhg

#endif
