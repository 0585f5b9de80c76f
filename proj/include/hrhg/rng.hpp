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

#ifndef HRHG_RNG_HPP
#define HRHG_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace hrhg {

/// Philox4x32-10 block function (Salmon et al., Random123). Pure function of
/// (counter, key), so any (trial, node, purpose) triple gets its own stream.
inline std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key) {
    constexpr uint32_t kMul0 = 0xD2511F53u;
    constexpr uint32_t kMul1 = 0xCD9E8D57u;
    constexpr uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        uint64_t p0 = uint64_t{kMul0} * ctr[0];
        uint64_t p1 = uint64_t{kMul1} * ctr[2];
        ctr = {static_cast<uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<uint32_t>(p1),
               static_cast<uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<uint32_t>(p0)};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

/// A sequential stream over one (seed, trial, node, purpose) counter prefix.
class RandomStream {
   public:
    RandomStream(uint64_t seed, uint64_t trial, uint32_t node, uint32_t purpose)
        : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
          trial_(trial),
          tag_((node << 8) | (purpose & 0xFFu)) {
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        if (cursor_ == 4) {
            refill();
        }
        uint64_t hi = block_[cursor_++];
        if (cursor_ == 4) {
            refill();
        }
        uint64_t lo = block_[cursor_++];
        uint64_t bits = ((hi << 32) | lo) >> 11;
        return static_cast<double>(bits) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the second variate is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log1p(-u1));
        double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

   private:
    void refill() {
        // word 0 = block index, word 1 = node << 8 | purpose, words 2..3 = trial.
        std::array<uint32_t, 4> ctr{block_index_++, tag_, static_cast<uint32_t>(trial_),
                                    static_cast<uint32_t>(trial_ >> 32)};
        block_ = philox4x32(ctr, key_);
        cursor_ = 0;
    }

    std::array<uint32_t, 2> key_;
    uint64_t trial_;
    uint32_t tag_;  // node ids must stay below 2^24
    uint32_t block_index_ = 0;
    std::array<uint32_t, 4> block_{};
    int cursor_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Per-trial stream factory: `stream(node, purpose)` is independent for every pair.
struct TrialRng {
    uint64_t seed = 0;
    uint64_t trial = 0;

    RandomStream stream(uint32_t node, uint32_t purpose) const {
        return RandomStream(seed, trial, node, purpose);
    }
};

namespace rng_purpose {
constexpr uint32_t kSwapOut = 0;
constexpr uint32_t kDisplacement = 1;
constexpr uint32_t kAuxiliary = 2;
}  // namespace rng_purpose

}  // namespace hrhg

#endif
