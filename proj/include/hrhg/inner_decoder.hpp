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

#ifndef HRHG_INNER_DECODER_HPP
#define HRHG_INNER_DECODER_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hrhg/lattice.hpp"
#include "hrhg/noise.hpp"

namespace hrhg {

/// Nearest integer n to z / sqrt(pi); exact half-way points go to the even n.
int nearest_peak(double z);

/// Parity of the nearest multiple of sqrt(pi).
uint8_t standard_bin(double z);

/// A squeezed center and its k GKP neighbors, with the integer change of basis T (k+1 square).
///
/// k = 4 uses the Hadamard-type block of the five-mode decoder with column j scaled by the sign
/// of the (center, neighbor j) gate, so the lower block H satisfies H H^T = 4 I. k = 2, 3 use
/// the signed all-ones row followed by nearest-neighbor differences; those rows are orthogonal
/// to the noisy direction, which rows cut out of the 4x4 Hadamard block are not when k = 3.
struct NeighborhoodFrame {
    int center = -1;
    std::vector<int> neighbors;
    std::vector<int> signs;
    Eigen::MatrixXi transform;

    int k() const {
        return static_cast<int>(neighbors.size());
    }
};

/// Throws std::invalid_argument unless 2 <= k <= 4 and signs are +-1.
NeighborhoodFrame make_frame(int center, std::span<const Neighbor> neighbors);

/// No other squeezed node within graph distance 2.
bool is_isolated_swap(const Lattice &lattice, const StateAssignment &assignment, int node);

/// Frame around an isolated squeezed node with at least two neighbors, else nullopt.
std::optional<NeighborhoodFrame> lattice_frame(const Lattice &lattice, const StateAssignment &assignment,
                                               int center);

/// Integer lattice point n (center first, then neighbors in frame order) chosen by the
/// five-mode rules adapted to the frame. Every result satisfies T^-1 (T n) = n over the integers;
/// a violated consistency rule throws std::logic_error.
std::vector<int> algorithm2_lattice_point(const NeighborhoodFrame &frame, std::span<const double> p);

/// n mod 2 of algorithm2_lattice_point.
std::vector<uint8_t> algorithm2_decode(const NeighborhoodFrame &frame, std::span<const double> p);

enum class InnerVariant { StandardOnly, Algorithm2 };

std::string_view to_string(InnerVariant v);
std::optional<InnerVariant> parse_inner_variant(std::string_view token);

struct BitOutcome {
    std::vector<uint8_t> bits;  // indexed by node id
};

BitOutcome decode_inner(const Lattice &lattice, const StateAssignment &assignment, const HomodyneSample &sample,
                        InnerVariant variant);

/// Number of squeezed neighbors of a node.
int swapped_neighbor_count(const Lattice &lattice, const StateAssignment &assignment, int node);

/// Heuristic flip probability of a primal qubit with outcome z and m squeezed neighbors.
/// For m <= 1 this is the Gaussian-sum probability, with parameter delta_tilde, that the
/// outcome came from a peak of the other parity than the nearest one (sums truncated at
/// four peaks either side). delta_tilde == 0 is taken as the limit. Independent of z for m >= 2.
double weight(double z, int m, double delta_tilde);

/// delta * (1 + number of GKP neighbors). Squeezed neighbors are left out: a lone one only
/// applies a stabilizer. Throws for a dual node.
double delta_tilde(const Lattice &lattice, const StateAssignment &assignment, double delta, int node);

}  // namespace hrhg

#endif
