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

#ifndef HRHG_OUTER_DECODER_HPP
#define HRHG_OUTER_DECODER_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hrhg/blossom.hpp"
#include "hrhg/inner_decoder.hpp"
#include "hrhg/lattice.hpp"
#include "hrhg/noise.hpp"

namespace hrhg {

enum class WeightMode { Uniform, Analog };

std::string_view to_string(WeightMode m);
std::optional<WeightMode> parse_weight_mode(std::string_view token);

/// Arc weights are scaled by this factor and rounded before any path or matching arithmetic.
inline constexpr double kWeightScale = 1e6;
inline constexpr double kMinFlipProbability = 1e-15;

/// Vertices are cells 0..S-1 plus one sink vertex S shared by both boundary planes.
/// Arc q is primal qubit q of the lattice.
struct DecodingGraph {
    int stabilizer_count = 0;
    std::vector<std::array<int, 2>> arc_ends;
    std::vector<double> arc_weight;
    std::vector<int64_t> arc_cost;
    std::vector<size_t> offsets;        // CSR over vertices
    std::vector<int> incident_arcs;

    int boundary_vertex() const {
        return stabilizer_count;
    }
    int vertex_count() const {
        return stabilizer_count + 1;
    }
    int arc_count() const {
        return static_cast<int>(arc_ends.size());
    }
    int other_end(int arc, int vertex) const {
        return arc_ends[arc][0] == vertex ? arc_ends[arc][1] : arc_ends[arc][0];
    }
};

/// Uniform: every arc weighs 1. Analog: -log w(z, m, delta_tilde) with w clamped to
/// [1e-15, 1/2]. `delta` is only read in Analog mode.
DecodingGraph build_decoding_graph(const Lattice &lattice, const StateAssignment &assignment,
                                   const HomodyneSample &sample, double delta, WeightMode mode);

/// Same topology with caller-supplied arc weights (one per primal qubit).
DecodingGraph decoding_graph_with_weights(const Lattice &lattice, const std::vector<double> &weights);

struct Syndrome {
    std::vector<int> defects;  // cell ids, ascending
};

Syndrome syndrome(const Lattice &lattice, const std::vector<uint8_t> &bits);

/// Matching vertices 0..k-1 are the defects, k..2k-1 their private boundary partners.
struct MatchingGraph {
    /// Marks a defect pair whose search was cut off; its cost is at least the sum of the two
    /// boundary costs, so it can never improve on matching both defects to the boundary.
    static constexpr int64_t kBeyondBoundary = std::numeric_limits<int64_t>::max();

    std::vector<int> defects;
    std::vector<std::vector<int64_t>> pair_cost;   // k x k shortest-path costs between defects
    std::vector<int64_t> boundary_cost;            // shortest path from each defect to the sink
    std::vector<std::vector<int>> parent_arc;      // per defect: Dijkstra tree over dg vertices
    std::vector<int> boundary_parent_arc;          // shortest-path tree rooted at the sink

    int defect_count() const {
        return static_cast<int>(defects.size());
    }
    int vertex_count() const {
        return 2 * defect_count();
    }
    /// Complete edge set: defect pairs, defect to own partner, partner pairs at cost 0.
    /// With `prune`, defect pairs costing at least both boundary paths are dropped; a matching
    /// can always swap such a pair for the two boundary edges at no extra cost.
    std::vector<WeightedEdge> edges(bool prune) const;

    /// Arcs on the stored shortest path from defect i to defect j, or to the sink if j < 0.
    std::vector<int> path_arcs(const DecodingGraph &dg, int i, int j) const;
};

enum class SearchExtent {
    /// Stop each search once no unseen defect can beat the boundary.
    Pruned,
    /// Settle every vertex, so every pair cost is exact.
    Complete,
};

/// One Dijkstra from the sink, then one from every defect. Searches never pass through the
/// sink. Throws std::logic_error when a defect cannot reach the sink.
MatchingGraph matching_graph(const DecodingGraph &dg, const Syndrome &syn, SearchExtent extent = SearchExtent::Pruned);

struct Matching {
    /// Pairs of matching-graph vertices, each pair ordered (lower, higher), sorted.
    std::vector<std::pair<int, int>> pairs;
    int64_t total_cost = 0;
};

/// Minimum-weight perfect matching of the matching graph. Solved as a maximum-weight matching
/// among defects where pair (i, j) is worth boundary_cost[i] + boundary_cost[j] - pair_cost[i][j];
/// unmatched defects take their boundary partner, and leftover partners pair up at zero cost.
Matching mwpm(const MatchingGraph &mg);

/// The same minimum through the explicit 2k-vertex perfect matching.
Matching mwpm_perfect(const MatchingGraph &mg);

struct Recovery {
    std::vector<int> flipped_qubits;  // qubit (arc) indices, ascending
};

Recovery recovery(const DecodingGraph &dg, const MatchingGraph &mg, const Matching &matching);

/// Whole outer decode: syndrome -> matching graph -> MWPM -> recovery.
Recovery decode_outer(const Lattice &lattice, const DecodingGraph &dg, const std::vector<uint8_t> &bits);

/// `defect <stab_id>` and `pair <u> <v> <weight>` lines; boundary partners print as B<i>.
std::string dump_matching_graph(const MatchingGraph &mg);

}  // namespace hrhg

#endif
