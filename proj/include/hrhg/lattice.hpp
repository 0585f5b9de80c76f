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

#ifndef HRHG_LATTICE_HPP
#define HRHG_LATTICE_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace hrhg {

/// Doubled coordinates. Two odd components: a face (primal); one odd component: an edge (dual).
struct Coord {
    int x = 0;
    int y = 0;
    int z = 0;

    auto operator<=>(const Coord &) const = default;
};

enum class Parity : uint8_t { Primal, Dual };

struct Node {
    int id = 0;
    Coord coord;
    Parity parity = Parity::Primal;
};

struct Neighbor {
    int node = 0;
    int sign = 1;

    bool operator==(const Neighbor &) const = default;
};

/// Symmetric sparse sign matrix in CSR form. Rows are sorted by neighbor id.
class SignedAdjacency {
   public:
    SignedAdjacency() = default;

    /// Builds from undirected (i, j, sign) triples. Duplicate or self edges are rejected.
    static SignedAdjacency from_edges(int node_count, std::span<const std::tuple<int, int, int>> edges);

    int size() const {
        return static_cast<int>(offsets_.empty() ? 0 : offsets_.size() - 1);
    }
    size_t edge_count() const {
        return entries_.size() / 2;
    }
    std::span<const Neighbor> row(int i) const {
        return {entries_.data() + offsets_[i], entries_.data() + offsets_[i + 1]};
    }
    /// 0 when i and j are not adjacent.
    int sign(int i, int j) const;

   private:
    std::vector<size_t> offsets_;
    std::vector<Neighbor> entries_;
};

struct Stabilizer {
    int id = 0;
    std::vector<int> qubits;  // primal node ids, ascending
    Coord location;           // cell center, all components odd
};

struct CorrelationSurface {
    std::vector<int> qubits;  // primal node ids, ascending
    int plane_x = 0;
};

/// x = 0 and x = 2d face planes are matching sinks; y and z are smooth (cells truncated).
/// PrimalSinksX: the x = 0 and x = 2d planes are matching sinks, y and z are open with
/// truncated cells. PeriodicYZ keeps the x sinks but wraps y and z with period 2d.
enum class BoundaryConvention { PrimalSinksX, PeriodicYZ };

/// Per-edge CZ sign. Called with (primal endpoint, dual endpoint).
struct SignConvention {
    std::string name;
    std::function<int(const Coord &, const Coord &)> sign;

    static SignConvention all_plus();
    /// A fixed non-trivial pattern: the sign flips with the dual endpoint's position and the
    /// direction of the edge. Used to exercise sign handling in the decoders.
    static SignConvention alternating();
};

inline constexpr int kBoundaryStabilizer = -1;

class Lattice {
   public:
    int distance() const {
        return distance_;
    }
    BoundaryConvention boundary() const {
        return boundary_;
    }
    const std::string &sign_convention_name() const {
        return sign_name_;
    }

    int node_count() const {
        return static_cast<int>(nodes_.size());
    }
    const std::vector<Node> &nodes() const {
        return nodes_;
    }
    const Node &node(int id) const;
    std::optional<int> find(const Coord &c) const;

    const SignedAdjacency &adjacency() const {
        return adjacency_;
    }
    /// Signed adjacency row, ascending neighbor id. Throws std::out_of_range for a bad id.
    std::span<const Neighbor> neighbors(int id) const;

    const std::vector<Stabilizer> &stabilizers() const {
        return stabilizers_;
    }

    /// Primal node ids in ascending order. Position in this list is the qubit (arc) index.
    const std::vector<int> &primal_qubits() const {
        return primal_qubits_;
    }
    int qubit_count() const {
        return static_cast<int>(primal_qubits_.size());
    }
    /// -1 for dual nodes.
    int qubit_index(int node_id) const {
        return qubit_index_[node_id];
    }
    /// The two cells containing qubit q; the second is kBoundaryStabilizer on a sink plane.
    std::array<int, 2> qubit_stabilizers(int q) const {
        return qubit_stabilizers_[q];
    }

    const CorrelationSurface &correlation_surface() const {
        return surface_;
    }

    /// `node <id> <x> <y> <z> <P|D>` lines followed by `edge <i> <j> <+1|-1>` lines (i < j).
    std::string to_text() const;

   private:
    friend Lattice build_lattice(int, BoundaryConvention, const SignConvention &);

    int distance_ = 0;
    BoundaryConvention boundary_ = BoundaryConvention::PrimalSinksX;
    std::string sign_name_;
    Coord extent_lo_;
    Coord extent_hi_;
    std::vector<Node> nodes_;
    std::vector<int> coord_to_id_;
    SignedAdjacency adjacency_;
    std::vector<Stabilizer> stabilizers_;
    std::vector<int> primal_qubits_;
    std::vector<int> qubit_index_;
    std::vector<std::array<int, 2>> qubit_stabilizers_;
    CorrelationSurface surface_;
};

/// Deterministic for fixed inputs. Throws std::invalid_argument for d < 2.
Lattice build_lattice(int d, BoundaryConvention boundary = BoundaryConvention::PrimalSinksX,
                      const SignConvention &signs = SignConvention::all_plus());

CorrelationSurface correlation_surface(const Lattice &lattice);

/// Primal neighbors of a dual node. Flipping all of them is a trivial operator: every cell
/// sees 0 or 2 of them and the correlation surface sees an even number.
std::vector<int> dual_ring(const Lattice &lattice, int dual_node);

/// Straight chain of primal qubits along x at fixed odd (y, z), joining the two sink planes.
std::vector<int> x_spanning_chain(const Lattice &lattice, int y, int z);

}  // namespace hrhg

#endif
