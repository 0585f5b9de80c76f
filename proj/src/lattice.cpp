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

#include "hrhg/lattice.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hrhg {

namespace {

int odd_count(const Coord &c) {
    return (c.x & 1) + (c.y & 1) + (c.z & 1);
}

int component(const Coord &c, int axis) {
    return axis == 0 ? c.x : axis == 1 ? c.y : c.z;
}

Coord shifted(Coord c, int axis, int delta) {
    (axis == 0 ? c.x : axis == 1 ? c.y : c.z) += delta;
    return c;
}

}  // namespace

SignedAdjacency SignedAdjacency::from_edges(int node_count, std::span<const std::tuple<int, int, int>> edges) {
    std::vector<std::vector<Neighbor>> rows(node_count);
    for (const auto &[i, j, s] : edges) {
        if (i < 0 || j < 0 || i >= node_count || j >= node_count || i == j) {
            throw std::invalid_argument("SignedAdjacency: bad edge endpoint");
        }
        if (s != 1 && s != -1) {
            throw std::invalid_argument("SignedAdjacency: sign must be +1 or -1");
        }
        rows[i].push_back({j, s});
        rows[j].push_back({i, s});
    }
    SignedAdjacency out;
    out.offsets_.reserve(node_count + 1);
    out.offsets_.push_back(0);
    for (auto &row : rows) {
        std::sort(row.begin(), row.end(), [](const Neighbor &a, const Neighbor &b) { return a.node < b.node; });
        for (size_t k = 1; k < row.size(); ++k) {
            if (row[k].node == row[k - 1].node) {
                throw std::invalid_argument("SignedAdjacency: duplicate edge");
            }
        }
        out.entries_.insert(out.entries_.end(), row.begin(), row.end());
        out.offsets_.push_back(out.entries_.size());
    }
    return out;
}

int SignedAdjacency::sign(int i, int j) const {
    auto r = row(i);
    auto it = std::lower_bound(r.begin(), r.end(), j, [](const Neighbor &n, int id) { return n.node < id; });
    return (it != r.end() && it->node == j) ? it->sign : 0;
}

SignConvention SignConvention::all_plus() {
    return {"all_plus", [](const Coord &, const Coord &) { return 1; }};
}

SignConvention SignConvention::alternating() {
    return {"alternating", [](const Coord &primal, const Coord &dual) {
                int parity = (dual.x / 2 + dual.y / 2 + dual.z / 2) & 1;
                // direction of the edge: the axis along which the endpoints differ
                int axis = primal.x != dual.x ? 0 : primal.y != dual.y ? 1 : 2;
                return ((parity + (axis == 2 ? 1 : 0)) & 1) ? -1 : 1;
            }};
}

const Node &Lattice::node(int id) const {
    if (id < 0 || id >= node_count()) {
        throw std::out_of_range("Lattice: node id out of range");
    }
    return nodes_[id];
}

std::optional<int> Lattice::find(const Coord &c) const {
    if (c.x < extent_lo_.x || c.y < extent_lo_.y || c.z < extent_lo_.z || c.x > extent_hi_.x ||
        c.y > extent_hi_.y || c.z > extent_hi_.z) {
        return std::nullopt;
    }
    int ny = extent_hi_.y - extent_lo_.y + 1;
    int nz = extent_hi_.z - extent_lo_.z + 1;
    int idx = ((c.x - extent_lo_.x) * ny + (c.y - extent_lo_.y)) * nz + (c.z - extent_lo_.z);
    int id = coord_to_id_[idx];
    if (id < 0) {
        return std::nullopt;
    }
    return id;
}

std::span<const Neighbor> Lattice::neighbors(int id) const {
    if (id < 0 || id >= node_count()) {
        throw std::out_of_range("Lattice: node id out of range");
    }
    return adjacency_.row(id);
}

std::string Lattice::to_text() const {
    std::ostringstream out;
    for (const Node &n : nodes_) {
        out << "node " << n.id << ' ' << n.coord.x << ' ' << n.coord.y << ' ' << n.coord.z << ' '
            << (n.parity == Parity::Primal ? 'P' : 'D') << '\n';
    }
    for (int i = 0; i < node_count(); ++i) {
        for (const Neighbor &nb : adjacency_.row(i)) {
            if (nb.node > i) {
                out << "edge " << i << ' ' << nb.node << ' ' << (nb.sign > 0 ? "+1" : "-1") << '\n';
            }
        }
    }
    return out.str();
}

Lattice build_lattice(int d, BoundaryConvention boundary, const SignConvention &signs) {
    if (d < 2) {
        throw std::invalid_argument("build_lattice: distance must be at least 2");
    }
    Lattice lat;
    lat.distance_ = d;
    lat.boundary_ = boundary;
    lat.sign_name_ = signs.name;
    const bool periodic = boundary == BoundaryConvention::PeriodicYZ;
    lat.extent_lo_ = periodic ? Coord{0, 0, 0} : Coord{0, 1, 1};
    lat.extent_hi_ = {2 * d, 2 * d - 1, 2 * d - 1};
    auto locate = [&](Coord c) {
        if (periodic) {
            c.y = (c.y + 2 * d) % (2 * d);
            c.z = (c.z + 2 * d) % (2 * d);
        }
        return lat.find(c);
    };

    const Coord lo = lat.extent_lo_;
    const Coord hi = lat.extent_hi_;
    const int nx = hi.x - lo.x + 1, ny = hi.y - lo.y + 1, nz = hi.z - lo.z + 1;
    lat.coord_to_id_.assign(static_cast<size_t>(nx) * ny * nz, -1);

    for (int x = lo.x; x <= hi.x; ++x) {
        for (int y = lo.y; y <= hi.y; ++y) {
            for (int z = lo.z; z <= hi.z; ++z) {
                Coord c{x, y, z};
                int k = odd_count(c);
                if (k != 1 && k != 2) {
                    continue;
                }
                int id = lat.node_count();
                lat.nodes_.push_back({id, c, k == 2 ? Parity::Primal : Parity::Dual});
                lat.coord_to_id_[((x - lo.x) * ny + (y - lo.y)) * nz + (z - lo.z)] = id;
            }
        }
    }

    // Cluster edges: a face joins the four edges bounding it (unit moves along its odd axes).
    std::vector<std::tuple<int, int, int>> edges;
    for (const Node &n : lat.nodes_) {
        if (n.parity != Parity::Primal) {
            continue;
        }
        for (int axis = 0; axis < 3; ++axis) {
            if ((component(n.coord, axis) & 1) == 0) {
                continue;
            }
            for (int delta : {-1, 1}) {
                Coord c = shifted(n.coord, axis, delta);
                if (auto other = locate(c)) {
                    int s = signs.sign(n.coord, lat.nodes_[*other].coord);
                    if (s != 1 && s != -1) {
                        throw std::invalid_argument("build_lattice: sign convention must return +1 or -1");
                    }
                    edges.emplace_back(n.id, *other, s);
                }
            }
        }
    }
    lat.adjacency_ = SignedAdjacency::from_edges(lat.node_count(), edges);

    // Six-body checks, one per cell center with all-odd coordinates.
    for (int x = 1; x <= 2 * d - 1; x += 2) {
        for (int y = 1; y <= 2 * d - 1; y += 2) {
            for (int z = 1; z <= 2 * d - 1; z += 2) {
                Stabilizer s;
                s.id = static_cast<int>(lat.stabilizers_.size());
                s.location = {x, y, z};
                for (int axis = 0; axis < 3; ++axis) {
                    for (int delta : {-1, 1}) {
                        if (auto q = locate(shifted(s.location, axis, delta))) {
                            s.qubits.push_back(*q);
                        }
                    }
                }
                std::sort(s.qubits.begin(), s.qubits.end());
                lat.stabilizers_.push_back(std::move(s));
            }
        }
    }

    lat.qubit_index_.assign(lat.node_count(), -1);
    for (const Node &n : lat.nodes_) {
        if (n.parity == Parity::Primal) {
            lat.qubit_index_[n.id] = static_cast<int>(lat.primal_qubits_.size());
            lat.primal_qubits_.push_back(n.id);
        }
    }
    lat.qubit_stabilizers_.assign(lat.primal_qubits_.size(), {kBoundaryStabilizer, kBoundaryStabilizer});
    std::vector<int> fill(lat.primal_qubits_.size(), 0);
    for (const Stabilizer &s : lat.stabilizers_) {
        for (int node : s.qubits) {
            int q = lat.qubit_index_[node];
            if (fill[q] >= 2) {
                throw std::logic_error("build_lattice: qubit in more than two cells");
            }
            lat.qubit_stabilizers_[q][fill[q]++] = s.id;
        }
    }
    for (size_t q = 0; q < fill.size(); ++q) {
        if (fill[q] == 0) {
            throw std::logic_error("build_lattice: qubit in no cell");
        }
    }

    lat.surface_ = correlation_surface(lat);
    return lat;
}

CorrelationSurface correlation_surface(const Lattice &lattice) {
    // Plane of faces perpendicular to x. Every primal edge in the plane borders two of its
    // faces, and the smooth y/z boundaries remove the edges that would border only one.
    CorrelationSurface s;
    s.plane_x = 2 * (lattice.distance() / 2);
    for (int node : lattice.primal_qubits()) {
        const Coord &c = lattice.node(node).coord;
        if (c.x == s.plane_x) {
            s.qubits.push_back(node);
        }
    }
    return s;
}

std::vector<int> dual_ring(const Lattice &lattice, int dual_node) {
    if (lattice.node(dual_node).parity != Parity::Dual) {
        throw std::invalid_argument("dual_ring: node is not dual");
    }
    std::vector<int> out;
    for (const Neighbor &nb : lattice.neighbors(dual_node)) {
        out.push_back(nb.node);
    }
    return out;
}

std::vector<int> x_spanning_chain(const Lattice &lattice, int y, int z) {
    if ((y & 1) == 0 || (z & 1) == 0) {
        throw std::invalid_argument("x_spanning_chain: y and z must be odd");
    }
    std::vector<int> out;
    for (int x = 0; x <= 2 * lattice.distance(); x += 2) {
        auto id = lattice.find({x, y, z});
        if (!id) {
            throw std::invalid_argument("x_spanning_chain: (y, z) outside the lattice");
        }
        out.push_back(*id);
    }
    return out;
}

}  // namespace hrhg
