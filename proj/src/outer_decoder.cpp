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

#include "hrhg/outer_decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hrhg {

std::string_view to_string(WeightMode m) {
    return m == WeightMode::Uniform ? "uniform" : "analog";
}

std::optional<WeightMode> parse_weight_mode(std::string_view token) {
    if (token == "uniform") {
        return WeightMode::Uniform;
    }
    if (token == "analog") {
        return WeightMode::Analog;
    }
    return std::nullopt;
}

namespace {

DecodingGraph topology(const Lattice &lattice) {
    DecodingGraph dg;
    dg.stabilizer_count = static_cast<int>(lattice.stabilizers().size());
    int n_arcs = lattice.qubit_count();
    dg.arc_ends.resize(n_arcs);
    std::vector<size_t> degree(dg.vertex_count() + 1, 0);
    for (int q = 0; q < n_arcs; q++) {
        auto s = lattice.qubit_stabilizers(q);
        for (int &v : s) {
            if (v == kBoundaryStabilizer) {
                v = dg.boundary_vertex();
            }
        }
        if (s[0] == s[1]) {
            throw std::logic_error("qubit with both ends on the boundary");
        }
        dg.arc_ends[q] = s;
        degree[s[0] + 1]++;
        degree[s[1] + 1]++;
    }
    for (int v = 0; v < dg.vertex_count(); v++) {
        degree[v + 1] += degree[v];
    }
    dg.offsets = degree;
    dg.incident_arcs.assign(dg.offsets.back(), 0);
    std::vector<size_t> cursor(dg.offsets.begin(), dg.offsets.end() - 1);
    for (int q = 0; q < n_arcs; q++) {
        dg.incident_arcs[cursor[dg.arc_ends[q][0]]++] = q;
        dg.incident_arcs[cursor[dg.arc_ends[q][1]]++] = q;
    }
    return dg;
}

int64_t integer_cost(double w) {
    return std::llround(w * kWeightScale);
}

}  // namespace

DecodingGraph decoding_graph_with_weights(const Lattice &lattice, const std::vector<double> &weights) {
    if (static_cast<int>(weights.size()) != lattice.qubit_count()) {
        throw std::invalid_argument("one weight per primal qubit expected");
    }
    DecodingGraph dg = topology(lattice);
    dg.arc_weight = weights;
    dg.arc_cost.resize(weights.size());
    for (size_t q = 0; q < weights.size(); q++) {
        if (!(weights[q] >= 0) || !std::isfinite(weights[q])) {
            throw std::invalid_argument("arc weights must be finite and non-negative");
        }
        dg.arc_cost[q] = integer_cost(weights[q]);
    }
    return dg;
}

DecodingGraph build_decoding_graph(const Lattice &lattice, const StateAssignment &assignment,
                                   const HomodyneSample &sample, double delta, WeightMode mode) {
    std::vector<double> w(lattice.qubit_count(), 1.0);
    if (mode == WeightMode::Analog) {
        for (int q = 0; q < lattice.qubit_count(); q++) {
            int node = lattice.primal_qubits()[q];
            int m = swapped_neighbor_count(lattice, assignment, node);
            double prob = weight(sample.p[node], std::min(m, 4), delta_tilde(lattice, assignment, delta, node));
            prob = std::clamp(prob, kMinFlipProbability, 0.5);
            w[q] = -std::log(prob);
        }
    }
    return decoding_graph_with_weights(lattice, w);
}

Syndrome syndrome(const Lattice &lattice, const std::vector<uint8_t> &bits) {
    Syndrome syn;
    for (const auto &stab : lattice.stabilizers()) {
        uint8_t parity = 0;
        for (int q : stab.qubits) {
            parity ^= bits[q] & 1;
        }
        if (parity) {
            syn.defects.push_back(stab.id);
        }
    }
    return syn;
}

namespace {

using Item = std::pair<int64_t, int>;
constexpr int64_t kInf = std::numeric_limits<int64_t>::max();

struct Search {
    std::vector<int64_t> dist;
    std::vector<Item> heap;

    void push(int64_t d, int v) {
        heap.push_back({d, v});
        std::push_heap(heap.begin(), heap.end(), std::greater<>());
    }
    Item pop() {
        std::pop_heap(heap.begin(), heap.end(), std::greater<>());
        Item top = heap.back();
        heap.pop_back();
        return top;
    }

    void reset(const DecodingGraph &dg, int src, std::vector<int> &parent) {
        dist.assign(dg.vertex_count(), kInf);
        parent.assign(dg.vertex_count(), -1);
        heap.clear();
        dist[src] = 0;
        push(0, src);
    }

    /// Settles the next vertex and relaxes its arcs; returns it with its distance, or -1 when
    /// the queue is exhausted. The sink is expanded only when it is the source.
    Item step(const DecodingGraph &dg, int src, std::vector<int> &parent) {
        int sink = dg.boundary_vertex();
        while (!heap.empty()) {
            auto [du, u] = pop();
            if (du != dist[u]) {
                continue;
            }
            if (u != sink || u == src) {
                for (size_t e = dg.offsets[u]; e < dg.offsets[u + 1]; e++) {
                    int arc = dg.incident_arcs[e];
                    int v = dg.other_end(arc, u);
                    int64_t nd = du + dg.arc_cost[arc];
                    if (nd < dist[v]) {
                        dist[v] = nd;
                        parent[v] = arc;
                        push(nd, v);
                    }
                }
            }
            return {du, u};
        }
        return {kInf, -1};
    }
};

}  // namespace

MatchingGraph matching_graph(const DecodingGraph &dg, const Syndrome &syn, SearchExtent extent) {
    MatchingGraph mg;
    mg.defects = syn.defects;
    int k = mg.defect_count();
    int sink = dg.boundary_vertex();
    mg.pair_cost.assign(k, std::vector<int64_t>(k, 0));
    mg.boundary_cost.assign(k, 0);
    mg.parent_arc.resize(k);
    if (k == 0) {
        return mg;
    }

    Search search;
    search.reset(dg, sink, mg.boundary_parent_arc);
    while (search.step(dg, sink, mg.boundary_parent_arc).second >= 0) {
    }
    std::vector<int> slot(dg.vertex_count(), -1);
    for (int i = 0; i < k; i++) {
        int64_t b = search.dist[mg.defects[i]];
        if (b == kInf) {
            throw std::logic_error("defect cannot reach the boundary");
        }
        mg.boundary_cost[i] = b;
        slot[mg.defects[i]] = i;
    }
    for (int i = 0; i < k; i++) {
        std::fill(mg.pair_cost[i].begin(), mg.pair_cost[i].end(), MatchingGraph::kBeyondBoundary);
        mg.pair_cost[i][i] = 0;
    }

    // Search i only needs partners j > i; the pair (j, i) is filled in by symmetry. A pruned
    // search stops once the settled distance reaches bd(i) + max bd(j) over the unsettled j > i.
    std::vector<int> by_boundary;
    std::vector<uint8_t> settled(k, 0);
    for (int i = 0; i < k; i++) {
        auto &parent = mg.parent_arc[i];
        int src = mg.defects[i];
        by_boundary.clear();
        for (int j = i + 1; j < k; j++) {
            by_boundary.push_back(j);
        }
        std::sort(by_boundary.begin(), by_boundary.end(), [&](int a, int b) {
            return mg.boundary_cost[a] > mg.boundary_cost[b] || (mg.boundary_cost[a] == mg.boundary_cost[b] && a < b);
        });
        std::fill(settled.begin(), settled.end(), 0);
        size_t head = 0;
        int remaining = k - i - 1;
        search.reset(dg, src, parent);
        while (true) {
            if (extent == SearchExtent::Pruned) {
                while (head < by_boundary.size() && settled[by_boundary[head]]) {
                    head++;
                }
                if (head == by_boundary.size()) {
                    break;
                }
                int64_t radius = mg.boundary_cost[i] + mg.boundary_cost[by_boundary[head]];
                if (search.heap.empty() || search.heap.front().first >= radius) {
                    break;
                }
            } else if (remaining == 0) {
                break;
            }
            auto [du, u] = search.step(dg, src, parent);
            if (u < 0) {
                break;
            }
            int j = slot[u];
            if (j > i) {
                settled[j] = 1;
                remaining--;
                mg.pair_cost[i][j] = du;
                mg.pair_cost[j][i] = du;
            }
        }
    }
    return mg;
}

std::vector<WeightedEdge> MatchingGraph::edges(bool prune) const {
    int k = defect_count();
    std::vector<WeightedEdge> out;
    out.reserve(static_cast<size_t>(k) * k);
    for (int i = 0; i < k; i++) {
        for (int j = i + 1; j < k; j++) {
            int64_t c = std::min(pair_cost[i][j], pair_cost[j][i]);
            if (c == kBeyondBoundary) {
                if (!prune) {
                    throw std::logic_error("pair cost not computed; build with SearchExtent::Complete");
                }
                continue;
            }
            if (prune && c >= boundary_cost[i] + boundary_cost[j]) {
                continue;
            }
            out.push_back({i, j, c});
        }
        out.push_back({i, k + i, boundary_cost[i]});
    }
    for (int i = 0; i < k; i++) {
        for (int j = i + 1; j < k; j++) {
            out.push_back({k + i, k + j, 0});
        }
    }
    return out;
}

std::vector<int> MatchingGraph::path_arcs(const DecodingGraph &dg, int i, int j) const {
    std::vector<int> arcs;
    if (j < 0) {
        // Walk the sink-rooted tree from the defect outwards.
        int v = defects[i];
        while (v != dg.boundary_vertex()) {
            int arc = boundary_parent_arc[v];
            if (arc < 0) {
                throw std::logic_error("no stored path");
            }
            arcs.push_back(arc);
            v = dg.other_end(arc, v);
        }
        return arcs;
    }
    int src = defects[i];
    const auto &parent = parent_arc[i];
    int v = defects[j];
    while (v != src) {
        int arc = parent[v];
        if (arc < 0) {
            throw std::logic_error("no stored path");
        }
        arcs.push_back(arc);
        v = dg.other_end(arc, v);
    }
    std::reverse(arcs.begin(), arcs.end());
    return arcs;
}

namespace {

int64_t pair_total(const MatchingGraph &mg, Matching &result) {
    int k = mg.defect_count();
    int64_t total = 0;
    for (auto [v, u] : result.pairs) {
        if (u < k) {
            total += mg.pair_cost[v][u];
        } else if (v < k) {
            if (u != k + v) {
                throw std::logic_error("defect matched to a foreign boundary partner");
            }
            total += mg.boundary_cost[v];
        }
    }
    return total;
}

}  // namespace

Matching mwpm(const MatchingGraph &mg) {
    Matching result;
    int k = mg.defect_count();
    if (k == 0) {
        return result;
    }
    std::vector<WeightedEdge> gains;
    for (int i = 0; i < k; i++) {
        for (int j = i + 1; j < k; j++) {
            int64_t c = mg.pair_cost[i][j];
            int64_t g = mg.boundary_cost[i] + mg.boundary_cost[j];
            if (c != MatchingGraph::kBeyondBoundary && c < g) {
                gains.push_back({i, j, g - c});
            }
        }
    }
    std::vector<int> mate(k, -1);
    if (!gains.empty()) {
        mate = max_weight_matching(k, gains, false);
    }
    std::vector<int> lonely;
    for (int v = 0; v < k; v++) {
        if (mate[v] < 0) {
            result.pairs.push_back({v, k + v});
            lonely.push_back(k + v);
        } else if (v < mate[v]) {
            result.pairs.push_back({v, mate[v]});
        }
    }
    std::vector<uint8_t> used(k, 0);
    for (int v : lonely) {
        used[v - k] = 1;
    }
    std::vector<int> spare;
    for (int i = 0; i < k; i++) {
        if (!used[i]) {
            spare.push_back(k + i);
        }
    }
    for (size_t i = 0; i + 1 < spare.size(); i += 2) {
        result.pairs.push_back({spare[i], spare[i + 1]});
    }
    std::sort(result.pairs.begin(), result.pairs.end());
    result.total_cost = pair_total(mg, result);
    return result;
}

Matching mwpm_perfect(const MatchingGraph &mg) {
    Matching result;
    if (mg.defect_count() == 0) {
        return result;
    }
    auto mate = min_weight_perfect_matching(mg.vertex_count(), mg.edges(true));
    for (int v = 0; v < mg.vertex_count(); v++) {
        if (v < mate[v]) {
            result.pairs.push_back({v, mate[v]});
        }
    }
    result.total_cost = pair_total(mg, result);
    return result;
}

Recovery recovery(const DecodingGraph &dg, const MatchingGraph &mg, const Matching &matching) {
    int k = mg.defect_count();
    std::vector<uint8_t> flip(dg.arc_count(), 0);
    for (auto [u, v] : matching.pairs) {
        if (u >= k) {
            continue;
        }
        for (int arc : mg.path_arcs(dg, u, v < k ? v : -1)) {
            flip[arc] ^= 1;
        }
    }
    Recovery rec;
    for (int q = 0; q < dg.arc_count(); q++) {
        if (flip[q]) {
            rec.flipped_qubits.push_back(q);
        }
    }
    return rec;
}

Recovery decode_outer(const Lattice &lattice, const DecodingGraph &dg, const std::vector<uint8_t> &bits) {
    auto mg = matching_graph(dg, syndrome(lattice, bits));
    return recovery(dg, mg, mwpm(mg));
}

std::string dump_matching_graph(const MatchingGraph &mg) {
    std::ostringstream out;
    int k = mg.defect_count();
    for (int d : mg.defects) {
        out << "defect " << d << "\n";
    }
    auto name = [&](int v) {
        return v < k ? std::to_string(mg.defects[v]) : "B" + std::to_string(v - k);
    };
    for (const auto &e : mg.edges(false)) {
        out << "pair " << name(e.u) << " " << name(e.v) << " " << e.weight << "\n";
    }
    return out.str();
}

}  // namespace hrhg
