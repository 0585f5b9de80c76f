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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <numeric>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "hrhg/rng.hpp"

using namespace hrhg;

namespace {

std::vector<double> random_weights(const Lattice &lat, std::mt19937_64 &gen) {
    std::uniform_real_distribution<double> u(0.7, 12.0);
    std::vector<double> w(lat.qubit_count());
    for (auto &x : w) {
        x = u(gen);
    }
    return w;
}

// Plain Bellman-Ford over the arc list; the sink may only appear as an endpoint.
std::vector<int64_t> bellman_ford(const DecodingGraph &dg, int src) {
    const int64_t inf = std::numeric_limits<int64_t>::max() / 4;
    std::vector<int64_t> d(dg.vertex_count(), inf);
    d[src] = 0;
    int sink = dg.boundary_vertex();
    for (int round = 0; round < dg.vertex_count(); round++) {
        bool changed = false;
        for (int a = 0; a < dg.arc_count(); a++) {
            for (int dir = 0; dir < 2; dir++) {
                int u = dg.arc_ends[a][dir];
                int v = dg.arc_ends[a][1 - dir];
                if (u == sink && src != sink) {
                    continue;
                }
                if (d[u] < inf && d[u] + dg.arc_cost[a] < d[v]) {
                    d[v] = d[u] + dg.arc_cost[a];
                    changed = true;
                }
            }
        }
        if (!changed) {
            break;
        }
    }
    return d;
}

std::vector<uint8_t> bits_with(const Lattice &lat, const std::vector<int> &nodes) {
    std::vector<uint8_t> b(lat.node_count(), 0);
    for (int n : nodes) {
        b[n] ^= 1;
    }
    return b;
}

std::vector<uint8_t> random_error(const Lattice &lat, double p, std::mt19937_64 &gen) {
    std::bernoulli_distribution flip(p);
    std::vector<uint8_t> b(lat.node_count(), 0);
    for (int q : lat.primal_qubits()) {
        b[q] = flip(gen);
    }
    return b;
}

// Minimum over all perfect matchings of the explicit defect + partner graph.
int64_t brute_perfect(const MatchingGraph &mg) {
    auto edges = mg.edges(false);
    int n = mg.vertex_count();
    std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, -1));
    for (const auto &e : edges) {
        w[e.u][e.v] = w[e.v][e.u] = e.weight;
    }
    std::vector<int> order(n);
    int64_t best = std::numeric_limits<int64_t>::max();
    std::function<void(uint32_t, int64_t)> rec = [&](uint32_t used, int64_t acc) {
        int v = 0;
        while (v < n && (used >> v & 1)) {
            v++;
        }
        if (v == n) {
            best = std::min(best, acc);
            return;
        }
        for (int u = v + 1; u < n; u++) {
            if (!(used >> u & 1) && w[v][u] >= 0) {
                rec(used | 1u << v | 1u << u, acc + w[v][u]);
            }
        }
    };
    rec(0, 0);
    return best;
}

}  // namespace

TEST(OuterDecoder, ArcsAreQubits) {
    auto lat = build_lattice(3);
    auto dg = decoding_graph_with_weights(lat, std::vector<double>(lat.qubit_count(), 1.0));
    EXPECT_EQ(dg.arc_count(), lat.qubit_count());
    EXPECT_EQ(dg.vertex_count(), static_cast<int>(lat.stabilizers().size()) + 1);
    for (int q = 0; q < dg.arc_count(); q++) {
        int node = lat.primal_qubits()[q];
        for (int end : dg.arc_ends[q]) {
            if (end == dg.boundary_vertex()) {
                continue;
            }
            const auto &qs = lat.stabilizers()[end].qubits;
            EXPECT_TRUE(std::binary_search(qs.begin(), qs.end(), node));
        }
        EXPECT_NE(dg.arc_ends[q][0], dg.arc_ends[q][1]);
    }
}

TEST(OuterDecoder, UniformWeights) {
    auto lat = build_lattice(3);
    TrialRng rng{1, 0};
    auto a = assign_states(lat, 0.1, rng);
    auto s = sample_homodyne(lat, a, 0.05, rng);
    auto dg = build_decoding_graph(lat, a, s, 0.05, WeightMode::Uniform);
    for (int q = 0; q < dg.arc_count(); q++) {
        EXPECT_EQ(dg.arc_weight[q], 1.0);
        EXPECT_EQ(dg.arc_cost[q], 1000000);
    }
}

TEST(OuterDecoder, AnalogWeights) {
    auto lat = build_lattice(3);
    const double delta = delta_from_db(15);
    StateAssignment a;
    a.kinds.assign(lat.node_count(), NodeState::GKP);
    int q4 = -1;
    for (int q = 0; q < lat.qubit_count(); q++) {
        if (lat.neighbors(lat.primal_qubits()[q]).size() == 4) {
            q4 = q;
            break;
        }
    }
    ASSERT_GE(q4, 0);
    int node = lat.primal_qubits()[q4];
    HomodyneSample s;
    s.p.assign(lat.node_count(), 0.0);
    auto dg = build_decoding_graph(lat, a, s, delta, WeightMode::Analog);
    EXPECT_GT(dg.arc_weight[q4], 10.0);
    EXPECT_NEAR(dg.arc_weight[q4], -std::log(weight(0, 0, 5 * delta)), 1e-12);
    for (const auto &nb : lat.neighbors(node)) {
        a.kinds[nb.node] = NodeState::PSqueezed;
    }
    dg = build_decoding_graph(lat, a, s, delta, WeightMode::Analog);
    EXPECT_NEAR(dg.arc_weight[q4], -std::log(0.4), 1e-15);
    EXPECT_NEAR(dg.arc_weight[q4], 0.9163, 1e-4);
    for (double w : dg.arc_weight) {
        EXPECT_GE(w, std::log(2.0) - 1e-12);
        EXPECT_LE(w, -std::log(kMinFlipProbability) + 1e-9);
    }
    // Perfect GKP states: arcs on peak centers saturate the clamp.
    dg = build_decoding_graph(lat, StateAssignment{std::vector<NodeState>(lat.node_count(), NodeState::GKP)}, s,
                              0.0, WeightMode::Analog);
    EXPECT_NEAR(dg.arc_weight[0], -std::log(kMinFlipProbability), 1e-9);
}

TEST(OuterDecoder, WeightModeTokens) {
    EXPECT_EQ(parse_weight_mode("uniform"), WeightMode::Uniform);
    EXPECT_EQ(parse_weight_mode("analog"), WeightMode::Analog);
    EXPECT_FALSE(parse_weight_mode("x").has_value());
}

TEST(OuterDecoder, SyndromeBasics) {
    auto lat = build_lattice(3);
    EXPECT_TRUE(syndrome(lat, std::vector<uint8_t>(lat.node_count(), 0)).defects.empty());
    for (int q = 0; q < lat.qubit_count(); q++) {
        auto st = lat.qubit_stabilizers(q);
        auto syn = syndrome(lat, bits_with(lat, {lat.primal_qubits()[q]}));
        std::vector<int> expect;
        for (int s : st) {
            if (s != kBoundaryStabilizer) {
                expect.push_back(s);
            }
        }
        std::sort(expect.begin(), expect.end());
        EXPECT_EQ(syn.defects, expect);
    }
    for (const auto &n : lat.nodes()) {
        if (n.parity == Parity::Dual) {
            EXPECT_TRUE(syndrome(lat, bits_with(lat, dual_ring(lat, n.id))).defects.empty());
        }
    }
}

TEST(OuterDecoder, AdjacentDefectsUseSharedArc) {
    auto lat = build_lattice(3);
    std::mt19937_64 gen(1);
    auto w = random_weights(lat, gen);
    auto dg = decoding_graph_with_weights(lat, w);
    for (int q = 0; q < lat.qubit_count(); q++) {
        auto st = lat.qubit_stabilizers(q);
        if (st[0] == kBoundaryStabilizer || st[1] == kBoundaryStabilizer) {
            continue;
        }
        // Cheapen the arc so it is the unique shortest route.
        auto w2 = w;
        w2[q] = 0.5;
        auto dg2 = decoding_graph_with_weights(lat, w2);
        auto mg = matching_graph(dg2, Syndrome{{std::min(st[0], st[1]), std::max(st[0], st[1])}});
        EXPECT_EQ(mg.pair_cost[0][1], dg2.arc_cost[q]);
        EXPECT_EQ(mg.path_arcs(dg2, 0, 1), std::vector<int>{q});
        break;
    }
    (void)dg;
}

TEST(OuterDecoder, UniformCostsAreGraphDistances) {
    auto lat = build_lattice(3);
    auto dg = decoding_graph_with_weights(lat, std::vector<double>(lat.qubit_count(), 1.0));
    // Breadth-first distances that never pass through the sink.
    auto bfs = [&](int src) {
        std::vector<int> d(dg.vertex_count(), -1);
        std::deque<int> queue{src};
        d[src] = 0;
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            if (u == dg.boundary_vertex()) {
                continue;
            }
            for (int a = 0; a < dg.arc_count(); a++) {
                for (int dir = 0; dir < 2; dir++) {
                    if (dg.arc_ends[a][dir] == u && d[dg.arc_ends[a][1 - dir]] < 0) {
                        d[dg.arc_ends[a][1 - dir]] = d[u] + 1;
                        queue.push_back(dg.arc_ends[a][1 - dir]);
                    }
                }
            }
        }
        return d;
    };
    Syndrome syn{{0, 5, 13, 26}};
    auto mg = matching_graph(dg, syn, SearchExtent::Complete);
    for (int i = 0; i < 4; i++) {
        auto d = bfs(syn.defects[i]);
        EXPECT_EQ(mg.boundary_cost[i], d[dg.boundary_vertex()] * 1000000LL);
        for (int j = 0; j < 4; j++) {
            EXPECT_EQ(mg.pair_cost[i][j], d[syn.defects[j]] * 1000000LL);
        }
    }
}

TEST(OuterDecoder, ShortestPathsMatchBellmanFord) {
    auto lat = build_lattice(3);
    std::mt19937_64 gen(2);
    for (int trial = 0; trial < 20; trial++) {
        auto dg = decoding_graph_with_weights(lat, random_weights(lat, gen));
        std::vector<int> cells(lat.stabilizers().size());
        std::iota(cells.begin(), cells.end(), 0);
        std::shuffle(cells.begin(), cells.end(), gen);
        std::vector<int> defects(cells.begin(), cells.begin() + 6);
        std::sort(defects.begin(), defects.end());
        auto full = matching_graph(dg, Syndrome{defects}, SearchExtent::Complete);
        auto pruned = matching_graph(dg, Syndrome{defects});
        for (int i = 0; i < 6; i++) {
            auto d = bellman_ford(dg, defects[i]);
            EXPECT_EQ(full.boundary_cost[i], d[dg.boundary_vertex()]);
            EXPECT_EQ(pruned.boundary_cost[i], d[dg.boundary_vertex()]);
            for (int j = 0; j < 6; j++) {
                EXPECT_EQ(full.pair_cost[i][j], d[defects[j]]);
                int64_t pc = pruned.pair_cost[i][j];
                if (pc == MatchingGraph::kBeyondBoundary) {
                    EXPECT_GE(d[defects[j]], pruned.boundary_cost[i] + pruned.boundary_cost[j]);
                } else {
                    EXPECT_EQ(pc, d[defects[j]]);
                }
            }
            // Stored paths realize the costs.
            for (int j = i + 1; j < 6; j++) {
                int64_t sum = 0;
                for (int a : full.path_arcs(dg, i, j)) {
                    sum += dg.arc_cost[a];
                }
                EXPECT_EQ(sum, full.pair_cost[i][j]);
            }
            int64_t sum = 0;
            for (int a : full.path_arcs(dg, i, -1)) {
                sum += dg.arc_cost[a];
            }
            EXPECT_EQ(sum, full.boundary_cost[i]);
        }
        // Triangle inequality on all triples.
        for (int a = 0; a < 6; a++) {
            for (int b = 0; b < 6; b++) {
                for (int c = 0; c < 6; c++) {
                    EXPECT_LE(full.pair_cost[a][c], full.pair_cost[a][b] + full.pair_cost[b][c]);
                }
            }
        }
    }
}

TEST(OuterDecoder, TwoDefectsSinglePair) {
    auto lat = build_lattice(5);
    auto dg = decoding_graph_with_weights(lat, std::vector<double>(lat.qubit_count(), 1.0));
    int center = static_cast<int>(lat.stabilizers().size()) / 2;
    // Stabilizer neighbors of the center cell through a shared qubit.
    int other = -1;
    for (int q = 0; q < lat.qubit_count(); q++) {
        auto st = lat.qubit_stabilizers(q);
        if (st[0] == center && st[1] != kBoundaryStabilizer) {
            other = st[1];
        } else if (st[1] == center && st[0] != kBoundaryStabilizer) {
            other = st[0];
        }
    }
    ASSERT_GE(other, 0);
    Syndrome syn{{std::min(center, other), std::max(center, other)}};
    auto mg = matching_graph(dg, syn);
    auto m = mwpm(mg);
    ASSERT_EQ(m.pairs.size(), 2u);
    EXPECT_EQ(m.pairs[0], std::make_pair(0, 1));
    EXPECT_EQ(m.pairs[1], std::make_pair(2, 3));
    EXPECT_EQ(m.total_cost, 1000000);
    auto rec = recovery(dg, mg, m);
    ASSERT_EQ(rec.flipped_qubits.size(), 1u);
    auto st = lat.qubit_stabilizers(rec.flipped_qubits[0]);
    EXPECT_TRUE((st[0] == center && st[1] == other) || (st[1] == center && st[0] == other));
}

TEST(OuterDecoder, DefectsNearBoundaryMatchToIt) {
    auto lat = build_lattice(5);
    auto dg = decoding_graph_with_weights(lat, std::vector<double>(lat.qubit_count(), 1.0));
    // Cells at x = 1 and x = 9 touch opposite sinks and sit 4 cells apart.
    auto left = lat.find({0, 5, 5});
    auto right = lat.find({10, 5, 5});
    ASSERT_TRUE(left && right);
    int a = lat.qubit_stabilizers(lat.qubit_index(*left))[0];
    int b = lat.qubit_stabilizers(lat.qubit_index(*right))[0];
    ASSERT_NE(a, kBoundaryStabilizer);
    ASSERT_NE(b, kBoundaryStabilizer);
    auto mg = matching_graph(dg, Syndrome{{std::min(a, b), std::max(a, b)}}, SearchExtent::Complete);
    EXPECT_GT(mg.pair_cost[0][1], mg.boundary_cost[0] + mg.boundary_cost[1]);
    auto m = mwpm(mg);
    EXPECT_EQ(m.pairs, (std::vector<std::pair<int, int>>{{0, 2}, {1, 3}}));
    EXPECT_EQ(m.total_cost, 2000000);
    auto rec = recovery(dg, mg, m);
    EXPECT_EQ(rec.flipped_qubits.size(), 2u);
}

TEST(OuterDecoder, MatchingMatchesBruteForceOnSmallInstances) {
    auto lat = build_lattice(3);
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 300; trial++) {
        auto dg = decoding_graph_with_weights(lat, random_weights(lat, gen));
        int k = std::uniform_int_distribution<int>(1, 4)(gen);
        std::vector<int> cells(lat.stabilizers().size());
        std::iota(cells.begin(), cells.end(), 0);
        std::shuffle(cells.begin(), cells.end(), gen);
        std::vector<int> defects(cells.begin(), cells.begin() + k);
        std::sort(defects.begin(), defects.end());
        auto mg = matching_graph(dg, Syndrome{defects}, SearchExtent::Complete);
        int64_t best = brute_perfect(mg);
        EXPECT_EQ(mwpm(mg).total_cost, best);
        EXPECT_EQ(mwpm_perfect(mg).total_cost, best);
        EXPECT_EQ(mwpm(matching_graph(dg, Syndrome{defects})).total_cost, best);
    }
}

TEST(OuterDecoder, ReducedAndExplicitMatchingAgree) {
    auto lat = build_lattice(5);
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 60; trial++) {
        auto dg = decoding_graph_with_weights(lat, random_weights(lat, gen));
        auto bits = random_error(lat, 0.04, gen);
        auto syn = syndrome(lat, bits);
        auto mg = matching_graph(dg, syn);
        auto a = mwpm(mg);
        auto b = mwpm_perfect(mg);
        EXPECT_EQ(a.total_cost, b.total_cost);
        // Both are perfect matchings of the 2k vertices.
        std::vector<int> seen(mg.vertex_count(), 0);
        for (auto [u, v] : a.pairs) {
            seen[u]++;
            seen[v]++;
        }
        for (int c : seen) {
            EXPECT_EQ(c, 1);
        }
        // Greedy nearest-pair matching is never cheaper.
        int64_t greedy = 0;
        std::vector<uint8_t> used(mg.defect_count(), 0);
        for (int i = 0; i < mg.defect_count(); i++) {
            if (used[i]) {
                continue;
            }
            used[i] = 1;
            int64_t best = mg.boundary_cost[i];
            int pick = -1;
            for (int j = 0; j < mg.defect_count(); j++) {
                if (!used[j] && mg.pair_cost[i][j] < best) {
                    best = mg.pair_cost[i][j];
                    pick = j;
                }
            }
            if (pick >= 0) {
                used[pick] = 1;
            }
            greedy += best;
        }
        EXPECT_LE(a.total_cost, greedy);
    }
}

TEST(OuterDecoder, RecoveryClearsSyndrome) {
    for (int d : {3, 5}) {
        auto lat = build_lattice(d);
        std::mt19937_64 gen(5 + d);
        for (int trial = 0; trial < 100; trial++) {
            auto dg = decoding_graph_with_weights(lat, random_weights(lat, gen));
            auto bits = random_error(lat, 0.08, gen);
            auto rec = decode_outer(lat, dg, bits);
            for (int q : rec.flipped_qubits) {
                bits[lat.primal_qubits()[q]] ^= 1;
            }
            EXPECT_TRUE(syndrome(lat, bits).defects.empty());
        }
    }
}

TEST(OuterDecoder, EmptyMatching) {
    auto lat = build_lattice(3);
    auto dg = decoding_graph_with_weights(lat, std::vector<double>(lat.qubit_count(), 1.0));
    auto mg = matching_graph(dg, Syndrome{});
    auto m = mwpm(mg);
    EXPECT_TRUE(m.pairs.empty());
    EXPECT_TRUE(recovery(dg, mg, m).flipped_qubits.empty());
}

TEST(OuterDecoder, DumpFormat) {
    auto lat = build_lattice(3);
    auto dg = decoding_graph_with_weights(lat, std::vector<double>(lat.qubit_count(), 1.0));
    auto mg = matching_graph(dg, Syndrome{{1, 7}}, SearchExtent::Complete);
    std::istringstream in(dump_matching_graph(mg));
    std::string line;
    int defects = 0;
    int pairs = 0;
    while (std::getline(in, line)) {
        if (line.rfind("defect ", 0) == 0) {
            defects++;
        } else {
            EXPECT_EQ(line.rfind("pair ", 0), 0u);
            pairs++;
        }
    }
    EXPECT_EQ(defects, 2);
    EXPECT_EQ(pairs, 4);  // 1-7, 1-B0, 7-B1, B0-B1
}

TEST(OuterDecoder, RejectsBadWeights) {
    auto lat = build_lattice(2);
    EXPECT_THROW(decoding_graph_with_weights(lat, {1.0}), std::invalid_argument);
    std::vector<double> w(lat.qubit_count(), 1.0);
    w[0] = -1;
    EXPECT_THROW(decoding_graph_with_weights(lat, w), std::invalid_argument);
}
