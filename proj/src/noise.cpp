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

#include "hrhg/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace hrhg {

double delta_from_db(double db) {
    return std::pow(10.0, -db / 10.0);
}

double db_from_delta(double delta) {
    return -10.0 * std::log10(delta);
}

int StateAssignment::swapped_count() const {
    int c = 0;
    for (NodeState k : kinds) {
        c += k == NodeState::PSqueezed;
    }
    return c;
}

StateAssignment assign_states(int node_count, double p0, const TrialRng &rng) {
    if (!(p0 >= 0.0 && p0 <= 1.0)) {
        throw std::invalid_argument("assign_states: p0 must lie in [0, 1]");
    }
    StateAssignment out;
    out.seed = rng.seed;
    out.trial = rng.trial;
    out.kinds.assign(node_count, NodeState::GKP);
    if (p0 == 0.0) {
        return out;
    }
    for (int i = 0; i < node_count; ++i) {
        RandomStream s = rng.stream(static_cast<uint32_t>(i), rng_purpose::kSwapOut);
        if (s.uniform() < p0) {
            out.kinds[i] = NodeState::PSqueezed;
        }
    }
    return out;
}

StateAssignment assign_states(const Lattice &lattice, double p0, const TrialRng &rng) {
    return assign_states(lattice.node_count(), p0, rng);
}

MomentumCovariance momentum_covariance(const SignedAdjacency &adjacency, std::span<const NodeState> kinds,
                                       double delta) {
    if (!(delta > 0.0)) {
        throw std::invalid_argument("momentum_covariance: delta must be positive");
    }
    const int n = adjacency.size();
    if (static_cast<int>(kinds.size()) != n) {
        throw std::invalid_argument("momentum_covariance: assignment size mismatch");
    }
    auto q_var = [&](int j) { return kinds[j] == NodeState::PSqueezed ? 0.5 / delta : 0.5 * delta; };

    // (A Sigma_x A^T)_{ik} = sum over common neighbors j of s_ij s_kj var_q(j).
    std::vector<Eigen::Triplet<double>> triplets;
    for (int i = 0; i < n; ++i) {
        triplets.emplace_back(i, i, 0.5 * delta);
    }
    for (int j = 0; j < n; ++j) {
        auto row = adjacency.row(j);
        double v = q_var(j);
        for (const Neighbor &a : row) {
            for (const Neighbor &b : row) {
                triplets.emplace_back(a.node, b.node, a.sign * b.sign * v);
            }
        }
    }
    MomentumCovariance out;
    out.matrix.resize(n, n);
    out.matrix.setFromTriplets(triplets.begin(), triplets.end());
    out.matrix.makeCompressed();
    return out;
}

MomentumCovariance momentum_covariance(const Lattice &lattice, const StateAssignment &assignment, double delta) {
    return momentum_covariance(lattice.adjacency(), assignment.kinds, delta);
}

HomodyneSample sample_homodyne(const SignedAdjacency &adjacency, std::span<const NodeState> kinds, double delta,
                               const TrialRng &rng) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("sample_homodyne: delta must be finite and non-negative");
    }
    const int n = adjacency.size();
    if (static_cast<int>(kinds.size()) != n) {
        throw std::invalid_argument("sample_homodyne: assignment size mismatch");
    }
    std::vector<double> xi_p(n, 0.0);
    std::vector<double> xi_q(n, 0.0);
    if (delta > 0.0) {
        const double sd_small = std::sqrt(0.5 * delta);
        const double sd_large = std::sqrt(0.5 / delta);
        for (int i = 0; i < n; ++i) {
            RandomStream s = rng.stream(static_cast<uint32_t>(i), rng_purpose::kDisplacement);
            xi_p[i] = sd_small * s.normal();
            xi_q[i] = (kinds[i] == NodeState::PSqueezed ? sd_large : sd_small) * s.normal();
        }
    } else {
        for (int i = 0; i < n; ++i) {
            if (kinds[i] == NodeState::PSqueezed) {
                RandomStream s = rng.stream(static_cast<uint32_t>(i), rng_purpose::kDisplacement);
                xi_q[i] = 2.0 * kSqrtPi * s.uniform();
            }
        }
    }
    HomodyneSample out;
    out.p = std::move(xi_p);
    for (int j = 0; j < n; ++j) {
        if (xi_q[j] == 0.0) {
            continue;
        }
        for (const Neighbor &nb : adjacency.row(j)) {
            out.p[nb.node] += nb.sign * xi_q[j];
        }
    }
    return out;
}

HomodyneSample sample_homodyne(const Lattice &lattice, const StateAssignment &assignment, double delta,
                               const TrialRng &rng) {
    return sample_homodyne(lattice.adjacency(), assignment.kinds, delta, rng);
}

ResponsibilityModel::ResponsibilityModel(const Eigen::MatrixXd &sigma) {
    if (sigma.rows() != sigma.cols()) {
        throw std::invalid_argument("ResponsibilityModel: covariance must be square");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("ResponsibilityModel: covariance is not positive definite");
    }
    precision_ = llt.solve(Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols()));
}

double ResponsibilityModel::mahalanobis(std::span<const double> p, std::span<const int> n) const {
    const auto dim = static_cast<size_t>(precision_.rows());
    if (p.size() != dim || n.size() != dim) {
        throw std::invalid_argument("responsibility: dimension mismatch");
    }
    Eigen::VectorXd r(dim);
    for (size_t i = 0; i < dim; ++i) {
        r[i] = n[i] * kSqrtPi - p[i];
    }
    return r.dot(precision_ * r);
}

double ResponsibilityModel::responsibility(std::span<const double> p, std::span<const int> n) const {
    return std::exp(-0.5 * mahalanobis(p, n));
}

double responsibility(std::span<const double> p, std::span<const int> n, const Eigen::MatrixXd &sigma) {
    return ResponsibilityModel(sigma).responsibility(p, n);
}

}  // namespace hrhg
