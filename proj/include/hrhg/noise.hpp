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

#ifndef HRHG_NOISE_HPP
#define HRHG_NOISE_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <span>
#include <vector>

#include "hrhg/lattice.hpp"
#include "hrhg/rng.hpp"

namespace hrhg {

/// GKP lattice spacing in the p quadrature (hbar = 1).
inline const double kSqrtPi = 1.7724538509055160273;

/// delta = 10^(-dB/10).
double delta_from_db(double db);
double db_from_delta(double delta);

/// Finite-squeezing variance parameter delta and swap-out probability p0. The squeezed-state
/// parameter epsilon is identified with delta.
struct NoiseConfig {
    double delta = 0.0;
    double p0 = 0.0;

    static NoiseConfig from_db(double delta_db, double p0) {
        return {delta_from_db(delta_db), p0};
    }
    double delta_db() const {
        return db_from_delta(delta);
    }
};

enum class NodeState : uint8_t { GKP, PSqueezed };

struct StateAssignment {
    std::vector<NodeState> kinds;
    uint64_t seed = 0;
    uint64_t trial = 0;

    int swapped_count() const;
    bool swapped(int node) const {
        return kinds[node] == NodeState::PSqueezed;
    }
};

/// Independent Bernoulli(p0) swap-outs, one counter-based stream per node.
StateAssignment assign_states(int node_count, double p0, const TrialRng &rng);
StateAssignment assign_states(const Lattice &lattice, double p0, const TrialRng &rng);

/// Sigma_p = (delta/2) I + A Sigma_x A^T with Sigma_x = diag(delta/2 | 1/(2 delta)).
struct MomentumCovariance {
    Eigen::SparseMatrix<double> matrix;

    double operator()(int i, int j) const {
        return matrix.coeff(i, j);
    }
    Eigen::MatrixXd dense() const {
        return Eigen::MatrixXd(matrix);
    }
};

MomentumCovariance momentum_covariance(const SignedAdjacency &adjacency, std::span<const NodeState> kinds,
                                       double delta);
MomentumCovariance momentum_covariance(const Lattice &lattice, const StateAssignment &assignment, double delta);

/// p outcomes indexed by node id, in the zero Pauli frame (ideal outcome = 0).
struct HomodyneSample {
    std::vector<double> p;
};

/// Heisenberg-picture sampler: p_i = xi_p,i + sum_j sign(i,j) xi_q,j.
///
/// delta > 0: xi_p ~ N(0, delta/2) everywhere, xi_q ~ N(0, delta/2) on GKP nodes and
/// N(0, 1/(2 delta)) on squeezed nodes.
/// delta == 0: the infinite-squeezing limit. GKP displacements vanish and each squeezed xi_q
/// is uniform on [0, 2 sqrt(pi)), which is all binning can see of an infinitely broad Gaussian.
HomodyneSample sample_homodyne(const SignedAdjacency &adjacency, std::span<const NodeState> kinds, double delta,
                               const TrialRng &rng);
HomodyneSample sample_homodyne(const Lattice &lattice, const StateAssignment &assignment, double delta,
                               const TrialRng &rng);

/// exp(-1/2 (n sqrt(pi) - p)^T Sigma^-1 (n sqrt(pi) - p)). Throws on dimension mismatch or a
/// singular Sigma.
double responsibility(std::span<const double> p, std::span<const int> n, const Eigen::MatrixXd &sigma);

/// Factorizes Sigma once for repeated responsibility evaluations.
class ResponsibilityModel {
   public:
    explicit ResponsibilityModel(const Eigen::MatrixXd &sigma);

    /// The quadratic form (n sqrt(pi) - p)^T Sigma^-1 (n sqrt(pi) - p).
    double mahalanobis(std::span<const double> p, std::span<const int> n) const;
    double responsibility(std::span<const double> p, std::span<const int> n) const;
    int dimension() const {
        return static_cast<int>(precision_.rows());
    }

   private:
    Eigen::MatrixXd precision_;
};

}  // namespace hrhg

#endif
