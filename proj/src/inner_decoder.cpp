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

#include "hrhg/inner_decoder.hpp"

#include <cmath>
#include <stdexcept>

namespace hrhg {

namespace {

int floor_mod(int a, int m) {
    int r = a % m;
    return r < 0 ? r + m : r;
}

/// Nearest integer to t congruent to residue mod modulus.
int nearest_with_residue(double t, int residue, int modulus) {
    double y = (t - residue) / modulus;
    return residue + modulus * static_cast<int>(std::floor(y + 0.5));
}

int nearest_int(double t) {
    return static_cast<int>(std::floor(t + 0.5));
}

}  // namespace

int nearest_peak(double z) {
    double t = z / kSqrtPi;
    double f = std::floor(t);
    double frac = t - f;
    int base = static_cast<int>(f);
    if (frac > 0.5) {
        return base + 1;
    }
    if (frac < 0.5) {
        return base;
    }
    return (base & 1) ? base + 1 : base;
}

uint8_t standard_bin(double z) {
    return static_cast<uint8_t>(nearest_peak(z) & 1);
}

NeighborhoodFrame make_frame(int center, std::span<const Neighbor> neighbors) {
    const int k = static_cast<int>(neighbors.size());
    if (k < 2 || k > 4) {
        throw std::invalid_argument("make_frame: need between two and four neighbors");
    }
    NeighborhoodFrame f;
    f.center = center;
    for (const Neighbor &nb : neighbors) {
        if (nb.sign != 1 && nb.sign != -1) {
            throw std::invalid_argument("make_frame: signs must be +1 or -1");
        }
        f.neighbors.push_back(nb.node);
        f.signs.push_back(nb.sign);
    }
    f.transform = Eigen::MatrixXi::Zero(k + 1, k + 1);
    f.transform(0, 0) = 1;
    if (k == 4) {
        static const int kHadamard[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                f.transform(r + 1, c + 1) = kHadamard[r][c] * f.signs[c];
            }
        }
    } else {
        for (int c = 0; c < k; ++c) {
            f.transform(1, c + 1) = f.signs[c];
        }
        for (int i = 0; i + 1 < k; ++i) {
            f.transform(i + 2, i + 1) = f.signs[i];
            f.transform(i + 2, i + 2) = -f.signs[i + 1];
        }
    }
    return f;
}

bool is_isolated_swap(const Lattice &lattice, const StateAssignment &assignment, int node) {
    if (!assignment.swapped(node)) {
        return false;
    }
    for (const Neighbor &a : lattice.neighbors(node)) {
        if (assignment.swapped(a.node)) {
            return false;
        }
        for (const Neighbor &b : lattice.neighbors(a.node)) {
            if (b.node != node && assignment.swapped(b.node)) {
                return false;
            }
        }
    }
    return true;
}

std::optional<NeighborhoodFrame> lattice_frame(const Lattice &lattice, const StateAssignment &assignment,
                                               int center) {
    auto row = lattice.neighbors(center);
    if (row.size() < 2 || !is_isolated_swap(lattice, assignment, center)) {
        return std::nullopt;
    }
    return make_frame(center, row);
}

std::vector<int> algorithm2_lattice_point(const NeighborhoodFrame &frame, std::span<const double> p) {
    const int k = frame.k();
    if (static_cast<int>(p.size()) != k + 1) {
        throw std::invalid_argument("algorithm2_lattice_point: expected k + 1 outcomes");
    }
    Eigen::VectorXd pv(k + 1);
    for (int i = 0; i <= k; ++i) {
        pv[i] = p[i];
    }
    Eigen::VectorXd rotated = frame.transform.cast<double>() * pv;
    Eigen::VectorXd t = rotated / kSqrtPi;

    std::vector<int> np(k + 1);
    np[0] = nearest_peak(rotated[0]);

    std::vector<int> m(k);  // m_j = sign_j * n_j
    if (k == 4) {
        // Trust the three quiet directions; the most confident one fixes the common parity.
        int best = 2;
        double best_dist = std::abs(t[2] - nearest_int(t[2]));
        for (int i = 3; i <= 4; ++i) {
            double dist = std::abs(t[i] - nearest_int(t[i]));
            if (dist < best_dist) {
                best = i;
                best_dist = dist;
            }
        }
        np[best] = nearest_int(t[best]);
        int parity = floor_mod(np[best], 2);
        for (int i = 2; i <= 4; ++i) {
            if (i != best) {
                np[i] = nearest_with_residue(t[i], parity, 2);
            }
        }
        // Sum of all four rotated components is 4 m_1, hence n'_1 = -(n'_2 + n'_3 + n'_4) mod 4.
        np[1] = nearest_with_residue(t[1], floor_mod(-(np[2] + np[3] + np[4]), 4), 4);
        static const int kHadamard[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
        for (int j = 0; j < 4; ++j) {
            int acc = 0;
            for (int r = 0; r < 4; ++r) {
                acc += kHadamard[r][j] * np[r + 1];
            }
            if (acc % 4 != 0) {
                throw std::logic_error("algorithm2: rotated point not in the image of T");
            }
            m[j] = acc / 4;
        }
    } else {
        // Differences d_i = m_i - m_{i+1} are unconstrained; the noisy sum must satisfy
        // n'_1 = sum_i i * d_i (mod k).
        int weighted = 0;
        for (int i = 1; i < k; ++i) {
            np[i + 1] = nearest_int(t[i + 1]);
            weighted += i * np[i + 1];
        }
        np[1] = nearest_with_residue(t[1], floor_mod(weighted, k), k);
        int numer = np[1] - weighted;
        if (numer % k != 0) {
            throw std::logic_error("algorithm2: rotated point not in the image of T");
        }
        m[k - 1] = numer / k;
        for (int j = k - 2; j >= 0; --j) {
            m[j] = m[j + 1] + np[j + 2];
        }
    }

    std::vector<int> n(k + 1);
    n[0] = np[0];
    for (int j = 0; j < k; ++j) {
        n[j + 1] = frame.signs[j] * m[j];
    }

    Eigen::VectorXi nv = Eigen::Map<const Eigen::VectorXi>(n.data(), k + 1);
    Eigen::VectorXi back = frame.transform * nv;
    for (int i = 0; i <= k; ++i) {
        if (back[i] != np[i]) {
            throw std::logic_error("algorithm2: consistency rules violated");
        }
    }
    return n;
}

std::vector<uint8_t> algorithm2_decode(const NeighborhoodFrame &frame, std::span<const double> p) {
    std::vector<int> n = algorithm2_lattice_point(frame, p);
    std::vector<uint8_t> bits(n.size());
    for (size_t i = 0; i < n.size(); ++i) {
        bits[i] = static_cast<uint8_t>(floor_mod(n[i], 2));
    }
    return bits;
}

std::string_view to_string(InnerVariant v) {
    return v == InnerVariant::StandardOnly ? "standard" : "algorithm2";
}

std::optional<InnerVariant> parse_inner_variant(std::string_view token) {
    if (token == "standard") {
        return InnerVariant::StandardOnly;
    }
    if (token == "algorithm2") {
        return InnerVariant::Algorithm2;
    }
    return std::nullopt;
}

BitOutcome decode_inner(const Lattice &lattice, const StateAssignment &assignment, const HomodyneSample &sample,
                        InnerVariant variant) {
    const int n = lattice.node_count();
    if (static_cast<int>(sample.p.size()) != n || static_cast<int>(assignment.kinds.size()) != n) {
        throw std::invalid_argument("decode_inner: dimension mismatch");
    }
    BitOutcome out;
    out.bits.resize(n);
    for (int i = 0; i < n; ++i) {
        out.bits[i] = standard_bin(sample.p[i]);
    }
    if (variant == InnerVariant::StandardOnly) {
        return out;
    }
    std::vector<double> local;
    for (int c = 0; c < n; ++c) {
        if (!assignment.swapped(c)) {
            continue;
        }
        auto frame = lattice_frame(lattice, assignment, c);
        if (!frame) {
            continue;
        }
        local.assign(1, sample.p[c]);
        for (int nb : frame->neighbors) {
            local.push_back(sample.p[nb]);
        }
        std::vector<uint8_t> bits = algorithm2_decode(*frame, local);
        out.bits[c] = bits[0];
        for (int j = 0; j < frame->k(); ++j) {
            out.bits[frame->neighbors[j]] = bits[j + 1];
        }
    }
    return out;
}

int swapped_neighbor_count(const Lattice &lattice, const StateAssignment &assignment, int node) {
    int m = 0;
    for (const Neighbor &nb : lattice.neighbors(node)) {
        m += assignment.swapped(nb.node);
    }
    return m;
}

double weight(double z, int m, double delta_tilde) {
    if (m < 0 || m > 4) {
        throw std::invalid_argument("weight: m must lie in 0..4");
    }
    if (m == 4) {
        return 2.0 / 5.0;
    }
    if (m == 3) {
        return 1.0 / 3.0;
    }
    if (m == 2) {
        return 1.0 / 4.0;
    }
    if (!(delta_tilde >= 0.0)) {
        throw std::invalid_argument("weight: delta_tilde must be non-negative");
    }
    double r = z - nearest_peak(z) * kSqrtPi;
    if (delta_tilde == 0.0) {
        return std::abs(r) == 0.5 * kSqrtPi ? 0.5 : 0.0;
    }
    double odd = 0.0;
    double all = 0.0;
    for (int n = -4; n <= 4; ++n) {
        double e = r - n * kSqrtPi;
        double term = std::exp(-e * e / delta_tilde);
        all += term;
        if (n & 1) {
            odd += term;
        }
    }
    return odd / all;
}

double delta_tilde(const Lattice &lattice, const StateAssignment &assignment, double delta, int node) {
    if (lattice.node(node).parity != Parity::Primal) {
        throw std::invalid_argument("delta_tilde: node must be primal");
    }
    int gkp = 0;
    for (const Neighbor &nb : lattice.neighbors(node)) {
        gkp += !assignment.swapped(nb.node);
    }
    return delta * (1 + gkp);
}

}  // namespace hrhg
