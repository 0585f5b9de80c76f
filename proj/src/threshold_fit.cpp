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

#include "hrhg/threshold_fit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/NumericalDiff>

namespace hrhg {

std::string_view to_string(SweepAxis a) {
    return a == SweepAxis::DeltaDb ? "delta_db" : "p0";
}

namespace {

// Parameters: A, B, C, x_c, log(nu).
using Params = Eigen::Matrix<double, 5, 1>;

double model(const Params &q, double x, int d) {
    double u = (x - q[3]) * std::pow(static_cast<double>(d), std::exp(-q[4]));
    return q[0] + q[1] * u + q[2] * u * u;
}

struct Observation {
    int d;
    double x;
    double p;
    double sigma;
};

std::vector<Observation> observations(std::span<const FitPoint> points, const std::vector<int64_t> &failures) {
    std::vector<Observation> obs;
    for (size_t i = 0; i < points.size(); i++) {
        double n = static_cast<double>(points[i].trials);
        double f = static_cast<double>(failures[i]);
        // Smoothed variance so that zero-failure points keep a finite weight.
        double ps = (f + 1) / (n + 2);
        obs.push_back({points[i].d, points[i].x, f / n, std::sqrt(ps * (1 - ps) / n)});
    }
    return obs;
}

struct Residuals : Eigen::DenseFunctor<double> {
    const std::vector<Observation> *obs;
    Residuals(const std::vector<Observation> &o) : DenseFunctor<double>(5, static_cast<int>(o.size())), obs(&o) {
    }
    int operator()(const InputType &q, ValueType &r) const {
        for (size_t i = 0; i < obs->size(); i++) {
            const auto &o = (*obs)[i];
            r[static_cast<Eigen::Index>(i)] = (o.p - model(q, o.x, o.d)) / o.sigma;
        }
        return 0;
    }
};

double chi2(const std::vector<Observation> &obs, const Params &q) {
    double s = 0;
    for (const auto &o : obs) {
        double r = (o.p - model(q, o.x, o.d)) / o.sigma;
        s += r * r;
    }
    return s;
}

/// A, B, C are linear once x_c and nu are fixed.
Params linear_start(const std::vector<Observation> &obs, double x_c, double log_nu) {
    Eigen::MatrixXd M(obs.size(), 3);
    Eigen::VectorXd y(obs.size());
    for (size_t i = 0; i < obs.size(); i++) {
        const auto &o = obs[i];
        double u = (o.x - x_c) * std::pow(static_cast<double>(o.d), std::exp(-log_nu));
        M.row(static_cast<Eigen::Index>(i)) << 1 / o.sigma, u / o.sigma, u * u / o.sigma;
        y[static_cast<Eigen::Index>(i)] = o.p / o.sigma;
    }
    Eigen::Vector3d abc = M.colPivHouseholderQr().solve(y);
    Params q;
    q << abc[0], abc[1], abc[2], x_c, log_nu;
    return q;
}

Params refine(const std::vector<Observation> &obs, Params q) {
    Residuals f(obs);
    Eigen::NumericalDiff<Residuals> nd(f);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Residuals>> lm(nd);
    lm.setMaxfev(4000);
    Eigen::VectorXd v = q;
    lm.minimize(v);
    return v;
}

/// First x where the smallest- and largest-distance curves change order, by linear interpolation.
std::optional<double> order_swap(std::span<const FitPoint> points, const std::vector<int64_t> &failures) {
    int d_lo = points[0].d;
    int d_hi = points[0].d;
    for (const auto &pt : points) {
        d_lo = std::min(d_lo, pt.d);
        d_hi = std::max(d_hi, pt.d);
    }
    std::map<double, double> lo, hi;
    for (size_t i = 0; i < points.size(); i++) {
        double p = static_cast<double>(failures[i]) / static_cast<double>(points[i].trials);
        if (points[i].d == d_lo) {
            lo[points[i].x] = p;
        } else if (points[i].d == d_hi) {
            hi[points[i].x] = p;
        }
    }
    std::vector<std::pair<double, double>> diff;
    for (auto [x, p] : lo) {
        auto it = hi.find(x);
        if (it != hi.end()) {
            diff.push_back({x, it->second - p});
        }
    }
    if (diff.size() < 2) {
        return std::nullopt;
    }
    double first = diff.front().second;
    double last = diff.back().second;
    if (first == 0 || last == 0 || (first > 0) == (last > 0)) {
        return std::nullopt;
    }
    for (size_t i = 0; i + 1 < diff.size(); i++) {
        auto [x0, g0] = diff[i];
        auto [x1, g1] = diff[i + 1];
        if (g0 == 0) {
            return x0;
        }
        if ((g0 > 0) != (g1 > 0) && g1 != 0) {
            return x0 + (x1 - x0) * g0 / (g0 - g1);
        }
    }
    return std::nullopt;
}

struct Solved {
    bool ok = false;
    Params q;
    double chi2 = 0;
};

Solved solve(std::span<const FitPoint> points, const std::vector<int64_t> &failures, double x_min, double x_max,
             const Params *start) {
    Solved out;
    auto swap = order_swap(points, failures);
    if (!swap) {
        return out;
    }
    auto obs = observations(points, failures);
    std::vector<Params> starts;
    if (start) {
        starts.push_back(*start);
    }
    for (double nu : {0.7, 1.0, 1.5, 2.5}) {
        starts.push_back(linear_start(obs, *swap, std::log(nu)));
    }
    double best = INFINITY;
    for (const auto &s : starts) {
        Params q = refine(obs, s);
        double c = chi2(obs, q);
        if (std::isfinite(c) && c < best && q.allFinite()) {
            best = c;
            out.q = q;
        }
    }
    if (!std::isfinite(best)) {
        return out;
    }
    out.chi2 = best;
    out.ok = out.q[3] >= x_min && out.q[3] <= x_max;
    return out;
}

}  // namespace

double scaling_model(const ThresholdEstimate &fit, double x, int d) {
    Params q;
    q << fit.A, fit.B, fit.C, fit.x_c, std::log(fit.nu);
    return model(q, x, d);
}

ThresholdEstimate fit_threshold(std::span<const FitPoint> points, SweepAxis axis, double fixed_value,
                                const FitOptions &options) {
    std::set<int> ds;
    std::set<double> xs;
    for (const auto &pt : points) {
        if (pt.trials < 1 || pt.failures < 0 || pt.failures > pt.trials) {
            throw std::invalid_argument("fit point with invalid counts");
        }
        ds.insert(pt.d);
        xs.insert(pt.x);
    }
    if (ds.size() < 3 || xs.size() < 4) {
        throw std::invalid_argument("threshold fit needs at least 3 distances and 4 sweep values");
    }
    ThresholdEstimate est;
    est.axis = axis;
    est.fixed_value = fixed_value;
    est.points.assign(points.begin(), points.end());
    est.x_min = *xs.begin();
    est.x_max = *xs.rbegin();

    std::vector<int64_t> failures;
    for (const auto &pt : points) {
        failures.push_back(pt.failures);
    }
    Solved main = solve(points, failures, est.x_min, est.x_max, nullptr);
    if (!main.ok) {
        est.message = "no crossing detected";
        return est;
    }
    est.crossing_found = true;
    est.A = main.q[0];
    est.B = main.q[1];
    est.C = main.q[2];
    est.x_c = main.q[3];
    est.nu = std::exp(main.q[4]);
    est.chi2 = main.chi2;
    est.dof = static_cast<int>(points.size()) - 5;
    auto obs = observations(points, failures);
    for (const auto &o : obs) {
        est.residuals.push_back((o.p - model(main.q, o.x, o.d)) / o.sigma);
    }

    std::mt19937_64 gen(options.seed);
    std::vector<double> xcs;
    for (int b = 0; b < options.bootstrap_samples; b++) {
        std::vector<int64_t> resampled;
        for (const auto &pt : points) {
            std::binomial_distribution<int64_t> binom(pt.trials, pt.p());
            resampled.push_back(binom(gen));
        }
        Solved s = solve(points, resampled, est.x_min, est.x_max, &main.q);
        if (s.ok) {
            xcs.push_back(s.q[3]);
        }
    }
    est.bootstrap_used = static_cast<int>(xcs.size());
    if (xcs.empty()) {
        est.ci_low = est.ci_high = est.x_c;
    } else {
        std::sort(xcs.begin(), xcs.end());
        double tail = (1 - options.confidence) / 2;
        auto at = [&](double q) {
            double pos = q * static_cast<double>(xcs.size() - 1);
            size_t i = static_cast<size_t>(std::floor(pos));
            size_t j = std::min(i + 1, xcs.size() - 1);
            return xcs[i] + (pos - static_cast<double>(i)) * (xcs[j] - xcs[i]);
        };
        est.ci_low = std::min(at(tail), est.x_c);
        est.ci_high = std::max(at(1 - tail), est.x_c);
    }
    est.message = "crossing detected";
    return est;
}

std::vector<FitPoint> fit_points(std::span<const TrialBatch> batches, SweepAxis axis) {
    std::vector<FitPoint> pts;
    for (const auto &b : batches) {
        double x = axis == SweepAxis::DeltaDb ? b.config.delta_db() : b.config.p0;
        pts.push_back({b.config.d, x, b.trials, b.failures});
    }
    return pts;
}

ThresholdEstimate fit_threshold(std::span<const TrialBatch> batches, SweepAxis axis, const FitOptions &options) {
    if (batches.empty()) {
        throw std::invalid_argument("no batches to fit");
    }
    auto pts = fit_points(batches, axis);
    double fixed = axis == SweepAxis::DeltaDb ? batches[0].config.p0 : batches[0].config.delta_db();
    return fit_threshold(pts, axis, fixed, options);
}

}  // namespace hrhg
