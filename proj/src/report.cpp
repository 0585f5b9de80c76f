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

#include "hrhg/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace hrhg {

std::string format_number(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_header() {
    return "d,p0,delta_db,inner,weights,trials,failures,p_fail,stderr,master_seed";
}

std::string csv_row(const TrialBatch &b) {
    std::ostringstream out;
    out << b.config.d << ',' << format_number(b.config.p0) << ',' << format_number(b.config.delta_db()) << ','
        << to_string(b.config.inner) << ',' << to_string(b.config.weights) << ',' << b.trials << ',' << b.failures
        << ',' << format_number(b.p_fail()) << ',' << format_number(b.stderr_mean()) << ','
        << b.config.master_seed;
    return out.str();
}

namespace {

std::ofstream open_or_throw(const std::filesystem::path &path, std::ios::openmode mode) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, mode);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

nlohmann::json number(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return format_number(v);
}

}  // namespace

void append_csv(const std::filesystem::path &path, std::span<const TrialBatch> batches) {
    std::error_code ec;
    bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
    auto out = open_or_throw(path, std::ios::app);
    if (fresh) {
        out << csv_header() << '\n';
    }
    for (const auto &b : batches) {
        out << csv_row(b) << '\n';
    }
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

nlohmann::json to_json(const TrialBatch &b) {
    nlohmann::json j;
    j["config"] = {{"d", b.config.d},
                   {"p0", b.config.p0},
                   {"delta", b.config.delta},
                   {"delta_db", number(b.config.delta_db())},
                   {"inner", std::string(to_string(b.config.inner))},
                   {"weights", std::string(to_string(b.config.weights))},
                   {"master_seed", b.config.master_seed}};
    j["trials"] = b.trials;
    j["failures"] = b.failures;
    j["p_fail"] = b.p_fail();
    j["stderr"] = b.stderr_mean();
    j["low_confidence"] = b.low_confidence();
    return j;
}

nlohmann::json to_json(const ThresholdEstimate &f) {
    nlohmann::json j;
    j["axis"] = std::string(to_string(f.axis));
    j["fixed_value"] = number(f.fixed_value);
    j["crossing_found"] = f.crossing_found;
    j["message"] = f.message;
    j["range"] = {f.x_min, f.x_max};
    if (f.crossing_found) {
        j["x_c"] = f.x_c;
        j["ci"] = {f.ci_low, f.ci_high};
        j["nu"] = f.nu;
        j["A"] = f.A;
        j["B"] = f.B;
        j["C"] = f.C;
        j["chi2"] = f.chi2;
        j["dof"] = f.dof;
        j["bootstrap_used"] = f.bootstrap_used;
        j["residuals"] = f.residuals;
    }
    return j;
}

nlohmann::json to_json(const MuxPlan &p) {
    return {{"p_gbs", p.p_gbs}, {"p0", p.p0}, {"n_gbs", p.n_gbs}, {"depth", p.depth}, {"switches", p.switches}};
}

void write_json(const std::filesystem::path &path, const nlohmann::json &value) {
    auto out = open_or_throw(path, std::ios::trunc);
    out << value.dump(2) << '\n';
}

void append_json_line(const std::filesystem::path &path, const nlohmann::json &value) {
    auto out = open_or_throw(path, std::ios::app);
    out << value.dump() << '\n';
}

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 440;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 30;
constexpr double kBottom = 50;

const char *palette(size_t i) {
    static const char *colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    return colors[i % 6];
}

struct Frame {
    double x0, x1, y0, y1;
    double sx(double x) const {
        return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight);
    }
    double sy(double y) const {
        return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom);
    }
};

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

void axes(std::ostringstream &svg, const Frame &f, const std::string &xlabel, const std::string &ylabel) {
    svg << "<rect x='" << kLeft << "' y='" << kTop << "' width='" << kWidth - kLeft - kRight << "' height='"
        << kHeight - kTop - kBottom << "' fill='none' stroke='black'/>\n";
    for (int i = 0; i <= 4; i++) {
        double x = f.x0 + (f.x1 - f.x0) * i / 4;
        double y = f.y0 + (f.y1 - f.y0) * i / 4;
        svg << "<text x='" << f.sx(x) << "' y='" << kHeight - kBottom + 18 << "' font-size='11' text-anchor='middle'>"
            << fmt(x) << "</text>\n";
        svg << "<text x='" << kLeft - 6 << "' y='" << f.sy(y) + 4 << "' font-size='11' text-anchor='end'>" << fmt(y)
            << "</text>\n";
    }
    svg << "<text x='" << (kLeft + kWidth - kRight) / 2 << "' y='" << kHeight - 10
        << "' font-size='13' text-anchor='middle'>" << xlabel << "</text>\n";
    svg << "<text x='16' y='" << (kTop + kHeight - kBottom) / 2 << "' font-size='13' text-anchor='middle' transform='rotate(-90 16 "
        << (kTop + kHeight - kBottom) / 2 << ")'>" << ylabel << "</text>\n";
}

}  // namespace

std::string threshold_svg(const ThresholdEstimate &fit) {
    std::map<int, std::vector<FitPoint>> by_d;
    double ymax = 0;
    for (const auto &pt : fit.points) {
        by_d[pt.d].push_back(pt);
        double se = std::sqrt(pt.p() * (1 - pt.p()) / static_cast<double>(pt.trials));
        ymax = std::max(ymax, pt.p() + se);
    }
    double pad = (fit.x_max - fit.x_min) * 0.05;
    Frame f{fit.x_min - pad, fit.x_max + pad, 0, ymax > 0 ? ymax * 1.1 : 1};
    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight << "'>\n";
    svg << "<rect width='100%' height='100%' fill='white'/>\n";
    axes(svg, f, fit.axis == SweepAxis::DeltaDb ? "squeezing (dB)" : "swap-out probability p0", "p_fail");
    size_t ci = 0;
    for (auto &[d, pts] : by_d) {
        const char *c = palette(ci++);
        std::sort(pts.begin(), pts.end(), [](const FitPoint &a, const FitPoint &b) { return a.x < b.x; });
        for (const auto &pt : pts) {
            double se = std::sqrt(pt.p() * (1 - pt.p()) / static_cast<double>(pt.trials));
            svg << "<line x1='" << f.sx(pt.x) << "' x2='" << f.sx(pt.x) << "' y1='" << f.sy(pt.p() - se) << "' y2='"
                << f.sy(pt.p() + se) << "' stroke='" << c << "'/>\n";
            svg << "<circle cx='" << f.sx(pt.x) << "' cy='" << f.sy(pt.p()) << "' r='3' fill='" << c << "'/>\n";
        }
        if (fit.crossing_found) {
            svg << "<polyline fill='none' stroke='" << c << "' points='";
            for (int i = 0; i <= 100; i++) {
                double x = fit.x_min + (fit.x_max - fit.x_min) * i / 100;
                double y = std::clamp(scaling_model(fit, x, d), f.y0, f.y1);
                svg << f.sx(x) << ',' << f.sy(y) << ' ';
            }
            svg << "'/>\n";
        }
        svg << "<text x='" << kWidth - kRight - 60 << "' y='" << kTop + 16 * ci << "' font-size='12' fill='" << c
            << "'>d = " << d << "</text>\n";
    }
    if (fit.crossing_found) {
        svg << "<line x1='" << f.sx(fit.x_c) << "' x2='" << f.sx(fit.x_c) << "' y1='" << f.sy(f.y0) << "' y2='"
            << f.sy(f.y1) << "' stroke='gray' stroke-dasharray='4 3'/>\n";
        svg << "<text x='" << kLeft + 8 << "' y='" << kTop + 16 << "' font-size='12'>x_c = " << fmt(fit.x_c) << " ["
            << fmt(fit.ci_low) << ", " << fmt(fit.ci_high) << "]</text>\n";
    } else {
        svg << "<text x='" << kLeft + 8 << "' y='" << kTop + 16 << "' font-size='12'>" << fit.message << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

RegionPoint region_point(const ThresholdEstimate &fit) {
    RegionPoint r;
    r.axis = fit.axis;
    if (fit.axis == SweepAxis::DeltaDb) {
        r.delta_db = fit.x_c;
        r.p0 = fit.fixed_value;
    } else {
        r.delta_db = fit.fixed_value;
        r.p0 = fit.x_c;
    }
    r.ci_low = fit.ci_low;
    r.ci_high = fit.ci_high;
    return r;
}

std::string region_svg(std::span<const RegionPoint> points) {
    double xmin = INFINITY;
    double xmax = -INFINITY;
    double ymax = 0;
    for (const auto &r : points) {
        if (std::isfinite(r.delta_db)) {
            xmin = std::min(xmin, r.axis == SweepAxis::DeltaDb ? r.ci_low : r.delta_db);
            xmax = std::max(xmax, r.axis == SweepAxis::DeltaDb ? r.ci_high : r.delta_db);
        }
        ymax = std::max(ymax, r.axis == SweepAxis::P0 ? r.ci_high : r.p0);
    }
    if (!std::isfinite(xmin)) {
        xmin = 8;
        xmax = 16;
    }
    xmin = std::floor(xmin - 1);
    xmax = std::ceil(xmax + 2);
    double x_inf = xmax;  // the degenerate model is drawn on the right edge
    Frame f{xmin, xmax, 0, ymax > 0 ? ymax * 1.15 : 0.3};
    std::vector<std::pair<double, double>> curve;
    for (const auto &r : points) {
        curve.push_back({std::isfinite(r.delta_db) ? r.delta_db : x_inf, r.p0});
    }
    std::sort(curve.begin(), curve.end(), [](auto a, auto b) { return a.second < b.second; });

    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight << "'>\n";
    svg << "<rect width='100%' height='100%' fill='white'/>\n";
    if (!curve.empty()) {
        svg << "<polygon fill='#cfe3f7' stroke='none' points='" << f.sx(x_inf) << ',' << f.sy(0) << ' ';
        svg << f.sx(curve.front().first) << ',' << f.sy(0) << ' ';
        for (auto [x, y] : curve) {
            svg << f.sx(x) << ',' << f.sy(y) << ' ';
        }
        svg << f.sx(x_inf) << ',' << f.sy(curve.back().second) << "'/>\n";
        svg << "<polyline fill='none' stroke='#1f77b4' stroke-width='2' points='";
        for (auto [x, y] : curve) {
            svg << f.sx(x) << ',' << f.sy(y) << ' ';
        }
        svg << "'/>\n";
    }
    for (const auto &r : points) {
        double x = std::isfinite(r.delta_db) ? r.delta_db : x_inf;
        if (r.axis == SweepAxis::DeltaDb) {
            svg << "<line x1='" << f.sx(r.ci_low) << "' x2='" << f.sx(r.ci_high) << "' y1='" << f.sy(r.p0) << "' y2='"
                << f.sy(r.p0) << "' stroke='black'/>\n";
        } else {
            svg << "<line x1='" << f.sx(x) << "' x2='" << f.sx(x) << "' y1='" << f.sy(r.ci_low) << "' y2='"
                << f.sy(r.ci_high) << "' stroke='black'/>\n";
        }
        svg << "<circle cx='" << f.sx(x) << "' cy='" << f.sy(r.p0) << "' r='3.5' fill='black'/>\n";
    }
    axes(svg, f, "squeezing (dB), right edge = perfect GKP", "swap-out threshold p0");
    svg << "<text x='" << kWidth - kRight - 90 << "' y='" << kHeight - kBottom - 10
        << "' font-size='12'>correctable</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace hrhg
