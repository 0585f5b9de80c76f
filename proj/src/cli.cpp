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

#include "hrhg/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "hrhg/memory_experiment.hpp"
#include "hrhg/mux_estimator.hpp"
#include "hrhg/report.hpp"
#include "hrhg/threshold_fit.hpp"

namespace hrhg {

namespace {

std::string trim(const std::string &s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) {
        return "";
    }
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

class UsageError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

double parse_number(const std::string &raw) {
    std::string s = trim(raw);
    if (s == "inf" || s == "+inf") {
        return INFINITY;
    }
    size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        throw UsageError("not a number: '" + raw + "'");
    }
    if (used != s.size() || std::isnan(v)) {
        throw UsageError("not a number: '" + raw + "'");
    }
    return v;
}

int64_t parse_integer(const std::string &raw) {
    double v = parse_number(raw);
    if (!std::isfinite(v) || v != std::floor(v)) {
        throw UsageError("not an integer: '" + raw + "'");
    }
    return static_cast<int64_t>(v);
}

uint64_t parse_seed(const std::string &raw) {
    std::string s = trim(raw);
    size_t used = 0;
    uint64_t v = 0;
    try {
        v = std::stoull(s, &used, 0);
    } catch (const std::exception &) {
        throw UsageError("not a seed: '" + raw + "'");
    }
    if (used != s.size() || s.empty() || s[0] == '-') {
        throw UsageError("not a seed: '" + raw + "'");
    }
    return v;
}

// Every flag is captured as text so config-file values and flags share one parser.
struct RawFlags {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option *> options;
};

void add_flag(CLI::App *sub, RawFlags &raw, const std::string &name, const std::string &help) {
    raw.options[name] = sub->add_option("--" + name, raw.values[name], help);
}

std::vector<std::string> names_for(const std::string &sub) {
    if (sub == "mux") {
        return {"p-gbs", "p0", "json", "out"};
    }
    if (sub == "weights") {
        return {"m", "trials", "seed", "json", "out"};
    }
    std::vector<std::string> n{"d", "p0", "delta-db", "inner", "weights", "boundary", "trials", "seed", "workers", "out"};
    if (sub == "threshold") {
        n.push_back("bootstrap");
    }
    return n;
}

ExperimentSpec to_spec(const std::string &sub, const std::map<std::string, std::string> &v) {
    ExperimentSpec spec;
    spec.subcommand = sub;
    auto has = [&](const char *k) { return v.count(k) && !v.at(k).empty(); };
    if (has("d")) {
        spec.distances.clear();
        for (double d : parse_number_list(v.at("d"))) {
            if (d != std::floor(d) || d < 2 || d > 64) {
                throw UsageError("--d values must be integers in [2, 64]");
            }
            spec.distances.push_back(static_cast<int>(d));
        }
    }
    if (has("p0")) {
        spec.p0s = parse_number_list(v.at("p0"));
        for (double p : spec.p0s) {
            if (!(p >= 0 && p <= 1)) {
                throw UsageError("--p0 values must lie in [0, 1]");
            }
        }
    }
    if (has("delta-db")) {
        spec.delta_dbs = parse_number_list(v.at("delta-db"));
    }
    if (has("inner")) {
        auto iv = parse_inner_variant(trim(v.at("inner")));
        if (!iv) {
            throw UsageError("--inner must be standard or algorithm2");
        }
        spec.inner = *iv;
    }
    if (has("weights")) {
        auto wm = parse_weight_mode(trim(v.at("weights")));
        if (!wm) {
            throw UsageError("--weights must be uniform or analog");
        }
        spec.weights = *wm;
    }
    if (has("boundary")) {
        std::string b = trim(v.at("boundary"));
        if (b == "open") {
            spec.boundary = BoundaryConvention::PrimalSinksX;
        } else if (b == "periodic") {
            spec.boundary = BoundaryConvention::PeriodicYZ;
        } else {
            throw UsageError("--boundary must be open or periodic");
        }
    }
    if (has("trials")) {
        spec.trials = parse_integer(v.at("trials"));
        if (spec.trials < 1) {
            throw UsageError("--trials must be at least 1");
        }
    } else if (sub == "weights") {
        spec.trials = 1000000;
    }
    if (has("seed")) {
        spec.master_seed = parse_seed(v.at("seed"));
    } else if (const char *env = std::getenv("HRHG_SEED")) {
        spec.master_seed = parse_seed(env);
    }
    if (has("workers")) {
        spec.workers = static_cast<int>(parse_integer(v.at("workers")));
        if (spec.workers < 1) {
            throw UsageError("--workers must be at least 1");
        }
    }
    if (has("out")) {
        spec.out = trim(v.at("out"));
    }
    if (has("bootstrap")) {
        spec.bootstrap = static_cast<int>(parse_integer(v.at("bootstrap")));
        if (spec.bootstrap < 0) {
            throw UsageError("--bootstrap must be non-negative");
        }
    }
    if (has("m")) {
        spec.m = static_cast<int>(parse_integer(v.at("m")));
        if (spec.m < 1 || spec.m > 4) {
            throw UsageError("--m must be in 1..4");
        }
    }
    if (has("p-gbs")) {
        spec.p_gbs = parse_number(v.at("p-gbs"));
    }
    if (has("json")) {
        std::string j = trim(v.at("json"));
        spec.json = j == "1" || j == "true" || j == "yes";
    }
    return spec;
}

std::vector<TrialConfig> grid(const ExperimentSpec &spec) {
    std::vector<TrialConfig> cells;
    for (int d : spec.distances) {
        for (double p0 : spec.p0s) {
            for (double db : spec.delta_dbs) {
                TrialConfig c;
                c.d = d;
                c.p0 = p0;
                c.delta = std::isinf(db) && db > 0 ? 0.0 : delta_from_db(db);
                c.inner = spec.inner;
                c.weights = spec.weights;
                c.master_seed = spec.master_seed;
                cells.push_back(c);
            }
        }
    }
    return cells;
}

std::vector<TrialBatch> run_grid(const ExperimentSpec &spec, std::ostream &err) {
    std::vector<TrialBatch> batches;
    std::map<int, Lattice> lattices;
    auto cells = grid(spec);
    for (size_t i = 0; i < cells.size(); i++) {
        const auto &c = cells[i];
        auto it = lattices.find(c.d);
        if (it == lattices.end()) {
            it = lattices.emplace(c.d, build_lattice(c.d, spec.boundary)).first;
        }
        batches.push_back(estimate_rate(it->second, c, spec.trials, spec.workers));
        err << "[" << i + 1 << "/" << cells.size() << "] d=" << c.d << " p0=" << format_number(c.p0)
            << " delta_db=" << format_number(c.delta_db()) << " failures=" << batches.back().failures << "/"
            << spec.trials << (batches.back().low_confidence() ? " (low confidence)" : "") << "\n";
    }
    return batches;
}

void write_text(const std::filesystem::path &path, const std::string &text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream f(path, std::ios::trunc);
    f << text;
    if (!f) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

int cmd_simulate(const ExperimentSpec &spec, std::ostream &out, std::ostream &err) {
    auto batches = run_grid(spec, err);
    out << csv_header() << "\n";
    for (const auto &b : batches) {
        out << csv_row(b) << "\n";
    }
    if (spec.out) {
        append_csv(*spec.out / "results.csv", batches);
        nlohmann::json doc = nlohmann::json::array();
        for (const auto &b : batches) {
            doc.push_back(to_json(b));
        }
        write_json(*spec.out / "results.json", doc);
    }
    return exit_code::kOk;
}

int cmd_threshold(const ExperimentSpec &spec, std::ostream &out, std::ostream &err) {
    bool sweep_db = spec.delta_dbs.size() >= 4;
    bool sweep_p0 = spec.p0s.size() >= 4;
    if (sweep_db == sweep_p0) {
        throw UsageError("threshold needs 4+ values on exactly one of --delta-db and --p0");
    }
    if (std::set<int>(spec.distances.begin(), spec.distances.end()).size() < 3) {
        throw UsageError("threshold needs at least 3 distances");
    }
    SweepAxis axis = sweep_db ? SweepAxis::DeltaDb : SweepAxis::P0;
    auto batches = run_grid(spec, err);
    std::filesystem::path dir = spec.out.value_or(".");
    append_csv(dir / "results.csv", batches);

    const auto &fixed_values = sweep_db ? spec.p0s : spec.delta_dbs;
    std::vector<RegionPoint> region;
    out << "axis,fixed,x_c,ci_low,ci_high,nu,message\n";
    for (double fixed : fixed_values) {
        std::vector<TrialBatch> slice;
        for (const auto &b : batches) {
            double v = sweep_db ? b.config.p0 : b.config.delta_db();
            if (v == fixed || (std::isinf(v) && std::isinf(fixed))) {
                slice.push_back(b);
            }
        }
        FitOptions opts;
        opts.bootstrap_samples = spec.bootstrap;
        opts.seed = spec.master_seed;
        auto fit = fit_threshold(slice, axis, opts);
        append_json_line(dir / "fits.jsonl", to_json(fit));
        std::string tag = std::string(to_string(axis)) + "_at_" + format_number(fixed);
        write_text(dir / ("threshold_" + tag + ".svg"), threshold_svg(fit));
        out << to_string(axis) << ',' << format_number(fixed) << ',';
        if (fit.crossing_found) {
            out << format_number(fit.x_c) << ',' << format_number(fit.ci_low) << ',' << format_number(fit.ci_high)
                << ',' << format_number(fit.nu);
            region.push_back(region_point(fit));
        } else {
            out << ",,,";
        }
        out << ',' << fit.message << "\n";
    }
    write_text(dir / "region.svg", region_svg(region));
    return exit_code::kOk;
}

int cmd_weights(const ExperimentSpec &spec, std::ostream &out) {
    double p = ring_parity_violation(spec.m, spec.trials, spec.master_seed);
    out << "m=" << spec.m << " trials=" << spec.trials << " violation=" << format_number(p) << "\n";
    if (spec.json || spec.out) {
        nlohmann::json j{{"m", spec.m}, {"trials", spec.trials}, {"seed", spec.master_seed}, {"violation", p}};
        if (spec.out) {
            write_json(*spec.out / "weights.json", j);
        } else {
            out << j.dump() << "\n";
        }
    }
    return exit_code::kOk;
}

int cmd_mux(const ExperimentSpec &spec, std::ostream &out) {
    double p0 = spec.p0s.size() == 1 ? spec.p0s[0] : -1;
    MuxPlan plan;
    try {
        plan = plan_mux(spec.p_gbs, p0);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    out << format_mux_table(plan);
    if (spec.json) {
        out << to_json(plan).dump() << "\n";
    }
    if (spec.out) {
        write_json(*spec.out / "mux.json", to_json(plan));
    }
    return exit_code::kOk;
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read config " + path.string());
    }
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq));
        if (key.rfind("--", 0) == 0) {
            key = key.substr(2);
        }
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::vector<double> parse_number_list(const std::string &text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        values.push_back(parse_number(item));
    }
    if (values.empty()) {
        throw UsageError("empty list");
    }
    return values;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Threshold simulator for RHG lattices built from GKP and squeezed states", "hrhg"};
    app.require_subcommand(1);
    std::map<std::string, RawFlags> flags;
    std::map<std::string, std::string> config_paths;
    const std::map<std::string, std::string> help{
        {"d", "code distance(s), comma separated"},
        {"p0", "swap-out probability (comma list for sweeps)"},
        {"delta-db", "squeezing in dB (comma list; inf = perfect GKP states)"},
        {"inner", "standard | algorithm2"},
        {"weights", "uniform | analog"},
        {"boundary", "open | periodic (y and z directions)"},
        {"trials", "trials per grid point"},
        {"seed", "master seed (falls back to HRHG_SEED)"},
        {"workers", "worker threads"},
        {"out", "output directory"},
        {"bootstrap", "bootstrap resamples for the threshold CI"},
        {"m", "number of squeezed neighbours (1..4)"},
        {"p-gbs", "heralding probability per source"},
        {"json", "also print JSON (1/0)"},
    };
    const std::map<std::string, std::string> about{
        {"simulate", "failure rate for each (d, p0, delta_db) grid point"},
        {"sweep", "same as simulate, intended for larger grids"},
        {"threshold", "sweep one axis and fit the crossing"},
        {"weights", "ring parity violation for m squeezed neighbours"},
        {"mux", "multiplexing hardware for a target swap-out rate"},
    };
    for (const auto &[name, desc] : about) {
        auto *sub = app.add_subcommand(name, desc);
        auto &raw = flags[name];
        for (const auto &flag : names_for(name)) {
            add_flag(sub, raw, flag, help.at(flag));
        }
        sub->add_option("--config", config_paths[name], "key=value file; flags take precedence");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) {
        reversed.pop_back();  // program name
    }
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return exit_code::kOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n" << app.help();
        return exit_code::kUsage;
    }
    auto *sub = app.get_subcommands().front();
    std::string name = sub->get_name();
    auto &raw = flags[name];
    try {
        if (!config_paths[name].empty()) {
            for (const auto &[key, value] : read_config_file(config_paths[name])) {
                auto it = raw.options.find(key);
                if (it == raw.options.end()) {
                    throw UsageError("unknown config key '" + key + "'");
                }
                if (it->second->count() == 0) {
                    raw.values[key] = value;
                }
            }
        }
        ExperimentSpec spec = to_spec(name, raw.values);
        if (name == "simulate" || name == "sweep") {
            return cmd_simulate(spec, out, err);
        }
        if (name == "threshold") {
            return cmd_threshold(spec, out, err);
        }
        if (name == "weights") {
            return cmd_weights(spec, out);
        }
        return cmd_mux(spec, out);
    } catch (const InvariantViolation &e) {
        err << "internal invariant violated: " << e.what() << "\n";
        return exit_code::kInvariant;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n" << sub->help();
        return exit_code::kUsage;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return exit_code::kUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return exit_code::kOutput;
    }
}

int run_cli(int argc, char **argv) {
    return run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace hrhg
