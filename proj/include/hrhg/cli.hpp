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

#ifndef HRHG_CLI_HPP
#define HRHG_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hrhg/inner_decoder.hpp"
#include "hrhg/lattice.hpp"
#include "hrhg/outer_decoder.hpp"

namespace hrhg {

namespace exit_code {
constexpr int kOk = 0;
constexpr int kOutput = 1;
constexpr int kUsage = 2;
constexpr int kInvariant = 3;
}  // namespace exit_code

struct ExperimentSpec {
    std::string subcommand;
    std::vector<int> distances{3};
    std::vector<double> p0s{0.0};
    std::vector<double> delta_dbs{13.0};  // +inf is the degenerate model
    InnerVariant inner = InnerVariant::StandardOnly;
    WeightMode weights = WeightMode::Analog;
    BoundaryConvention boundary = BoundaryConvention::PrimalSinksX;
    int64_t trials = 1000;
    uint64_t master_seed = 1;
    int workers = 1;
    std::optional<std::filesystem::path> out;
    int bootstrap = 200;
    // weights / mux
    int m = 2;
    double p_gbs = 0.021;
    bool json = false;
};

/// `key=value` lines; `#` starts a comment. Throws std::runtime_error on unreadable files
/// and std::invalid_argument on malformed lines.
std::map<std::string, std::string> read_config_file(const std::filesystem::path &path);

/// Comma-separated numbers; `inf` is accepted.
std::vector<double> parse_number_list(const std::string &text);

/// argv[0] is the program name. Output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int run_cli(int argc, char **argv);

}  // namespace hrhg

#endif
