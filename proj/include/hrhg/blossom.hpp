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

#ifndef HRHG_BLOSSOM_HPP
#define HRHG_BLOSSOM_HPP

#include <cstdint>
#include <vector>

namespace hrhg {

struct WeightedEdge {
    int u = 0;
    int v = 0;
    int64_t weight = 0;
};

/// Edmonds' blossom algorithm with Galil's O(n^3) bookkeeping and integer duals.
/// Returns mate[v] (or -1). With max_cardinality the result is the heaviest among
/// maximum-cardinality matchings.
std::vector<int> max_weight_matching(int vertex_count, const std::vector<WeightedEdge> &edges,
                                     bool max_cardinality);

/// Minimum total weight perfect matching; throws std::runtime_error if none exists.
std::vector<int> min_weight_perfect_matching(int vertex_count, const std::vector<WeightedEdge> &edges);

}  // namespace hrhg

#endif
