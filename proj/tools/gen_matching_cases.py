#!/usr/bin/env python3
# Copyright 2026 The hrhg Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes random matching instances with networkx reference optima.

Output format, one case per block:
  case <n> <edge_count> <max_weight> <max_weight_max_cardinality>
  <u> <v> <w>    (edge_count lines)
"""

import random
import sys

import networkx as nx


def main() -> None:
    rng = random.Random(2026)
    out = sys.stdout
    for _ in range(120):
        n = rng.randint(12, 60)
        density = rng.choice([0.08, 0.2, 0.5])
        g = nx.Graph()
        g.add_nodes_from(range(n))
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < density:
                    g.add_edge(u, v, weight=rng.randint(0, 10**6))
        total = lambda m: sum(g[u][v]["weight"] for u, v in m)
        a = total(nx.max_weight_matching(g, maxcardinality=False))
        b = total(nx.max_weight_matching(g, maxcardinality=True))
        out.write(f"case {n} {g.number_of_edges()} {a} {b}\n")
        for u, v, d in g.edges(data=True):
            out.write(f"{u} {v} {d['weight']}\n")


if __name__ == "__main__":
    main()
