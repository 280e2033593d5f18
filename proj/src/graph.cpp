// Copyright 2026 PermSync Contributors
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

#include "permsync/graph.hpp"

#include <string>
#include <vector>

namespace permsync {

ObservationGraph::ObservationGraph(int points_per_view, int num_views)
        : points_(points_per_view), views_(num_views) {
    if (points_ < 1 || views_ < 1) {
        throw Error(ErrorCode::InvalidConfig, "graph needs at least one view and one point per view");
    }
}

void ObservationGraph::add_edge(int i, int j, Permutation label) {
    if (i == j) throw Error(ErrorCode::InvalidConfig, "self loops are not allowed");
    if (i < 0 || j < 0 || i >= views_ || j >= views_) {
        throw Error(ErrorCode::InvalidConfig,
                    "edge (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range");
    }
    if (label.size() != points_) {
        throw Error(ErrorCode::SizeMismatch, "edge label size does not match points per view");
    }
    if (!edges_.emplace(std::make_pair(i, j), std::move(label)).second) {
        throw Error(ErrorCode::InvalidConfig,
                    "duplicate edge (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
}

const Permutation& ObservationGraph::label(int i, int j) const {
    auto it = edges_.find({i, j});
    if (it == edges_.end()) {
        throw Error(ErrorCode::InvalidConfig,
                    "edge (" + std::to_string(i) + ", " + std::to_string(j) + ") is absent");
    }
    return it->second;
}

ObservationGraph validate_graph(ObservationGraph g) {
    // Symmetric closure first: add the transpose where only one direction is
    // given, reject genuinely inconsistent pairs.
    std::vector<std::pair<std::pair<int, int>, Permutation>> missing;
    for (const auto& [key, label] : g.edges()) {
        const auto reverse = std::make_pair(key.second, key.first);
        const Permutation transposed = label.transposed();
        if (g.has_edge(reverse.first, reverse.second)) {
            if (!(g.label(reverse.first, reverse.second) == transposed)) {
                throw Error(ErrorCode::AsymmetricLabels,
                            "labels of (" + std::to_string(key.first) + ", " + std::to_string(key.second) +
                                ") and its reverse are not transposes");
            }
        } else {
            missing.emplace_back(reverse, transposed);
        }
    }
    for (auto& [key, label] : missing) g.add_edge(key.first, key.second, std::move(label));

    // Connectivity of the undirected skeleton.
    const int m = g.num_views();
    std::vector<char> reached(m, 0);
    std::vector<int> stack{0};
    reached[0] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const auto& [key, label] : g.edges()) {
            if (key.first == v && !reached[key.second]) {
                reached[key.second] = 1;
                stack.push_back(key.second);
            }
        }
    }
    for (int v = 0; v < m; ++v) {
        if (!reached[v]) {
            throw Error(ErrorCode::Disconnected, "view " + std::to_string(v) + " is unreachable from view 0");
        }
    }
    return g;
}

}  // namespace permsync
