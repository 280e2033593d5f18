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

#pragma once

#include <map>
#include <utility>

#include "permsync/permutation.hpp"

namespace permsync {

/// Multi-view observation graph: m views of n points each, with directed
/// edges (i, j) labeled by the relative permutation P_ij. A validated graph
/// is symmetric (P_ji = P_ij^T) and connected. Edge iteration order is the
/// sorted (i, j) order, which keeps every downstream build deterministic.
class ObservationGraph {
 public:
    ObservationGraph(int points_per_view, int num_views);

    int points_per_view() const { return points_; }
    int num_views() const { return views_; }

    /// Inserts the directed edge i -> j. Throws InvalidConfig on self loops,
    /// out-of-range endpoints, duplicate edges or label size mismatch.
    void add_edge(int i, int j, Permutation label);

    bool has_edge(int i, int j) const { return edges_.count({i, j}) != 0; }
    const Permutation& label(int i, int j) const;

    const std::map<std::pair<int, int>, Permutation>& edges() const { return edges_; }

    /// Number of directed edges.
    int num_edges() const { return static_cast<int>(edges_.size()); }

    bool operator==(const ObservationGraph&) const = default;

 private:
    int points_;
    int views_;
    std::map<std::pair<int, int>, Permutation> edges_;
};

/// Completes and checks an observation graph: when only one direction of an
/// edge is present the transpose is added; when both are present they must
/// be transposes of each other (AsymmetricLabels otherwise); the undirected
/// skeleton must be connected (Disconnected otherwise).
ObservationGraph validate_graph(ObservationGraph g);

}  // namespace permsync
