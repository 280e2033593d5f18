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

#include "permsync/bench.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "permsync/encoder.hpp"
#include "permsync/random.hpp"

namespace permsync {

namespace {

void validate_config(const SynthConfig& config) {
    if (config.points < 1 || config.views < 1) {
        throw Error(ErrorCode::InvalidConfig, "need at least one view and one point per view");
    }
    if (!(config.completeness > 0.5) || config.completeness > 1.0) {
        throw Error(ErrorCode::InvalidConfig, "completeness must lie in (0.5, 1]");
    }
    if (config.swap_ratio < 0.0 || config.swap_ratio > 0.25) {
        throw Error(ErrorCode::InvalidConfig, "swap ratio must lie in [0, 0.25]");
    }
}

}  // namespace

std::pair<GroundTruth, ObservationGraph> generate(const SynthConfig& config) {
    validate_config(config);
    const int n = config.points;
    const int m = config.views;
    RngStream rng(config.seed);

    GroundTruth gt;
    gt.absolutes.reserve(m);
    gt.absolutes.push_back(Permutation::identity(n));
    for (int v = 1; v < m; ++v) gt.absolutes.emplace_back(rng.random_mapping(n));

    // Random spanning tree: shuffle the views, attach each one to a random
    // earlier view. Keeps the graph connected at any completeness.
    std::vector<int> order(m);
    for (int v = 0; v < m; ++v) order[v] = v;
    rng.shuffle(order);
    std::set<std::pair<int, int>> kept;
    for (int t = 1; t < m; ++t) {
        const int a = order[t];
        const int b = order[rng.uniform_below(static_cast<std::uint64_t>(t))];
        kept.insert({std::min(a, b), std::max(a, b)});
    }

    const long long total_pairs = static_cast<long long>(m) * (m - 1) / 2;
    const long long target = std::max<long long>(m - 1, std::llround(config.completeness * total_pairs));
    std::vector<std::pair<int, int>> extra;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            if (!kept.count({i, j})) extra.emplace_back(i, j);
        }
    }
    rng.shuffle(extra);
    for (std::size_t e = 0; e < extra.size() && static_cast<long long>(kept.size()) < target; ++e) {
        kept.insert(extra[e]);
    }

    const int swaps = static_cast<int>(std::llround(config.swap_ratio * n));
    ObservationGraph graph(n, m);
    for (const auto& [i, j] : kept) {
        Permutation label = relative_of(gt.absolutes[i], gt.absolutes[j]);
        std::vector<int> mapping = label.mapping();
        for (int s = 0; s < swaps; ++s) {
            const int r1 = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
            int r2 = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - 1)));
            if (r2 >= r1) ++r2;
            std::swap(mapping[r1], mapping[r2]);
        }
        Permutation noisy(std::move(mapping));
        graph.add_edge(j, i, noisy.transposed());
        graph.add_edge(i, j, std::move(noisy));
    }
    return {std::move(gt), validate_graph(std::move(graph))};
}

double accuracy(const SyncEstimate& estimate, const GroundTruth& gt) {
    const int m = static_cast<int>(gt.absolutes.size());
    if (static_cast<int>(estimate.views.size()) != m) {
        throw Error(ErrorCode::ShapeMismatch, "estimate has " + std::to_string(estimate.views.size()) +
                                                  " views, ground truth has " + std::to_string(m));
    }
    if (m == 0) throw Error(ErrorCode::ShapeMismatch, "empty ground truth");
    const int n = gt.absolutes[0].size();
    long long differing = 0;
    for (int v = 0; v < m; ++v) {
        if (estimate.views[v].size() != n) {
            throw Error(ErrorCode::ShapeMismatch, "view " + std::to_string(v) + " has wrong size");
        }
        const BinaryMatrix truth = gt.absolutes[v].to_dense();
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) {
                if (estimate.views[v].at(r, c) != truth.at(r, c)) ++differing;
            }
        }
    }
    return 1.0 - static_cast<double>(differing) / (static_cast<double>(m) * n * n);
}

double consistency_error(const ObservationGraph& g, const SyncEstimate& estimate) {
    if (static_cast<int>(estimate.views.size()) != g.num_views()) {
        throw Error(ErrorCode::ShapeMismatch, "estimate view count does not match the graph");
    }
    std::vector<Permutation> absolutes;
    absolutes.reserve(estimate.views.size());
    for (std::size_t v = 0; v < estimate.views.size(); ++v) {
        if (!estimate.views[v].is_permutation()) {
            throw Error(ErrorCode::InvalidEstimate, "view " + std::to_string(v) + " is not a permutation");
        }
        absolutes.push_back(validate_permutation(estimate.views[v]));
    }
    // ||P_ij - X_i X_j^T||_F^2 = 2 * (number of rows where the mappings
    // disagree): each disagreeing row contributes one extra and one missing
    // entry.
    double total = 0.0;
    for (const auto& [key, label] : g.edges()) {
        const Permutation rel = relative_of(absolutes[key.first], absolutes[key.second]);
        int mismatched = 0;
        for (int r = 0; r < label.size(); ++r) {
            if (label.apply(r) != rel.apply(r)) ++mismatched;
        }
        total += 2.0 * mismatched;
    }
    return total;
}

SyncEstimate majority_vote(const SampleSet& samples, int k, const QuboProblem& q) {
    if (samples.empty()) throw Error(ErrorCode::EmptySampleSet, "cannot vote over an empty sample set");
    if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be at least 1");
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), samples.samples.size());

    const BitVector& best = samples.samples.front().bits;
    BitVector voted(q.num_vars);
    long long total_weight = 0;
    std::vector<long long> ones(q.num_vars, 0);
    for (std::size_t s = 0; s < take; ++s) {
        const Sample& sample = samples.samples[s];
        total_weight += sample.occurrences;
        for (int a = 0; a < q.num_vars; ++a) {
            if (sample.bits[a]) ones[a] += sample.occurrences;
        }
    }
    for (int a = 0; a < q.num_vars; ++a) {
        if (2 * ones[a] > total_weight) {
            voted[a] = 1;
        } else if (2 * ones[a] < total_weight) {
            voted[a] = 0;
        } else {
            voted[a] = best[a];  // tie: trust the lowest-energy sample
        }
    }
    return decode(voted, q, "majority-vote[k=" + std::to_string(k) + "] over " + samples.meta.solver);
}

}  // namespace permsync
