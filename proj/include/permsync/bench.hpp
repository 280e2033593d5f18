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

#include <cstdint>
#include <utility>
#include <vector>

#include "permsync/graph.hpp"
#include "permsync/permutation.hpp"
#include "permsync/solvers.hpp"

namespace permsync {

/// Synthetic instance parameters. completeness C is the fraction of
/// undirected edges kept (0.5 < C <= 1); swap_ratio sigma controls the
/// number of random row transpositions, round(sigma * n), applied to every
/// retained relative permutation (0 <= sigma <= 0.25).
struct SynthConfig {
    int points = 3;          // n
    int views = 3;           // m
    double completeness = 1.0;
    double swap_ratio = 0.0;
    std::uint64_t seed = 0;
};

/// Ground-truth absolute permutations, gauge-normalized so that
/// absolutes[0] is the identity.
struct GroundTruth {
    std::vector<Permutation> absolutes;
};

/// Draws random absolutes (first = identity), forms all pairwise ratios,
/// drops undirected edges down to the requested completeness while always
/// keeping a random spanning tree, then perturbs each retained edge with
/// round(sigma * n) random row transpositions (the reverse edge stays the
/// exact transpose). Pure function of the config. Throws InvalidConfig.
std::pair<GroundTruth, ObservationGraph> generate(const SynthConfig& config);

/// Hamming similarity over all m*n^2 bits (gauge view included):
/// 1 - (1/(m n^2)) sum_i |vec(X_i xor GT_i)|_1. Estimate views may be
/// arbitrary binary matrices. Throws ShapeMismatch.
double accuracy(const SyncEstimate& estimate, const GroundTruth& gt);

/// Sum of squared Frobenius residuals ||P_ij - X_i X_j^T||_F^2 over the
/// directed edges. Requires every estimate view to be a valid permutation
/// (InvalidEstimate otherwise).
double consistency_error(const ObservationGraph& g, const SyncEstimate& estimate);

/// Posterior repair: takes the k lowest-energy distinct samples, computes
/// the per-bit majority with occurrence weighting (ties resolve to the
/// lowest-energy sample's bit) and decodes the result. k = 1 reduces to
/// decoding the best sample. Throws EmptySampleSet.
SyncEstimate majority_vote(const SampleSet& samples, int k, const QuboProblem& q);

}  // namespace permsync
