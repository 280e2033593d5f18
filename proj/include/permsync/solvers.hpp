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
#include <string>

#include "permsync/encoder.hpp"
#include "permsync/qubo.hpp"

namespace permsync {

struct Sample {
    BitVector bits;
    double energy = 0.0;
    long long occurrences = 1;
};

struct SampleSetMeta {
    long long reads = 0;
    std::uint64_t seed = 0;
    std::string solver;
};

/// Measured bitstrings with exact energies and occurrence counts, sorted
/// ascending by energy with lexicographic bitstring tie-break. Distinct
/// bitstrings appear at most once.
struct SampleSet {
    std::vector<Sample> samples;
    SampleSetMeta meta;

    bool empty() const { return samples.empty(); }

    /// Lowest-energy sample. Throws EmptySampleSet.
    const Sample& best() const;
};

/// Lexicographic order on bit vectors of equal length (index 0 first).
bool bits_less(const BitVector& a, const BitVector& b);

/// Classical annealing schedule: inverse temperature interpolated
/// geometrically from beta_start to beta_end over `sweeps` full passes.
struct AnnealSchedule {
    double beta_start = 0.1;
    double beta_end = 10.0;
    int sweeps = 1000;
};

inline constexpr int kMaxExhaustiveVars = 26;
inline constexpr long long kMaxPermAssignments = 10'000'000;

/// Enumerates all 2^num_vars bitstrings and returns the top_k lowest-energy
/// ones; the first sample is the certified global binary optimum.
/// Throws TooManyVariables when num_vars > 26.
SampleSet solve_exhaustive_binary(const QuboProblem& q, int top_k);

/// Enumerates permutation-valued assignments only (all views, or all but the
/// clamped first view when gauge_fixed) and evaluates the same penalized
/// QUBO energy; the constraint residual is zero on this search space. The
/// first sample is the certified permutation-space optimum.
/// Throws SearchSpaceTooLarge when (n!)^free_views exceeds 1e7.
SampleSet solve_exhaustive_permutation(const ObservationGraph& g, double lambda, bool gauge_fixed,
                                       int top_k = 1, bool include_diagonal = true);

/// Simulated annealing: `reads` independent restarts, each seeded from its
/// own (seed, read_index) substream, running single-bit-flip Metropolis
/// sweeps with the geometric schedule. Identical inputs give an identical
/// SampleSet. Reported energies are re-evaluated through energy().
SampleSet sample_sa(const QuboProblem& q, int reads, const AnnealSchedule& schedule, std::uint64_t seed);

/// Steepest-descent polish: repeatedly flips the single bit with the largest
/// strict energy decrease (ties resolved to the lowest index) until no flip
/// improves. The result is 1-flip-locally minimal.
BitVector greedy_descent(const QuboProblem& q, BitVector bits);

/// Number of permutation assignments (n!)^free_views, or -1 on overflow.
long long permutation_space_size(int points, int views, bool gauge_fixed);

}  // namespace permsync
