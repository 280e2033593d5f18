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

#include "permsync/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <queue>
#include <string>

#include "permsync/random.hpp"

namespace permsync {

const Sample& SampleSet::best() const {
    if (samples.empty()) throw Error(ErrorCode::EmptySampleSet, "sample set is empty");
    return samples.front();
}

bool bits_less(const BitVector& a, const BitVector& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace {

void sort_samples(std::vector<Sample>& samples) {
    std::sort(samples.begin(), samples.end(), [](const Sample& x, const Sample& y) {
        if (x.energy != y.energy) return x.energy < y.energy;
        return bits_less(x.bits, y.bits);
    });
}

BitVector mask_to_bits(std::uint64_t mask, int num_vars) {
    BitVector bits(num_vars);
    for (int a = 0; a < num_vars; ++a) bits[a] = static_cast<std::uint8_t>((mask >> a) & 1u);
    return bits;
}

/// Lexicographic bit order on masks: bit 0 is the most significant position.
bool mask_lex_less(std::uint64_t a, std::uint64_t b) {
    const std::uint64_t diff = a ^ b;
    if (diff == 0) return false;
    const int first = std::countr_zero(diff);
    return ((a >> first) & 1u) == 0;
}

struct MaskCandidate {
    double energy;
    std::uint64_t mask;
};

bool candidate_less(const MaskCandidate& x, const MaskCandidate& y) {
    if (x.energy != y.energy) return x.energy < y.energy;
    return mask_lex_less(x.mask, y.mask);
}

void validate_schedule(const AnnealSchedule& schedule) {
    if (!(schedule.beta_start < schedule.beta_end) || schedule.beta_start <= 0.0) {
        throw Error(ErrorCode::InvalidConfig, "schedule requires 0 < beta_start < beta_end");
    }
    if (schedule.sweeps < 0) throw Error(ErrorCode::InvalidConfig, "sweeps must be non-negative");
}

/// Geometrically spaced inverse temperatures including both endpoints.
std::vector<double> beta_schedule(const AnnealSchedule& schedule) {
    std::vector<double> betas(schedule.sweeps);
    if (schedule.sweeps == 1) {
        betas[0] = schedule.beta_start;
        return betas;
    }
    const double log_start = std::log(schedule.beta_start);
    const double log_end = std::log(schedule.beta_end);
    for (int t = 0; t < schedule.sweeps; ++t) {
        betas[t] = std::exp(log_start + (log_end - log_start) * t / (schedule.sweeps - 1));
    }
    return betas;
}

}  // namespace

SampleSet solve_exhaustive_binary(const QuboProblem& q, int top_k) {
    if (top_k < 1) throw Error(ErrorCode::InvalidConfig, "top_k must be at least 1");
    if (q.num_vars > kMaxExhaustiveVars) {
        throw Error(ErrorCode::TooManyVariables, std::to_string(q.num_vars) + " variables exceed the 2^" +
                                                     std::to_string(kMaxExhaustiveVars) + " enumeration cap");
    }
    SampleSet set;
    set.meta = {0, 0, "exhaustive-binary"};
    if (q.num_vars == 0) {
        set.samples.push_back({BitVector{}, q.offset, 1});
        return set;
    }

    // Reflected-Gray-code walk: step s flips bit countr_zero(s), so the
    // incremental flip cost covers the whole cube in 2^n - 1 single flips.
    auto worse = [](const MaskCandidate& x, const MaskCandidate& y) { return candidate_less(x, y); };
    std::priority_queue<MaskCandidate, std::vector<MaskCandidate>, decltype(worse)> keep(worse);

    BitVector bits(q.num_vars, 0);
    FlipTable table(q);
    table.reset(bits);
    double current = q.offset;  // all-zero energy
    keep.push({current, 0});

    const std::uint64_t states = 1ull << q.num_vars;
    std::uint64_t gray = 0;
    const std::size_t cap = static_cast<std::size_t>(top_k);
    for (std::uint64_t s = 1; s < states; ++s) {
        const int k = std::countr_zero(s);
        current += table.delta(bits, k);
        table.apply_flip(bits, k);
        gray ^= 1ull << k;
        const MaskCandidate candidate{current, gray};
        if (keep.size() < cap) {
            keep.push(candidate);
        } else if (candidate_less(candidate, keep.top())) {
            keep.pop();
            keep.push(candidate);
        }
    }

    set.samples.reserve(keep.size());
    while (!keep.empty()) {
        const MaskCandidate c = keep.top();
        keep.pop();
        Sample sample;
        sample.bits = mask_to_bits(c.mask, q.num_vars);
        sample.energy = energy(q, sample.bits);  // exact re-evaluation
        sample.occurrences = 1;
        set.samples.push_back(std::move(sample));
    }
    sort_samples(set.samples);
    return set;
}

long long permutation_space_size(int points, int views, bool gauge_fixed) {
    if (points > 20) return -1;
    long long factorial = 1;
    for (int i = 2; i <= points; ++i) factorial *= i;
    const int free_views = gauge_fixed ? views - 1 : views;
    long long size = 1;
    for (int v = 0; v < free_views; ++v) {
        if (size > kMaxPermAssignments * 100 / std::max(factorial, 1ll)) return -1;
        size *= factorial;
    }
    return size;
}

SampleSet solve_exhaustive_permutation(const ObservationGraph& g, double lambda, bool gauge_fixed,
                                       int top_k, bool include_diagonal) {
    if (top_k < 1) throw Error(ErrorCode::InvalidConfig, "top_k must be at least 1");
    const int n = g.points_per_view();
    const int m = g.num_views();
    const long long space = permutation_space_size(n, m, gauge_fixed);
    if (space < 0 || space > kMaxPermAssignments) {
        throw Error(ErrorCode::SearchSpaceTooLarge,
                    "permutation space exceeds " + std::to_string(kMaxPermAssignments) + " assignments");
    }

    QuboProblem q = apply_penalty(build_objective(g, include_diagonal), build_constraints(n, m, lambda));
    if (gauge_fixed) q = fix_gauge(q, n, m);

    // All n! mappings in lexicographic order.
    std::vector<std::vector<int>> mappings;
    {
        std::vector<int> mapping(n);
        for (int i = 0; i < n; ++i) mapping[i] = i;
        do {
            mappings.push_back(mapping);
        } while (std::next_permutation(mapping.begin(), mapping.end()));
    }
    const int free_views = gauge_fixed ? m - 1 : m;

    auto worse = [](const Sample& x, const Sample& y) {
        if (x.energy != y.energy) return x.energy < y.energy;
        return bits_less(x.bits, y.bits);
    };
    std::priority_queue<Sample, std::vector<Sample>, decltype(worse)> keep(worse);
    const std::size_t cap = static_cast<std::size_t>(top_k);

    std::vector<std::size_t> odometer(free_views, 0);
    std::vector<Permutation> assignment;
    while (true) {
        assignment.clear();
        for (int v = 0; v < free_views; ++v) assignment.emplace_back(Permutation(mappings[odometer[v]]));
        BitVector bits = assignment_to_bits(assignment, false);
        Sample sample{std::move(bits), 0.0, 1};
        sample.energy = energy(q, sample.bits);
        if (keep.size() < cap) {
            keep.push(std::move(sample));
        } else if (worse(sample, keep.top())) {
            keep.pop();
            keep.push(std::move(sample));
        }

        int pos = free_views - 1;
        while (pos >= 0 && ++odometer[pos] == mappings.size()) {
            odometer[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }

    SampleSet set;
    set.meta = {0, 0, "exhaustive-permutation"};
    set.samples.reserve(keep.size());
    while (!keep.empty()) {
        set.samples.push_back(keep.top());
        keep.pop();
    }
    sort_samples(set.samples);
    return set;
}

SampleSet sample_sa(const QuboProblem& q, int reads, const AnnealSchedule& schedule, std::uint64_t seed) {
    if (reads < 1) throw Error(ErrorCode::InvalidConfig, "reads must be at least 1");
    validate_schedule(schedule);
    const std::vector<double> betas = beta_schedule(schedule);

    std::map<BitVector, Sample> aggregated;
    FlipTable table(q);
    for (int read = 0; read < reads; ++read) {
        RngStream rng(seed, static_cast<std::uint64_t>(read));
        BitVector bits(q.num_vars);
        for (int a = 0; a < q.num_vars; ++a) bits[a] = rng.coin() ? 1 : 0;
        table.reset(bits);
        for (double beta : betas) {
            for (int k = 0; k < q.num_vars; ++k) {
                const double delta = table.delta(bits, k);
                if (delta <= 0.0 || rng.uniform01() < std::exp(-beta * delta)) {
                    table.apply_flip(bits, k);
                }
            }
        }
        const double exact = energy(q, bits);
        auto [it, inserted] = aggregated.try_emplace(std::move(bits), Sample{});
        if (inserted) {
            it->second.bits = it->first;
            it->second.energy = exact;
            it->second.occurrences = 1;
        } else {
            ++it->second.occurrences;
        }
    }

    SampleSet set;
    set.meta = {reads, seed, "sa"};
    set.samples.reserve(aggregated.size());
    for (auto& [bits, sample] : aggregated) set.samples.push_back(std::move(sample));
    sort_samples(set.samples);
    return set;
}

BitVector greedy_descent(const QuboProblem& q, BitVector bits) {
    if (static_cast<int>(bits.size()) != q.num_vars) {
        throw Error(ErrorCode::LengthMismatch, "bit vector length " + std::to_string(bits.size()) +
                                                   " != " + std::to_string(q.num_vars) + " variables");
    }
    FlipTable table(q);
    table.reset(bits);
    while (true) {
        int best_k = -1;
        double best_delta = 0.0;
        for (int k = 0; k < q.num_vars; ++k) {
            const double delta = table.delta(bits, k);
            if (delta < best_delta) {  // strict improvement; ties keep the lowest index
                best_delta = delta;
                best_k = k;
            }
        }
        if (best_k < 0) break;
        table.apply_flip(bits, best_k);
    }
    return bits;
}

}  // namespace permsync
