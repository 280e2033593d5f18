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
#include <random>
#include <vector>

namespace permsync {

/// Deterministic RNG stream. std::mt19937_64 output is pinned by the
/// standard; the bounded/real draws below avoid std::*_distribution, whose
/// algorithms vary between standard libraries. Substreams (seed, stream)
/// are independent so workers can draw without coordination.
class RngStream {
 public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        engine_.seed(seq);
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform draw from {0, ..., bound-1} by rejection sampling.
    std::uint64_t uniform_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t draw;
        do {
            draw = engine_();
        } while (draw >= limit);
        return draw % bound;
    }

    /// Uniform real in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool coin() { return (engine_() & 1) != 0; }

    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::swap(values[i - 1], values[uniform_below(i)]);
        }
    }

    /// Uniform random permutation mapping of {0, ..., size-1}.
    std::vector<int> random_mapping(int size) {
        std::vector<int> mapping(size);
        for (int i = 0; i < size; ++i) mapping[i] = i;
        shuffle(mapping);
        return mapping;
    }

 private:
    std::mt19937_64 engine_;
};

}  // namespace permsync
