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

#include "permsync/qubo.hpp"

#include <algorithm>
#include <string>

namespace permsync {

double QuboProblem::coefficient(int a, int b) const {
    if (a == b) return diagonal[a];
    if (a > b) std::swap(a, b);
    auto it = std::lower_bound(quadratic.begin(), quadratic.end(), std::make_pair(a, b),
                               [](const QuadTerm& term, const std::pair<int, int>& key) {
                                   return std::make_pair(term.a, term.b) < key;
                               });
    if (it != quadratic.end() && it->a == a && it->b == b) return it->value;
    return 0.0;
}

std::vector<std::vector<double>> QuboProblem::dense_q() const {
    std::vector<std::vector<double>> dense(num_vars, std::vector<double>(num_vars, 0.0));
    for (int a = 0; a < num_vars; ++a) dense[a][a] = diagonal[a];
    for (const QuadTerm& term : quadratic) {
        dense[term.a][term.b] = term.value;
        dense[term.b][term.a] = term.value;
    }
    return dense;
}

QuboAccumulator::QuboAccumulator(int num_vars)
        : num_vars_(num_vars), diagonal_(num_vars, 0.0), linear_(num_vars, 0.0) {}

void QuboAccumulator::add_quadratic(int a, int b, double value) {
    if (a == b) throw Error(ErrorCode::InvalidConfig, "diagonal coefficients go through add_diagonal");
    if (a > b) std::swap(a, b);
    upper_[{a, b}] += value;
}

QuboProblem QuboAccumulator::build(std::optional<ViewLayout> layout) {
    QuboProblem q;
    q.num_vars = num_vars_;
    q.diagonal = std::move(diagonal_);
    q.linear = std::move(linear_);
    q.quadratic.reserve(upper_.size());
    for (const auto& [key, value] : upper_) {
        if (value != 0.0) q.quadratic.push_back({key.first, key.second, value});
    }
    q.offset = offset_;
    q.layout = layout;
    return q;
}

double energy(const QuboProblem& q, const BitVector& bits) {
    if (static_cast<int>(bits.size()) != q.num_vars) {
        throw Error(ErrorCode::LengthMismatch, "bit vector length " + std::to_string(bits.size()) +
                                                   " != " + std::to_string(q.num_vars) + " variables");
    }
    // Canonical order: per variable ascending, linear + diagonal first, then
    // the doubled upper-triangle couplings. The text export/import preserves
    // exactly these partial sums, which is what makes the round trip
    // bit-exact.
    double total = q.offset;
    std::size_t t = 0;
    const std::size_t terms = q.quadratic.size();
    for (int a = 0; a < q.num_vars; ++a) {
        if (!bits[a]) {
            while (t < terms && q.quadratic[t].a == a) ++t;
            continue;
        }
        double acc = q.linear[a];
        acc += q.diagonal[a];
        while (t < terms && q.quadratic[t].a == a) {
            if (bits[q.quadratic[t].b]) acc += 2.0 * q.quadratic[t].value;
            ++t;
        }
        total += acc;
    }
    return total;
}

FlipTable::FlipTable(const QuboProblem& q) : problem(&q), neighbors(q.num_vars), field(q.num_vars, 0.0) {
    for (const QuadTerm& term : q.quadratic) {
        neighbors[term.a].emplace_back(term.b, term.value);
        neighbors[term.b].emplace_back(term.a, term.value);
    }
}

void FlipTable::reset(const BitVector& bits) {
    std::fill(field.begin(), field.end(), 0.0);
    for (int a = 0; a < problem->num_vars; ++a) {
        if (!bits[a]) continue;
        for (const auto& [b, value] : neighbors[a]) field[b] += value;
    }
}

double FlipTable::delta(const BitVector& bits, int k) const {
    const double sign = bits[k] ? -1.0 : 1.0;
    return sign * (2.0 * field[k] + problem->diagonal[k] + problem->linear[k]);
}

void FlipTable::apply_flip(BitVector& bits, int k) {
    const double sign = bits[k] ? -1.0 : 1.0;
    bits[k] ^= 1u;
    for (const auto& [b, value] : neighbors[k]) field[b] += sign * value;
}

}  // namespace permsync
