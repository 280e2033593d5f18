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
#include <optional>
#include <utility>
#include <vector>

#include "permsync/permutation.hpp"

namespace permsync {

/// View structure of a QUBO produced by the encoder: n points per view, m
/// views, and whether the first view has been clamped to the identity. A
/// problem imported from a bare coefficient file has no layout and cannot be
/// decoded back into per-view matrices.
struct ViewLayout {
    int points = 0;  // n
    int views = 0;   // m
    bool gauge_fixed = false;
    int fixed_view = 0;  // meaningful only when gauge_fixed

    int num_vars() const {
        int free_views = gauge_fixed ? views - 1 : views;
        return free_views * points * points;
    }

    bool operator==(const ViewLayout&) const = default;
};

/// One strictly-upper-triangular coefficient of the symmetric Q matrix.
struct QuadTerm {
    int a;  // a < b
    int b;
    double value;

    bool operator==(const QuadTerm&) const = default;
};

/// Minimize bits^T Q bits + s^T bits + offset over binary vectors. Q is
/// symmetric; the strict upper triangle is stored once in `quadratic`
/// (sorted by (a, b), exact zeros dropped) and the diagonal densely in
/// `diagonal`. The offset keeps reported energies equal to the objective
/// energy plus the exact constraint residual. Immutable after build; safe to
/// share across solver workers.
struct QuboProblem {
    int num_vars = 0;
    std::vector<double> diagonal;       // Q_aa
    std::vector<double> linear;         // s_a
    std::vector<QuadTerm> quadratic;    // Q_ab for a < b
    double offset = 0.0;
    std::optional<ViewLayout> layout;

    /// Symmetric coefficient lookup, any argument order.
    double coefficient(int a, int b) const;

    /// Full symmetric Q including the diagonal. Intended for small problems
    /// (tests, sparsity dumps).
    std::vector<std::vector<double>> dense_q() const;

    bool operator==(const QuboProblem&) const = default;
};

/// Coefficient accumulator used by the encoder and the file importer.
/// Duplicate coordinates are summed; build() emits the canonical sorted,
/// zero-free form.
class QuboAccumulator {
 public:
    explicit QuboAccumulator(int num_vars);

    void add_quadratic(int a, int b, double value);
    void add_diagonal(int a, double value) { diagonal_[a] += value; }
    void add_linear(int a, double value) { linear_[a] += value; }
    void set_linear(int a, double value) { linear_[a] = value; }
    void add_offset(double value) { offset_ += value; }

    QuboProblem build(std::optional<ViewLayout> layout = std::nullopt);

 private:
    int num_vars_;
    std::vector<double> diagonal_;
    std::vector<double> linear_;
    std::map<std::pair<int, int>, double> upper_;
    double offset_ = 0.0;
};

/// Energy bits^T Q bits + s^T bits + offset, evaluated in a canonical
/// per-variable order so that identical problems give bit-identical results
/// on every platform and the text round trip is exact.
/// Throws LengthMismatch.
double energy(const QuboProblem& q, const BitVector& bits);

/// Per-variable flip cost table: delta[k] is the energy change of flipping
/// bit k of `bits`. Solvers keep it incrementally up to date.
struct FlipTable {
    explicit FlipTable(const QuboProblem& q);

    /// (Re)derive local fields for a full assignment.
    void reset(const BitVector& bits);

    /// Energy change if bit k of the current assignment were flipped.
    double delta(const BitVector& bits, int k) const;

    /// Flip bit k in place and update the cached fields.
    void apply_flip(BitVector& bits, int k);

    const QuboProblem* problem;
    std::vector<std::vector<std::pair<int, double>>> neighbors;  // symmetric adjacency
    std::vector<double> field;                                   // sum_b Q_kb * x_b over b != k
};

}  // namespace permsync
