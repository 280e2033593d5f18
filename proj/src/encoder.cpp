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

#include "permsync/encoder.hpp"

#include <string>
#include <utility>

namespace permsync {

std::vector<std::vector<int>> ConstraintSystem::block_dense(int view) const {
    std::vector<std::vector<int>> dense(2 * points, std::vector<int>(points * points, 0));
    const int row_base = 2 * points * view;
    const int col_base = points * points * view;
    for (int r = 0; r < 2 * points; ++r) {
        for (int col : rows[row_base + r]) dense[r][col - col_base] = 1;
    }
    return dense;
}

double ConstraintSystem::residual_squared(const BitVector& bits) const {
    if (static_cast<int>(bits.size()) != num_cols()) {
        throw Error(ErrorCode::LengthMismatch, "assignment length does not match constraint columns");
    }
    double total = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        double lhs = 0.0;
        for (int col : rows[r]) lhs += bits[col];
        const double res = lhs - rhs[r];
        total += res * res;
    }
    return total;
}

QuboProblem build_objective(const ObservationGraph& g, bool include_diagonal) {
    const int n = g.points_per_view();
    const int m = g.num_views();
    const int block = n * n;
    QuboAccumulator acc(m * block);

    // Block (i, j) of Q' is -(I (x) P_ij); with column-major vec its entries
    // sit at (i*n^2 + a*n + r, j*n^2 + a*n + P_ij(r)) for every column a and
    // row r. One block per undirected pair is assembled: the reverse block
    // is its transpose (P_ji = P_ij^T) and the symmetric storage accounts
    // for it. An edge given only in the (i > j) direction is transposed
    // rather than dropped.
    auto add_block = [&](int i, int j, const Permutation& label) {
        for (int a = 0; a < n; ++a) {
            for (int r = 0; r < n; ++r) {
                const int row = i * block + a * n + r;
                const int col = j * block + a * n + label.apply(r);
                acc.add_quadratic(row, col, -1.0);
            }
        }
    };
    for (const auto& [key, label] : g.edges()) {
        const auto [i, j] = key;
        if (i < j) {
            add_block(i, j, label);
        } else if (!g.has_edge(j, i)) {
            add_block(j, i, label.transposed());
        }
    }
    if (include_diagonal) {
        // Diagonal blocks -(I (x) P_ii) with P_ii the identity.
        for (int v = 0; v < m; ++v) {
            for (int k = 0; k < block; ++k) acc.add_diagonal(v * block + k, -1.0);
        }
    }
    return acc.build(ViewLayout{n, m, false, 0});
}

ConstraintSystem build_constraints(int points, int views, double lambda) {
    if (points < 1 || views < 1) {
        throw Error(ErrorCode::InvalidConfig, "constraints need points >= 1 and views >= 1");
    }
    ConstraintSystem c;
    c.points = points;
    c.views = views;
    c.lambda = lambda;
    c.rows.reserve(static_cast<std::size_t>(2) * points * views);
    for (int v = 0; v < views; ++v) {
        const int col_base = points * points * v;
        // Rows 1..n of a block: ones in columns (j-1)*n+1 .. j*n.
        for (int j = 0; j < points; ++j) {
            std::vector<int> row(points);
            for (int r = 0; r < points; ++r) row[r] = col_base + j * points + r;
            c.rows.push_back(std::move(row));
        }
        // Rows n+1..2n: ones at (j-n) + p*n for p = 0..n-1.
        for (int j = 0; j < points; ++j) {
            std::vector<int> row(points);
            for (int p = 0; p < points; ++p) row[p] = col_base + j + p * points;
            c.rows.push_back(std::move(row));
        }
    }
    c.rhs.assign(c.rows.size(), 1.0);
    return c;
}

namespace {

QuboAccumulator accumulator_from(const QuboProblem& q) {
    QuboAccumulator acc(q.num_vars);
    for (int a = 0; a < q.num_vars; ++a) {
        acc.add_diagonal(a, q.diagonal[a]);
        acc.add_linear(a, q.linear[a]);
    }
    for (const QuadTerm& term : q.quadratic) acc.add_quadratic(term.a, term.b, term.value);
    acc.add_offset(q.offset);
    return acc;
}

}  // namespace

QuboProblem apply_penalty(const QuboProblem& q, const ConstraintSystem& c) {
    if (c.num_cols() != q.num_vars) {
        throw Error(ErrorCode::DimensionMismatch, "constraint columns " + std::to_string(c.num_cols()) +
                                                      " != " + std::to_string(q.num_vars) + " variables");
    }
    QuboAccumulator acc = accumulator_from(q);
    const double lambda = c.lambda;
    for (std::size_t r = 0; r < c.rows.size(); ++r) {
        const std::vector<int>& row = c.rows[r];
        // lambda * A^T A: every (ordered) pair of ones within a row.
        for (std::size_t p = 0; p < row.size(); ++p) {
            acc.add_diagonal(row[p], lambda);
            for (std::size_t s = p + 1; s < row.size(); ++s) acc.add_quadratic(row[p], row[s], lambda);
        }
        // s = -2 lambda A^T b.
        for (int col : row) acc.add_linear(col, -2.0 * lambda * c.rhs[r]);
        // offset += lambda * ||b||^2.
        acc.add_offset(lambda * c.rhs[r] * c.rhs[r]);
    }
    return acc.build(q.layout);
}

QuboProblem fix_gauge(const QuboProblem& q, int points, int views) {
    if (q.layout && q.layout->gauge_fixed) {
        throw Error(ErrorCode::AlreadyGauged, "the first view is already clamped");
    }
    const int block = points * points;
    if (q.num_vars != views * block) {
        throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(views * block) +
                                                      " variables, got " + std::to_string(q.num_vars));
    }
    // Clamp assignment of view 0: vec(I) has ones at c*(n+1).
    BitVector clamp(block, 0);
    for (int c = 0; c < points; ++c) clamp[c * (points + 1)] = 1;

    QuboAccumulator acc(q.num_vars - block);
    double folded = q.offset;
    for (int a = block; a < q.num_vars; ++a) {
        acc.add_diagonal(a - block, q.diagonal[a]);
        acc.add_linear(a - block, q.linear[a]);
    }
    for (int a = 0; a < block; ++a) {
        if (!clamp[a]) continue;
        folded += q.diagonal[a];
        folded += q.linear[a];
    }
    for (const QuadTerm& term : q.quadratic) {
        if (term.b < block) {
            if (clamp[term.a] && clamp[term.b]) folded += 2.0 * term.value;
        } else if (term.a < block) {
            if (clamp[term.a]) acc.add_linear(term.b - block, 2.0 * term.value);
        } else {
            acc.add_quadratic(term.a - block, term.b - block, term.value);
        }
    }
    acc.add_offset(folded);
    return acc.build(ViewLayout{points, views, true, 0});
}

SyncEstimate decode(const BitVector& bits, const QuboProblem& q, std::string source) {
    if (!q.layout) {
        throw Error(ErrorCode::MissingLayout, "problem has no view layout to decode against");
    }
    if (static_cast<int>(bits.size()) != q.num_vars) {
        throw Error(ErrorCode::LengthMismatch, "bit vector length " + std::to_string(bits.size()) +
                                                   " != " + std::to_string(q.num_vars) + " variables");
    }
    const ViewLayout& layout = *q.layout;
    const int n = layout.points;
    const int block = n * n;

    SyncEstimate estimate;
    estimate.source = std::move(source);
    if (layout.gauge_fixed) {
        estimate.views.push_back(BinaryMatrix::identity(n));
        estimate.valid.push_back(true);
    }
    const int free_views = layout.gauge_fixed ? layout.views - 1 : layout.views;
    for (int v = 0; v < free_views; ++v) {
        BitVector chunk(bits.begin() + static_cast<std::ptrdiff_t>(v) * block,
                        bits.begin() + static_cast<std::ptrdiff_t>(v + 1) * block);
        BinaryMatrix view = unvec(chunk, n);
        estimate.valid.push_back(view.is_permutation());
        estimate.views.push_back(std::move(view));
    }
    return estimate;
}

BitVector assignment_to_bits(const std::vector<Permutation>& views, bool skip_first_view) {
    BitVector bits;
    for (std::size_t v = skip_first_view ? 1 : 0; v < views.size(); ++v) {
        const Permutation& x = views[v];
        const int n = x.size();
        BitVector chunk(static_cast<std::size_t>(n) * n, 0);
        for (int r = 0; r < n; ++r) chunk[x.apply(r) * n + r] = 1;
        bits.insert(bits.end(), chunk.begin(), chunk.end());
    }
    return bits;
}

}  // namespace permsync
