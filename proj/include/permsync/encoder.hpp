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

#include <string>
#include <vector>

#include "permsync/graph.hpp"
#include "permsync/qubo.hpp"

namespace permsync {

constexpr double kDefaultLambda = 2.5;

/// Linear assignment constraints A x = b. A is block diagonal with one
/// 2n-by-n^2 block per view; the first n rows of a block pin the column sums
/// of the decoded matrix to one and the remaining n rows pin the row sums.
/// Rows are stored as sorted column-index lists; b is all ones.
struct ConstraintSystem {
    int points = 0;  // n
    int views = 0;   // m
    double lambda = kDefaultLambda;
    std::vector<std::vector<int>> rows;  // 2*n*m rows over m*n^2 columns
    std::vector<double> rhs;             // b

    int num_rows() const { return 2 * points * views; }
    int num_cols() const { return views * points * points; }

    /// Dense 0/1 materialization of one per-view block (2n x n^2).
    std::vector<std::vector<int>> block_dense(int view) const;

    /// Residual ||A x - b||^2 for a binary assignment.
    double residual_squared(const BitVector& bits) const;
};

/// Assembles the objective matrix: block (i, j) is -(I (x) P_ij) for every
/// directed edge, and when include_diagonal is set (the default) each
/// diagonal block is -(I (x) I). s and offset are zero. Missing edges leave
/// zero blocks.
QuboProblem build_objective(const ObservationGraph& g, bool include_diagonal = true);

/// Constraint system for m views of n points with penalty weight lambda.
ConstraintSystem build_constraints(int points, int views, double lambda = kDefaultLambda);

/// Penalty fold: Q + lambda A^T A, s - 2 lambda A^T b, offset + lambda b^T b.
/// With this offset the reported energy of any binary x equals the
/// objective energy plus exactly lambda * ||A x - b||^2.
/// Throws DimensionMismatch.
QuboProblem apply_penalty(const QuboProblem& q, const ConstraintSystem& c);

/// Clamps view 0 to vec(I): cross terms with the clamped block fold into the
/// linear vector of the remaining views, clamped-clamped and clamped-linear
/// terms fold into the offset. The result has (m-1)*n^2 variables.
/// Throws AlreadyGauged / DimensionMismatch.
QuboProblem fix_gauge(const QuboProblem& q, int points, int views);

/// Splits a measured bitstring into per-view n^2 chunks, un-vectorizes each
/// (column-major) and prepends the identity when the problem was gauged.
/// Chunks that are not permutations are flagged, never rejected.
/// Throws LengthMismatch / MissingLayout.
SyncEstimate decode(const BitVector& bits, const QuboProblem& q, std::string source = {});

/// Concatenated column-major vectorization of an absolute labeling;
/// skip_first_view drops view 0 (the gauge-fixed convention).
BitVector assignment_to_bits(const std::vector<Permutation>& views, bool skip_first_view);

}  // namespace permsync
