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
#include <vector>

#include "permsync/errors.hpp"

namespace permsync {

/// Binary values indexed 0..len-1. Entries are 0 or 1.
using BitVector = std::vector<std::uint8_t>;

/// Dense square 0/1 matrix, row-major. Unlike Permutation this may hold any
/// binary pattern, e.g. a decoded low-energy state that violates the
/// assignment structure.
class BinaryMatrix {
 public:
    BinaryMatrix() = default;
    explicit BinaryMatrix(int size) : size_(size), cells_(static_cast<std::size_t>(size) * size, 0) {}

    static BinaryMatrix identity(int size) {
        BinaryMatrix m(size);
        for (int i = 0; i < size; ++i) m.set(i, i, 1);
        return m;
    }

    int size() const { return size_; }

    std::uint8_t at(int row, int col) const { return cells_[static_cast<std::size_t>(row) * size_ + col]; }
    void set(int row, int col, std::uint8_t value) { cells_[static_cast<std::size_t>(row) * size_ + col] = value; }

    /// True iff every row and every column contains exactly one 1.
    bool is_permutation() const;

    int popcount() const;

    bool operator==(const BinaryMatrix&) const = default;

 private:
    int size_ = 0;
    std::vector<std::uint8_t> cells_;
};

/// Total n-by-n permutation matrix stored as a length-n mapping:
/// mapping[row] = col means entry (row, col) is 1. Composition and inversion
/// are exact and O(n); the dense form is materialized only on demand.
class Permutation {
 public:
    /// Takes ownership of a mapping and checks it is a bijection on
    /// {0, ..., n-1}.
    explicit Permutation(std::vector<int> mapping);

    static Permutation identity(int size);

    int size() const { return static_cast<int>(mapping_.size()); }
    int apply(int row) const { return mapping_[row]; }
    const std::vector<int>& mapping() const { return mapping_; }

    bool is_identity() const;

    /// Inverse permutation; for permutation matrices this equals the
    /// transpose.
    Permutation inverse() const;
    Permutation transposed() const { return inverse(); }

    /// Matrix product this * rhs.
    Permutation compose(const Permutation& rhs) const;

    BinaryMatrix to_dense() const;

    bool operator==(const Permutation&) const = default;

 private:
    struct Unchecked {};
    Permutation(std::vector<int> mapping, Unchecked) : mapping_(std::move(mapping)) {}

    std::vector<int> mapping_;
};

/// Checks that a dense matrix is a permutation matrix (binary, square, all
/// row and column sums equal to one) and returns the compact mapping.
/// Throws NotSquare, NotBinary or NotDoublyStochasticBinary.
Permutation validate_permutation(const BinaryMatrix& dense);

/// Relative permutation of two absolute labelings: Xi * Xj^T.
Permutation relative_of(const Permutation& xi, const Permutation& xj);

/// Column-major vectorization: vec(X)[col*n + row] = X(row, col). This
/// convention makes vec(Xi)^T (I (x) P) vec(Xj) = tr(Xi^T P Xj) hold, which
/// the objective assembly relies on.
BitVector vec(const BinaryMatrix& matrix);

/// Inverse of vec. Throws SizeMismatch when values.size() != size*size.
BinaryMatrix unvec(const BitVector& values, int size);

/// Decoded candidate solution: one binary matrix per view plus a per-view
/// flag telling whether that matrix is a true permutation. views[0] is the
/// identity when the problem was gauge-fixed.
struct SyncEstimate {
    std::vector<BinaryMatrix> views;
    std::vector<bool> valid;
    std::string source;  // which solver produced it

    bool all_valid() const {
        for (bool v : valid)
            if (!v) return false;
        return true;
    }
};

}  // namespace permsync
