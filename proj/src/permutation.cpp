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

#include "permsync/permutation.hpp"

#include <numeric>
#include <string>

namespace permsync {

bool BinaryMatrix::is_permutation() const {
    if (size_ == 0) return false;
    for (int r = 0; r < size_; ++r) {
        int sum = 0;
        for (int c = 0; c < size_; ++c) sum += at(r, c);
        if (sum != 1) return false;
    }
    for (int c = 0; c < size_; ++c) {
        int sum = 0;
        for (int r = 0; r < size_; ++r) sum += at(r, c);
        if (sum != 1) return false;
    }
    return true;
}

int BinaryMatrix::popcount() const {
    int count = 0;
    for (std::uint8_t cell : cells_) count += cell;
    return count;
}

Permutation::Permutation(std::vector<int> mapping) : mapping_(std::move(mapping)) {
    const int n = static_cast<int>(mapping_.size());
    std::vector<char> seen(n, 0);
    for (int value : mapping_) {
        if (value < 0 || value >= n || seen[value]) {
            throw Error(ErrorCode::NotDoublyStochasticBinary, "mapping is not a bijection on {0..n-1}");
        }
        seen[value] = 1;
    }
}

Permutation Permutation::identity(int size) {
    std::vector<int> mapping(size);
    std::iota(mapping.begin(), mapping.end(), 0);
    return Permutation(std::move(mapping), Unchecked{});
}

bool Permutation::is_identity() const {
    for (int r = 0; r < size(); ++r)
        if (mapping_[r] != r) return false;
    return true;
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(mapping_.size());
    for (int r = 0; r < size(); ++r) inv[mapping_[r]] = r;
    return Permutation(std::move(inv), Unchecked{});
}

Permutation Permutation::compose(const Permutation& rhs) const {
    if (rhs.size() != size()) throw Error(ErrorCode::SizeMismatch, "composing permutations of different sizes");
    std::vector<int> mapping(mapping_.size());
    for (int r = 0; r < size(); ++r) mapping[r] = rhs.mapping_[mapping_[r]];
    return Permutation(std::move(mapping), Unchecked{});
}

BinaryMatrix Permutation::to_dense() const {
    BinaryMatrix dense(size());
    for (int r = 0; r < size(); ++r) dense.set(r, mapping_[r], 1);
    return dense;
}

Permutation validate_permutation(const BinaryMatrix& dense) {
    const int n = dense.size();
    if (n == 0) throw Error(ErrorCode::NotSquare, "empty matrix");
    std::vector<int> mapping(n, -1);
    std::vector<int> col_sums(n, 0);
    for (int r = 0; r < n; ++r) {
        int row_sum = 0;
        for (int c = 0; c < n; ++c) {
            const std::uint8_t cell = dense.at(r, c);
            if (cell > 1) throw Error(ErrorCode::NotBinary, "entry outside {0, 1}");
            if (cell == 1) {
                mapping[r] = c;
                ++row_sum;
                ++col_sums[c];
            }
        }
        if (row_sum != 1) {
            throw Error(ErrorCode::NotDoublyStochasticBinary,
                        "row " + std::to_string(r) + " sums to " + std::to_string(row_sum));
        }
    }
    for (int c = 0; c < n; ++c) {
        if (col_sums[c] != 1) {
            throw Error(ErrorCode::NotDoublyStochasticBinary,
                        "column " + std::to_string(c) + " sums to " + std::to_string(col_sums[c]));
        }
    }
    return Permutation(std::move(mapping));
}

Permutation relative_of(const Permutation& xi, const Permutation& xj) {
    if (xi.size() != xj.size()) throw Error(ErrorCode::SizeMismatch, "absolute permutations differ in size");
    return xi.compose(xj.inverse());
}

BitVector vec(const BinaryMatrix& matrix) {
    const int n = matrix.size();
    BitVector values(static_cast<std::size_t>(n) * n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) values[static_cast<std::size_t>(c) * n + r] = matrix.at(r, c);
    return values;
}

BinaryMatrix unvec(const BitVector& values, int size) {
    if (static_cast<int>(values.size()) != size * size) {
        throw Error(ErrorCode::SizeMismatch, "vector length " + std::to_string(values.size()) +
                                                 " is not " + std::to_string(size) + "^2");
    }
    BinaryMatrix matrix(size);
    for (int c = 0; c < size; ++c)
        for (int r = 0; r < size; ++r) matrix.set(r, c, values[static_cast<std::size_t>(c) * size + r]);
    return matrix;
}

}  // namespace permsync
