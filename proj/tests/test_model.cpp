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

#include <catch2/catch_amalgamated.hpp>

#include "oracle_utils.hpp"
#include "permsync/graph.hpp"
#include "permsync/permutation.hpp"

using namespace permsync;
using namespace permsync::testing;

namespace {

BinaryMatrix matrix_from(std::initializer_list<std::initializer_list<int>> rows) {
    BinaryMatrix m(static_cast<int>(rows.size()));
    int r = 0;
    for (const auto& row : rows) {
        int c = 0;
        for (int cell : row) m.set(r, c++, static_cast<std::uint8_t>(cell));
        ++r;
    }
    return m;
}

}  // namespace

TEST_CASE("validate_permutation accepts permutation matrices") {
    CHECK(validate_permutation(matrix_from({{1, 0}, {0, 1}})).mapping() == std::vector<int>{0, 1});
    CHECK(validate_permutation(matrix_from({{0, 1}, {1, 0}})).mapping() == std::vector<int>{1, 0});

    // Dense reconstruction of the result equals the input.
    RngStream rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform_below(6));
        const Permutation p = random_permutation(rng, n);
        CHECK(validate_permutation(p.to_dense()) == p);
    }
}

TEST_CASE("validate_permutation rejects non-permutations") {
    auto code_of = [](const BinaryMatrix& m) {
        try {
            validate_permutation(m);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::IoError;  // sentinel: no throw
    };
    CHECK(code_of(matrix_from({{1, 1}, {0, 0}})) == ErrorCode::NotDoublyStochasticBinary);
    CHECK(code_of(matrix_from({{1, 0}, {1, 0}})) == ErrorCode::NotDoublyStochasticBinary);
    CHECK(code_of(BinaryMatrix()) == ErrorCode::NotSquare);

    BinaryMatrix bad(2);
    bad.set(0, 0, 2);
    bad.set(1, 1, 1);
    CHECK(code_of(bad) == ErrorCode::NotBinary);
}

TEST_CASE("relative_of matches the dense matrix product") {
    const Permutation xi({1, 2, 0});
    const Permutation xj({2, 0, 1});
    const Permutation rel = relative_of(xi, xj);

    const Dense expected = matmul(to_dense(xi), transpose(to_dense(xj)));
    CHECK(to_dense(rel) == expected);

    RngStream rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform_below(6));
        const Permutation a = random_permutation(rng, n);
        const Permutation b = random_permutation(rng, n);
        CHECK(to_dense(relative_of(a, b)) == matmul(to_dense(a), transpose(to_dense(b))));
    }
}

TEST_CASE("relative_of identities") {
    RngStream rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform_below(5));
        const Permutation p = random_permutation(rng, n);
        CHECK(relative_of(p, p).is_identity());
        CHECK(relative_of(p, Permutation::identity(n)) == p);
    }
    CHECK(relative_of(Permutation({1, 0}), Permutation::identity(2)).mapping() == std::vector<int>{1, 0});
    CHECK_THROWS_AS(relative_of(Permutation::identity(2), Permutation::identity(3)), Error);
}

TEST_CASE("cycle consistency by construction") {
    RngStream rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform_below(5));
        const int m = 2 + static_cast<int>(rng.uniform_below(5));
        std::vector<Permutation> absolutes;
        for (int v = 0; v < m; ++v) absolutes.push_back(random_permutation(rng, n));

        // Random cycle through distinct views, back to the start.
        std::vector<int> cycle(m);
        for (int v = 0; v < m; ++v) cycle[v] = v;
        rng.shuffle(cycle);
        const int length = 2 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(m - 1)));
        cycle.resize(length);
        cycle.push_back(cycle.front());

        Permutation composed = Permutation::identity(n);
        for (std::size_t step = 0; step + 1 < cycle.size(); ++step) {
            composed = composed.compose(relative_of(absolutes[cycle[step]], absolutes[cycle[step + 1]]));
        }
        CHECK(composed.is_identity());
    }
}

TEST_CASE("gauge freedom: a common right factor cancels in ratios") {
    RngStream rng(19);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_below(4));
        const Permutation xi = random_permutation(rng, n);
        const Permutation xj = random_permutation(rng, n);
        const Permutation gauge = random_permutation(rng, n);
        CHECK(relative_of(xi.compose(gauge), xj.compose(gauge)) == relative_of(xi, xj));
    }
}

TEST_CASE("vec is column-major and unvec inverts it") {
    CHECK(vec(BinaryMatrix::identity(2)) == BitVector{1, 0, 0, 1});
    CHECK(unvec(BitVector{1, 0, 0, 1}, 2) == BinaryMatrix::identity(2));
    CHECK_THROWS_AS(unvec(BitVector{1, 0, 0}, 2), Error);

    RngStream rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform_below(6));
        const BinaryMatrix dense = random_permutation(rng, n).to_dense();
        CHECK(unvec(vec(dense), n) == dense);
    }
}

TEST_CASE("vec convention carries the Kronecker trace identity") {
    // vec(P)^T (I (x) P) vec(P) == tr(P^T P P), checked against a dense
    // Kronecker product.
    RngStream rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3;
        const Permutation p = random_permutation(rng, n);
        const BitVector x = vec(p.to_dense());
        const Dense big = kron(dense_identity(n), to_dense(p));

        double quadratic = 0.0;
        for (int a = 0; a < n * n; ++a)
            for (int b = 0; b < n * n; ++b) quadratic += x[a] * big[a][b] * x[b];

        const Dense ptpp = matmul(transpose(to_dense(p)), matmul(to_dense(p), to_dense(p)));
        CHECK(quadratic == Catch::Approx(trace(ptpp)).margin(1e-12));
    }
}

TEST_CASE("validate_graph accepts a consistent complete graph") {
    RngStream rng(31);
    const int n = 3;
    const int m = 3;
    std::vector<Permutation> absolutes;
    for (int v = 0; v < m; ++v) absolutes.push_back(random_permutation(rng, n));

    ObservationGraph g(n, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j) g.add_edge(i, j, relative_of(absolutes[i], absolutes[j]));
    const ObservationGraph validated = validate_graph(g);
    CHECK(validated.num_edges() == m * (m - 1));
}

TEST_CASE("validate_graph closes one-directional edges by transposition") {
    ObservationGraph g(3, 3);
    g.add_edge(1, 2, Permutation({2, 0, 1}));
    g.add_edge(0, 1, Permutation({1, 0, 2}));
    const ObservationGraph validated = validate_graph(std::move(g));
    CHECK(validated.has_edge(2, 1));
    CHECK(validated.label(2, 1) == Permutation({2, 0, 1}).transposed());
    CHECK(validated.label(1, 0) == Permutation({1, 0, 2}).transposed());
    CHECK(validated.num_edges() == 4);
}

TEST_CASE("validate_graph rejects inconsistent and disconnected inputs") {
    ObservationGraph inconsistent(3, 2);
    inconsistent.add_edge(0, 1, Permutation({2, 0, 1}));
    inconsistent.add_edge(1, 0, Permutation({2, 0, 1}));  // not the transpose
    CHECK_THROWS_MATCHES(validate_graph(inconsistent), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == ErrorCode::AsymmetricLabels; }));

    // Two disjoint cliques.
    ObservationGraph split(2, 4);
    split.add_edge(0, 1, Permutation::identity(2));
    split.add_edge(2, 3, Permutation::identity(2));
    CHECK_THROWS_MATCHES(validate_graph(split), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == ErrorCode::Disconnected; }));
}

TEST_CASE("identical observation graphs from gauge-equivalent labelings") {
    RngStream rng(37);
    const int n = 4;
    const int m = 4;
    std::vector<Permutation> absolutes;
    for (int v = 0; v < m; ++v) absolutes.push_back(random_permutation(rng, n));
    const Permutation gauge = random_permutation(rng, n);

    ObservationGraph a(n, m);
    ObservationGraph b(n, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            a.add_edge(i, j, relative_of(absolutes[i], absolutes[j]));
            b.add_edge(i, j, relative_of(absolutes[i].compose(gauge), absolutes[j].compose(gauge)));
        }
    }
    CHECK(a == b);
}
