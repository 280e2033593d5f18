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
#include "permsync/bench.hpp"
#include "permsync/encoder.hpp"

using namespace permsync;
using namespace permsync::testing;

namespace {

constexpr double kTol = 1e-9;

ObservationGraph complete_graph(const std::vector<Permutation>& absolutes) {
    const int m = static_cast<int>(absolutes.size());
    ObservationGraph g(absolutes[0].size(), m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j) g.add_edge(i, j, relative_of(absolutes[i], absolutes[j]));
    return g;
}

/// Independent residual ||A x - b||^2 evaluated from a dense copy of A.
double dense_residual(const ConstraintSystem& c, const BitVector& bits) {
    double total = 0.0;
    for (int v = 0; v < c.views; ++v) {
        const auto block = c.block_dense(v);
        for (std::size_t r = 0; r < block.size(); ++r) {
            double lhs = 0.0;
            for (std::size_t col = 0; col < block[r].size(); ++col) {
                lhs += block[r][col] * bits[v * c.points * c.points + col];
            }
            total += (lhs - 1.0) * (lhs - 1.0);
        }
    }
    return total;
}

double qubo_energy_dense(const QuboProblem& q, const BitVector& bits) {
    return dense_energy(q.dense_q(), q.linear, q.offset, bits);
}

}  // namespace

TEST_CASE("constraint block for n=2 matches the reference matrix") {
    const ConstraintSystem c = build_constraints(2, 1);
    const std::vector<std::vector<int>> expected{
        {1, 1, 0, 0},
        {0, 0, 1, 1},
        {1, 0, 1, 0},
        {0, 1, 0, 1},
    };
    CHECK(c.block_dense(0) == expected);
    CHECK(c.rhs == std::vector<double>(4, 1.0));
}

TEST_CASE("constraint block for n=3 matches the reference matrix") {
    const ConstraintSystem c = build_constraints(3, 1);
    const std::vector<std::vector<int>> expected{
        {1, 1, 1, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 1, 1, 1, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 1, 1, 1},
        {1, 0, 0, 1, 0, 0, 1, 0, 0},
        {0, 1, 0, 0, 1, 0, 0, 1, 0},
        {0, 0, 1, 0, 0, 1, 0, 0, 1},
    };
    CHECK(c.block_dense(0) == expected);
}

TEST_CASE("constraint matrix structure") {
    for (int n = 1; n <= 4; ++n) {
        for (int m = 1; m <= 3; ++m) {
            const ConstraintSystem c = build_constraints(n, m);
            CHECK(c.num_rows() == 2 * n * m);
            CHECK(c.num_cols() == m * n * n);
            CHECK(static_cast<int>(c.rows.size()) == c.num_rows());

            std::vector<int> column_sums(c.num_cols(), 0);
            int block_ones = 0;
            for (const auto& row : c.rows) {
                for (int col : row) {
                    ++column_sums[col];
                    ++block_ones;
                }
            }
            CHECK(block_ones == 2 * n * n * m);  // 2n^2 ones per view block
            for (int col = 0; col < c.num_cols(); ++col) CHECK(column_sums[col] == 2);
        }
    }
}

TEST_CASE("A x = 1 characterizes permutation matrices (brute force)") {
    for (int n = 2; n <= 3; ++n) {
        const ConstraintSystem c = build_constraints(n, 1);
        const int bits_len = n * n;
        for (std::uint64_t state = 0; state < (1ull << bits_len); ++state) {
            BitVector bits(bits_len);
            for (int a = 0; a < bits_len; ++a) bits[a] = static_cast<std::uint8_t>((state >> a) & 1u);
            const bool satisfied = c.residual_squared(bits) == 0.0;
            CHECK(satisfied == unvec(bits, n).is_permutation());
        }
    }
}

TEST_CASE("objective for the two-view identity instance") {
    std::vector<Permutation> absolutes{Permutation::identity(2), Permutation::identity(2)};
    const QuboProblem q = build_objective(complete_graph(absolutes));
    REQUIRE(q.num_vars == 8);

    // Every 4x4 block (including the diagonal ones) is -I4.
    const Dense dense = q.dense_q();
    for (int bi = 0; bi < 2; ++bi)
        for (int bj = 0; bj < 2; ++bj)
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c)
                    CHECK(dense[bi * 4 + r][bj * 4 + c] == (r == c ? -1.0 : 0.0));

    const BitVector x = assignment_to_bits(absolutes, false);
    CHECK(qubo_energy_dense(q, x) == -8.0);
    CHECK(energy(q, x) == -8.0);
    CHECK(q.offset == 0.0);
    for (double s : q.linear) CHECK(s == 0.0);
}

TEST_CASE("objective treats a lone reversed edge as its undirected pair") {
    const Permutation label({2, 0, 1});
    ObservationGraph reversed_only(3, 2);
    reversed_only.add_edge(1, 0, label);

    ObservationGraph closed(3, 2);
    closed.add_edge(0, 1, label.transposed());
    closed.add_edge(1, 0, label);

    CHECK(build_objective(reversed_only) == build_objective(closed));
}

TEST_CASE("objective is zero without edges and diagonal blocks") {
    ObservationGraph g(2, 2);  // no edges on purpose; build does not re-validate
    const QuboProblem q = build_objective(g, false);
    CHECK(q.quadratic.empty());
    for (double d : q.diagonal) CHECK(d == 0.0);
}

TEST_CASE("objective energy equals the negated trace sum on permutation assignments") {
    // x^T Q' x == -sum over directed edges and diagonal blocks of
    // tr(Xi^T P_ij Xj), for every permutation-valued assignment.
    RngStream rng(41);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_below(2));
        const int m = 2 + static_cast<int>(rng.uniform_below(2));
        SynthConfig config;
        config.points = n;
        config.views = m;
        config.swap_ratio = trial % 2 == 0 ? 0.0 : 0.25;
        config.seed = 1000 + trial;
        const auto [gt, graph] = generate(config);
        const QuboProblem q = build_objective(graph);

        const auto mappings = all_mappings(n);
        std::vector<std::size_t> odometer(m, 0);
        while (true) {
            std::vector<Permutation> assignment;
            for (int v = 0; v < m; ++v) assignment.emplace_back(mappings[odometer[v]]);
            const BitVector x = assignment_to_bits(assignment, false);

            double trace_sum = 0.0;
            for (const auto& [key, label] : graph.edges()) {
                const Dense prod = matmul(transpose(to_dense(assignment[key.first])),
                                          matmul(to_dense(label), to_dense(assignment[key.second])));
                trace_sum += trace(prod);
            }
            for (int v = 0; v < m; ++v) trace_sum += n;  // diagonal blocks with P_ii = I

            CHECK_THAT(energy(q, x), Catch::Matchers::WithinAbs(-trace_sum, kTol));
            CHECK_THAT(qubo_energy_dense(q, x), Catch::Matchers::WithinAbs(-trace_sum, kTol));

            int pos = m - 1;
            while (pos >= 0 && ++odometer[pos] == mappings.size()) {
                odometer[pos] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
    }
}

TEST_CASE("penalty with lambda zero leaves the problem untouched") {
    std::vector<Permutation> absolutes{Permutation::identity(2), Permutation({1, 0})};
    const QuboProblem base = build_objective(complete_graph(absolutes));
    const QuboProblem penalized = apply_penalty(base, build_constraints(2, 2, 0.0));
    CHECK(penalized.quadratic == base.quadratic);
    CHECK(penalized.diagonal == base.diagonal);
    CHECK(penalized.offset == base.offset);
    for (double s : penalized.linear) CHECK(s == 0.0);
}

TEST_CASE("apply_penalty rejects mismatched dimensions") {
    std::vector<Permutation> absolutes{Permutation::identity(2), Permutation::identity(2)};
    const QuboProblem base = build_objective(complete_graph(absolutes));
    CHECK_THROWS_MATCHES(apply_penalty(base, build_constraints(3, 2, 2.5)), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == ErrorCode::DimensionMismatch;
                         }));
}

TEST_CASE("variable counts follow the view layout") {
    std::vector<Permutation> absolutes{Permutation::identity(3), Permutation::identity(3),
                                       Permutation::identity(3)};
    const ObservationGraph g = complete_graph(absolutes);
    const QuboProblem full = apply_penalty(build_objective(g), build_constraints(3, 3, 2.5));
    CHECK(full.num_vars == 3 * 9);
    CHECK(full.layout->num_vars() == full.num_vars);
    const QuboProblem gauged = fix_gauge(full, 3, 3);
    CHECK(gauged.num_vars == 2 * 9);
    CHECK(gauged.layout->num_vars() == gauged.num_vars);
}

TEST_CASE("penalized energy on valid assignments equals the objective energy") {
    RngStream rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_below(2));
        const int m = 2 + static_cast<int>(rng.uniform_below(2));
        std::vector<Permutation> absolutes;
        for (int v = 0; v < m; ++v) absolutes.push_back(random_permutation(rng, n));
        const ObservationGraph g = complete_graph(absolutes);
        const QuboProblem base = build_objective(g);
        const QuboProblem penalized = apply_penalty(base, build_constraints(n, m, 2.5));

        std::vector<Permutation> estimate;
        for (int v = 0; v < m; ++v) estimate.push_back(random_permutation(rng, n));
        const BitVector x = assignment_to_bits(estimate, false);
        CHECK_THAT(energy(penalized, x), Catch::Matchers::WithinAbs(energy(base, x), kTol));
    }
}

TEST_CASE("one extra bit costs exactly lambda times two") {
    std::vector<Permutation> absolutes{Permutation::identity(2), Permutation::identity(2)};
    const ObservationGraph g = complete_graph(absolutes);
    const QuboProblem base = build_objective(g);
    const ConstraintSystem c = build_constraints(2, 2, 2.5);
    const QuboProblem penalized = apply_penalty(base, c);

    BitVector x = assignment_to_bits(absolutes, false);
    x[5] = 1;  // one spare 1 inside view 2: violates one row and one column sum
    CHECK(dense_residual(c, x) == 2.0);
    CHECK_THAT(energy(penalized, x) - energy(base, x), Catch::Matchers::WithinAbs(2.5 * 2.0, kTol));
}

TEST_CASE("penalty identity holds for every bitstring (brute force)") {
    RngStream rng(47);
    for (int trial = 0; trial < 3; ++trial) {
        SynthConfig config;
        config.points = 2;
        config.views = 2 + trial % 2;
        config.swap_ratio = 0.25;
        config.seed = 2000 + trial;
        const auto [gt, graph] = generate(config);
        const double lambda = trial == 0 ? 2.5 : 1.3;
        const QuboProblem base = build_objective(graph);
        const ConstraintSystem c = build_constraints(config.points, config.views, lambda);
        const QuboProblem penalized = apply_penalty(base, c);

        for (std::uint64_t state = 0; state < (1ull << penalized.num_vars); ++state) {
            BitVector bits(penalized.num_vars);
            for (int a = 0; a < penalized.num_vars; ++a) bits[a] = static_cast<std::uint8_t>((state >> a) & 1u);
            const double expected = energy(base, bits) + lambda * dense_residual(c, bits);
            CHECK_THAT(energy(penalized, bits), Catch::Matchers::WithinAbs(expected, kTol));
        }
    }
}

TEST_CASE("gauge fixing clamps the first view and preserves energies") {
    std::vector<Permutation> absolutes{Permutation::identity(2), Permutation::identity(2)};
    const ObservationGraph g = complete_graph(absolutes);
    QuboProblem full = apply_penalty(build_objective(g), build_constraints(2, 2, 2.5));
    const QuboProblem gauged = fix_gauge(full, 2, 2);
    REQUIRE(gauged.num_vars == 4);
    REQUIRE(gauged.layout.has_value());
    CHECK(gauged.layout->gauge_fixed);

    // Exhaustive over the 4 remaining variables: vec(I) is the minimum.
    BitVector best;
    double best_energy = 0.0;
    for (std::uint64_t state = 0; state < 16; ++state) {
        BitVector bits(4);
        for (int a = 0; a < 4; ++a) bits[a] = static_cast<std::uint8_t>((state >> a) & 1u);
        const double e = energy(gauged, bits);
        if (best.empty() || e < best_energy) {
            best = bits;
            best_energy = e;
        }

        // Energy preservation against the ungauged problem.
        BitVector joint = vec(BinaryMatrix::identity(2));
        joint.insert(joint.end(), bits.begin(), bits.end());
        CHECK_THAT(e, Catch::Matchers::WithinAbs(energy(full, joint), kTol));
    }
    CHECK(best == BitVector{1, 0, 0, 1});

    // All-zero remaining bits: pure offset case.
    BitVector zeros(4, 0);
    BitVector joint = vec(BinaryMatrix::identity(2));
    joint.insert(joint.end(), zeros.begin(), zeros.end());
    CHECK_THAT(energy(gauged, zeros), Catch::Matchers::WithinAbs(energy(full, joint), kTol));

    CHECK_THROWS_MATCHES(fix_gauge(gauged, 2, 2), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == ErrorCode::AlreadyGauged; }));
    CHECK_THROWS_MATCHES(fix_gauge(full, 3, 2), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == ErrorCode::DimensionMismatch;
                         }));
}

TEST_CASE("gauge fixing preserves energy on random noisy instances") {
    RngStream rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        SynthConfig config;
        config.points = 3;
        config.views = 3;
        config.swap_ratio = 0.2;
        config.seed = 3000 + trial;
        const auto [gt, graph] = generate(config);
        QuboProblem full = apply_penalty(build_objective(graph), build_constraints(3, 3, 2.5));
        const QuboProblem gauged = fix_gauge(full, 3, 3);

        for (int probe = 0; probe < 25; ++probe) {
            const BitVector bits = random_bits(rng, gauged.num_vars);
            BitVector joint = vec(BinaryMatrix::identity(3));
            joint.insert(joint.end(), bits.begin(), bits.end());
            CHECK_THAT(energy(gauged, bits), Catch::Matchers::WithinAbs(energy(full, joint), kTol));
        }
    }
}

TEST_CASE("decode splits, flags and round-trips") {
    std::vector<Permutation> absolutes{Permutation::identity(2), Permutation::identity(2)};
    const ObservationGraph g = complete_graph(absolutes);
    QuboProblem q = apply_penalty(build_objective(g), build_constraints(2, 2, 2.5));
    q = fix_gauge(q, 2, 2);

    const SyncEstimate ok = decode(BitVector{1, 0, 0, 1}, q);
    REQUIRE(ok.views.size() == 2);
    CHECK(ok.views[0] == BinaryMatrix::identity(2));
    CHECK(ok.views[1] == BinaryMatrix::identity(2));
    CHECK(ok.all_valid());

    const SyncEstimate bad = decode(BitVector{1, 1, 0, 0}, q);
    CHECK(bad.views[1].at(0, 0) == 1);
    CHECK(bad.views[1].at(1, 0) == 1);
    CHECK(bad.views[1].at(0, 1) == 0);
    CHECK(bad.views[1].at(1, 1) == 0);
    CHECK_FALSE(bad.valid[1]);
    CHECK(bad.valid[0]);  // clamped identity stays valid

    CHECK_THROWS_AS(decode(BitVector{1, 0}, q), Error);

    // Encode -> decode round trip over random assignments (gauged and not).
    RngStream rng(59);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_below(3));
        const int m = 2 + static_cast<int>(rng.uniform_below(3));
        std::vector<Permutation> views;
        views.push_back(Permutation::identity(n));
        for (int v = 1; v < m; ++v) views.push_back(random_permutation(rng, n));
        const ObservationGraph cg = complete_graph(views);
        QuboProblem full = apply_penalty(build_objective(cg), build_constraints(n, m, 2.5));

        const SyncEstimate ungauged = decode(assignment_to_bits(views, false), full);
        REQUIRE(ungauged.all_valid());
        for (int v = 0; v < m; ++v) CHECK(validate_permutation(ungauged.views[v]) == views[v]);

        const QuboProblem gauged = fix_gauge(full, n, m);
        const SyncEstimate from_gauged = decode(assignment_to_bits(views, true), gauged);
        REQUIRE(from_gauged.all_valid());
        for (int v = 0; v < m; ++v) CHECK(validate_permutation(from_gauged.views[v]) == views[v]);
    }
}

TEST_CASE("energy basics") {
    std::vector<Permutation> absolutes{Permutation::identity(2), Permutation::identity(2)};
    const ObservationGraph g = complete_graph(absolutes);
    const QuboProblem q = apply_penalty(build_objective(g), build_constraints(2, 2, 2.5));

    CHECK(energy(q, BitVector(8, 0)) == q.offset);
    CHECK_THAT(energy(q, assignment_to_bits(absolutes, false)), Catch::Matchers::WithinAbs(-8.0, kTol));
    CHECK_THROWS_AS(energy(q, BitVector(5, 0)), Error);
}

TEST_CASE("objective relates to the Frobenius consistency loss") {
    // For permutation-valid assignments, per edge:
    // ||P_ij - Xi Xj^T||_F^2 = 2n - 2 tr(Xi^T P_ij Xj).
    RngStream rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        SynthConfig config;
        config.points = 3;
        config.views = 3;
        config.swap_ratio = 0.2;
        config.seed = 4000 + trial;
        const auto [gt, graph] = generate(config);
        const QuboProblem objective_only = build_objective(graph, false);  // no diagonal blocks

        std::vector<Permutation> estimate;
        for (int v = 0; v < 3; ++v) estimate.push_back(random_permutation(rng, 3));
        const BitVector x = assignment_to_bits(estimate, false);

        double frobenius = 0.0;
        for (const auto& [key, label] : graph.edges()) {
            const Dense ratio = matmul(to_dense(estimate[key.first]), transpose(to_dense(estimate[key.second])));
            frobenius += frobenius_sq_diff(to_dense(label), ratio);
        }
        const double edges = static_cast<double>(graph.num_edges());
        // sum_F = 2n|E| - 2 sum tr  and  energy = -sum tr.
        CHECK_THAT(energy(objective_only, x),
                   Catch::Matchers::WithinAbs((frobenius - 2.0 * 3 * edges) / 2.0, kTol));
    }
}

TEST_CASE("positive scaling preserves the minimizer set") {
    SynthConfig config;
    config.points = 2;
    config.views = 2;
    config.swap_ratio = 0.25;
    config.seed = 77;
    const auto [gt, graph] = generate(config);
    QuboProblem q = apply_penalty(build_objective(graph), build_constraints(2, 2, 2.5));
    q = fix_gauge(q, 2, 2);

    QuboProblem scaled = q;
    const double factor = 3.7;
    for (double& d : scaled.diagonal) d *= factor;
    for (double& s : scaled.linear) s *= factor;
    for (QuadTerm& t : scaled.quadratic) t.value *= factor;
    scaled.offset *= factor;

    auto argmin_set = [](const QuboProblem& problem) {
        std::vector<std::uint64_t> best;
        double best_energy = 0.0;
        for (std::uint64_t state = 0; state < (1ull << problem.num_vars); ++state) {
            BitVector bits(problem.num_vars);
            for (int a = 0; a < problem.num_vars; ++a) bits[a] = static_cast<std::uint8_t>((state >> a) & 1u);
            const double e = energy(problem, bits);
            if (best.empty() || e < best_energy - 1e-12) {
                best = {state};
                best_energy = e;
            } else if (std::abs(e - best_energy) <= 1e-12) {
                best.push_back(state);
            }
        }
        return best;
    };
    CHECK(argmin_set(q) == argmin_set(scaled));
}

TEST_CASE("Q stays exactly symmetric through the pipeline") {
    SynthConfig config;
    config.points = 3;
    config.views = 3;
    config.swap_ratio = 0.2;
    config.seed = 99;
    const auto [gt, graph] = generate(config);
    for (const QuboProblem& q :
         {build_objective(graph), apply_penalty(build_objective(graph), build_constraints(3, 3, 2.5)),
          fix_gauge(apply_penalty(build_objective(graph), build_constraints(3, 3, 2.5)), 3, 3)}) {
        const Dense dense = q.dense_q();
        for (int a = 0; a < q.num_vars; ++a)
            for (int b = 0; b < q.num_vars; ++b) CHECK(dense[a][b] == dense[b][a]);
        for (const QuadTerm& term : q.quadratic) {
            CHECK(term.a < term.b);
            CHECK(q.coefficient(term.a, term.b) == q.coefficient(term.b, term.a));
        }
    }
}
