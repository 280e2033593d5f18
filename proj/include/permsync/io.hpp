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

#include "permsync/bench.hpp"
#include "permsync/graph.hpp"
#include "permsync/qubo.hpp"

namespace permsync {

// Problem JSON: {"n": int, "m": int, "edges": [{"i": int, "j": int,
// "map": [int...]}]} with 1-based view indices and 1-based map values;
// map[r] = c means point r of view i corresponds to point c of view j. One
// direction per undirected edge suffices; validation adds the transpose.

std::string problem_to_json(const ObservationGraph& g);
ObservationGraph problem_from_json(const std::string& text);

ObservationGraph import_problem(const std::string& path);
void export_problem(const ObservationGraph& g, const std::string& path);

// QUBO text v1: header lines `c permsync-qubo v1`, `vars <count>` and
// `offset <decimal>`, then one `<a> <b> <coeff>` line per nonzero with
// 1-based indices and a <= b. Off-diagonal coefficients are doubled on
// export (sum_{a<=b} q_ab x_a x_b convention); diagonal lines carry
// Q_aa + s_a. Coefficients are printed with 17 significant digits so the
// energy function round-trips bit-exactly.

std::string qubo_to_text(const QuboProblem& q);
QuboProblem qubo_from_text(const std::string& text);

void export_qubo(const QuboProblem& q, const std::string& path);
QuboProblem import_qubo(const std::string& path);

/// Sparsity pattern of Q (quadratic terms plus diagonal) as a plain PBM
/// (P1) bitmap.
std::string sparsity_to_pbm(const QuboProblem& q);
void export_sparsity_pbm(const QuboProblem& q, const std::string& path);

/// Ground-truth JSON: {"n", "m", "views": [[...], ...]} with 1-based map
/// values per view.
std::string ground_truth_to_json(const GroundTruth& gt);
GroundTruth ground_truth_from_json(const std::string& text);
void export_ground_truth(const GroundTruth& gt, const std::string& path);
GroundTruth import_ground_truth(const std::string& path);

/// Shortest exact decimal form of a double (round-trips to the same bits).
std::string format_double(double value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace permsync
