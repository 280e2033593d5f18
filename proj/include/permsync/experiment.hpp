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

#include <optional>
#include <string>
#include <vector>

#include "permsync/bench.hpp"
#include "permsync/solvers.hpp"

namespace permsync {

enum class ExperimentKind {
    NoiselessRecovery,
    LambdaAblation,
    NoiseSweep,
    CompletenessSweep,
    MajorityVoteSweep,
    SingleSolve,
};

enum class SolverChoice {
    Exhaustive,
    PermExhaustive,
    SimulatedAnnealing,
};

const char* experiment_kind_name(ExperimentKind kind);
const char* solver_choice_name(SolverChoice solver);
ExperimentKind experiment_kind_from_name(const std::string& name);
SolverChoice solver_choice_from_name(const std::string& name);

/// Full description of one experiment run. Exactly one input source:
/// a synthetic config (ensemble of seeded instances) or an imported problem
/// file. The sweep axis used depends on the kind; all other parameters are
/// held fixed across rows.
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::SingleSolve;

    std::optional<SynthConfig> synth;
    std::string input_path;  // problem JSON; empty when synthetic

    std::vector<double> lambdas{kDefaultLambda};      // lambda-ablation axis
    std::vector<double> swap_ratios;                  // noise-sweep axis
    std::vector<double> completeness_values;          // completeness-sweep axis
    std::vector<int> vote_ks;                         // majority-vote axis

    SolverChoice solver = SolverChoice::Exhaustive;
    int reads = 200;
    AnnealSchedule schedule{};
    int top_k = 16;
    bool include_diagonal = true;
    bool gauge = true;
    int ensemble = 7;
    std::uint64_t solver_seed = 0;  // sampling seed for imported problems

    std::string csv_path;
    std::string summary_path;      // optional JSON summary
    std::string sparsity_path;     // optional PBM of the first row's Q
    std::string plot_script_path;  // optional gnuplot script over the CSV
};

/// One CSV row worth of results plus the bitstrings needed to re-validate
/// every reported energy.
struct ExperimentRow {
    std::uint64_t seed = 0;
    int points = 0;
    int views = 0;
    std::optional<double> completeness;
    std::optional<double> swap_ratio;
    double lambda = kDefaultLambda;
    SolverChoice solver = SolverChoice::Exhaustive;
    int reads = 0;
    int vote_k = 1;

    std::optional<double> min_energy_binary;
    std::optional<double> min_energy_permutation;
    std::optional<double> energy_gap;
    std::optional<double> accuracy;
    bool valid_all_views = false;
    long long wall_time_ms = 0;

    BitVector solver_bits;
    double solver_energy = 0.0;
    BitVector binary_oracle_bits;
    BitVector permutation_oracle_bits;
    SyncEstimate estimate;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;  // ordered by (instance, setting)
    std::string csv_path;
    std::string summary_path;
};

/// Runs the pipeline (generate/import -> encode -> gauge -> solve ->
/// decode/majority-vote -> metrics) for every (instance, setting) pair,
/// streaming CSV rows in deterministic order (partial results are flushed
/// before an abort) and writing the JSON summary at the end. Instances of
/// an ensemble are evaluated in parallel.
ExperimentReport run_experiment(const ExperimentSpec& spec);

}  // namespace permsync
