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

#include "permsync/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>

#include <nlohmann/json.hpp>

#include "permsync/encoder.hpp"
#include "permsync/io.hpp"

namespace permsync {

using nlohmann::json;

const char* experiment_kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::NoiselessRecovery: return "noiseless-recovery";
        case ExperimentKind::LambdaAblation: return "lambda-ablation";
        case ExperimentKind::NoiseSweep: return "noise-sweep";
        case ExperimentKind::CompletenessSweep: return "completeness-sweep";
        case ExperimentKind::MajorityVoteSweep: return "majority-vote-sweep";
        case ExperimentKind::SingleSolve: return "single-solve";
    }
    return "unknown";
}

const char* solver_choice_name(SolverChoice solver) {
    switch (solver) {
        case SolverChoice::Exhaustive: return "exhaustive";
        case SolverChoice::PermExhaustive: return "perm-exhaustive";
        case SolverChoice::SimulatedAnnealing: return "sa";
    }
    return "unknown";
}

ExperimentKind experiment_kind_from_name(const std::string& name) {
    for (ExperimentKind kind :
         {ExperimentKind::NoiselessRecovery, ExperimentKind::LambdaAblation, ExperimentKind::NoiseSweep,
          ExperimentKind::CompletenessSweep, ExperimentKind::MajorityVoteSweep, ExperimentKind::SingleSolve}) {
        if (name == experiment_kind_name(kind)) return kind;
    }
    throw Error(ErrorCode::InvalidConfig, "unknown experiment kind \"" + name + "\"");
}

SolverChoice solver_choice_from_name(const std::string& name) {
    for (SolverChoice solver :
         {SolverChoice::Exhaustive, SolverChoice::PermExhaustive, SolverChoice::SimulatedAnnealing}) {
        if (name == solver_choice_name(solver)) return solver;
    }
    throw Error(ErrorCode::InvalidConfig, "unknown solver \"" + name + "\"");
}

namespace {

struct Setting {
    double lambda = kDefaultLambda;
    std::optional<double> swap_ratio;
    std::optional<double> completeness;
    int vote_k = 1;
};

std::vector<Setting> expand_settings(const ExperimentSpec& spec) {
    if (spec.lambdas.empty()) throw Error(ErrorCode::InvalidConfig, "at least one lambda is required");
    std::vector<Setting> settings;
    switch (spec.kind) {
        case ExperimentKind::SingleSolve:
            settings.push_back({spec.lambdas.front(), {}, {}, 1});
            break;
        case ExperimentKind::NoiselessRecovery:
            settings.push_back({spec.lambdas.front(), 0.0, 1.0, 1});
            break;
        case ExperimentKind::LambdaAblation:
            for (double lambda : spec.lambdas) settings.push_back({lambda, {}, {}, 1});
            break;
        case ExperimentKind::NoiseSweep: {
            std::vector<double> axis = spec.swap_ratios;
            if (axis.empty()) axis = {0.0, 0.05, 0.1, 0.15, 0.2, 0.25};
            for (double sigma : axis) settings.push_back({spec.lambdas.front(), sigma, {}, 1});
            break;
        }
        case ExperimentKind::CompletenessSweep: {
            std::vector<double> axis = spec.completeness_values;
            if (axis.empty()) axis = {0.6, 0.7, 0.8, 0.9, 1.0};
            for (double c : axis) settings.push_back({spec.lambdas.front(), {}, c, 1});
            break;
        }
        case ExperimentKind::MajorityVoteSweep: {
            std::vector<int> axis = spec.vote_ks;
            if (axis.empty()) axis = {1, 2, 4, 8, 16};
            for (int k : axis) settings.push_back({spec.lambdas.front(), {}, {}, k});
            break;
        }
    }
    return settings;
}

void validate_spec(const ExperimentSpec& spec) {
    const bool synthetic = spec.synth.has_value();
    const bool imported = !spec.input_path.empty();
    if (synthetic == imported) {
        throw Error(ErrorCode::InvalidConfig, "exactly one input source: synthetic config or problem file");
    }
    if (imported &&
        (spec.kind == ExperimentKind::NoiseSweep || spec.kind == ExperimentKind::CompletenessSweep ||
         spec.kind == ExperimentKind::NoiselessRecovery)) {
        throw Error(ErrorCode::InvalidConfig, "synthetic sweeps cannot run on an imported problem");
    }
    if (spec.ensemble < 1) throw Error(ErrorCode::InvalidConfig, "ensemble size must be at least 1");
    if (spec.csv_path.empty()) throw Error(ErrorCode::InvalidConfig, "a CSV output path is required");
}

int effective_top_k(const ExperimentSpec& spec, const std::vector<Setting>& settings) {
    int k = std::max(spec.top_k, 1);
    for (const Setting& s : settings) k = std::max(k, s.vote_k);
    return k;
}

struct PreparedInstance {
    std::optional<GroundTruth> gt;
    ObservationGraph graph;
    std::uint64_t seed;
};

ExperimentRow solve_row(const ExperimentSpec& spec, const PreparedInstance& instance, const Setting& setting,
                        int top_k) {
    const auto started = std::chrono::steady_clock::now();
    const ObservationGraph& graph = instance.graph;
    const int n = graph.points_per_view();
    const int m = graph.num_views();

    QuboProblem q = apply_penalty(build_objective(graph, spec.include_diagonal),
                                  build_constraints(n, m, setting.lambda));
    if (spec.gauge) q = fix_gauge(q, n, m);

    ExperimentRow row;
    row.seed = instance.seed;
    row.points = n;
    row.views = m;
    row.completeness = setting.completeness;
    row.swap_ratio = setting.swap_ratio;
    row.lambda = setting.lambda;
    row.solver = spec.solver;
    row.vote_k = setting.vote_k;

    std::optional<SampleSet> binary_oracle;
    if (q.num_vars <= kMaxExhaustiveVars) {
        binary_oracle = solve_exhaustive_binary(q, top_k);
        row.min_energy_binary = binary_oracle->best().energy;
        row.binary_oracle_bits = binary_oracle->best().bits;
    }
    std::optional<SampleSet> permutation_oracle;
    const long long perm_space = permutation_space_size(n, m, spec.gauge);
    if (perm_space > 0 && perm_space <= kMaxPermAssignments) {
        permutation_oracle = solve_exhaustive_permutation(graph, setting.lambda, spec.gauge, top_k,
                                                          spec.include_diagonal);
        row.min_energy_permutation = permutation_oracle->best().energy;
        row.permutation_oracle_bits = permutation_oracle->best().bits;
    }
    if (row.min_energy_binary && row.min_energy_permutation) {
        row.energy_gap = std::abs(*row.min_energy_binary - *row.min_energy_permutation);
    }

    SampleSet samples;
    switch (spec.solver) {
        case SolverChoice::Exhaustive:
            if (!binary_oracle) {
                throw Error(ErrorCode::TooManyVariables,
                            "problem too large for the exhaustive binary solver");
            }
            samples = *binary_oracle;
            break;
        case SolverChoice::PermExhaustive:
            if (!permutation_oracle) {
                throw Error(ErrorCode::SearchSpaceTooLarge,
                            "problem too large for the exhaustive permutation solver");
            }
            samples = *permutation_oracle;
            break;
        case SolverChoice::SimulatedAnnealing:
            row.reads = spec.reads;
            samples = sample_sa(q, spec.reads, spec.schedule, instance.seed);
            break;
    }

    row.solver_bits = samples.best().bits;
    row.solver_energy = samples.best().energy;
    row.estimate = spec.kind == ExperimentKind::MajorityVoteSweep
                       ? majority_vote(samples, setting.vote_k, q)
                       : decode(samples.best().bits, q, samples.meta.solver);
    row.valid_all_views = row.estimate.all_valid();
    if (instance.gt) row.accuracy = accuracy(row.estimate, *instance.gt);

    row.wall_time_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started)
            .count();
    return row;
}

std::string csv_field(const std::optional<double>& value) {
    return value ? format_double(*value) : std::string();
}

std::string bits_to_string(const BitVector& bits) {
    std::string out;
    out.reserve(bits.size());
    for (std::uint8_t b : bits) out += b ? '1' : '0';
    return out;
}

json row_to_json(const ExperimentRow& row, int instance_index, int setting_index, bool synthetic) {
    json j;
    j["instance"] = instance_index;
    j["setting"] = setting_index;
    if (synthetic) j["seed"] = row.seed;
    j["lambda"] = row.lambda;
    if (row.swap_ratio) j["sigma"] = *row.swap_ratio;
    if (row.completeness) j["completeness"] = *row.completeness;
    j["solver"] = solver_choice_name(row.solver);
    if (row.vote_k != 1) j["voteK"] = row.vote_k;
    j["solverBits"] = bits_to_string(row.solver_bits);
    j["solverEnergy"] = row.solver_energy;
    if (row.min_energy_binary) {
        j["binaryOracleEnergy"] = *row.min_energy_binary;
        j["binaryOracleBits"] = bits_to_string(row.binary_oracle_bits);
    }
    if (row.min_energy_permutation) {
        j["permutationOracleEnergy"] = *row.min_energy_permutation;
        j["permutationOracleBits"] = bits_to_string(row.permutation_oracle_bits);
    }
    if (row.energy_gap) j["energyGap"] = *row.energy_gap;
    if (row.accuracy) j["accuracy"] = *row.accuracy;
    j["validAllViews"] = row.valid_all_views;
    json views = json::array();
    for (std::size_t v = 0; v < row.estimate.views.size(); ++v) {
        const BinaryMatrix& matrix = row.estimate.views[v];
        json rows = json::array();
        for (int r = 0; r < matrix.size(); ++r) {
            json cells = json::array();
            for (int c = 0; c < matrix.size(); ++c) cells.push_back(static_cast<int>(matrix.at(r, c)));
            rows.push_back(cells);
        }
        views.push_back({{"matrix", rows}, {"valid", static_cast<bool>(row.estimate.valid[v])}});
    }
    j["decodedViews"] = views;
    return j;
}

struct Aggregate {
    int count = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double value) {
        ++count;
        sum += value;
        sum_sq += value * value;
    }
    double mean() const { return sum / count; }
    double stddev() const {
        const double m = mean();
        return std::sqrt(std::max(0.0, sum_sq / count - m * m));
    }
};

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    validate_spec(spec);
    const std::vector<Setting> settings = expand_settings(spec);
    const int top_k = effective_top_k(spec, settings);
    const bool synthetic = spec.synth.has_value();
    const int instances =
        (!synthetic || spec.kind == ExperimentKind::SingleSolve) ? 1 : std::max(1, spec.ensemble);

    auto compute_instance = [&](int index) -> std::vector<ExperimentRow> {
        std::vector<ExperimentRow> rows;
        rows.reserve(settings.size());
        if (!synthetic) {
            PreparedInstance instance{std::nullopt, import_problem(spec.input_path), spec.solver_seed};
            for (const Setting& setting : settings) rows.push_back(solve_row(spec, instance, setting, top_k));
            return rows;
        }
        // Regenerate only when a setting overrides the noise/completeness of
        // the base config; a lambda sweep reuses the same instance.
        std::optional<std::pair<double, double>> cached_key;
        std::optional<PreparedInstance> instance;
        for (const Setting& setting : settings) {
            SynthConfig config = *spec.synth;
            config.seed = spec.synth->seed + static_cast<std::uint64_t>(index);
            if (setting.swap_ratio) config.swap_ratio = *setting.swap_ratio;
            if (setting.completeness) config.completeness = *setting.completeness;
            const std::pair<double, double> key{config.swap_ratio, config.completeness};
            if (!instance || !cached_key || *cached_key != key) {
                auto [gt, graph] = generate(config);
                instance = PreparedInstance{std::move(gt), std::move(graph), config.seed};
                cached_key = key;
            }
            ExperimentRow row = solve_row(spec, *instance, setting, top_k);
            row.completeness = config.completeness;
            row.swap_ratio = config.swap_ratio;
            rows.push_back(std::move(row));
        }
        return rows;
    };

    std::vector<std::future<std::vector<ExperimentRow>>> futures;
    futures.reserve(instances);
    for (int i = 0; i < instances; ++i) {
        futures.push_back(std::async(std::launch::async, compute_instance, i));
    }

    std::ofstream csv(spec.csv_path, std::ios::binary);
    if (!csv) throw Error(ErrorCode::IoError, "cannot open " + spec.csv_path + " for writing");
    csv << "seed,n,m,C,sigma,lambda,solver,reads,minEnergyBinary,minEnergyPermutation,energyGap,"
           "accuracy,validAllViews,wallTimeMs\n";
    csv.flush();

    ExperimentReport report;
    report.csv_path = spec.csv_path;
    report.summary_path = spec.summary_path;
    for (int i = 0; i < instances; ++i) {
        // Rows are written in (instance, setting) order; everything already
        // finished stays on disk if a later instance aborts.
        std::vector<ExperimentRow> rows = futures[i].get();
        for (const ExperimentRow& row : rows) {
            csv << (synthetic ? std::to_string(row.seed) : std::string()) << ',' << row.points << ','
                << row.views << ',' << csv_field(row.completeness) << ',' << csv_field(row.swap_ratio) << ','
                << format_double(row.lambda) << ',' << solver_choice_name(row.solver) << ',' << row.reads
                << ',' << csv_field(row.min_energy_binary) << ',' << csv_field(row.min_energy_permutation)
                << ',' << csv_field(row.energy_gap) << ',' << csv_field(row.accuracy) << ','
                << (row.valid_all_views ? "true" : "false") << ',' << row.wall_time_ms << '\n';
            csv.flush();
            report.rows.push_back(row);
        }
    }
    csv.close();

    if (!spec.sparsity_path.empty() && !report.rows.empty()) {
        // Pattern of the first row's Q matrix.
        const ExperimentRow& first = report.rows.front();
        ObservationGraph graph = synthetic ? [&] {
            SynthConfig config = *spec.synth;
            config.seed = first.seed;
            if (first.swap_ratio) config.swap_ratio = *first.swap_ratio;
            if (first.completeness) config.completeness = *first.completeness;
            return generate(config).second;
        }()
                                           : import_problem(spec.input_path);
        QuboProblem q = apply_penalty(build_objective(graph, spec.include_diagonal),
                                      build_constraints(first.points, first.views, first.lambda));
        if (spec.gauge) q = fix_gauge(q, first.points, first.views);
        export_sparsity_pbm(q, spec.sparsity_path);
    }

    if (!spec.plot_script_path.empty()) {
        // CSV columns, 1-based: 4 = C, 5 = sigma, 6 = lambda, 12 = accuracy.
        int axis_column = 0;
        std::string axis_label;
        switch (spec.kind) {
            case ExperimentKind::LambdaAblation: axis_column = 6, axis_label = "lambda"; break;
            case ExperimentKind::NoiseSweep: axis_column = 5, axis_label = "swap ratio"; break;
            case ExperimentKind::CompletenessSweep: axis_column = 4, axis_label = "completeness"; break;
            default: break;
        }
        std::string script = "set datafile separator ','\nset ylabel 'accuracy'\nset yrange [0:1.05]\n";
        if (axis_column != 0) {
            script += "set xlabel '" + axis_label + "'\n";
            script += "plot '" + spec.csv_path + "' skip 1 using " + std::to_string(axis_column) +
                      ":12 with points pt 7 title 'per instance'\n";
        } else {
            script += "set xlabel 'row'\n";
            script += "plot '" + spec.csv_path + "' skip 1 using 0:12 with points pt 7 title 'per instance'\n";
        }
        write_text_file(spec.plot_script_path, script);
    }

    if (!spec.summary_path.empty()) {
        json summary;
        summary["kind"] = experiment_kind_name(spec.kind);
        summary["solver"] = solver_choice_name(spec.solver);
        summary["gauge"] = spec.gauge;
        summary["includeDiagonalBlocks"] = spec.include_diagonal;
        summary["ensemble"] = instances;
        if (spec.solver == SolverChoice::SimulatedAnnealing) {
            summary["reads"] = spec.reads;
            summary["sweeps"] = spec.schedule.sweeps;
        }

        json per_setting = json::array();
        for (std::size_t s = 0; s < settings.size(); ++s) {
            Aggregate acc_accuracy;
            Aggregate acc_gap;
            int valid_count = 0;
            int row_count = 0;
            for (int i = 0; i < instances; ++i) {
                const ExperimentRow& row = report.rows[static_cast<std::size_t>(i) * settings.size() + s];
                ++row_count;
                if (row.accuracy) acc_accuracy.add(*row.accuracy);
                if (row.energy_gap) acc_gap.add(*row.energy_gap);
                if (row.valid_all_views) ++valid_count;
            }
            json entry;
            entry["lambda"] = settings[s].lambda;
            if (settings[s].swap_ratio) entry["sigma"] = *settings[s].swap_ratio;
            if (settings[s].completeness) entry["completeness"] = *settings[s].completeness;
            if (spec.kind == ExperimentKind::MajorityVoteSweep) entry["voteK"] = settings[s].vote_k;
            entry["rows"] = row_count;
            entry["validAllViewsCount"] = valid_count;
            if (acc_accuracy.count > 0) {
                entry["meanAccuracy"] = acc_accuracy.mean();
                entry["stddevAccuracy"] = acc_accuracy.stddev();
            }
            if (acc_gap.count > 0) {
                entry["meanEnergyGap"] = acc_gap.mean();
                entry["stddevEnergyGap"] = acc_gap.stddev();
            }
            per_setting.push_back(entry);
        }
        summary["settings"] = per_setting;

        json rows = json::array();
        for (std::size_t r = 0; r < report.rows.size(); ++r) {
            const int instance_index = static_cast<int>(r / settings.size());
            const int setting_index = static_cast<int>(r % settings.size());
            rows.push_back(row_to_json(report.rows[r], instance_index, setting_index, synthetic));
        }
        summary["rows"] = rows;
        write_text_file(spec.summary_path, summary.dump(2) + "\n");
    }
    return report;
}

}  // namespace permsync
