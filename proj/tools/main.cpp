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

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "permsync/bench.hpp"
#include "permsync/encoder.hpp"
#include "permsync/experiment.hpp"
#include "permsync/io.hpp"
#include "permsync/solvers.hpp"

namespace {

using namespace permsync;
using nlohmann::json;

struct CommonOptions {
    double lambda = kDefaultLambda;
    bool no_diagonal_blocks = false;
    bool gauge = true;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--lambda", opts.lambda, "Constraint penalty weight")->capture_default_str();
    cmd->add_flag("--no-diagonal-blocks", opts.no_diagonal_blocks,
                  "Leave the identity diagonal blocks out of the objective");
    cmd->add_flag("--gauge,!--no-gauge", opts.gauge, "Clamp view 1 to the identity (default on)");
}

QuboProblem encode_problem(const ObservationGraph& g, const CommonOptions& opts) {
    QuboProblem q = apply_penalty(build_objective(g, !opts.no_diagonal_blocks),
                                  build_constraints(g.points_per_view(), g.num_views(), opts.lambda));
    if (opts.gauge) q = fix_gauge(q, g.points_per_view(), g.num_views());
    return q;
}

json estimate_to_json(const SyncEstimate& estimate) {
    json views = json::array();
    for (std::size_t v = 0; v < estimate.views.size(); ++v) {
        const BinaryMatrix& matrix = estimate.views[v];
        json rows = json::array();
        for (int r = 0; r < matrix.size(); ++r) {
            json cells = json::array();
            for (int c = 0; c < matrix.size(); ++c) cells.push_back(static_cast<int>(matrix.at(r, c)));
            rows.push_back(cells);
        }
        json view;
        view["matrix"] = rows;
        view["valid"] = static_cast<bool>(estimate.valid[v]);
        if (estimate.valid[v]) {
            json mapping = json::array();
            const Permutation p = validate_permutation(matrix);
            for (int r = 0; r < p.size(); ++r) mapping.push_back(p.apply(r) + 1);
            view["map"] = mapping;
        }
        views.push_back(view);
    }
    return views;
}

std::string bits_to_string(const BitVector& bits) {
    std::string out;
    out.reserve(bits.size());
    for (std::uint8_t b : bits) out += b ? '1' : '0';
    return out;
}

int run_generate(const SynthConfig& config, const std::string& out_path, const std::string& truth_path) {
    const auto [gt, graph] = generate(config);
    export_problem(graph, out_path);
    if (!truth_path.empty()) export_ground_truth(gt, truth_path);
    std::cout << "wrote " << graph.num_edges() << " directed edges (" << config.views << " views, "
              << config.points << " points) to " << out_path << "\n";
    return 0;
}

int run_encode(const std::string& in_path, const CommonOptions& opts, const std::string& out_path,
               const std::string& sparsity_path) {
    const ObservationGraph g = import_problem(in_path);
    const QuboProblem q = encode_problem(g, opts);
    export_qubo(q, out_path);
    if (!sparsity_path.empty()) export_sparsity_pbm(q, sparsity_path);
    std::cout << "wrote QUBO with " << q.num_vars << " variables, " << q.quadratic.size()
              << " couplings to " << out_path << "\n";
    return 0;
}

int run_solve(const std::string& problem_path, const std::string& qubo_path, const CommonOptions& opts,
              const std::string& solver_name, int reads, int sweeps, std::uint64_t seed, int top_k,
              const std::string& out_path) {
    const SolverChoice solver = solver_choice_from_name(solver_name);
    AnnealSchedule schedule;
    schedule.sweeps = sweeps;

    std::optional<ObservationGraph> graph;
    QuboProblem q;
    if (!problem_path.empty()) {
        graph = import_problem(problem_path);
        q = encode_problem(*graph, opts);
    } else {
        q = import_qubo(qubo_path);
    }

    SampleSet samples;
    switch (solver) {
        case SolverChoice::Exhaustive:
            samples = solve_exhaustive_binary(q, top_k);
            break;
        case SolverChoice::PermExhaustive:
            if (!graph) {
                throw Error(ErrorCode::InvalidConfig,
                            "the permutation solver needs a problem file, not a bare QUBO");
            }
            samples = solve_exhaustive_permutation(*graph, opts.lambda, opts.gauge, top_k,
                                                   !opts.no_diagonal_blocks);
            break;
        case SolverChoice::SimulatedAnnealing:
            samples = sample_sa(q, reads, schedule, seed);
            break;
    }

    const Sample& best = samples.best();
    std::cout << "solver " << samples.meta.solver << ": " << samples.samples.size()
              << " distinct samples, best energy " << format_double(best.energy) << "\n";
    const std::size_t shown = std::min<std::size_t>(samples.samples.size(), 5);
    for (std::size_t s = 0; s < shown; ++s) {
        const Sample& sample = samples.samples[s];
        std::cout << "  " << format_double(sample.energy) << "  x" << sample.occurrences << "  "
                  << bits_to_string(sample.bits) << "\n";
    }

    json result;
    result["solver"] = samples.meta.solver;
    result["bestEnergy"] = best.energy;
    result["bestBits"] = bits_to_string(best.bits);
    json sample_rows = json::array();
    for (const Sample& sample : samples.samples) {
        sample_rows.push_back(
            {{"bits", bits_to_string(sample.bits)}, {"energy", sample.energy}, {"occurrences", sample.occurrences}});
    }
    result["samples"] = sample_rows;

    if (q.layout) {
        const SyncEstimate estimate = decode(best.bits, q, samples.meta.solver);
        result["views"] = estimate_to_json(estimate);
        std::cout << "decoded views valid: " << (estimate.all_valid() ? "all" : "NOT all") << "\n";
    }
    if (!out_path.empty()) {
        write_text_file(out_path, result.dump(2) + "\n");
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int run_convert(const std::string& in_path, const std::string& out_path, std::string from, std::string to,
                const CommonOptions& opts) {
    auto infer = [](const std::string& path) {
        return path.size() >= 5 && path.substr(path.size() - 5) == ".json" ? "problem" : "qubo";
    };
    if (from.empty()) from = infer(in_path);
    if (to.empty()) to = infer(out_path);

    if (from == "problem" && to == "problem") {
        export_problem(import_problem(in_path), out_path);
    } else if (from == "problem" && to == "qubo") {
        export_qubo(encode_problem(import_problem(in_path), opts), out_path);
    } else if (from == "qubo" && to == "qubo") {
        export_qubo(import_qubo(in_path), out_path);
    } else {
        throw Error(ErrorCode::InvalidConfig, "cannot convert " + from + " to " + to);
    }
    std::cout << "converted " << in_path << " (" << from << ") to " << out_path << " (" << to << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"permsync: permutation synchronization as a penalized QUBO"};
    app.require_subcommand(1);

    // generate
    SynthConfig synth;
    std::string out_path;
    std::string truth_path;
    CLI::App* cmd_generate = app.add_subcommand("generate", "Write a synthetic problem file");
    cmd_generate->add_option("--n", synth.points, "Points per view")->capture_default_str();
    cmd_generate->add_option("--m", synth.views, "Number of views")->capture_default_str();
    cmd_generate->add_option("--completeness", synth.completeness, "Fraction of undirected edges kept")
        ->capture_default_str();
    cmd_generate->add_option("--swap-ratio", synth.swap_ratio, "Row-swap noise ratio")->capture_default_str();
    cmd_generate->add_option("--seed", synth.seed, "Instance seed")->capture_default_str();
    cmd_generate->add_option("--out", out_path, "Problem JSON output path")->required();
    cmd_generate->add_option("--truth-out", truth_path, "Ground-truth JSON output path");

    // encode
    CommonOptions encode_opts;
    std::string encode_in;
    std::string encode_out;
    std::string encode_sparsity;
    CLI::App* cmd_encode = app.add_subcommand("encode", "Encode a problem file as a QUBO text file");
    cmd_encode->add_option("--in", encode_in, "Problem JSON input")->required();
    cmd_encode->add_option("--out", encode_out, "QUBO text output path")->required();
    cmd_encode->add_option("--sparsity-out", encode_sparsity, "Optional PBM sparsity bitmap");
    add_common(cmd_encode, encode_opts);

    // solve
    CommonOptions solve_opts;
    std::string solve_problem;
    std::string solve_qubo;
    std::string solve_out;
    std::string solver_name = "exhaustive";
    int reads = 200;
    int sweeps = 1000;
    std::uint64_t seed = 0;
    int top_k = 16;
    CLI::App* cmd_solve = app.add_subcommand("solve", "Solve a problem or QUBO file");
    cmd_solve->add_option("--in", solve_problem, "Problem JSON input");
    cmd_solve->add_option("--qubo", solve_qubo, "QUBO text input");
    cmd_solve->add_option("--solver", solver_name, "exhaustive | perm-exhaustive | sa")->capture_default_str();
    cmd_solve->add_option("--reads", reads, "Annealing restarts")->capture_default_str();
    cmd_solve->add_option("--sweeps", sweeps, "Sweeps per read")->capture_default_str();
    cmd_solve->add_option("--seed", seed, "Sampler seed")->capture_default_str();
    cmd_solve->add_option("--top-k", top_k, "Samples to keep")->capture_default_str();
    cmd_solve->add_option("--out", solve_out, "Result JSON output path");
    add_common(cmd_solve, solve_opts);

    // experiment
    ExperimentSpec spec;
    SynthConfig experiment_synth;
    std::string experiment_kind = "single-solve";
    std::string experiment_solver = "exhaustive";
    std::string experiment_in;
    bool no_diagonal_blocks = false;
    CLI::App* cmd_experiment = app.add_subcommand("experiment", "Run a seeded experiment ensemble");
    cmd_experiment->add_option("--kind", experiment_kind,
                               "noiseless-recovery | lambda-ablation | noise-sweep | completeness-sweep | "
                               "majority-vote-sweep | single-solve")
        ->capture_default_str();
    cmd_experiment->add_option("--n", experiment_synth.points, "Points per view")->capture_default_str();
    cmd_experiment->add_option("--m", experiment_synth.views, "Number of views")->capture_default_str();
    cmd_experiment->add_option("--completeness", experiment_synth.completeness, "Fraction of edges kept")
        ->capture_default_str();
    cmd_experiment->add_option("--swap-ratio", experiment_synth.swap_ratio, "Row-swap noise ratio")
        ->capture_default_str();
    cmd_experiment->add_option("--seed", experiment_synth.seed, "Base seed (instance i uses seed+i)")
        ->capture_default_str();
    cmd_experiment->add_option("--in", experiment_in, "Imported problem JSON instead of synthetic input");
    cmd_experiment->add_option("--lambda", spec.lambdas, "Penalty weight(s); several values form the ablation axis")
        ->expected(-1);
    cmd_experiment->add_option("--sigmas", spec.swap_ratios, "Noise-sweep axis")->expected(-1);
    cmd_experiment->add_option("--completeness-values", spec.completeness_values, "Completeness-sweep axis")
        ->expected(-1);
    cmd_experiment->add_option("--k-values", spec.vote_ks, "Majority-vote axis")->expected(-1);
    cmd_experiment->add_option("--solver", experiment_solver, "exhaustive | perm-exhaustive | sa")
        ->capture_default_str();
    cmd_experiment->add_option("--reads", spec.reads, "Annealing restarts")->capture_default_str();
    cmd_experiment->add_option("--sweeps", spec.schedule.sweeps, "Sweeps per read")->capture_default_str();
    cmd_experiment->add_option("--top-k", spec.top_k, "Samples to keep per solve")->capture_default_str();
    cmd_experiment->add_option("--ensemble", spec.ensemble, "Instances per setting")->capture_default_str();
    cmd_experiment->add_flag("--no-diagonal-blocks", no_diagonal_blocks,
                             "Leave the identity diagonal blocks out of the objective");
    cmd_experiment->add_flag("--gauge,!--no-gauge", spec.gauge, "Clamp view 1 to the identity (default on)");
    cmd_experiment->add_option("--csv", spec.csv_path, "CSV report path")->required();
    cmd_experiment->add_option("--summary", spec.summary_path, "JSON summary path");
    cmd_experiment->add_option("--sparsity-out", spec.sparsity_path, "PBM of the first solved Q matrix");
    cmd_experiment->add_option("--plot-out", spec.plot_script_path, "gnuplot script over the CSV report");

    // convert
    CommonOptions convert_opts;
    std::string convert_in;
    std::string convert_out;
    std::string convert_from;
    std::string convert_to;
    CLI::App* cmd_convert = app.add_subcommand("convert", "Convert between problem JSON and QUBO text");
    cmd_convert->add_option("--in", convert_in, "Input path")->required();
    cmd_convert->add_option("--out", convert_out, "Output path")->required();
    cmd_convert->add_option("--from", convert_from, "problem | qubo (inferred from the extension)");
    cmd_convert->add_option("--to", convert_to, "problem | qubo (inferred from the extension)");
    add_common(cmd_convert, convert_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(cmd_generate)) return run_generate(synth, out_path, truth_path);
        if (app.got_subcommand(cmd_encode)) return run_encode(encode_in, encode_opts, encode_out, encode_sparsity);
        if (app.got_subcommand(cmd_solve)) {
            if (solve_problem.empty() == solve_qubo.empty()) {
                throw Error(ErrorCode::InvalidConfig, "pass exactly one of --in or --qubo");
            }
            return run_solve(solve_problem, solve_qubo, solve_opts, solver_name, reads, sweeps, seed, top_k,
                             solve_out);
        }
        if (app.got_subcommand(cmd_experiment)) {
            spec.kind = experiment_kind_from_name(experiment_kind);
            spec.solver = solver_choice_from_name(experiment_solver);
            spec.include_diagonal = !no_diagonal_blocks;
            if (experiment_in.empty()) {
                spec.synth = experiment_synth;
            } else {
                spec.input_path = experiment_in;
                spec.solver_seed = experiment_synth.seed;
            }
            if (spec.lambdas.empty()) spec.lambdas = {kDefaultLambda};
            if (spec.kind == ExperimentKind::LambdaAblation && spec.lambdas.size() == 1) {
                spec.lambdas = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
            }
            const ExperimentReport report = run_experiment(spec);
            std::cout << "wrote " << report.rows.size() << " rows to " << report.csv_path << "\n";
            if (!report.summary_path.empty()) std::cout << "wrote summary " << report.summary_path << "\n";
            return 0;
        }
        if (app.got_subcommand(cmd_convert)) {
            return run_convert(convert_in, convert_out, convert_from, convert_to, convert_opts);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::IoError ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
