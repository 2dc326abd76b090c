// strata-rd: stratified 2x2 risk-difference analysis and simulation CLI.
//
// Subcommands:
//   analyze   estimators, variance methods, tests on a dataset (or `calgb`)
//   calgb     shorthand for `analyze calgb` with a 200-replicate bootstrap
//   simulate  factorial Monte Carlo study, JSON + CSV summaries
//
// Exit codes: 0 success, 1 usage or I/O error, 2 completed with warnings.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "stratrd/report.hpp"
#include "stratrd/simulation.hpp"
#include "stratrd/tables.hpp"

namespace {

using namespace stratrd;

int default_threads() {
    if (const char* env = std::getenv("STRATA_RD_THREADS")) {
        const int value = std::atoi(env);
        if (value >= 1) return value;
    }
    return 1;
}

struct AnalyzeArgs {
    std::string input;
    std::string format = "subjects";
    double level = 0.95;
    int bootstrap = 0;
    std::uint64_t seed = 20250809;
    std::string out = "table";
};

int run_analyze(const AnalyzeArgs& args) {
    StratifiedDataset dataset;
    std::vector<SubjectRecord> records;
    const std::vector<SubjectRecord>* record_ptr = nullptr;
    try {
        if (args.input == "calgb") {
            dataset = calgb_dataset();
            records = calgb_records();
            record_ptr = &records;
        } else {
            std::ifstream in(args.input);
            if (!in) {
                std::cerr << "error: cannot open '" << args.input << "'\n";
                return 1;
            }
            if (args.format == "subjects") {
                records = read_subject_csv(in);
                dataset = aggregate_subjects(records);
                record_ptr = &records;
            } else {
                dataset = read_aggregated_csv(in);
            }
        }
    } catch (const Error& e) {
        std::cerr << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
        return 1;
    }

    AnalyzeOptions options;
    options.level = args.level;
    options.bootstrap_replicates = args.bootstrap;
    options.seed = args.seed;
    AnalysisReport report;
    try {
        report = analyze_dataset(dataset, options, record_ptr);
    } catch (const Error& e) {
        std::cerr << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
        return 1;
    }

    if (args.out == "json") {
        std::cout << report_to_json(report).dump(2) << "\n";
    } else {
        std::cout << report_to_table(report);
    }

    bool negative_variance = false;
    for (const auto& e : report.estimates) {
        for (const auto& s : e.ses) {
            if (has_warning(s.warnings, WarningCode::NegativeVariance)) {
                negative_variance = true;
            }
        }
    }
    return (!report.warnings.empty() || negative_variance) ? 2 : 0;
}

struct SimulateArgs {
    std::string factors;
    int runs = 1000;
    std::uint64_t gen_seed = 1;
    std::uint64_t run_seed = 2;
    int threads = default_threads();
    std::string out = "simulation";
    std::string route = "binomial";
    int bootstrap = 0;
};

int run_simulate(const SimulateArgs& args) {
    FactorSelection selection;
    std::stringstream tokens(args.factors);
    std::string token;
    while (std::getline(tokens, token, ',')) {
        if (!token.empty()) selection.tokens.push_back(token);
    }
    std::vector<ScenarioConfig> grid;
    try {
        grid = make_grid(selection, args.gen_seed, args.run_seed,
                         args.route == "individual" ? GenerationRoute::INDIVIDUAL_RD
                                                    : GenerationRoute::BINOMIAL);
    } catch (const Error& e) {
        std::cerr << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
        return 1;
    }
    if (grid.empty()) {
        std::cerr << "error: factor selection matches no scenario\n";
        return 1;
    }

    MethodSelection methods;
    methods.bootstrap = args.bootstrap > 0;
    methods.bootstrap_replicates = args.bootstrap;

    std::vector<ScenarioSummary> summaries;
    summaries.reserve(grid.size());
    bool any_failures = false;
    for (const ScenarioConfig& config : grid) {
        ScenarioSummary summary = run_scenario(config, args.runs, methods, args.threads);
        for (const auto& [key, cell] : summary.cells) {
            if (cell.failures > 0) any_failures = true;
        }
        std::cerr << "scenario " << summary.scenario_id << " done (" << summary.runs
                  << " runs)\n";
        summaries.push_back(std::move(summary));
    }

    const std::string json_path = args.out + ".json";
    const std::string csv_path = args.out + ".csv";
    {
        std::ofstream out(json_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write '" << json_path << "'\n";
            return 1;
        }
        out << summaries_to_json(summaries).dump(2) << "\n";
    }
    {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write '" << csv_path << "'\n";
            return 1;
        }
        out << summaries_to_csv(summaries);
    }
    std::cerr << "wrote " << json_path << " and " << csv_path << "\n";
    return any_failures ? 2 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stratified 2x2 risk-difference analysis (MH, PS, unadjusted) with "
                 "robust variance estimators and a Monte Carlo study harness"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "Estimators, variances, and tests on a dataset");
    analyze->add_option("input", analyze_args.input,
                        "CSV path, or `calgb` for the embedded CALGB trial")
        ->required();
    analyze->add_option("--format", analyze_args.format,
                        "Input format: subjects (stratum,arm,outcome) or aggregated "
                        "(stratum,n11,n10,n01,n00)")
        ->check(CLI::IsMember({"subjects", "aggregated"}));
    analyze->add_option("--level", analyze_args.level, "Confidence level")
        ->check(CLI::Range(1e-6, 1.0 - 1e-6));
    analyze->add_option("--bootstrap", analyze_args.bootstrap,
                        "Bootstrap replicates for the MH SE (0 = off)");
    analyze->add_option("--seed", analyze_args.seed, "Bootstrap seed");
    analyze->add_option("--out", analyze_args.out, "Output format")
        ->check(CLI::IsMember({"table", "json"}));

    CLI::App* calgb = app.add_subcommand(
        "calgb", "Analyze the embedded CALGB dataset (bootstrap included)");
    AnalyzeArgs calgb_args;
    calgb_args.input = "calgb";
    calgb_args.bootstrap = 200;
    calgb->add_option("--level", calgb_args.level, "Confidence level");
    calgb->add_option("--bootstrap", calgb_args.bootstrap, "Bootstrap replicates");
    calgb->add_option("--seed", calgb_args.seed, "Bootstrap seed");
    calgb->add_option("--out", calgb_args.out, "Output format")
        ->check(CLI::IsMember({"table", "json"}));

    SimulateArgs simulate_args;
    CLI::App* simulate = app.add_subcommand(
        "simulate",
        "Run the factorial Monte Carlo study. Score-based CI methods and "
        "G-computation comparators are not implemented.");
    simulate->add_option("--factors", simulate_args.factors,
                         "Comma-separated factor tokens (1a 1b 1c, 2a 2b, 3a 3b 3c, "
                         "4a 4b 4c, 4x = extreme potential-outcome scenario); "
                         "unspecified factors run all levels");
    simulate->add_option("--runs", simulate_args.runs, "Replicates per scenario")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--gen-seed", simulate_args.gen_seed,
                         "Seed for the one-time parameter draws");
    simulate->add_option("--run-seed", simulate_args.run_seed,
                         "Seed for replicate streams");
    simulate->add_option("--threads", simulate_args.threads,
                         "Worker threads (default from STRATA_RD_THREADS)")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--out", simulate_args.out,
                         "Output path prefix for <out>.json and <out>.csv");
    simulate->add_option("--route", simulate_args.route,
                         "Data-generating route")
        ->check(CLI::IsMember({"binomial", "individual"}));
    simulate->add_option("--bootstrap", simulate_args.bootstrap,
                         "Bootstrap replicates per run (0 = no bootstrap cells)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (analyze->parsed()) return run_analyze(analyze_args);
    if (calgb->parsed()) return run_analyze(calgb_args);
    if (simulate->parsed()) return run_simulate(simulate_args);
    return 1;
}
