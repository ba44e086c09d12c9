// Command-line benchmark harness: runs the selected optimizers on an economic
// load dispatch problem and prints the comparison table.

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "eldopt/bench.hpp"

int main(int argc, char** argv) {
    CLI::App app{"economic load dispatch benchmark harness"};

    eldopt::ExperimentSpec spec;
    std::string out_dir;
    std::string config_path;

    app.add_option("--problem", spec.problem,
                   "built-in problem id (problem1, problem2-printed, problem2-corrected) or path to a "
                   "problem JSON file")
        ->capture_default_str();
    app.add_option("--algo", spec.algo, "algorithm to run")
        ->check(CLI::IsMember({"pso", "abc", "bfo", "oracle", "all"}))
        ->capture_default_str();
    app.add_option("--runs", spec.n_timing_runs, "independent seeded runs per algorithm")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--seed", spec.seed_base, "base seed; run r uses seed + r")
        ->capture_default_str();
    app.add_option("--out", out_dir, "directory for comparison.{csv,txt} and trace files");
    app.add_option("--config", config_path, "per-algorithm parameter overrides (JSON)");
    app.add_flag("--emit-traces", spec.emit_traces,
                 "also write the best run's convergence trace per algorithm");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    spec.out_dir = out_dir;
    if (!config_path.empty()) spec.config_path = config_path;

    try {
        const eldopt::ExperimentResult result = eldopt::run_experiment(spec);
        std::fputs(eldopt::comparison_text(result).c_str(), stdout);
    } catch (const eldopt::InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const eldopt::OutputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
