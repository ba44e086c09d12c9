#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "eldopt/abc.hpp"
#include "eldopt/bfo.hpp"
#include "eldopt/common.hpp"
#include "eldopt/eld.hpp"
#include "eldopt/lambda_oracle.hpp"
#include "eldopt/problem_io.hpp"
#include "eldopt/pso.hpp"

namespace eldopt {

/// One harness invocation: which problem, which algorithms, how many seeded
/// runs for timing, and where output files go. Run r uses seed_base + r.
struct ExperimentSpec {
    std::string problem = "problem1";   // built-in id or problem file path
    std::string algo = "all";           // pso | abc | bfo | oracle | all
    int n_timing_runs = 100;
    std::uint64_t seed_base = 1;
    std::filesystem::path out_dir;      // empty: no files are written
    std::optional<std::filesystem::path> config_path;
    bool emit_traces = false;
};

/// Per-algorithm configurations for one experiment, plus optional seed-base
/// overrides from the config file.
struct AlgoConfigs {
    PsoConfig pso;
    AbcConfig abc;
    BfoConfig bfo;
    std::optional<std::uint64_t> pso_seed;
    std::optional<std::uint64_t> abc_seed;
    std::optional<std::uint64_t> bfo_seed;
};

/// One line of the comparison table. Iteration and evaluation counts are the
/// budget the best run needed to get within 0.1% of the oracle cost; they are
/// empty for the oracle row and for runs that never reached that band.
struct ComparisonRow {
    std::string algorithm;
    Dispatch dispatch;
    double cost = 0.0;
    std::optional<long> iterations;
    std::optional<std::uint64_t> evaluations;
    double mean_time_ms = 0.0;
    double oracle_gap = 0.0;
};

struct ExperimentResult {
    EldProblem problem;
    OracleSolution oracle;
    std::vector<ComparisonRow> rows;
    std::map<std::string, RunReport> best_runs;  // per metaheuristic
    std::vector<std::string> notes;
};

struct TimingResult {
    double mean_ms = 0.0;
    std::vector<double> per_run_ms;
};

inline std::string comparison_csv(const ExperimentResult& result);
inline std::string comparison_text(const ExperimentResult& result);
inline void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Wall-clock protocol: run the closure n times (run index passed through),
/// serially, on the monotonic clock; report the mean in milliseconds.
template <class RunOnce>
TimingResult measure_time_ms(RunOnce&& run_once, int n_timing_runs) {
    if (n_timing_runs < 1) throw InputError("n_timing_runs must be >= 1");
    TimingResult timing;
    timing.per_run_ms.reserve(static_cast<std::size_t>(n_timing_runs));
    double total = 0.0;
    for (int r = 0; r < n_timing_runs; ++r) {
        const auto start = SteadyClock::now();
        run_once(r);
        const double ms = elapsed_seconds(start) * 1e3;
        timing.per_run_ms.push_back(ms);
        total += ms;
    }
    timing.mean_ms = total / n_timing_runs;
    return timing;
}

namespace detail {

inline double json_number(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number()) throw InputError("config key '" + key + "' must be a number");
    return v.get<double>();
}

inline int json_int(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number_integer()) throw InputError("config key '" + key + "' must be an integer");
    return v.get<int>();
}

inline std::uint64_t json_u64(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number_unsigned() && !v.is_number_integer())
        throw InputError("config key '" + key + "' must be an integer");
    return v.get<std::uint64_t>();
}

}  // namespace detail

/// Parses the per-algorithm config document. Sections "pso", "abc" and "bfo"
/// are each optional; unknown sections or keys are rejected.
inline AlgoConfigs parse_algo_configs(const nlohmann::json& j) {
    AlgoConfigs cfg;
    if (!j.is_object()) throw InputError("config document must be a JSON object");
    for (const auto& [section, body] : j.items()) {
        if (!body.is_object()) throw InputError("config section '" + section + "' must be an object");
        if (section == "pso") {
            for (const auto& [key, value] : body.items()) {
                if (key == "swarm_size") cfg.pso.swarm_size = detail::json_int(value, key);
                else if (key == "w") cfg.pso.w = detail::json_number(value, key);
                else if (key == "c1") cfg.pso.c1 = detail::json_number(value, key);
                else if (key == "c2") cfg.pso.c2 = detail::json_number(value, key);
                else if (key == "v_max_fraction") cfg.pso.v_max_fraction = detail::json_number(value, key);
                else if (key == "max_iterations") cfg.pso.stop.max_iterations = detail::json_int(value, key);
                else if (key == "stagnation_window") cfg.pso.stop.stagnation_window = detail::json_int(value, key);
                else if (key == "seed") cfg.pso_seed = detail::json_u64(value, key);
                else throw InputError("unknown pso config key: " + key);
            }
        } else if (section == "abc") {
            for (const auto& [key, value] : body.items()) {
                if (key == "colony_size") cfg.abc.colony_size = detail::json_int(value, key);
                else if (key == "limit") cfg.abc.limit = detail::json_int(value, key);
                else if (key == "max_iterations") cfg.abc.stop.max_iterations = detail::json_int(value, key);
                else if (key == "stagnation_window") cfg.abc.stop.stagnation_window = detail::json_int(value, key);
                else if (key == "seed") cfg.abc_seed = detail::json_u64(value, key);
                else throw InputError("unknown abc config key: " + key);
            }
        } else if (section == "bfo") {
            for (const auto& [key, value] : body.items()) {
                if (key == "n_bacteria") cfg.bfo.n_bacteria = detail::json_int(value, key);
                else if (key == "n_chemotactic") cfg.bfo.n_chemotactic = detail::json_int(value, key);
                else if (key == "n_swim") cfg.bfo.n_swim = detail::json_int(value, key);
                else if (key == "n_reproduction") cfg.bfo.n_reproduction = detail::json_int(value, key);
                else if (key == "n_elimination") cfg.bfo.n_elimination = detail::json_int(value, key);
                else if (key == "p_ed") cfg.bfo.p_ed = detail::json_number(value, key);
                else if (key == "step_size") cfg.bfo.step_size = detail::json_number(value, key);
                else if (key == "seed") cfg.bfo_seed = detail::json_u64(value, key);
                else throw InputError("unknown bfo config key: " + key);
            }
        } else {
            throw InputError("unknown config section: " + section);
        }
    }
    return cfg;
}

inline AlgoConfigs load_algo_configs(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read config file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("cannot parse config file " + path.string() + ": " + e.what());
    }
    return parse_algo_configs(j);
}

/// Built-in id first, otherwise a problem file path.
inline EldProblem resolve_problem(const std::string& selector) {
    for (std::string_view id : kBuiltinProblemIds)
        if (selector == id) return builtin_problem(selector);
    return load_problem(selector);
}

/// Writes a run's convergence series in the trace CSV format.
inline void emit_trace(const RunReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OutputError("cannot write trace file: " + path.string());
    out << trace_csv(report.trace);
    if (!out) throw OutputError("failed while writing trace file: " + path.string());
}

namespace detail {

inline std::string fixed_decimals(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

inline std::optional<long> iterations_to_band(const RunReport& report, double threshold) {
    const auto& series = report.trace.best_cost_per_iteration;
    for (std::size_t i = 0; i < series.size(); ++i)
        if (series[i] <= threshold) return static_cast<long>(i + 1);
    return std::nullopt;
}

}  // namespace detail

/// Runs one experiment: for every selected metaheuristic, n_timing_runs
/// seeded optimizer runs (seed_base + r) timed serially; the row reports the
/// best run's dispatch and cost, the mean wall time, the budget that run
/// needed to reach the 0.1% oracle band, and the gap to the oracle optimum.
/// When out_dir is set, the comparison table (text and CSV) and, on request,
/// one trace CSV per metaheuristic are written there.
inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
    if (spec.n_timing_runs < 1) throw InputError("--runs must be >= 1");
    if (spec.algo != "pso" && spec.algo != "abc" && spec.algo != "bfo" && spec.algo != "oracle" &&
        spec.algo != "all")
        throw InputError("unknown algorithm: " + spec.algo);

    ExperimentResult result;
    result.problem = resolve_problem(spec.problem);
    validate(result.problem);

    AlgoConfigs configs;
    if (spec.config_path) configs = load_algo_configs(*spec.config_path);

    result.oracle = solve_lambda_iteration(result.problem);
    const double band = result.oracle.cost + 0.001 * std::abs(result.oracle.cost);

    const bool all = spec.algo == "all";
    struct Selected {
        std::string name;
        std::function<RunReport(std::uint64_t)> run;
        std::uint64_t seed_base;
    };
    std::vector<Selected> selected;
    const EldProblem& problem = result.problem;
    if (all || spec.algo == "pso")
        selected.push_back({"pso",
                            [&problem, &configs](std::uint64_t seed) { return run_pso(problem, configs.pso, seed); },
                            configs.pso_seed.value_or(spec.seed_base)});
    if (all || spec.algo == "abc")
        selected.push_back({"abc",
                            [&problem, &configs](std::uint64_t seed) { return run_abc(problem, configs.abc, seed); },
                            configs.abc_seed.value_or(spec.seed_base)});
    if (all || spec.algo == "bfo")
        selected.push_back({"bfo",
                            [&problem, &configs](std::uint64_t seed) { return run_bfo(problem, configs.bfo, seed); },
                            configs.bfo_seed.value_or(spec.seed_base)});

    for (const Selected& algo : selected) {
        std::vector<RunReport> reports;
        reports.reserve(static_cast<std::size_t>(spec.n_timing_runs));
        const TimingResult timing = measure_time_ms(
            [&](int r) { reports.push_back(algo.run(algo.seed_base + static_cast<std::uint64_t>(r))); },
            spec.n_timing_runs);

        std::size_t best = 0;
        for (std::size_t r = 1; r < reports.size(); ++r)
            if (reports[r].best_cost < reports[best].best_cost) best = r;
        const RunReport& best_run = reports[best];

        ComparisonRow row;
        row.algorithm = algo.name;
        row.dispatch = best_run.best_dispatch;
        row.cost = best_run.best_cost;
        row.iterations = detail::iterations_to_band(best_run, band);
        if (row.iterations)
            row.evaluations = best_run.cumulative_evaluations[static_cast<std::size_t>(*row.iterations) - 1];
        row.mean_time_ms = timing.mean_ms;
        row.oracle_gap = best_run.best_cost - result.oracle.cost;
        result.rows.push_back(std::move(row));
        result.best_runs.emplace(algo.name, best_run);
    }

    if (all || spec.algo == "oracle") {
        const TimingResult timing = measure_time_ms(
            [&problem](int) { solve_lambda_iteration(problem); }, spec.n_timing_runs);
        ComparisonRow row;
        row.algorithm = "oracle";
        row.dispatch = result.oracle.dispatch;
        row.cost = result.oracle.cost;
        row.mean_time_ms = timing.mean_ms;
        row.oracle_gap = 0.0;
        result.rows.push_back(std::move(row));
    }

    // The two problem2 variants differ only in their quadratic coefficients;
    // always report both exact optima side by side so the difference is visible.
    if (spec.problem == "problem2-printed" || spec.problem == "problem2-corrected") {
        const OracleSolution printed = solve_lambda_iteration(builtin_problem("problem2-printed"));
        const OracleSolution corrected = solve_lambda_iteration(builtin_problem("problem2-corrected"));
        result.notes.push_back(
            "note: problem2 ships with two coefficient sets whose exact optima differ:");
        result.notes.push_back("  problem2-printed   -> " + detail::fixed_decimals(printed.cost, 2) +
                               " $/h at (" + detail::fixed_decimals(printed.dispatch[0], 2) + ", " +
                               detail::fixed_decimals(printed.dispatch[1], 2) + ", " +
                               detail::fixed_decimals(printed.dispatch[2], 2) + ") MW");
        result.notes.push_back("  problem2-corrected -> " + detail::fixed_decimals(corrected.cost, 2) +
                               " $/h at (" + detail::fixed_decimals(corrected.dispatch[0], 2) + ", " +
                               detail::fixed_decimals(corrected.dispatch[1], 2) + ", " +
                               detail::fixed_decimals(corrected.dispatch[2], 2) + ") MW");
        result.notes.push_back(
            "  only the corrected set attains the widely quoted optimum near 4652 $/h.");
    }

    if (!spec.out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(spec.out_dir, ec);
        if (ec) throw OutputError("cannot create output directory: " + spec.out_dir.string());

        write_text_file(spec.out_dir / "comparison.csv", comparison_csv(result));
        write_text_file(spec.out_dir / "comparison.txt", comparison_text(result));
        if (spec.emit_traces)
            for (const auto& [name, report] : result.best_runs)
                emit_trace(report, spec.out_dir / (name + "_trace.csv"));
    }
    return result;
}

/// Machine-readable table: algorithm,P1,...,PN,cost,iterations,evaluations,
/// mean_time_ms,oracle_gap. Empty cells where a count does not apply.
inline std::string comparison_csv(const ExperimentResult& result) {
    const std::size_t n = result.problem.size();
    std::string out = "algorithm";
    for (std::size_t j = 0; j < n; ++j) out += ",P" + std::to_string(j + 1);
    out += ",cost,iterations,evaluations,mean_time_ms,oracle_gap\n";
    for (const ComparisonRow& row : result.rows) {
        out += row.algorithm;
        for (double p : row.dispatch) out += ',' + format_double(p);
        out += ',' + format_double(row.cost);
        out += ',';
        if (row.iterations) out += std::to_string(*row.iterations);
        out += ',';
        if (row.evaluations) out += std::to_string(*row.evaluations);
        out += ',' + detail::fixed_decimals(row.mean_time_ms, 2);
        out += ',' + format_double(row.oracle_gap);
        out += '\n';
    }
    return out;
}

/// Human-readable aligned table plus any notes.
inline std::string comparison_text(const ExperimentResult& result) {
    const std::size_t n = result.problem.size();
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> header = {"algorithm"};
    for (std::size_t j = 0; j < n; ++j) header.push_back("P" + std::to_string(j + 1) + " (MW)");
    header.insert(header.end(),
                  {"cost ($/h)", "iters", "evals", "mean time (ms)", "oracle gap ($/h)"});
    cells.push_back(header);
    for (const ComparisonRow& row : result.rows) {
        std::vector<std::string> line = {row.algorithm};
        for (double p : row.dispatch) line.push_back(detail::fixed_decimals(p, 2));
        line.push_back(detail::fixed_decimals(row.cost, 2));
        line.push_back(row.iterations ? std::to_string(*row.iterations) : "-");
        line.push_back(row.evaluations ? std::to_string(*row.evaluations) : "-");
        line.push_back(detail::fixed_decimals(row.mean_time_ms, 2));
        line.push_back(detail::fixed_decimals(row.oracle_gap, 4));
        cells.push_back(std::move(line));
    }

    std::vector<std::size_t> width(cells[0].size(), 0);
    for (const auto& line : cells)
        for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());

    std::string out;
    for (const auto& line : cells) {
        for (std::size_t c = 0; c < line.size(); ++c) {
            if (c) out += "  ";
            out += line[c];
            out.append(width[c] - line[c].size(), ' ');
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += '\n';
    }
    for (const std::string& note : result.notes) out += note + '\n';
    return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OutputError("cannot write file: " + path.string());
    out << content;
    if (!out) throw OutputError("failed while writing file: " + path.string());
}

}  // namespace eldopt
