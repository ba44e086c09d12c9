#pragma once

#include <charconv>
#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eldopt/eld.hpp"

namespace eldopt {

/// When an optimizer run ends: at the iteration cap, on reaching a target
/// cost, or when the best cost stops improving.
struct StopCriteria {
    int max_iterations = 200;
    std::optional<double> target_cost;    // $/h
    int stagnation_window = 20;           // iterations; 0 disables the check
    double improvement_epsilon = 1e-6;    // $/h over the window
};

inline void validate(const StopCriteria& c) {
    if (c.max_iterations < 1) throw InputError("max_iterations must be >= 1");
    if (c.stagnation_window < 0) throw InputError("stagnation_window must be >= 0");
    if (c.improvement_epsilon < 0.0) throw InputError("improvement_epsilon must be >= 0");
}

/// Best cost seen so far, recorded once per iteration. Non-increasing.
struct ConvergenceTrace {
    std::vector<double> best_cost_per_iteration;

    std::size_t size() const { return best_cost_per_iteration.size(); }
    bool empty() const { return best_cost_per_iteration.empty(); }
};

/// True when `iteration` completed iterations satisfy any stop rule:
/// the cap is reached, the latest best cost is at or below target_cost, or
/// the last stagnation_window iterations improved by less than
/// improvement_epsilon in total.
inline bool should_stop(const StopCriteria& criteria, const ConvergenceTrace& trace, long iteration) {
    if (iteration >= criteria.max_iterations) return true;
    const auto& best = trace.best_cost_per_iteration;
    if (criteria.target_cost && !best.empty() && best.back() <= *criteria.target_cost) return true;
    if (criteria.stagnation_window > 0 &&
        best.size() > static_cast<std::size_t>(criteria.stagnation_window)) {
        const double improvement =
            best[best.size() - 1 - static_cast<std::size_t>(criteria.stagnation_window)] - best.back();
        if (improvement < criteria.improvement_epsilon) return true;
    }
    return false;
}

/// Outcome of one seeded optimizer run.
struct RunReport {
    Dispatch best_dispatch;
    double best_cost = 0.0;       // $/h
    long iterations_used = 0;
    double wall_time_s = 0.0;
    ConvergenceTrace trace;
    std::uint64_t seed = 0;
    /// Cumulative objective evaluations at the end of each iteration,
    /// parallel to the trace; feeds the evaluations-to-target statistic.
    std::vector<std::uint64_t> cumulative_evaluations;
    std::uint64_t total_evaluations = 0;
};

/// Assembles a RunReport and enforces the run contract: monotone trace,
/// best_cost consistent with the dispatch, dispatch feasible within the
/// repair tolerance. Violations are internal bugs, reported as logic_error.
inline RunReport finish_run(const EldProblem& problem, Dispatch best_dispatch, double best_cost,
                            ConvergenceTrace trace, std::vector<std::uint64_t> cumulative_evaluations,
                            std::uint64_t total_evaluations, std::uint64_t seed, double wall_time_s) {
    const auto& series = trace.best_cost_per_iteration;
    for (std::size_t i = 1; i < series.size(); ++i)
        if (series[i] > series[i - 1])
            throw std::logic_error("convergence trace increased at iteration " + std::to_string(i + 1));

    const double recomputed = evaluate_cost(problem, best_dispatch);
    const double scale = std::max(1.0, std::abs(recomputed));
    if (std::abs(recomputed - best_cost) > 1e-9 * scale)
        throw std::logic_error("reported best cost disagrees with its dispatch");
    if (!within_limits(problem, best_dispatch) ||
        std::abs(power_balance_residual(problem, best_dispatch)) > kRepairToleranceMw)
        throw std::logic_error("reported best dispatch is infeasible");

    RunReport report;
    report.best_dispatch = std::move(best_dispatch);
    report.best_cost = best_cost;
    report.iterations_used = static_cast<long>(series.size());
    report.wall_time_s = wall_time_s;
    report.trace = std::move(trace);
    report.seed = seed;
    report.cumulative_evaluations = std::move(cumulative_evaluations);
    report.total_evaluations = total_evaluations;
    return report;
}

/// Shortest decimal form that round-trips the double, capped at `precision`
/// significant digits. Locale-independent.
inline std::string format_double(double value, int precision = 10) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, precision);
    return std::string(buf, res.ptr);
}

/// Trace CSV: header `iteration,best_cost`, one row per iteration, 1-based.
inline std::string trace_csv(const ConvergenceTrace& trace) {
    std::string out = "iteration,best_cost\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += format_double(trace.best_cost_per_iteration[i]);
        out += '\n';
    }
    return out;
}

using SteadyClock = std::chrono::steady_clock;

inline double elapsed_seconds(SteadyClock::time_point start) {
    return std::chrono::duration<double>(SteadyClock::now() - start).count();
}

}  // namespace eldopt
