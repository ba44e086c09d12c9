#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eldopt {

/// Malformed input: dimension mismatch, unknown id, bad parameter value.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Demand cannot be met within the combined generator limits.
struct InfeasibleError : InputError {
    using InputError::InputError;
};

/// An output file could not be written.
struct OutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One generating unit: output limits in MW and quadratic fuel-cost
/// coefficients, cost(P) = a*P^2 + b*P + c in $/h.
struct Generator {
    double p_min = 0.0;  // MW
    double p_max = 0.0;  // MW
    double a = 0.0;      // $/MW^2 h
    double b = 0.0;      // $/MWh
    double c = 0.0;      // $/h
};

/// Candidate output per unit, MW. Length must match the problem's unit count.
using Dispatch = std::vector<double>;

/// The dispatch problem: the units plus the total demand to cover.
struct EldProblem {
    std::vector<Generator> generators;
    double demand = 0.0;  // MW

    std::size_t size() const { return generators.size(); }

    double min_capacity() const {
        double s = 0.0;
        for (const auto& g : generators) s += g.p_min;
        return s;
    }
    double max_capacity() const {
        double s = 0.0;
        for (const auto& g : generators) s += g.p_max;
        return s;
    }
};

/// Cost and constraint diagnostics for one dispatch.
struct Evaluation {
    double cost = 0.0;              // $/h, regardless of feasibility
    double balance_residual = 0.0;  // MW, sum(outputs) - demand, signed
    double limit_violation = 0.0;   // MW, total out-of-bounds magnitude
};

inline constexpr double kRepairToleranceMw = 1e-6;
inline constexpr int kMaxRepairPasses = 100;

inline void validate(const EldProblem& problem) {
    if (problem.generators.empty())
        throw InputError("problem has no generators");
    for (std::size_t i = 0; i < problem.size(); ++i) {
        const Generator& g = problem.generators[i];
        if (!(g.p_min < g.p_max))
            throw InputError("generator " + std::to_string(i + 1) + ": p_min must be below p_max");
        if (g.a < 0.0)
            throw InputError("generator " + std::to_string(i + 1) + ": quadratic coefficient a must be >= 0");
        if (!std::isfinite(g.p_min) || !std::isfinite(g.p_max) || !std::isfinite(g.a) ||
            !std::isfinite(g.b) || !std::isfinite(g.c))
            throw InputError("generator " + std::to_string(i + 1) + ": non-finite field");
    }
    if (!std::isfinite(problem.demand))
        throw InputError("demand must be finite");
    if (problem.demand < problem.min_capacity() || problem.demand > problem.max_capacity())
        throw InfeasibleError("demand " + std::to_string(problem.demand) +
                              " MW outside feasible range [" + std::to_string(problem.min_capacity()) +
                              ", " + std::to_string(problem.max_capacity()) + "] MW");
}

inline void check_dimension(const EldProblem& problem, const Dispatch& d) {
    if (d.size() != problem.size())
        throw InputError("dispatch has " + std::to_string(d.size()) + " entries, problem has " +
                         std::to_string(problem.size()) + " units");
    for (double p : d)
        if (!std::isfinite(p)) throw InputError("dispatch contains a non-finite output");
}

/// Total fuel cost of a dispatch in $/h. Pure; feasibility is not required.
inline double evaluate_cost(const EldProblem& problem, const Dispatch& d) {
    check_dimension(problem, d);
    double cost = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const Generator& g = problem.generators[i];
        cost += g.a * d[i] * d[i] + g.b * d[i] + g.c;
    }
    return cost;
}

/// Signed supply-demand mismatch in MW: sum(outputs) - demand.
inline double power_balance_residual(const EldProblem& problem, const Dispatch& d) {
    check_dimension(problem, d);
    double total = 0.0;
    for (double p : d) total += p;
    return total - problem.demand;
}

/// True iff every output lies in its unit's closed [p_min, p_max] interval.
inline bool within_limits(const EldProblem& problem, const Dispatch& d) {
    check_dimension(problem, d);
    for (std::size_t i = 0; i < d.size(); ++i) {
        const Generator& g = problem.generators[i];
        if (d[i] < g.p_min || d[i] > g.p_max) return false;
    }
    return true;
}

/// Total out-of-bounds magnitude in MW, summed across units.
inline double limit_violation(const EldProblem& problem, const Dispatch& d) {
    check_dimension(problem, d);
    double v = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const Generator& g = problem.generators[i];
        v += std::max(0.0, g.p_min - d[i]) + std::max(0.0, d[i] - g.p_max);
    }
    return v;
}

inline Evaluation evaluate(const EldProblem& problem, const Dispatch& d) {
    return {evaluate_cost(problem, d), power_balance_residual(problem, d), limit_violation(problem, d)};
}

/// Projects a raw candidate onto the feasible set: clamp each output to its
/// limits, then spread the remaining balance residual equally over the units
/// that can still move toward demand, re-clamping until the residual is within
/// kRepairToleranceMw or kMaxRepairPasses is hit. Unit order is preserved.
inline Dispatch repair_dispatch(const EldProblem& problem, const Dispatch& raw) {
    check_dimension(problem, raw);
    if (problem.demand < problem.min_capacity() || problem.demand > problem.max_capacity())
        throw InfeasibleError("demand outside feasible range; dispatch cannot be repaired");

    const std::size_t n = problem.size();
    Dispatch d(n);
    for (std::size_t i = 0; i < n; ++i)
        d[i] = std::clamp(raw[i], problem.generators[i].p_min, problem.generators[i].p_max);

    for (int pass = 0; pass < kMaxRepairPasses; ++pass) {
        double total = 0.0;
        for (double p : d) total += p;
        const double residual = total - problem.demand;
        if (std::abs(residual) <= kRepairToleranceMw) break;

        // Units still free to move in the direction that shrinks the residual.
        std::size_t free_count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const Generator& g = problem.generators[i];
            if (residual < 0.0 ? d[i] < g.p_max : d[i] > g.p_min) ++free_count;
        }
        if (free_count == 0) break;

        const double share = -residual / static_cast<double>(free_count);
        for (std::size_t i = 0; i < n; ++i) {
            const Generator& g = problem.generators[i];
            if (residual < 0.0 ? d[i] < g.p_max : d[i] > g.p_min)
                d[i] = std::clamp(d[i] + share, g.p_min, g.p_max);
        }
    }
    return d;
}

/// evaluate_cost plus penalty * (balance_residual^2 + limit_violation^2).
inline double penalized_objective(const EldProblem& problem, const Dispatch& d, double penalty) {
    if (penalty < 0.0 || !std::isfinite(penalty))
        throw InputError("penalty coefficient must be finite and >= 0");
    const Evaluation e = evaluate(problem, d);
    return e.cost + penalty * (e.balance_residual * e.balance_residual +
                               e.limit_violation * e.limit_violation);
}

inline constexpr std::array<std::string_view, 3> kBuiltinProblemIds = {
    "problem1", "problem2-printed", "problem2-corrected"};

/// Built-in three-unit benchmark problems. "problem2-printed" and
/// "problem2-corrected" differ only in the quadratic coefficients; their exact
/// optima differ (about 4680.4 vs 4652.4 $/h), which the bench harness reports
/// side by side.
inline EldProblem builtin_problem(std::string_view id) {
    if (id == "problem1")
        return {{{200.0, 450.0, 0.004, 5.3, 500.0},
                 {150.0, 350.0, 0.006, 5.5, 400.0},
                 {100.0, 325.0, 0.009, 5.8, 200.0}},
                975.0};
    if (id == "problem2-printed")
        return {{{100.0, 600.0, 0.0025, 7.92, 561.0},
                 {100.0, 400.0, 0.0019, 7.85, 310.0},
                 {50.0, 200.0, 0.0048, 7.97, 78.0}},
                450.0};
    if (id == "problem2-corrected")
        return {{{100.0, 600.0, 0.001562, 7.92, 561.0},
                 {100.0, 400.0, 0.00194, 7.85, 310.0},
                 {50.0, 200.0, 0.00482, 7.97, 78.0}},
                450.0};
    throw InputError("unknown built-in problem id: " + std::string(id));
}

}  // namespace eldopt
