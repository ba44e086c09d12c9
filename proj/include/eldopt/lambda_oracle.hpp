#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "eldopt/eld.hpp"

namespace eldopt {

/// Exact equal-incremental-cost solution. Every unit not pinned at a limit
/// runs at marginal cost lambda; pinned units sit at the limit on the correct
/// side of lambda.
struct OracleSolution {
    Dispatch dispatch;
    double lambda = 0.0;  // $/MWh
    double cost = 0.0;    // $/h
    std::vector<std::size_t> binding_units;  // indices pinned at a limit
};

namespace detail {

inline double clamped_output(const Generator& g, double lambda) {
    return std::clamp((lambda - g.b) / (2.0 * g.a), g.p_min, g.p_max);
}

inline double total_output(const EldProblem& problem, double lambda) {
    double total = 0.0;
    for (const auto& g : problem.generators) total += clamped_output(g, lambda);
    return total;
}

}  // namespace detail

/// Solves the dispatch problem exactly by bisection on the incremental cost:
/// each trial lambda fixes every unit at clamp((lambda - b)/(2a), p_min, p_max)
/// and the bracket shrinks until the outputs sum to demand within tol MW.
/// Requires a strictly convex cost on every unit (a > 0).
inline OracleSolution solve_lambda_iteration(const EldProblem& problem, double tol = 1e-7) {
    validate(problem);
    if (tol <= 0.0) throw InputError("oracle tolerance must be positive");
    for (std::size_t i = 0; i < problem.size(); ++i)
        if (problem.generators[i].a <= 0.0)
            throw InputError("unit " + std::to_string(i + 1) +
                             " has a = 0; lambda iteration needs strictly convex costs");

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& g : problem.generators) {
        lo = std::min(lo, 2.0 * g.a * g.p_min + g.b);
        hi = std::max(hi, 2.0 * g.a * g.p_max + g.b);
    }

    // At lo every unit clamps to p_min, at hi to p_max, so the bracket holds
    // and total output is nondecreasing in lambda.
    double lambda = 0.5 * (lo + hi);
    const int kMaxBisections = 200;
    for (int it = 0; it < kMaxBisections; ++it) {
        lambda = 0.5 * (lo + hi);
        const double total = detail::total_output(problem, lambda);
        if (std::abs(total - problem.demand) <= tol) break;
        if (total < problem.demand)
            lo = lambda;
        else
            hi = lambda;
    }

    OracleSolution sol;
    sol.lambda = lambda;
    sol.dispatch.resize(problem.size());
    for (std::size_t i = 0; i < problem.size(); ++i) {
        const Generator& g = problem.generators[i];
        sol.dispatch[i] = detail::clamped_output(g, lambda);
        if (sol.dispatch[i] == g.p_min || sol.dispatch[i] == g.p_max)
            sol.binding_units.push_back(i);
    }
    sol.cost = evaluate_cost(problem, sol.dispatch);
    return sol;
}

}  // namespace eldopt
