// Test-support reference implementations, kept independent of the library's
// solver path: a nested-grid minimizer over the power-balance simplex for 2-
// and 3-unit problems, and random problem/dispatch generators.
#pragma once

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "eldopt/eld.hpp"

namespace support {

struct BruteResult {
    eldopt::Dispatch dispatch;
    double cost = std::numeric_limits<double>::infinity();
};

inline double quad_cost(const eldopt::EldProblem& problem, const eldopt::Dispatch& x) {
    double total = 0.0;
    for (std::size_t i = 0; i < problem.size(); ++i) {
        const eldopt::Generator& g = problem.generators[i];
        total += g.a * x[i] * x[i] + g.b * x[i] + g.c;
    }
    return total;
}

// Exhaustive grid search over the balance-feasible set, repeatedly refined
// around the incumbent until the grid step drops below final_step (MW).
inline BruteResult brute_force_min(const eldopt::EldProblem& problem, double final_step = 0.005) {
    const std::size_t n = problem.size();
    if (n != 2 && n != 3) throw std::invalid_argument("brute_force_min handles 2 or 3 units");
    const double demand = problem.demand;
    BruteResult best;

    if (n == 2) {
        const eldopt::Generator& g0 = problem.generators[0];
        const eldopt::Generator& g1 = problem.generators[1];
        const double full_lo = std::max(g0.p_min, demand - g1.p_max);
        const double full_hi = std::min(g0.p_max, demand - g1.p_min);
        double lo = full_lo, hi = full_hi;
        const int steps = 400;
        while (true) {
            const double step = (hi - lo) / steps;
            for (int k = 0; k <= steps; ++k) {
                const double p0 = (step > 0.0) ? lo + k * step : lo;
                const eldopt::Dispatch x = {p0, demand - p0};
                const double cost = quad_cost(problem, x);
                if (cost < best.cost) {
                    best.cost = cost;
                    best.dispatch = x;
                }
                if (step == 0.0) break;
            }
            if (hi - lo <= final_step || (hi - lo) / steps <= final_step) break;
            const double half = 2.0 * (hi - lo) / steps;
            lo = std::max(full_lo, best.dispatch[0] - half);
            hi = std::min(full_hi, best.dispatch[0] + half);
        }
        return best;
    }

    const eldopt::Generator& g0 = problem.generators[0];
    const eldopt::Generator& g1 = problem.generators[1];
    const eldopt::Generator& g2 = problem.generators[2];
    double lo0 = g0.p_min, hi0 = g0.p_max, lo1 = g1.p_min, hi1 = g1.p_max;
    int steps = 120;
    while (true) {
        const double step0 = (hi0 - lo0) / steps;
        const double step1 = (hi1 - lo1) / steps;
        bool found = false;
        for (int i = 0; i <= steps; ++i) {
            const double p0 = (step0 > 0.0) ? lo0 + i * step0 : lo0;
            for (int j = 0; j <= steps; ++j) {
                const double p1 = (step1 > 0.0) ? lo1 + j * step1 : lo1;
                const double p2 = demand - p0 - p1;
                if (p2 < g2.p_min || p2 > g2.p_max) continue;
                found = true;
                const eldopt::Dispatch x = {p0, p1, p2};
                const double cost = quad_cost(problem, x);
                if (cost < best.cost) {
                    best.cost = cost;
                    best.dispatch = x;
                }
                if (step1 == 0.0) break;
            }
            if (step0 == 0.0) break;
        }
        if (!found) {
            steps *= 2;  // feasible band thinner than the grid; look closer
            continue;
        }
        const double width0 = hi0 - lo0;
        const double width1 = hi1 - lo1;
        if ((width0 <= final_step || width0 / steps <= final_step) &&
            (width1 <= final_step || width1 / steps <= final_step))
            break;
        const double half0 = 2.0 * width0 / steps;
        const double half1 = 2.0 * width1 / steps;
        lo0 = std::max(g0.p_min, best.dispatch[0] - half0);
        hi0 = std::min(g0.p_max, best.dispatch[0] + half0);
        lo1 = std::max(g1.p_min, best.dispatch[1] - half1);
        hi1 = std::min(g1.p_max, best.dispatch[1] + half1);
        steps = 120;
    }
    return best;
}

inline eldopt::EldProblem random_problem(std::mt19937_64& rng, int n_min, int n_max) {
    std::uniform_int_distribution<int> n_dist(n_min, n_max);
    std::uniform_real_distribution<double> a_dist(1e-4, 1e-2);
    std::uniform_real_distribution<double> b_dist(1.0, 10.0);
    std::uniform_real_distribution<double> c_dist(0.0, 500.0);
    std::uniform_real_distribution<double> pmin_dist(10.0, 100.0);
    std::uniform_real_distribution<double> range_dist(50.0, 400.0);

    eldopt::EldProblem problem;
    const int n = n_dist(rng);
    double cap_min = 0.0, cap_max = 0.0;
    for (int i = 0; i < n; ++i) {
        eldopt::Generator g;
        g.p_min = pmin_dist(rng);
        g.p_max = g.p_min + range_dist(rng);
        g.a = a_dist(rng);
        g.b = b_dist(rng);
        g.c = c_dist(rng);
        cap_min += g.p_min;
        cap_max += g.p_max;
        problem.generators.push_back(g);
    }
    const double margin = 0.05 * (cap_max - cap_min);
    std::uniform_real_distribution<double> d_dist(cap_min + margin, cap_max - margin);
    problem.demand = d_dist(rng);
    return problem;
}

// Components land in a box 50% wider than the unit limits on each side, so
// repair sees both in-bounds and out-of-bounds coordinates.
inline eldopt::Dispatch random_dispatch(const eldopt::EldProblem& problem, std::mt19937_64& rng) {
    eldopt::Dispatch x;
    for (const eldopt::Generator& g : problem.generators) {
        const double range = g.p_max - g.p_min;
        std::uniform_real_distribution<double> dist(g.p_min - 0.5 * range, g.p_max + 0.5 * range);
        x.push_back(dist(rng));
    }
    return x;
}

}  // namespace support
