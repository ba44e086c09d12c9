#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "eldopt/common.hpp"
#include "eldopt/eld.hpp"
#include "eldopt/random.hpp"

namespace eldopt {

/// Global-best particle swarm parameters.
struct PsoConfig {
    int swarm_size = 20;
    double w = 0.7;    // inertia
    double c1 = 1.5;   // cognitive constant
    double c2 = 1.5;   // social constant
    double v_max_fraction = 0.5;  // of each dimension's limit range
    StopCriteria stop;
};

inline void validate(const PsoConfig& c) {
    if (c.swarm_size < 2) throw InputError("swarm_size must be >= 2");
    if (c.w < 0.0 || c.c1 < 0.0 || c.c2 < 0.0)
        throw InputError("w, c1 and c2 must be >= 0");
    if (!(c.v_max_fraction > 0.0 && c.v_max_fraction <= 1.0))
        throw InputError("v_max_fraction must be in (0, 1]");
    validate(c.stop);
}

struct PsoState {
    std::vector<Dispatch> positions;               // feasible, MW
    std::vector<std::vector<double>> velocities;   // MW per iteration
    std::vector<Dispatch> personal_best;
    std::vector<double> personal_best_cost;
    Dispatch global_best;
    double global_best_cost = 0.0;
};

/// One component of the velocity recurrence, before clamping:
/// w*v + c1*r1*(pbest - x) + c2*r2*(gbest - x).
inline double velocity_update(double v, double w, double c1, double r1, double toward_pbest,
                              double c2, double r2, double toward_gbest) {
    return w * v + c1 * r1 * toward_pbest + c2 * r2 * toward_gbest;
}

class PsoOptimizer {
public:
    /// Seeds the swarm: positions uniform per dimension inside the limits and
    /// repaired onto the balance constraint, velocities uniform within the
    /// per-dimension clamp, personal bests at the initial positions.
    PsoOptimizer(EldProblem problem, PsoConfig config, std::uint64_t seed)
        : problem_(std::move(problem)), config_(config), rng_(seed) {
        validate(problem_);
        validate(config_);

        const std::size_t n = problem_.size();
        v_max_.resize(n);
        for (std::size_t j = 0; j < n; ++j)
            v_max_[j] = config_.v_max_fraction *
                        (problem_.generators[j].p_max - problem_.generators[j].p_min);

        const std::size_t swarm = static_cast<std::size_t>(config_.swarm_size);
        state_.positions.reserve(swarm);
        for (std::size_t i = 0; i < swarm; ++i) {
            Dispatch raw(n);
            for (std::size_t j = 0; j < n; ++j)
                raw[j] = rng_.uniform(problem_.generators[j].p_min, problem_.generators[j].p_max);
            state_.positions.push_back(repair_dispatch(problem_, raw));
        }
        state_.velocities.resize(swarm, std::vector<double>(n));
        for (std::size_t i = 0; i < swarm; ++i)
            for (std::size_t j = 0; j < n; ++j)
                state_.velocities[i][j] = rng_.uniform(-v_max_[j], v_max_[j]);

        state_.personal_best = state_.positions;
        state_.personal_best_cost.resize(swarm);
        for (std::size_t i = 0; i < swarm; ++i)
            state_.personal_best_cost[i] = evaluate_tracked(state_.positions[i]);

        std::size_t best = 0;
        for (std::size_t i = 1; i < swarm; ++i)
            if (state_.personal_best_cost[i] < state_.personal_best_cost[best]) best = i;
        state_.global_best = state_.personal_best[best];
        state_.global_best_cost = state_.personal_best_cost[best];
    }

    /// Applies the velocity recurrence to every particle and dimension, with
    /// independent [0, 1) draws for the cognitive and social terms, then
    /// clamps each component to its dimension's limit.
    void update_velocities() {
        for (std::size_t i = 0; i < state_.positions.size(); ++i) {
            for (std::size_t j = 0; j < problem_.size(); ++j) {
                const double r1 = rng_.uniform01();
                const double r2 = rng_.uniform01();
                const double v = velocity_update(
                    state_.velocities[i][j], config_.w, config_.c1, r1,
                    state_.personal_best[i][j] - state_.positions[i][j], config_.c2, r2,
                    state_.global_best[j] - state_.positions[i][j]);
                state_.velocities[i][j] = std::clamp(v, -v_max_[j], v_max_[j]);
            }
        }
    }

    /// Moves every particle by its velocity, repairs the result, and refreshes
    /// the personal and global bests on strict improvement.
    void update_positions() {
        for (std::size_t i = 0; i < state_.positions.size(); ++i) {
            Dispatch moved = state_.positions[i];
            for (std::size_t j = 0; j < moved.size(); ++j) moved[j] += state_.velocities[i][j];
            state_.positions[i] = repair_dispatch(problem_, moved);
            const double cost = evaluate_tracked(state_.positions[i]);
            if (cost < state_.personal_best_cost[i]) {
                state_.personal_best[i] = state_.positions[i];
                state_.personal_best_cost[i] = cost;
                if (cost < state_.global_best_cost) {
                    state_.global_best = state_.positions[i];
                    state_.global_best_cost = cost;
                }
            }
        }
    }

    void step() {
        update_velocities();
        update_positions();
    }

    /// Iterates until the stop criteria fire and packages the run.
    RunReport run() {
        const auto start = SteadyClock::now();
        ConvergenceTrace trace;
        std::vector<std::uint64_t> evals;
        long iteration = 0;
        while (!should_stop(config_.stop, trace, iteration)) {
            step();
            ++iteration;
            trace.best_cost_per_iteration.push_back(state_.global_best_cost);
            evals.push_back(evaluations_);
        }
        return finish_run(problem_, state_.global_best, state_.global_best_cost, std::move(trace),
                          std::move(evals), evaluations_, rng_.seed(), elapsed_seconds(start));
    }

    const PsoState& state() const { return state_; }
    std::uint64_t evaluations() const { return evaluations_; }
    const std::vector<double>& velocity_limits() const { return v_max_; }

private:
    double evaluate_tracked(const Dispatch& d) {
        ++evaluations_;
        return evaluate_cost(problem_, d);
    }

    EldProblem problem_;
    PsoConfig config_;
    RngStream rng_;
    PsoState state_;
    std::vector<double> v_max_;
    std::uint64_t evaluations_ = 0;
};

inline RunReport run_pso(const EldProblem& problem, const PsoConfig& config, std::uint64_t seed) {
    return PsoOptimizer(problem, config, seed).run();
}

}  // namespace eldopt
