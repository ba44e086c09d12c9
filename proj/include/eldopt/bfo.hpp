#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "eldopt/common.hpp"
#include "eldopt/eld.hpp"
#include "eldopt/random.hpp"

namespace eldopt {

/// Bacterial foraging parameters: population size, the chemotaxis /
/// reproduction / elimination-dispersal loop counts, swim length, dispersal
/// probability and tumble step length. `step_size` unset defaults to 10% of
/// the smallest dimension range.
struct BfoConfig {
    int n_bacteria = 10;       // S, must be even
    int n_chemotactic = 25;    // Nc
    int n_swim = 4;            // Ns
    int n_reproduction = 4;    // Nre
    int n_elimination = 2;     // Ned
    double p_ed = 0.25;
    std::optional<double> step_size;  // MW per tumble
};

inline void validate(const BfoConfig& c) {
    if (c.n_bacteria < 2 || c.n_bacteria % 2 != 0)
        throw InputError("n_bacteria must be even and >= 2");
    if (c.n_chemotactic < 1) throw InputError("n_chemotactic must be >= 1");
    if (c.n_swim < 0) throw InputError("n_swim must be >= 0");
    if (c.n_reproduction < 1) throw InputError("n_reproduction must be >= 1");
    if (c.n_elimination < 1) throw InputError("n_elimination must be >= 1");
    if (!(c.p_ed >= 0.0 && c.p_ed <= 1.0)) throw InputError("p_ed must be in [0, 1]");
    if (c.step_size && !(*c.step_size > 0.0)) throw InputError("step_size must be positive");
}

struct BfoState {
    std::vector<Dispatch> positions;  // feasible, MW
    std::vector<double> costs;        // $/h
    std::vector<double> health;       // accumulated cost over the chemotactic loop
    Dispatch best_position;           // persistent memory
    double best_cost = 0.0;
};

/// Scales v to Euclidean norm 1. The zero vector is rejected.
inline std::vector<double> unit_vector(std::vector<double> v) {
    double norm_sq = 0.0;
    for (double x : v) norm_sq += x * x;
    if (norm_sq == 0.0) throw InputError("cannot normalize the zero vector");
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : v) x *= inv;
    return v;
}

/// Random unit-length direction: components uniform in [-1, 1), normalized.
/// The measure-zero all-zero draw is redrawn.
inline std::vector<double> tumble_direction(std::size_t n_dims, RngStream& rng) {
    if (n_dims < 1) throw InputError("tumble direction needs at least one dimension");
    std::vector<double> delta(n_dims);
    for (;;) {
        bool all_zero = true;
        for (double& x : delta) {
            x = rng.uniform(-1.0, 1.0);
            if (x != 0.0) all_zero = false;
        }
        if (!all_zero) return unit_vector(std::move(delta));
    }
}

class BfoOptimizer {
public:
    BfoOptimizer(EldProblem problem, BfoConfig config, std::uint64_t seed)
        : problem_(std::move(problem)), config_(config), rng_(seed) {
        validate(problem_);
        validate(config_);

        double min_range = std::numeric_limits<double>::infinity();
        for (const auto& g : problem_.generators) min_range = std::min(min_range, g.p_max - g.p_min);
        step_size_ = config_.step_size.value_or(0.1 * min_range);

        const std::size_t s = static_cast<std::size_t>(config_.n_bacteria);
        state_.positions.reserve(s);
        for (std::size_t i = 0; i < s; ++i)
            state_.positions.push_back(repair_dispatch(problem_, random_dispatch()));
        state_.costs.resize(s);
        for (std::size_t i = 0; i < s; ++i) state_.costs[i] = evaluate_tracked(state_.positions[i]);
        state_.health.assign(s, 0.0);

        std::size_t best = 0;
        for (std::size_t i = 1; i < s; ++i)
            if (state_.costs[i] < state_.costs[best]) best = i;
        state_.best_position = state_.positions[best];
        state_.best_cost = state_.costs[best];
    }

    /// One chemotactic event for bacterium i: tumble along a fresh random unit
    /// direction (the move is kept whether or not it helps), then swim up to
    /// n_swim further steps in the same direction while each evaluation keeps
    /// strictly improving on the previous one. Every evaluated cost feeds the
    /// bacterium's health and the persistent best.
    void chemotactic_step(std::size_t i) {
        const std::vector<double> direction = tumble_direction(problem_.size(), rng_);
        double previous = state_.costs[i];
        move_along(i, direction);
        state_.health[i] += state_.costs[i];
        int swims = 0;
        while (state_.costs[i] < previous && swims < config_.n_swim) {
            previous = state_.costs[i];
            move_along(i, direction);
            state_.health[i] += state_.costs[i];
            ++swims;
        }
    }

    /// One sweep: a chemotactic event for every bacterium.
    void chemotactic_sweep() {
        for (std::size_t i = 0; i < state_.positions.size(); ++i) chemotactic_step(i);
    }

    /// Splits the population by accumulated health (lower total cost is
    /// healthier): the better half is kept and copied over the worse half,
    /// then all health counters reset. Ties keep the lower index first.
    void reproduce() {
        const std::size_t s = state_.positions.size();
        std::vector<std::size_t> order(s);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
            if (state_.health[a] != state_.health[b]) return state_.health[a] < state_.health[b];
            return a < b;
        });
        const std::size_t half = s / 2;
        std::vector<Dispatch> positions(s);
        std::vector<double> costs(s);
        for (std::size_t r = 0; r < half; ++r) {
            positions[r] = state_.positions[order[r]];
            positions[half + r] = state_.positions[order[r]];
            costs[r] = state_.costs[order[r]];
            costs[half + r] = state_.costs[order[r]];
        }
        state_.positions = std::move(positions);
        state_.costs = std::move(costs);
        state_.health.assign(s, 0.0);
    }

    /// Each bacterium is independently resampled to a fresh random feasible
    /// position with probability p_ed. The best memory is never discarded.
    void eliminate_disperse() {
        for (std::size_t i = 0; i < state_.positions.size(); ++i) {
            if (rng_.uniform01() < config_.p_ed) {
                state_.positions[i] = repair_dispatch(problem_, random_dispatch());
                state_.costs[i] = evaluate_tracked(state_.positions[i]);
                note_best(i);
            }
        }
    }

    /// Full triple loop. The trace records the persistent best after every
    /// chemotactic sweep, so reported iterations count chemotactic sweeps; the
    /// final entry also absorbs the trailing dispersal, keeping the trace end,
    /// best cost and evaluation totals consistent.
    RunReport run() {
        const auto start = SteadyClock::now();
        ConvergenceTrace trace;
        std::vector<std::uint64_t> evals;
        for (int l = 0; l < config_.n_elimination; ++l) {
            for (int k = 0; k < config_.n_reproduction; ++k) {
                for (int j = 0; j < config_.n_chemotactic; ++j) {
                    chemotactic_sweep();
                    trace.best_cost_per_iteration.push_back(state_.best_cost);
                    evals.push_back(evaluations_);
                }
                reproduce();
            }
            eliminate_disperse();
        }
        trace.best_cost_per_iteration.back() = state_.best_cost;
        evals.back() = evaluations_;
        return finish_run(problem_, state_.best_position, state_.best_cost, std::move(trace),
                          std::move(evals), evaluations_, rng_.seed(), elapsed_seconds(start));
    }

    const BfoState& state() const { return state_; }
    double step_size() const { return step_size_; }
    std::uint64_t evaluations() const { return evaluations_; }

private:
    Dispatch random_dispatch() {
        Dispatch raw(problem_.size());
        for (std::size_t j = 0; j < problem_.size(); ++j)
            raw[j] = rng_.uniform(problem_.generators[j].p_min, problem_.generators[j].p_max);
        return raw;
    }

    void move_along(std::size_t i, const std::vector<double>& direction) {
        Dispatch moved = state_.positions[i];
        for (std::size_t j = 0; j < moved.size(); ++j) moved[j] += step_size_ * direction[j];
        state_.positions[i] = repair_dispatch(problem_, moved);
        state_.costs[i] = evaluate_tracked(state_.positions[i]);
        note_best(i);
    }

    void note_best(std::size_t i) {
        if (state_.costs[i] < state_.best_cost) {
            state_.best_position = state_.positions[i];
            state_.best_cost = state_.costs[i];
        }
    }

    double evaluate_tracked(const Dispatch& d) {
        ++evaluations_;
        return evaluate_cost(problem_, d);
    }

    EldProblem problem_;
    BfoConfig config_;
    RngStream rng_;
    BfoState state_;
    double step_size_ = 0.0;
    std::uint64_t evaluations_ = 0;
};

inline RunReport run_bfo(const EldProblem& problem, const BfoConfig& config, std::uint64_t seed) {
    return BfoOptimizer(problem, config, seed).run();
}

}  // namespace eldopt
