#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "eldopt/common.hpp"
#include "eldopt/eld.hpp"
#include "eldopt/random.hpp"

namespace eldopt {

/// Artificial bee colony parameters. `limit` is the trial count after which a
/// stagnant food source is abandoned; unset, it defaults to
/// colony_size * number of units.
struct AbcConfig {
    int colony_size = 10;
    std::optional<int> limit;
    StopCriteria stop;
};

inline void validate(const AbcConfig& c) {
    if (c.colony_size < 2) throw InputError("colony_size must be >= 2");
    if (c.limit && *c.limit < 1) throw InputError("limit must be >= 1");
    validate(c.stop);
}

struct AbcState {
    std::vector<Dispatch> food_sources;   // feasible, MW
    std::vector<double> costs;            // $/h
    std::vector<int> trial_counters;
    Dispatch best_source;                 // persistent memory
    double best_cost = 0.0;
};

/// The neighborhood move on one coordinate: x_ij + phi * (x_ij - x_kj).
inline double candidate_component(double x_ij, double x_kj, double phi) {
    return x_ij + phi * (x_ij - x_kj);
}

/// Roulette weights from costs: fitness 1/(1 + cost) for cost >= 0, else
/// 1 + |cost|; normalized to sum to 1.
inline std::vector<double> onlooker_probabilities(const std::vector<double>& costs) {
    if (costs.empty()) throw InputError("onlooker probabilities need at least one source");
    std::vector<double> fit(costs.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < costs.size(); ++i) {
        fit[i] = costs[i] >= 0.0 ? 1.0 / (1.0 + costs[i]) : 1.0 + std::abs(costs[i]);
        sum += fit[i];
    }
    for (double& f : fit) f /= sum;
    return fit;
}

class AbcOptimizer {
public:
    AbcOptimizer(EldProblem problem, AbcConfig config, std::uint64_t seed)
        : problem_(std::move(problem)), config_(config), rng_(seed) {
        validate(problem_);
        validate(config_);
        limit_ = config_.limit.value_or(config_.colony_size * static_cast<int>(problem_.size()));

        const std::size_t sn = static_cast<std::size_t>(config_.colony_size);
        const std::size_t n = problem_.size();
        state_.food_sources.reserve(sn);
        for (std::size_t i = 0; i < sn; ++i) {
            Dispatch raw(n);
            for (std::size_t j = 0; j < n; ++j)
                raw[j] = rng_.uniform(problem_.generators[j].p_min, problem_.generators[j].p_max);
            state_.food_sources.push_back(repair_dispatch(problem_, raw));
        }
        state_.costs.resize(sn);
        for (std::size_t i = 0; i < sn; ++i)
            state_.costs[i] = evaluate_tracked(state_.food_sources[i]);
        state_.trial_counters.assign(sn, 0);

        std::size_t best = 0;
        for (std::size_t i = 1; i < sn; ++i)
            if (state_.costs[i] < state_.costs[best]) best = i;
        state_.best_source = state_.food_sources[best];
        state_.best_cost = state_.costs[best];
    }

    /// Builds the one-coordinate neighbor of source i against a chosen partner
    /// and greedily accepts it: the source is replaced only on strict cost
    /// improvement (counter reset), otherwise its trial counter grows.
    /// Returns true when the candidate was accepted.
    bool try_candidate(std::size_t i, std::size_t dim, std::size_t partner, double phi) {
        Dispatch candidate = state_.food_sources[i];
        candidate[dim] = candidate_component(state_.food_sources[i][dim],
                                             state_.food_sources[partner][dim], phi);
        candidate = repair_dispatch(problem_, candidate);
        const double cost = evaluate_tracked(candidate);
        if (cost < state_.costs[i]) {
            state_.food_sources[i] = std::move(candidate);
            state_.costs[i] = cost;
            state_.trial_counters[i] = 0;
            if (cost < state_.best_cost) {
                state_.best_source = state_.food_sources[i];
                state_.best_cost = cost;
            }
            return true;
        }
        ++state_.trial_counters[i];
        return false;
    }

    /// One employed or onlooker attempt on source i. Draw order: dimension,
    /// partner (uniform over the other sources), phi in [-1, 1).
    bool neighbor_attempt(std::size_t i) {
        const std::size_t dim = rng_.uniform_index(problem_.size());
        std::size_t partner = rng_.uniform_index(state_.food_sources.size() - 1);
        if (partner >= i) ++partner;
        const double phi = rng_.uniform(-1.0, 1.0);
        return try_candidate(i, dim, partner, phi);
    }

    void employed_phase() {
        for (std::size_t i = 0; i < state_.food_sources.size(); ++i) neighbor_attempt(i);
    }

    /// Onlookers reinforce profitable sources: colony_size roulette selections
    /// against probabilities fixed at the start of the phase.
    void onlooker_phase() {
        const std::vector<double> probs = onlooker_probabilities(state_.costs);
        for (int t = 0; t < config_.colony_size; ++t) {
            const double u = rng_.uniform01();
            double cumulative = 0.0;
            std::size_t pick = probs.size() - 1;
            for (std::size_t i = 0; i < probs.size(); ++i) {
                cumulative += probs[i];
                if (u < cumulative) {
                    pick = i;
                    break;
                }
            }
            neighbor_attempt(pick);
        }
    }

    /// Abandons at most one source per cycle: the one whose trial counter
    /// tops the limit (lowest index on ties) is replaced by a fresh random
    /// repaired source. The best-source memory always survives.
    void scout_phase() {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < state_.trial_counters.size(); ++i)
            if (state_.trial_counters[i] > state_.trial_counters[worst]) worst = i;
        if (state_.trial_counters[worst] <= limit_) return;

        Dispatch raw(problem_.size());
        for (std::size_t j = 0; j < problem_.size(); ++j)
            raw[j] = rng_.uniform(problem_.generators[j].p_min, problem_.generators[j].p_max);
        state_.food_sources[worst] = repair_dispatch(problem_, raw);
        state_.costs[worst] = evaluate_tracked(state_.food_sources[worst]);
        state_.trial_counters[worst] = 0;
        if (state_.costs[worst] < state_.best_cost) {
            state_.best_source = state_.food_sources[worst];
            state_.best_cost = state_.costs[worst];
        }
    }

    void cycle() {
        employed_phase();
        onlooker_phase();
        scout_phase();
    }

    RunReport run() {
        const auto start = SteadyClock::now();
        ConvergenceTrace trace;
        std::vector<std::uint64_t> evals;
        long iteration = 0;
        while (!should_stop(config_.stop, trace, iteration)) {
            cycle();
            ++iteration;
            trace.best_cost_per_iteration.push_back(state_.best_cost);
            evals.push_back(evaluations_);
        }
        return finish_run(problem_, state_.best_source, state_.best_cost, std::move(trace),
                          std::move(evals), evaluations_, rng_.seed(), elapsed_seconds(start));
    }

    const AbcState& state() const { return state_; }
    int limit() const { return limit_; }
    std::uint64_t evaluations() const { return evaluations_; }

private:
    double evaluate_tracked(const Dispatch& d) {
        ++evaluations_;
        return evaluate_cost(problem_, d);
    }

    EldProblem problem_;
    AbcConfig config_;
    RngStream rng_;
    AbcState state_;
    int limit_ = 0;
    std::uint64_t evaluations_ = 0;
};

inline RunReport run_abc(const EldProblem& problem, const AbcConfig& config, std::uint64_t seed) {
    return AbcOptimizer(problem, config, seed).run();
}

}  // namespace eldopt
