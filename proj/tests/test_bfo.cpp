#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "eldopt/bfo.hpp"
#include "eldopt/lambda_oracle.hpp"
#include "eldopt/random.hpp"

using namespace eldopt;
using Catch::Approx;

namespace {

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("unit_vector normalizes and rejects zero") {
    const std::vector<double> u = unit_vector({3.0, 4.0});
    CHECK(u[0] == Approx(0.6).margin(1e-12));
    CHECK(u[1] == Approx(0.8).margin(1e-12));
    CHECK(unit_vector({-0.2}) == std::vector<double>{-1.0});
    CHECK_THROWS_AS(unit_vector({0.0, 0.0}), InputError);
}

TEST_CASE("tumble directions have unit norm") {
    RngStream rng(2025);
    for (int i = 0; i < 10000; ++i) {
        const std::vector<double> d = tumble_direction(3, rng);
        REQUIRE(std::abs(norm(d) - 1.0) <= 1e-12);
    }
    for (int i = 0; i < 100; ++i) {
        const std::vector<double> d = tumble_direction(1, rng);
        REQUIRE(std::abs(std::abs(d[0]) - 1.0) <= 1e-12);
    }
}

TEST_CASE("bfo config validation") {
    BfoConfig ok;
    CHECK_NOTHROW(validate(ok));
    BfoConfig bad = ok;
    bad.n_bacteria = 7;
    CHECK_THROWS_AS(validate(bad), InputError);
    bad = ok;
    bad.p_ed = 1.5;
    CHECK_THROWS_AS(validate(bad), InputError);
    bad = ok;
    bad.step_size = 0.0;
    CHECK_THROWS_AS(validate(bad), InputError);
    bad = ok;
    bad.n_swim = -1;
    CHECK_THROWS_AS(validate(bad), InputError);
}

TEST_CASE("step size defaults to a tenth of the narrowest range") {
    BfoOptimizer opt(builtin_problem("problem1"), BfoConfig{}, 1);
    CHECK(opt.step_size() == Approx(20.0).margin(1e-12));  // narrowest range is 200 MW
    BfoConfig custom;
    custom.step_size = 5.0;
    BfoOptimizer opt2(builtin_problem("problem1"), custom, 1);
    CHECK(opt2.step_size() == 5.0);
}

TEST_CASE("initial population is feasible with zeroed health") {
    const EldProblem p = builtin_problem("problem1");
    BfoOptimizer opt(p, BfoConfig{}, 3);
    const BfoState& s = opt.state();
    REQUIRE(s.positions.size() == 10);
    for (std::size_t i = 0; i < s.positions.size(); ++i) {
        REQUIRE(within_limits(p, s.positions[i]));
        REQUIRE(std::abs(power_balance_residual(p, s.positions[i])) <= kRepairToleranceMw);
        REQUIRE(s.costs[i] == Approx(evaluate_cost(p, s.positions[i])).margin(1e-9));
        REQUIRE(s.health[i] == 0.0);
    }
    CHECK(opt.evaluations() == 10);
}

TEST_CASE("a chemotactic sweep accumulates health and keeps feasibility") {
    const EldProblem p = builtin_problem("problem1");
    BfoOptimizer opt(p, BfoConfig{}, 14);
    opt.chemotactic_sweep();
    const BfoState& s = opt.state();
    for (std::size_t i = 0; i < s.positions.size(); ++i) {
        REQUIRE(within_limits(p, s.positions[i]));
        REQUIRE(std::abs(power_balance_residual(p, s.positions[i])) <= kRepairToleranceMw);
        // Health sums every evaluated cost, which includes the final one, and
        // all costs on this problem are positive.
        REQUIRE(s.health[i] >= s.costs[i] - 1e-9);
    }
    // Each bacterium tumbles once and swims between 0 and n_swim times.
    const std::uint64_t spent = opt.evaluations() - 10;
    CHECK(spent >= 10);
    CHECK(spent <= 10u * (1u + 4u));
}

TEST_CASE("reproduction duplicates the healthier half") {
    const EldProblem p = builtin_problem("problem1");
    BfoConfig cfg;
    cfg.n_bacteria = 4;
    BfoOptimizer opt(p, cfg, 9);
    opt.chemotactic_sweep();

    // Snapshot, then rank by accumulated health as reproduce() will.
    const BfoState before = opt.state();
    std::vector<std::size_t> order = {0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&before](std::size_t a, std::size_t b) {
        if (before.health[a] != before.health[b]) return before.health[a] < before.health[b];
        return a < b;
    });

    opt.reproduce();
    const BfoState& after = opt.state();
    REQUIRE(after.positions.size() == 4);
    for (std::size_t r = 0; r < 2; ++r) {
        CHECK(after.positions[r] == before.positions[order[r]]);
        CHECK(after.positions[2 + r] == before.positions[order[r]]);
        CHECK(after.costs[r] == before.costs[order[r]]);
        CHECK(after.costs[2 + r] == before.costs[order[r]]);
    }
    for (double h : after.health) CHECK(h == 0.0);
}

TEST_CASE("elimination-dispersal respects its probability extremes") {
    const EldProblem p = builtin_problem("problem1");
    BfoConfig keep;
    keep.p_ed = 0.0;
    BfoOptimizer opt(p, keep, 6);
    const std::vector<Dispatch> before = opt.state().positions;
    opt.eliminate_disperse();
    CHECK(opt.state().positions == before);

    BfoConfig scatter;
    scatter.p_ed = 1.0;
    BfoOptimizer opt2(p, scatter, 6);
    const double best_before = opt2.state().best_cost;
    opt2.eliminate_disperse();
    const BfoState& s = opt2.state();
    for (std::size_t i = 0; i < s.positions.size(); ++i) {
        REQUIRE(within_limits(p, s.positions[i]));
        REQUIRE(s.costs[i] == Approx(evaluate_cost(p, s.positions[i])).margin(1e-9));
    }
    CHECK(s.best_cost <= best_before);  // the memory never regresses
}

TEST_CASE("a minimal loop produces one trace point and four evaluations") {
    const EldProblem p{{{25.0, 100.0, 0.01, 1.0, 0.0}, {25.0, 100.0, 0.02, 1.2, 0.0}}, 100.0};
    BfoConfig cfg;
    cfg.n_bacteria = 2;
    cfg.n_chemotactic = 1;
    cfg.n_swim = 0;
    cfg.n_reproduction = 1;
    cfg.n_elimination = 1;
    cfg.p_ed = 0.0;
    const RunReport r = run_bfo(p, cfg, 2);
    CHECK(r.iterations_used == 1);
    CHECK(r.trace.size() == 1);
    // Two initial evaluations plus one tumble each, no swims, no dispersal.
    CHECK(r.total_evaluations == 4);
}

TEST_CASE("the default loop runs two hundred chemotactic sweeps") {
    const RunReport r = run_bfo(builtin_problem("problem1"), BfoConfig{}, 10);
    CHECK(r.iterations_used == 200);
    CHECK(r.trace.size() == 200);
    REQUIRE(r.cumulative_evaluations.size() == 200);
    CHECK(r.cumulative_evaluations.back() == r.total_evaluations);
}

TEST_CASE("two-unit positions stay on the balance line") {
    const EldProblem p{{{25.0, 100.0, 0.01, 1.0, 0.0}, {25.0, 100.0, 0.02, 1.2, 0.0}}, 110.0};
    BfoConfig cfg;
    cfg.n_chemotactic = 5;
    cfg.n_reproduction = 1;
    cfg.n_elimination = 1;
    BfoOptimizer opt(p, cfg, 19);
    for (int sweep = 0; sweep < 5; ++sweep) {
        opt.chemotactic_sweep();
        for (const Dispatch& x : opt.state().positions) {
            REQUIRE(within_limits(p, x));
            REQUIRE(std::abs(power_balance_residual(p, x)) <= kRepairToleranceMw);
        }
    }
}

TEST_CASE("bfo runs are deterministic for a fixed seed") {
    const EldProblem p = builtin_problem("problem1");
    const RunReport a = run_bfo(p, BfoConfig{}, 11);
    const RunReport b = run_bfo(p, BfoConfig{}, 11);
    CHECK(a.best_dispatch == b.best_dispatch);
    CHECK(a.best_cost == b.best_cost);
    CHECK(a.trace.best_cost_per_iteration == b.trace.best_cost_per_iteration);
    CHECK(a.cumulative_evaluations == b.cumulative_evaluations);
}

TEST_CASE("bfo closes in on the exact optimum") {
    const EldProblem p = builtin_problem("problem1");
    const double exact = solve_lambda_iteration(p).cost;
    const RunReport r = run_bfo(p, BfoConfig{}, 4);
    CHECK(r.best_cost >= exact - 1e-6);
    CHECK(r.best_cost <= exact * 1.001);
}
