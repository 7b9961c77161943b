#include <cmath>
#include <limits>
#include <numbers>

#include <doctest.h>

#include "mrsde/constraint.hpp"
#include "mrsde/errors.hpp"
#include "mrsde/grid.hpp"
#include "mrsde/model.hpp"

using namespace mrsde;

TEST_CASE("make_grid lays out regular nodes") {
    const TimeGrid grid = make_grid(1.0, 4);
    REQUIRE(grid.nodes.size() == 5);
    CHECK(grid.nodes[0] == 0.0);
    CHECK(grid.nodes[1] == 0.25);
    CHECK(grid.nodes[2] == 0.5);
    CHECK(grid.nodes[3] == 0.75);
    CHECK(grid.nodes[4] == 1.0);

    const TimeGrid degenerate = make_grid(1.0, 1);
    CHECK(degenerate.nodes == std::vector<double>{0.0, 1.0});
}

TEST_CASE("grid endpoints and monotonicity hold for awkward (T, n)") {
    for (const double horizon : {0.1, 1.0, 3.0, 15.0, 0.7}) {
        for (const std::size_t steps : {1ul, 3ul, 7ul, 500ul, 2200ul}) {
            const TimeGrid grid = make_grid(horizon, steps);
            CHECK(grid.nodes.front() == 0.0);
            CHECK(grid.nodes.back() == horizon);
            for (std::size_t k = 1; k < grid.nodes.size(); ++k) {
                REQUIRE(grid.nodes[k] > grid.nodes[k - 1]);
            }
            // the advertised spacing is the single expression T/n, and node
            // differences agree with it to one ulp
            CHECK(grid.dt() == horizon / static_cast<double>(steps));
            for (std::size_t k = 1; k < grid.nodes.size(); ++k) {
                const double spacing = grid.nodes[k] - grid.nodes[k - 1];
                REQUIRE(std::abs(spacing - grid.dt()) <=
                        4.0 * std::numeric_limits<double>::epsilon() * grid.horizon);
            }
        }
    }
}

TEST_CASE("underbar floors to the grid") {
    const TimeGrid grid = make_grid(1.0, 4);
    CHECK(grid.underbar(0.3) == 0.25);
    CHECK(grid.underbar(0.25) == 0.25);
    CHECK(grid.underbar(0.0) == 0.0);
    CHECK(grid.underbar(1.0) == 1.0);
    CHECK(grid.underbar(0.9999) == 0.75);
    // every node maps to itself
    for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
        CHECK(grid.underbar(grid.nodes[k]) == grid.nodes[k]);
    }
}

TEST_CASE("make_grid rejects bad input") {
    CHECK_THROWS_AS(make_grid(0.0, 4), invalid_config_error);
    CHECK_THROWS_AS(make_grid(-1.0, 4), invalid_config_error);
    CHECK_THROWS_AS(make_grid(1.0, 0), invalid_config_error);
}

TEST_CASE("affine drift and diffusion evaluation") {
    ModelCoefficients model;
    model.beta = 2.0;
    model.a = 0.0;
    CHECK(eval_drift(model, 0.0, 5.0) == -2.0);

    model.a = 1.0;
    CHECK(eval_drift(model, 0.3, 1.0) == -3.0);

    ModelCoefficients zero;
    CHECK(eval_drift(zero, 0.0, 0.0) == 0.0);

    ModelCoefficients diffusion;
    diffusion.sigma = 1.0;
    CHECK(eval_diffusion(diffusion, 0.0, 7.0) == 1.0);
    diffusion.sigma = 0.0;
    diffusion.gamma = 1.0;
    CHECK(eval_diffusion(diffusion, 0.0, 4.0) == 4.0);
    diffusion.sigma = 1.0;
    CHECK(eval_diffusion(diffusion, 0.0, 0.0) == 1.0);
}

TEST_CASE("drift is affine in x") {
    ModelCoefficients model;
    model.beta = 0.7;
    model.a = 1.3;
    for (const double x : {-3.0, 0.1, 2.0, 11.0}) {
        for (const double lambda : {-2.0, 0.5, 3.0}) {
            const double lhs = eval_drift(model, 0.0, lambda * x) - eval_drift(model, 0.0, 0.0);
            const double rhs = lambda * (eval_drift(model, 0.0, x) - eval_drift(model, 0.0, 0.0));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
        }
    }
}

TEST_CASE("brownian-coefficient mode replaces the mean reversion") {
    ModelCoefficients model;
    model.beta = 1.0;
    model.epsilon = 0.05;
    model.brownian_coefficient = true;
    // drift = -(beta - eps * B * x)
    CHECK(eval_drift(model, 0.0, 2.0, 3.0) == doctest::Approx(-1.0 + 0.05 * 3.0 * 2.0));
    CHECK(eval_drift(model, 0.0, 2.0, 0.0) == -1.0);
}

TEST_CASE("general coefficient hook wins over the affine family") {
    ModelCoefficients model;
    model.beta = 99.0;
    model.drift_fn = [](double t, double x) { return t + x; };
    model.diffusion_fn = [](double, double x) { return 2.0 * x; };
    CHECK(eval_drift(model, 0.5, 1.0) == 1.5);
    CHECK(eval_diffusion(model, 0.5, 3.0) == 6.0);
}

TEST_CASE("constraint validation: linear passes with unit constants") {
    const auto spec = ConstraintSpec::linear(1.0);
    const auto probes = grid_probes(-10.0, 10.0, 512);
    const auto diag = validate_constraint(spec, probes);
    CHECK(diag.pass());
    CHECK(diag.worst_lower <= 1e-10);
    CHECK(diag.worst_upper <= 1e-10);
}

TEST_CASE("constraint validation: sin family stays inside its envelope") {
    // h'(x) = 1 + 0.9 cos(x) in [0.1, 1.9]
    auto spec = ConstraintSpec::sine(0.0, 0.9);
    spec.set_lipschitz(0.1, 1.9);
    const auto probes = grid_probes(-10.0, 10.0, 4096);
    const auto diag = validate_constraint(spec, probes);
    CHECK(diag.pass());
}

TEST_CASE("constraint validation flags a quadratic") {
    const auto spec = ConstraintSpec::custom([](double x) { return x * x; }, 1.0, 1.0);
    const std::vector<std::pair<double, double>> probes{{0.0, 2.0}};
    const auto diag = validate_constraint(spec, probes);
    CHECK(!diag.pass());
    CHECK(diag.worst_upper == doctest::Approx(2.0));  // |h(0)-h(2)| = 4 > M |x-y| = 2
}

TEST_CASE("cases i-v constraint specs pass on a dense grid") {
    const auto probes = grid_probes(-20.0, 20.0, 10000);
    // linear constraint of the four affine cases
    CHECK(validate_constraint(ConstraintSpec::linear(0.5), probes).pass());
    // sin constraint of the nonlinear case
    auto sine = ConstraintSpec::sine(std::numbers::pi / 2, 0.9);
    CHECK(sine.lower_lipschitz() == doctest::Approx(0.1));
    CHECK(sine.upper_lipschitz() == doctest::Approx(1.9));
    CHECK(validate_constraint(sine, probes).pass());
}

TEST_CASE("constraint derivatives") {
    const auto sine = ConstraintSpec::sine(0.25, 0.5);
    for (const double x : {-1.0, 0.0, 0.4, 2.0}) {
        const double fd = (sine.h(x + 5e-7) - sine.h(x - 5e-7)) / 1e-6;
        CHECK(sine.h_prime(x) == doctest::Approx(fd).epsilon(1e-6));
    }
    const auto bare = ConstraintSpec::custom([](double x) { return x; }, 1.0, 1.0);
    CHECK(!bare.has_derivatives());
    CHECK_THROWS_AS(bare.h_prime(0.0), invalid_config_error);
}
