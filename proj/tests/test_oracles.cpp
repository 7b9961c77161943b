#include <cmath>
#include <functional>
#include <numbers>

#include <doctest.h>

#include "mrsde/errors.hpp"
#include "mrsde/grid.hpp"
#include "mrsde/oracles.hpp"

using namespace mrsde;

namespace {

double scan_root(const std::function<double(double)>& f, double lo, double hi) {
    const int cells = 100000;
    double a = lo, fa = f(lo);
    REQUIRE(fa * f(hi) <= 0.0);
    for (int i = 1; i <= cells; ++i) {
        const double b = lo + (hi - lo) * static_cast<double>(i) / cells;
        const double fb = f(b);
        if (fa * fb <= 0.0) {
            double x0 = a, x1 = b;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (x0 + x1);
                if (f(mid) * f(x0) <= 0.0) {
                    x1 = mid;
                } else {
                    x0 = mid;
                }
            }
            return 0.5 * (x0 + x1);
        }
        a = b;
        fa = fb;
    }
    FAIL("no sign change found");
    return 0.0;
}

OracleParams fig1_params() {
    OracleParams q;
    q.beta = 2.0;
    q.sigma = 1.0;
    q.x0 = 1.0;
    q.p = 0.5;
    return q;
}

OracleParams case_ii_params() {
    OracleParams q;
    q.beta = 2.0;
    q.a = 1.0;
    q.sigma = 1.0;
    q.x0 = 1.0;
    q.p = 0.5;
    return q;
}

}  // namespace

TEST_CASE("case i ramp") {
    const auto q = fig1_params();
    CHECK(k_case_i(1.0, q) == doctest::Approx(1.5));
    CHECK(k_case_i(0.0, q) == 0.0);
    CHECK(k_case_i((q.x0 - q.p) / q.beta, q) == doctest::Approx(0.0));
    // nondecreasing
    double prev = 0.0;
    for (double t = 0.0; t <= 2.0; t += 0.01) {
        const double k = k_case_i(t, q);
        REQUIRE(k >= prev);
        prev = k;
    }
}

TEST_CASE("case ii kink location and ramp") {
    const auto q = case_ii_params();
    const double t_star = t_star_case_ii(q);
    CHECK(t_star == doctest::Approx(0.18232155679).epsilon(1e-9));
    CHECK(k_case_ii(1.0, q) == doctest::Approx(2.0441961080).epsilon(1e-9));
    CHECK(k_case_ii(0.5 * t_star, q) == 0.0);

    // cross-check t* as the root of e^{-a t}(x0 + beta/a) - beta/a - p
    const double root = scan_root(
        [&](double t) { return std::exp(-q.a * t) * (q.x0 + q.beta / q.a) - q.beta / q.a - q.p; },
        0.0, 5.0);
    CHECK(t_star == doctest::Approx(root).epsilon(1e-9));

    // starting on the boundary: immediate ramp
    auto on_boundary = q;
    on_boundary.x0 = q.p;
    CHECK(t_star_case_ii(on_boundary) == doctest::Approx(0.0));
    CHECK(k_case_ii(0.4, on_boundary) ==
          doctest::Approx((on_boundary.a * on_boundary.p + on_boundary.beta) * 0.4));
}

TEST_CASE("case ii formula ignores the noise parameters (case iv reuse)") {
    auto q = case_ii_params();
    auto swapped = q;
    swapped.sigma = 0.0;
    swapped.gamma = 1.0;
    for (double t = 0.0; t <= 1.0; t += 0.05) {
        CHECK(k_case_ii(t, q) == k_case_ii(t, swapped));
    }
}

TEST_CASE("case iii ramp, plateau and epsilon -> 0 limit") {
    OracleParams q;
    q.beta = 1.0;
    q.epsilon = 0.05;
    q.sigma = 1.0 / (2.0 * q.epsilon);
    q.x0 = 1.0;
    q.p = 0.9;
    CHECK(t_bar_case_iii(q) == doctest::Approx(2.0));
    CHECK(t_star_case_iii(q) == doctest::Approx(0.2 / (1.0 + std::sqrt(0.9))).epsilon(1e-12));
    CHECK(k_case_iii(0.5 * t_star_case_iii(q), q) == 0.0);
    CHECK(k_case_iii(3.0, q) == doctest::Approx(0.9));
    CHECK(k_case_iii(5.0, q) == doctest::Approx(0.9));

    // continuity at the switch points
    const double t_star = t_star_case_iii(q);
    const double t_bar = t_bar_case_iii(q);
    CHECK(k_case_iii(t_star + 1e-12, q) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(std::abs(k_case_iii(t_bar - 1e-9, q) - k_case_iii(t_bar + 1e-9, q)) < 1e-7);

    // monotone on the validity window
    double prev = 0.0;
    for (double t = 0.0; t <= 5.0; t += 0.01) {
        const double k = k_case_iii(t, q);
        REQUIRE(k >= prev - 1e-14);
        prev = k;
    }

    // as epsilon -> 0 the formula degrades to the case i ramp
    OracleParams small = fig1_params();
    small.epsilon = 1e-6;
    for (double t = 0.0; t <= 1.0; t += 0.1) {
        CHECK(k_case_iii(t, small) == doctest::Approx(k_case_i(t, small)).epsilon(1e-5));
    }

    OracleParams broken = q;
    broken.x0 = 1e6;  // negative discriminant
    CHECK_THROWS_AS(k_case_iii(1.0, broken), invalid_config_error);
}

TEST_CASE("f_eval: linear when alpha = 0, matches h at t = 0") {
    auto q = case_ii_params();
    q.alpha = 0.0;
    // linear in x with slope e^{-at}
    const double t = 0.7;
    const double f0 = f_eval(t, 0.0, q);
    const double f1 = f_eval(t, 1.0, q);
    const double f2 = f_eval(t, 2.0, q);
    CHECK(f2 - f1 == doctest::Approx(f1 - f0).epsilon(1e-12));
    CHECK(f1 - f0 == doctest::Approx(std::exp(-q.a * t)).epsilon(1e-12));

    q.alpha = 0.9;
    q.p = std::numbers::pi / 2;
    for (const double x : {-1.0, 0.0, 0.5, 2.0}) {
        const double h = (q.x0 + x) + q.alpha * std::sin(q.x0 + x) - q.p;
        CHECK(f_eval(0.0, x, q) == doctest::Approx(h).epsilon(1e-12));
    }
}

TEST_CASE("f_eval agrees with an independent expression at the nonlinear regime") {
    OracleParams q;
    q.beta = 1e-2;
    q.a = 1.0;
    q.sigma = 1.0;
    q.p = std::numbers::pi / 2;
    q.alpha = 0.9;
    q.x0 = 0.9782;
    for (const double t : {0.0, 0.3, 1.0, 4.0, 15.0}) {
        for (const double x : {0.0, 1.0, 50.0}) {
            // second route: f_t + e^{-at} x with f_t = e^{-at} x0 - beta (1-e^{-at})/a
            // and E[cos] = exp(-Var/2) written through sinh
            const double decay = std::exp(-q.a * t);
            const double f_t = decay * q.x0 - q.beta * (1.0 - decay) / q.a;
            const double arg = f_t + decay * x;
            const double g =
                t == 0.0
                    ? 1.0
                    : std::exp(-decay * (q.sigma * q.sigma / (2.0 * q.a)) * std::sinh(q.a * t));
            const double expected = arg + q.alpha * g * std::sin(arg) - q.p;
            CHECK(f_eval(t, x, q) == doctest::Approx(expected).epsilon(1e-10));
        }
    }
    // strictly increasing in x
    for (const double t : {0.0, 0.5, 3.0}) {
        double prev = f_eval(t, -5.0, q);
        for (double x = -4.5; x <= 5.0; x += 0.5) {
            const double value = f_eval(t, x, q);
            REQUIRE(value > prev);
            prev = value;
        }
    }
}

TEST_CASE("case v path collapses to case ii at alpha = 0") {
    auto q = case_ii_params();
    q.alpha = 0.0;
    const std::size_t n = 512;
    const TimeGrid grid = make_grid(1.0, n);
    const double tol = 1e-11;
    const auto path = k_case_v(grid, q, tol);
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.nodes.size(); ++j) {
        worst = std::max(worst, std::abs(path[j] - k_case_ii(grid.nodes[j], q)));
    }
    CHECK(worst <= 2.0 * grid.horizon / static_cast<double>(n) + tol);
}

TEST_CASE("case v path is zero far from the boundary and nondecreasing") {
    OracleParams q;
    q.beta = 0.0;
    q.a = 1.0;
    q.sigma = 0.1;
    q.alpha = 0.5;
    q.p = 0.0;
    q.x0 = 40.0;  // far above the boundary on a short horizon
    const TimeGrid grid = make_grid(0.5, 64);
    const auto path = k_case_v(grid, q, 1e-11);
    for (const double k : path) CHECK(k == 0.0);

    OracleParams fig9;
    fig9.beta = 1e-2;
    fig9.a = 1.0;
    fig9.sigma = 1.0;
    fig9.p = std::numbers::pi / 2;
    fig9.alpha = 0.9;
    fig9.x0 = 0.9782;
    const TimeGrid long_grid = make_grid(15.0, 600);
    const auto nonlinear = k_case_v(long_grid, fig9, 1e-10);
    CHECK(nonlinear.front() == 0.0);
    for (std::size_t j = 1; j < nonlinear.size(); ++j) REQUIRE(nonlinear[j] >= nonlinear[j - 1]);
    CHECK(nonlinear.back() > 0.0);
}

TEST_CASE("case v refinement self-consistency") {
    auto q = case_ii_params();
    q.alpha = 0.4;
    q.p = 0.5;
    const std::size_t n = 256;
    const TimeGrid coarse = make_grid(1.0, n);
    const TimeGrid fine = make_grid(1.0, 2 * n);
    const double tol = 1e-11;
    const auto k_coarse = k_case_v(coarse, q, tol);
    const auto k_fine = k_case_v(fine, q, tol);
    double worst = 0.0;
    for (std::size_t j = 0; j < coarse.nodes.size(); ++j) {
        worst = std::max(worst, std::abs(k_coarse[j] - k_fine[2 * j]));
    }
    // the refinement can move each increment's weight by at most one cell
    const double bound = 1.5 * q.a * coarse.dt() * k_coarse.back() + 1e-8;
    CHECK(worst <= bound);
}

TEST_CASE("oracle paths start at zero and never decrease") {
    const TimeGrid grid = make_grid(1.0, 200);
    auto check_path = [&](OracleCaseId id, const OracleParams& q, const TimeGrid& g) {
        const auto path = oracle_k_path(id, g, q, 1e-10);
        CHECK(path.front() == 0.0);
        for (std::size_t j = 1; j < path.size(); ++j) REQUIRE(path[j] >= path[j - 1]);
    };
    check_path(OracleCaseId::case_i, fig1_params(), grid);
    check_path(OracleCaseId::case_ii, case_ii_params(), grid);
    {
        OracleParams q;
        q.beta = 1.0;
        q.epsilon = 0.05;
        q.sigma = 10.0;
        q.x0 = 1.0;
        q.p = 0.9;
        check_path(OracleCaseId::case_iii, q, make_grid(5.0, 200));
    }
    {
        auto q = case_ii_params();
        q.sigma = 0.0;
        q.gamma = 1.0;
        q.x0 = 4.0;
        q.p = 1.0;
        check_path(OracleCaseId::case_iv, q, grid);
    }
    {
        auto q = case_ii_params();
        q.alpha = 0.3;
        check_path(OracleCaseId::case_v, q, grid);
    }
}

TEST_CASE("oracle validity predicates") {
    auto q = case_ii_params();
    q.p = -3.0;  // p <= -beta/a
    CHECK_THROWS_AS(validate_oracle_params(OracleCaseId::case_ii, q), invalid_config_error);

    auto v = case_ii_params();
    v.alpha = 1.0;
    CHECK_THROWS_AS(validate_oracle_params(OracleCaseId::case_v, v), invalid_config_error);

    auto no_a = fig1_params();
    CHECK_THROWS_AS(validate_oracle_params(OracleCaseId::case_ii, no_a), invalid_config_error);

    // x0 below the threshold warns instead of failing
    auto below = case_ii_params();
    below.x0 = 1.0;
    below.p = 3.6;
    std::vector<std::string> warnings;
    validate_oracle_params(OracleCaseId::case_ii, below, &warnings);
    CHECK(!warnings.empty());
}

TEST_CASE("generator on linear and sin constraints") {
    ModelCoefficients model;
    model.beta = 2.0;
    model.a = 1.0;
    model.sigma = 1.0;

    const auto linear = ConstraintSpec::linear(0.5);
    for (const double x : {-1.0, 0.0, 2.0}) {
        CHECK(generator_apply(linear, model, 0.0, x) == doctest::Approx(-(2.0 + x)));
    }

    const auto sine = ConstraintSpec::sine(0.0, 0.6);
    for (const double x : {-2.0, 0.3, 1.7}) {
        const double b = -(model.beta + model.a * x);
        const double s = model.sigma;
        const double expected = b * (1.0 + 0.6 * std::cos(x)) - s * s * 0.6 * std::sin(x);
        CHECK(generator_apply(sine, model, 0.0, x) == doctest::Approx(expected).epsilon(1e-12));

        // finite-difference route on h itself
        const double dh = (sine.h(x + 5e-6) - sine.h(x - 5e-6)) / 1e-5;
        const double d2h = (sine.h(x + 5e-6) - 2.0 * sine.h(x) + sine.h(x - 5e-6)) / 2.5e-11;
        CHECK(generator_apply(sine, model, 0.0, x) ==
              doctest::Approx(b * dh + s * s * d2h).epsilon(1e-3));

        // the half convention moves only the second-order term
        const double half = generator_apply(sine, model, 0.0, x, SecondOrderConvention::half);
        CHECK(half == doctest::Approx(b * (1.0 + 0.6 * std::cos(x)) -
                                      0.5 * s * s * 0.6 * std::sin(x)).epsilon(1e-12));
    }

    const auto opaque = ConstraintSpec::custom([](double x) { return x; }, 1.0, 1.0);
    CHECK_THROWS_AS(generator_apply(opaque, model, 0.0, 0.0), invalid_config_error);
}

TEST_CASE("density of the reflection measure") {
    // case ii on the boundary: mean_h = 0, mean_Lh = -(beta + a p), mean_h' = 1
    const double beta = 2.0, a = 1.0, p = 0.5;
    CHECK(density_k(0.0, -(beta + a * p), 1.0, 1e-9) == doctest::Approx(beta + a * p));
    CHECK(density_k(1.0, -(beta + a * p), 1.0, 1e-9) == 0.0);
    CHECK(density_k(0.0, 0.3, 1.0, 1e-9) == 0.0);
    CHECK_THROWS_AS(density_k(0.0, -1.0, 0.0, 1e-9), invalid_config_error);

    // default detection width is the tenfold value certificate
    const auto sine = ConstraintSpec::sine(0.0, 0.9);
    CHECK(default_boundary_tol(sine, 1e-10) == doctest::Approx(10.0 * 1.9 * 1e-10));
    CHECK(density_k(5e-10, -1.0, 1.0, default_boundary_tol(sine, 1e-10)) == 1.0);
}

TEST_CASE("integrated density reproduces the closed-form compensator") {
    // case ii: E[X_t] = max(E[Y_t], p) with E[Y_t] = e^{-at}(x0 + beta/a) - beta/a
    const auto q = case_ii_params();
    const std::size_t n = 20000;
    const TimeGrid grid = make_grid(1.0, n);
    double integral = 0.0;
    double prev = 0.0;
    for (std::size_t j = 0; j < grid.nodes.size(); ++j) {
        const double t = grid.nodes[j];
        const double mean_y = std::exp(-q.a * t) * (q.x0 + q.beta / q.a) - q.beta / q.a;
        const double mean_x = std::max(mean_y, q.p);
        const double mean_h = mean_x - q.p;
        const double mean_lh = -(q.beta + q.a * mean_x);
        const double density = density_k(mean_h, mean_lh, 1.0, 1e-12);
        if (j > 0) integral += 0.5 * (density + prev) * grid.dt();
        prev = density;
    }
    const double expected = k_case_ii(1.0, q);
    CHECK(std::abs(integral - expected) <= 1e-3 * (q.a * q.p + q.beta) * grid.horizon);
}
