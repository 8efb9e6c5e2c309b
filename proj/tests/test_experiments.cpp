#include <doctest.h>

#include <cmath>

#include "bsr/experiments.hpp"

using namespace bsr;

TEST_CASE("slope fitter recovers exact power laws") {
    std::vector<std::pair<double, double>> lin = {
        {1e-1, 1e-1}, {1e-2, 1e-2}, {1e-3, 1e-3}};
    FitResult f = fit_slope(lin);
    CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.residual < 1e-12);
    CHECK(f.excluded.empty());

    std::vector<std::pair<double, double>> half = {
        {1e-1, std::sqrt(1e-1)}, {1e-2, std::sqrt(1e-2)}, {1e-3, std::sqrt(1e-3)}};
    f = fit_slope(half);
    CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("slope fitter excludes points drowned by the floor") {
    std::vector<std::pair<double, double>> pts = {
        {1e-1, 1e-1}, {1e-2, 1e-2}, {1e-3, 1e-3}, {1e-4, 5e-6}, {1e-5, 4e-6}};
    const FitResult f = fit_slope(pts, 2e-6); // 3x floor = 6e-6
    REQUIRE(f.excluded.size() == 2);
    CHECK(f.excluded[0] == 3);
    CHECK(f.excluded[1] == 4);
    CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("slope fitter refuses an unreliable fit") {
    std::vector<std::pair<double, double>> two = {{1e-1, 1e-1}, {1e-2, 1e-2}};
    CHECK_THROWS_AS(fit_slope(two), RateFitUnreliable);
    std::vector<std::pair<double, double>> drowned = {
        {1e-1, 1e-9}, {1e-2, 1e-9}, {1e-3, 1e-9}};
    CHECK_THROWS_AS(fit_slope(drowned, 1e-8), RateFitUnreliable);
    std::vector<std::pair<double, double>> badp = {
        {-1.0, 1e-1}, {1e-2, 1e-2}, {1e-3, 1e-3}};
    CHECK_THROWS_AS(fit_slope(badp), std::invalid_argument);
}

TEST_CASE("weighted L2 norms use the quadrature weights") {
    const Geometry g = build_interval(4);
    CHECK(l2_bulk(g, Vec::Constant(4, 2.0)) == doctest::Approx(2.0));
    CHECK(l2_surf(g, Vec::Constant(2, 3.0)) ==
          doctest::Approx(3.0 * std::sqrt(2.0)));
    const Geometry d = build_disk(6, 12);
    CHECK(l2_bulk(d, Vec::Constant(d.num_bulk(), 1.0)) ==
          doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("delta sweep rejects malformed parameter lists") {
    const Geometry g = build_interval(8);
    ModelParams p;
    p.alpha = p.beta = 2;
    p.epsilon = 0.1;
    TimeStepperConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 0.05;
    StatePair init;
    init.u = Vec::Ones(8);
    init.v = Vec::Ones(2);
    CHECK_THROWS_AS(
        run_delta_sweep(g, p, {1e-2, 1e-1}, cfg, init), // increasing
        std::invalid_argument);
    CHECK_THROWS_AS(run_delta_sweep(g, p, {1e-2, 1e-9}, cfg, init),
                    std::invalid_argument);
}

TEST_CASE("rate sweep demands matching exponents") {
    const Geometry g = build_interval(8);
    ModelParams p;
    p.alpha = 1;
    p.beta = 2;
    TimeStepperConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 0.05;
    StatePair init;
    init.u = Vec::Ones(8);
    init.v = Vec::Ones(2);
    CHECK_THROWS_AS(run_rate_sweep(g, p, {1e-1, 1e-2, 1e-3}, cfg, init),
                    std::invalid_argument);
}
