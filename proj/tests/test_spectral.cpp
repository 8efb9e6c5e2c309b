#include <doctest.h>

#include <cmath>

#include "bsr/spectral.hpp"

using namespace bsr;

namespace {

ModelParams make_params(int a, int b, double eps) {
    ModelParams p;
    p.alpha = a;
    p.beta = b;
    p.epsilon = eps;
    return p;
}

} // namespace

TEST_CASE("cosine projection reproduces the analytic coefficients of u0 = x") {
    const ModelParams p = make_params(1, 1, 1.0);
    const GalerkinSystem sys =
        project_initial([](double x) { return x; }, 0.0, 1.0, 6, p);
    CHECK(sys.a[0] == doctest::Approx(0.5).epsilon(1e-10));
    for (int j = 1; j < 6; ++j) {
        const double exact =
            std::sqrt(2.0) * (std::pow(-1.0, j) - 1.0) / (j * M_PI * j * M_PI);
        CHECK(sys.a[j] == doctest::Approx(exact).scale(1.0).epsilon(1e-10));
    }
}

TEST_CASE("trace evaluation sums the endpoint values of the modes") {
    const ModelParams p = make_params(1, 1, 1.0);
    // smooth Neumann-compatible profile: traces should match the function
    auto u0 = [](double x) { return 2.0 + std::cos(M_PI * x); };
    const GalerkinSystem sys = project_initial(u0, 3.0, 1.0, 24, p);
    CHECK(sys.trace_left() == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(sys.trace_right() == doctest::Approx(1.0).epsilon(1e-8));
    const Vec u = reconstruct(sys, {0.25, 0.5});
    CHECK(u[0] == doctest::Approx(u0(0.25)).epsilon(1e-8));
    CHECK(u[1] == doctest::Approx(u0(0.5)).epsilon(1e-8));
}

TEST_CASE("symmetric linear single-mode system matches the closed form") {
    // alpha = beta = 1, one bulk mode (the constant), symmetric data at
    // both endpoints: a' = -(2/eps)(a - b), b' = (1/eps)(a - b), so
    // a(t) = abar + (a0 - abar) exp(-3 t / eps), abar = (a0 + 2 b0)/3.
    const double eps = 0.1, a0 = 2.0, b0 = 0.5;
    const ModelParams p = make_params(1, 1, eps);
    GalerkinSystem sys;
    sys.m = 1;
    sys.params = p;
    sys.a.resize(1);
    sys.a << a0;
    sys.b << b0, b0;

    const Geometry g = build_interval(8);
    const DiscreteOperators ops = assemble(g, 1.0, 0.0);
    TimeStepperConfig cfg;
    cfg.t_end = eps; // one relaxation time
    cfg.dt = eps / 20000.0;
    cfg.snapshot_every = 1 << 30;
    const Trajectory traj = run_galerkin(sys, cfg, g, ops);

    const double abar = (a0 + 2.0 * b0) / 3.0;
    const double exact_a = abar + (a0 - abar) * std::exp(-3.0);
    // b(t) follows from the conserved quantity a + 2b
    const double exact_b = (a0 + 2.0 * b0 - exact_a) / 2.0;
    const double got_a = traj.snapshots.back().u[0]; // constant mode value
    const double got_b = traj.snapshots.back().v[0];
    CHECK(got_a == doctest::Approx(exact_a).epsilon(1e-4));
    CHECK(got_b == doctest::Approx(exact_b).epsilon(1e-4));
}

TEST_CASE("pure diffusion decays each mode with its eigenvalue") {
    // huge eps effectively removes the boundary reaction
    const ModelParams p = make_params(1, 1, 1e12);
    auto u0 = [](double x) { return 1.0 + std::cos(M_PI * x); };
    GalerkinSystem sys = project_initial(u0, u0(0.0), u0(1.0), 8, p);
    const Geometry g = build_interval(8);
    const DiscreteOperators ops = assemble(g, 1.0, 0.0);
    TimeStepperConfig cfg;
    cfg.t_end = 0.1;
    cfg.dt = 1e-5;
    cfg.snapshot_every = 1 << 30;
    const Trajectory traj = run_galerkin(sys, cfg, g, ops);
    // mode 1 decays like exp(-pi^2 t); check a reconstructed cell value
    const double mid = traj.snapshots.back().u[3]; // x = 0.4375
    const double exact =
        1.0 + std::exp(-M_PI * M_PI * 0.1) * std::cos(M_PI * (3 + 0.5) / 8.0);
    CHECK(mid == doctest::Approx(exact).epsilon(1e-3));
}
