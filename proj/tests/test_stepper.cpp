#include <doctest.h>

#include <cmath>

#include "bsr/stepper.hpp"

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

TEST_CASE("equilibrium is a fixed point of the implicit step") {
    const Geometry g = build_interval(16);
    const DiscreteOperators ops = assemble(g, 1.0, 0.0);
    const ModelParams p = make_params(2, 3, 0.01);
    StatePair s;
    s.u = Vec::Ones(16);
    s.v = Vec::Ones(2);
    TimeStepperConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 0.1;
    NewtonStats stats;
    const StatePair next = step(s, cfg.dt, ops, p, cfg, nullptr, &stats);
    CHECK((next.u - s.u).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((next.v - s.v).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(stats.iterations == 0); // residual already below tolerance
}

TEST_CASE("mass is conserved to rounding over a stiff nonlinear run") {
    const Geometry g = build_disk(8, 16);
    const DiscreteOperators ops = assemble(g, 1.0, 0.5);
    const ModelParams p = make_params(3, 2, 1e-3);
    StatePair init;
    init.u.resize(g.num_bulk());
    for (int i = 0; i < g.num_bulk(); ++i)
        init.u[i] = 1.0 + 0.3 * g.bulk_x[i];
    init.v = Vec::Constant(g.num_surf(), 0.5);
    TimeStepperConfig cfg;
    cfg.dt = 5e-3;
    cfg.t_end = 0.1;
    const Trajectory traj = run(init, g, ops, p, cfg);
    const double m0 = traj.diagnostics.front().mass;
    for (const auto& r : traj.diagnostics)
        CHECK(std::abs(r.mass - m0) / std::abs(m0) < 1e-12);
}

TEST_CASE("entropies decrease monotonically along the flow") {
    const Geometry g = build_interval(32);
    const DiscreteOperators ops = assemble(g, 1.0, 0.0);
    const ModelParams p = make_params(2, 2, 0.05);
    StatePair init;
    init.u.resize(32);
    for (int i = 0; i < 32; ++i)
        init.u[i] = 1.0 + 0.5 * std::sin(M_PI * g.bulk_x[i]);
    init.v = ops.trace * init.u;
    TimeStepperConfig cfg;
    cfg.dt = 2e-3;
    cfg.t_end = 0.2;
    const Trajectory traj = run(init, g, ops, p, cfg);
    const double slack = 10.0 * cfg.newton_tol;
    for (size_t k = 1; k < traj.diagnostics.size(); ++k) {
        CHECK(traj.diagnostics[k].entropy1 <=
              traj.diagnostics[k - 1].entropy1 + slack);
        CHECK(traj.diagnostics[k].entropy2 <=
              traj.diagnostics[k - 1].entropy2 + slack);
        CHECK(traj.diagnostics[k].entropy3 <=
              traj.diagnostics[k - 1].entropy3 + slack);
        CHECK(traj.diagnostics[k].log_entropy <=
              traj.diagnostics[k - 1].log_entropy + slack);
    }
}

TEST_CASE("extreme stiffness equilibrates the boundary quasi-statically") {
    const Geometry g = build_interval(24);
    const DiscreteOperators ops = assemble(g, 1.0, 0.0);
    const ModelParams p = make_params(1, 2, 1e-8);
    StatePair init;
    init.u = Vec::Ones(24);
    init.v = Vec::Zero(2);
    TimeStepperConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.05;
    const Trajectory traj = run(init, g, ops, p, cfg);
    // after the first implicit step the defect must sit on the reaction
    // equilibrium manifold up to O(eps)
    CHECK(traj.diagnostics.back().defect_L2G < 1e-5);
    CHECK(traj.diagnostics.back().min_u > 0.0);
    CHECK(traj.diagnostics.back().min_v > 0.0);
}

TEST_CASE("Newton divergence is reported with context") {
    const Geometry g = build_interval(8);
    const DiscreteOperators ops = assemble(g, 1.0, 0.0);
    const ModelParams p = make_params(3, 3, 1e-6);
    StatePair init;
    init.u = Vec::Constant(8, 5.0);
    init.v = Vec::Zero(2);
    TimeStepperConfig cfg;
    cfg.dt = 10.0;
    cfg.t_end = 10.0;
    cfg.newton_max_iter = 1;
    cfg.backtracking = false;
    CHECK_THROWS_AS(run(init, g, ops, p, cfg), NewtonDiverged);
}

TEST_CASE("runs reject negative initial data and bad configs") {
    const Geometry g = build_interval(8);
    const DiscreteOperators ops = assemble(g, 1.0, 0.0);
    const ModelParams p = make_params(1, 1, 0.1);
    StatePair init;
    init.u = Vec::Ones(8);
    init.v = Vec::Constant(2, -0.5);
    TimeStepperConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 0.05;
    CHECK_THROWS_AS(run(init, g, ops, p, cfg), std::invalid_argument);

    TimeStepperConfig bad = cfg;
    bad.dt = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.snapshot_every = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("backward Euler error shrinks linearly in dt") {
    const Geometry g = build_interval(16);
    const DiscreteOperators ops = assemble(g, 1.0, 0.0);
    const ModelParams p = make_params(2, 1, 0.1);
    StatePair init;
    init.u.resize(16);
    for (int i = 0; i < 16; ++i)
        init.u[i] = 1.2 + 0.4 * std::cos(M_PI * g.bulk_x[i]);
    init.v = ops.trace * init.u;
    auto final_u = [&](double dt) {
        TimeStepperConfig cfg;
        cfg.dt = dt;
        cfg.t_end = 0.1;
        return run(init, g, ops, p, cfg).snapshots.back().u;
    };
    const Vec ref = final_u(1e-4);
    const double e1 = (final_u(4e-3) - ref).cwiseAbs().maxCoeff();
    const double e2 = (final_u(2e-3) - ref).cwiseAbs().maxCoeff();
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.15));
}
