#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "bsr/checkpoint.hpp"
#include "bsr/expr.hpp"
#include "bsr/runner.hpp"
#include "bsr/stepper.hpp"

using namespace bsr;

TEST_CASE("expression parser: arithmetic, precedence, functions") {
    std::map<std::string, double> vars{{"x", 0.5}};
    CHECK(Expr::parse("1+2*3").eval({}) == doctest::Approx(7.0));
    CHECK(Expr::parse("(1+2)*3").eval({}) == doctest::Approx(9.0));
    CHECK(Expr::parse("2^3^2").eval({}) == doctest::Approx(512.0)); // right-assoc
    CHECK(Expr::parse("-x^2").eval(vars) == doctest::Approx(-0.25));
    CHECK(Expr::parse("sin(pi*x)").eval(vars) == doctest::Approx(1.0));
    CHECK(Expr::parse("exp(0) + sqrt(4) - abs(-2)").eval({}) ==
          doctest::Approx(1.0));
    CHECK(Expr::parse("log(e)").eval({}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(Expr::parse("1 +"), ExprError);
    CHECK_THROWS_AS(Expr::parse("foo(1,2)"), ExprError);
    CHECK_THROWS_AS(Expr::parse("1 2"), ExprError);
    CHECK_THROWS_AS(Expr::parse("x").eval({}), ExprError); // unbound variable
}

TEST_CASE("minimal config fills documented defaults") {
    const RunConfig cfg = parse_config("{}");
    CHECK(cfg.geometry.kind == GeomKind::Interval);
    CHECK(cfg.time.dt == doctest::Approx(1e-3));
    CHECK(cfg.time.newton_tol == doctest::Approx(1e-10));
    CHECK(cfg.time.entropy_shift == doctest::Approx(1e-8));
    CHECK(cfg.trace_order == 2);
    CHECK(cfg.model.alpha == 1);
    CHECK(cfg.initial.preset == "compatible-positive");
}

TEST_CASE("config validation names the violated constraints and collects all") {
    try {
        parse_config(R"({"model":{"alpha":0,"epsilon":-1.0},
                         "geometry":{"kind":"interval"},
                         "time":{"dt":-0.5}})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(e.violations.size() >= 3);
        bool saw_alpha = false, saw_eps = false, saw_dt = false;
        for (const auto& v : e.violations) {
            if (v.find("model.alpha") != std::string::npos) saw_alpha = true;
            if (v.find("model.epsilon") != std::string::npos) saw_eps = true;
            if (v.find("time.dt") != std::string::npos) saw_dt = true;
        }
        CHECK(saw_alpha);
        CHECK(saw_eps);
        CHECK(saw_dt);
    }
    // surface diffusion on the interval boundary is a contradiction
    CHECK_THROWS_AS(
        parse_config(R"({"model":{"d_v":0.5},"geometry":{"kind":"interval"}})"),
        ConfigError);
    CHECK_THROWS_AS(parse_config("{\"bogus\":1}"), ConfigError);
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
}

TEST_CASE("initial-data presets have the advertised shapes") {
    const Geometry g = build_interval(16);
    const DiscreteOperators ops = assemble(g, 1.0, 0.0);

    InitialConfig ic;
    ic.preset = "equilibrium";
    StatePair s = make_initial(ic, g, ops);
    CHECK(s.u.isOnes());
    CHECK(s.v.isOnes());

    ic.preset = "incompatible-jump";
    s = make_initial(ic, g, ops);
    CHECK(s.u.isOnes());
    CHECK(s.v.isZero());

    ic.preset = "compatible-positive";
    s = make_initial(ic, g, ops);
    CHECK(s.u.minCoeff() > 0.0);
    CHECK((s.v - ops.trace * s.u).cwiseAbs().maxCoeff() < 1e-14);

    ic.preset = "linear-L2";
    s = make_initial(ic, g, ops);
    CHECK(s.u.minCoeff() >= 0.0);
    CHECK(s.u.minCoeff() < 0.1); // genuinely touches zero

    ic.preset = "";
    ic.u_expr = "1 + x^2";
    ic.v_expr = "2";
    s = make_initial(ic, g, ops);
    CHECK(s.u[0] == doctest::Approx(1.0 + g.bulk_x[0] * g.bulk_x[0]));
    CHECK(s.v[1] == doctest::Approx(2.0));
}

TEST_CASE("checkpoint roundtrip is bitwise exact") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    GeometryConfig gc;
    gc.kind = GeomKind::Disk;
    gc.n_r = 4;
    gc.n_theta = 8;
    ModelParams p;
    p.alpha = 2;
    p.beta = 3;
    p.epsilon = 0.37;
    StatePair s;
    s.u.resize(32);
    s.v.resize(8);
    for (int i = 0; i < 32; ++i) s.u[i] = dist(rng);
    for (int i = 0; i < 8; ++i) s.v[i] = dist(rng) * 1e-17; // tiny magnitudes too
    s.t = 0.1234567890123456789;

    const std::string text = serialize_state(s, gc, p);
    const Checkpoint cp = deserialize_state(text);
    REQUIRE(cp.state.u.size() == s.u.size());
    for (int i = 0; i < 32; ++i) CHECK(cp.state.u[i] == s.u[i]);
    for (int i = 0; i < 8; ++i) CHECK(cp.state.v[i] == s.v[i]);
    CHECK(cp.state.t == s.t);
    CHECK(cp.params.alpha == 2);
    CHECK(cp.params.epsilon == p.epsilon);
    CHECK(cp.geometry.n_theta == 8);
}

TEST_CASE("checkpoint rejects corruption explicitly") {
    GeometryConfig gc;
    gc.kind = GeomKind::Interval;
    gc.n = 4;
    ModelParams p;
    StatePair s;
    s.u = Vec::Ones(4);
    s.v = Vec::Ones(2);
    const std::string text = serialize_state(s, gc, p);

    CHECK_THROWS_AS(deserialize_state(text.substr(0, text.size() / 2)),
                    CheckpointError); // truncated
    std::string wrong = text;
    wrong.replace(wrong.find("\"schema\":1"), 10, "\"schema\":2");
    CHECK_THROWS_AS(deserialize_state(wrong), CheckpointError);
    std::string short_u = text;
    short_u.replace(short_u.find("\"n\":4"), 5, "\"n\":5");
    CHECK_THROWS_AS(deserialize_state(short_u), CheckpointError);
}

TEST_CASE("resuming from a checkpoint matches the unbroken run") {
    const Geometry g = build_interval(16);
    const DiscreteOperators ops = assemble(g, 1.0, 0.0);
    ModelParams p;
    p.alpha = 2;
    p.beta = 2;
    p.epsilon = 0.05;
    InitialConfig ic;
    ic.preset = "compatible-positive";
    const StatePair init = make_initial(ic, g, ops);
    TimeStepperConfig cfg;
    cfg.dt = 5e-3;
    cfg.t_end = 0.1;

    const Trajectory whole = run(init, g, ops, p, cfg);

    TimeStepperConfig first = cfg;
    first.t_end = 0.05;
    const Trajectory head = run(init, g, ops, p, first);

    GeometryConfig gc;
    gc.kind = GeomKind::Interval;
    gc.n = 16;
    const std::string ck = serialize_state(head.snapshots.back(), gc, p);
    const Checkpoint cp = deserialize_state(ck);

    const Trajectory tail = run(cp.state, g, ops, cp.params, cfg);
    const Vec du = tail.snapshots.back().u - whole.snapshots.back().u;
    const Vec dv = tail.snapshots.back().v - whole.snapshots.back().v;
    CHECK(du.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(dv.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("runner writes the documented artifacts for a solve") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "bsr_runner_test";
    fs::remove_all(dir);

    RunConfig cfg = parse_config(R"({
      "geometry": {"kind": "interval", "n": 16},
      "model": {"alpha": 1, "beta": 1, "epsilon": 0.1},
      "time": {"dt": 0.01, "t_end": 0.05},
      "initial": {"preset": "equilibrium"}
    })");
    RunnerOptions opt;
    opt.out_dir = dir.string();
    CHECK(execute("solve", cfg, opt) == 0);
    CHECK(fs::exists(dir / "trajectory.csv"));
    CHECK(fs::exists(dir / "final_state.json"));

    std::ifstream in(dir / "trajectory.csv");
    std::string line1, line2;
    std::getline(in, line1);
    std::getline(in, line2);
    CHECK(line1.rfind("# bsr-lab", 0) == 0);
    CHECK(line2.rfind("t,mass,E1,E2,E3,logE", 0) == 0);

    CHECK(execute("no-such-command", cfg, opt) == 64);
    fs::remove_all(dir);
}
