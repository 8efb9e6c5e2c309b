#include "bsr/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "bsr/checkpoint.hpp"
#include "bsr/spectral.hpp"

namespace bsr {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_failure(const std::string& dir, const std::string& kind,
                   const std::string& message, json extra = json::object()) {
    extra["error"] = kind;
    extra["message"] = message;
    write_text(dir + "/failure.json", extra.dump(2) + "\n");
}

void write_summary(const std::string& dir, const SweepReport& rep) {
    json s;
    s["slope"] = rep.slope;
    s["fit_residual"] = rep.fit_residual;
    s["reference"] = rep.reference;
    write_text(dir + "/summary.json", s.dump(2) + "\n");
}

Trajectory solve_trajectory(const RunConfig& cfg, const Geometry& geom,
                            const DiscreteOperators& ops, bool limit) {
    ModelParams p = cfg.model;
    if (limit) p.kind = SystemKind::Limit;
    StatePair init = make_initial(cfg.initial, geom, ops);
    if (limit) init.v = ops.trace * init.u; // enforce the trace constraint
    return run(init, geom, ops, p, cfg.time);
}

int command_trajectory(const RunConfig& cfg, const RunnerOptions& opt,
                       bool limit) {
    const Geometry geom = build_geometry(cfg.geometry);
    const DiscreteOperators ops =
        assemble(geom, cfg.model.d_u, cfg.model.d_v, cfg.trace_order);
    try {
        Trajectory traj = solve_trajectory(cfg, geom, ops, limit);
        write_trajectory_csv(opt.out_dir + "/trajectory.csv", traj);
        ModelParams p = cfg.model;
        if (limit) p.kind = SystemKind::Limit;
        save_state(opt.out_dir + "/final_state.json", traj.snapshots.back(),
                   cfg.geometry, p);
        return 0;
    } catch (const NewtonDiverged& e) {
        write_failure(opt.out_dir, "NewtonDiverged", e.what(),
                      {{"t", e.t}, {"residual", e.residual}});
        return 2;
    }
}

int command_sweep_eps(const RunConfig& cfg, const RunnerOptions& opt) {
    if (cfg.experiment.eps_list.empty()) {
        write_failure(opt.out_dir, "ConfigError",
                      "sweep-eps requires experiment.eps_list");
        return 1;
    }
    const Geometry geom = build_geometry(cfg.geometry);
    const DiscreteOperators ops =
        assemble(geom, cfg.model.d_u, cfg.model.d_v, cfg.trace_order);
    const StatePair init = make_initial(cfg.initial, geom, ops);
    try {
        // alpha = beta admits the limit-solution reference; otherwise
        // the sweep reports the defect decay rate.
        SweepReport rep =
            cfg.model.alpha == cfg.model.beta
                ? run_rate_sweep(geom, cfg.model, cfg.experiment.eps_list,
                                 cfg.time, init, opt.threads)
                : run_defect_sweep(geom, cfg.model, cfg.experiment.eps_list,
                                   cfg.time, init, opt.threads);
        write_sweep_outputs(opt.out_dir, rep);
        return 0;
    } catch (const RateFitUnreliable& e) {
        write_failure(opt.out_dir, "RateFitUnreliable", e.what());
        return 3;
    } catch (const NewtonDiverged& e) {
        write_failure(opt.out_dir, "NewtonDiverged", e.what(),
                      {{"t", e.t}, {"residual", e.residual}});
        return 2;
    }
}

int command_sweep_delta(const RunConfig& cfg, const RunnerOptions& opt) {
    if (cfg.experiment.delta_list.empty()) {
        write_failure(opt.out_dir, "ConfigError",
                      "sweep-delta requires experiment.delta_list");
        return 1;
    }
    const Geometry geom = build_geometry(cfg.geometry);
    const DiscreteOperators ops =
        assemble(geom, cfg.model.d_u, cfg.model.d_v, cfg.trace_order);
    const StatePair init = make_initial(cfg.initial, geom, ops);
    try {
        DeltaSweepReport rep =
            run_delta_sweep(geom, cfg.model, cfg.experiment.delta_list,
                            cfg.time, init, opt.threads);
        write_sweep_outputs(opt.out_dir, rep);
        // summary gains the regularization bound check
        json s;
        s["slope"] = rep.slope;
        s["fit_residual"] = rep.fit_residual;
        s["reference"] = rep.reference;
        json fmax = json::array();
        for (double x : rep.max_Fdelta) fmax.push_back(x);
        s["max_F_delta"] = fmax;
        write_text(opt.out_dir + "/summary.json", s.dump(2) + "\n");
        return 0;
    } catch (const RateFitUnreliable& e) {
        write_failure(opt.out_dir, "RateFitUnreliable", e.what());
        return 3;
    } catch (const NewtonDiverged& e) {
        write_failure(opt.out_dir, "NewtonDiverged", e.what(),
                      {{"t", e.t}, {"residual", e.residual}});
        return 2;
    }
}

int command_mms(const RunConfig& cfg, const RunnerOptions& opt) {
    try {
        MmsReport rep = run_mms(cfg.geometry.kind, cfg.model, cfg.time,
                                cfg.experiment.mms_levels, cfg.trace_order);
        json s;
        s["spatial_order"] = rep.spatial_order;
        s["temporal_order"] = rep.temporal_order;
        json sp = json::array(), tp = json::array();
        for (auto& [h, e] : rep.spatial_points) sp.push_back({h, e});
        for (auto& [dt, e] : rep.temporal_points) tp.push_back({dt, e});
        s["spatial_points"] = sp;
        s["temporal_points"] = tp;
        write_text(opt.out_dir + "/summary.json", s.dump(2) + "\n");
        return 0;
    } catch (const OrderRegression& e) {
        write_failure(opt.out_dir, "OrderRegression", e.what(),
                      {{"observed", e.observed}, {"expected", e.expected}});
        return 4;
    } catch (const NewtonDiverged& e) {
        write_failure(opt.out_dir, "NewtonDiverged", e.what(),
                      {{"t", e.t}, {"residual", e.residual}});
        return 2;
    }
}

int command_galerkin(const RunConfig& cfg, const RunnerOptions& opt) {
    if (cfg.geometry.kind != GeomKind::Interval) {
        write_failure(opt.out_dir, "ConfigError",
                      "galerkin requires interval geometry");
        return 1;
    }
    const Geometry geom = build_geometry(cfg.geometry);
    const DiscreteOperators ops =
        assemble(geom, cfg.model.d_u, cfg.model.d_v, cfg.trace_order);
    const StatePair init = make_initial(cfg.initial, geom, ops);

    // Continuous initial profile matching the grid data by piecewise
    // linear interpolation of the cell values.
    auto u0 = [&](double x) {
        const int nb = geom.num_bulk();
        const double h = 1.0 / nb;
        double s = (x - 0.5 * h) / h;
        int i = int(std::floor(s));
        if (i < 0) return init.u[0];
        if (i >= nb - 1) return init.u[nb - 1];
        const double w = s - i;
        return (1.0 - w) * init.u[i] + w * init.u[i + 1];
    };
    try {
        GalerkinSystem sys = project_initial(
            u0, init.v[0], init.v[1], cfg.experiment.galerkin_modes, cfg.model);
        Trajectory traj = run_galerkin(sys, cfg.time, geom, ops);
        write_trajectory_csv(opt.out_dir + "/trajectory.csv", traj);
        save_state(opt.out_dir + "/final_state.json", traj.snapshots.back(),
                   cfg.geometry, cfg.model);
        return 0;
    } catch (const NewtonDiverged& e) {
        write_failure(opt.out_dir, "NewtonDiverged", e.what(),
                      {{"t", e.t}, {"residual", e.residual}});
        return 2;
    }
}

} // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "# bsr-lab " << kVersion << "\n";
    write_csv_header(out);
    for (const auto& r : traj.diagnostics) write_csv_row(out, r);
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_sweep_outputs(const std::string& dir, const SweepReport& rep) {
    std::ofstream out(dir + "/report.csv");
    if (!out) throw std::runtime_error("cannot open for writing: " + dir);
    out << "# bsr-lab " << kVersion << "\n";
    out << "param,err_u,err_v,defect_int,dt_used,newton_avg_iters,excluded_flag\n";
    for (const auto& r : rep.records)
        out << g(r.param) << "," << g(r.err_u) << "," << g(r.err_v) << ","
            << g(r.defect_int) << "," << g(r.dt_used) << ","
            << g(r.newton_avg_iters) << "," << (r.excluded ? 1 : 0) << "\n";
    out.close();
    write_summary(dir, rep);
}

int execute(const std::string& command, const RunConfig& cfg,
            const RunnerOptions& opt) {
    fs::create_directories(opt.out_dir);
    if (command == "solve") return command_trajectory(cfg, opt, false);
    if (command == "limit") return command_trajectory(cfg, opt, true);
    if (command == "sweep-eps") return command_sweep_eps(cfg, opt);
    if (command == "sweep-delta") return command_sweep_delta(cfg, opt);
    if (command == "mms") return command_mms(cfg, opt);
    if (command == "galerkin") return command_galerkin(cfg, opt);
    return 64; // unknown command
}

} // namespace bsr
