#include "bsr.h"

#include <cmath>
#include <memory>
#include <string>

#include "bsr/checkpoint.hpp"
#include "bsr/runner.hpp"

namespace {

thread_local std::string t_last_error;

bsr_status fail(bsr_status st, const std::string& msg) {
    t_last_error = msg;
    return st;
}

template <typename F>
bsr_status guarded(F&& f) {
    try {
        return f();
    } catch (const bsr::NewtonDiverged& e) {
        return fail(BSR_ERR_SOLVER, e.what());
    } catch (const bsr::RateFitUnreliable& e) {
        return fail(BSR_ERR_EXPERIMENT, e.what());
    } catch (const bsr::OrderRegression& e) {
        return fail(BSR_ERR_EXPERIMENT, e.what());
    } catch (const bsr::ConfigError& e) {
        return fail(BSR_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(BSR_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::domain_error& e) {
        return fail(BSR_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(BSR_ERR_INTERNAL, e.what());
    }
}

} // namespace

struct bsr_config {
    bsr::RunConfig cfg;
};

struct bsr_sim {
    bsr::RunConfig cfg;
    bsr::Geometry geom;
    bsr::DiscreteOperators ops;
    bsr::StatePair state;
};

extern "C" {

const char* bsr_version_string(void) { return bsr::kVersion; }

const char* bsr_last_error(void) { return t_last_error.c_str(); }

bsr_status bsr_config_parse(const char* json_text, bsr_config** out) {
    if (!json_text || !out)
        return fail(BSR_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto* h = new bsr_config{bsr::parse_config(json_text)};
        *out = h;
        return BSR_OK;
    });
}

bsr_status bsr_config_load(const char* path, bsr_config** out) {
    if (!path || !out) return fail(BSR_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto* h = new bsr_config{bsr::load_config(path)};
        *out = h;
        return BSR_OK;
    });
}

void bsr_config_free(bsr_config* cfg) { delete cfg; }

bsr_status bsr_sim_create(const bsr_config* cfg, bsr_sim** out) {
    if (!cfg || !out) return fail(BSR_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto sim = std::make_unique<bsr_sim>();
        sim->cfg = cfg->cfg;
        sim->geom = bsr::build_geometry(cfg->cfg.geometry);
        sim->ops = bsr::assemble(sim->geom, cfg->cfg.model.d_u,
                                 cfg->cfg.model.d_v, cfg->cfg.trace_order);
        sim->state = bsr::make_initial(cfg->cfg.initial, sim->geom, sim->ops);
        if (cfg->cfg.model.kind == bsr::SystemKind::Limit)
            sim->state.v = sim->ops.trace * sim->state.u;
        *out = sim.release();
        return BSR_OK;
    });
}

void bsr_sim_free(bsr_sim* sim) { delete sim; }

bsr_status bsr_sim_advance(bsr_sim* sim, long n_steps) {
    if (!sim) return fail(BSR_ERR_INVALID_ARGUMENT, "null handle");
    if (n_steps < 0)
        return fail(BSR_ERR_INVALID_ARGUMENT, "n_steps must be nonnegative");
    return guarded([&] {
        for (long k = 0; k < n_steps; ++k)
            sim->state = bsr::step(sim->state, sim->cfg.time.dt, sim->ops,
                                   sim->cfg.model, sim->cfg.time);
        return BSR_OK;
    });
}

double bsr_sim_time(const bsr_sim* sim) {
    return sim ? sim->state.t : std::nan("");
}

bsr_status bsr_sim_sizes(const bsr_sim* sim, size_t* n_bulk, size_t* n_surf) {
    if (!sim) return fail(BSR_ERR_INVALID_ARGUMENT, "null handle");
    if (n_bulk) *n_bulk = size_t(sim->geom.num_bulk());
    if (n_surf) *n_surf = size_t(sim->geom.num_surf());
    return BSR_OK;
}

bsr_status bsr_sim_state(const bsr_sim* sim, double* u, double* v) {
    if (!sim) return fail(BSR_ERR_INVALID_ARGUMENT, "null handle");
    if (u)
        for (Eigen::Index i = 0; i < sim->state.u.size(); ++i)
            u[i] = sim->state.u[i];
    if (v)
        for (Eigen::Index i = 0; i < sim->state.v.size(); ++i)
            v[i] = sim->state.v[i];
    return BSR_OK;
}

bsr_status bsr_sim_diagnostics(const bsr_sim* sim, double out[15]) {
    if (!sim || !out) return fail(BSR_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const bsr::DiagnosticsRecord r =
            bsr::compute_record(sim->state, sim->geom, sim->ops, sim->cfg.model,
                                sim->cfg.time.entropy_shift);
        const double vals[15] = {r.t,         r.mass,        r.entropy1,
                                 r.entropy2,  r.entropy3,    r.log_entropy,
                                 r.fisher_bulk, r.fisher_surface, r.min_u,
                                 r.min_v,     r.max_u,       r.max_v,
                                 r.neg_norm,  r.defect_L2G,  r.trace_gap};
        for (int i = 0; i < 15; ++i) out[i] = vals[i];
        return BSR_OK;
    });
}

bsr_status bsr_execute(const char* command, const bsr_config* cfg,
                       const char* out_dir, int threads) {
    if (!command || !cfg || !out_dir)
        return fail(BSR_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        bsr::RunnerOptions opt;
        opt.out_dir = out_dir;
        opt.threads = threads;
        const int rc = bsr::execute(command, cfg->cfg, opt);
        if (rc == 0) return BSR_OK;
        if (rc == 64)
            return fail(BSR_ERR_INVALID_ARGUMENT,
                        std::string("unknown command: ") + command);
        if (rc == 2) return fail(BSR_ERR_SOLVER, "solver failed; see failure.json");
        if (rc == 3 || rc == 4)
            return fail(BSR_ERR_EXPERIMENT,
                        "experiment failed; see failure.json");
        return fail(BSR_ERR_INVALID_ARGUMENT, "command failed; see failure.json");
    });
}

} // extern "C"
