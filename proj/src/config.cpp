#include "bsr/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bsr/expr.hpp"

namespace bsr {

using nlohmann::json;

std::string ConfigError::join(const std::vector<std::string>& v) {
    std::ostringstream os;
    os << "invalid config (" << v.size() << " violation"
       << (v.size() == 1 ? "" : "s") << "):";
    for (const auto& s : v) os << "\n  - " << s;
    return os.str();
}

namespace {

struct Checker {
    std::vector<std::string> bad;

    void require(bool ok, const std::string& msg) {
        if (!ok) bad.push_back(msg);
    }

    double num(const json& j, const std::string& path, const char* key,
               double fallback) {
        if (!j.contains(key)) return fallback;
        if (!j[key].is_number()) {
            bad.push_back(path + "." + key + ": expected a number");
            return fallback;
        }
        return j[key].get<double>();
    }
    int integer(const json& j, const std::string& path, const char* key,
                int fallback) {
        if (!j.contains(key)) return fallback;
        if (!j[key].is_number_integer()) {
            bad.push_back(path + "." + key + ": expected an integer");
            return fallback;
        }
        return j[key].get<int>();
    }
    std::string str(const json& j, const std::string& path, const char* key,
                    const std::string& fallback) {
        if (!j.contains(key)) return fallback;
        if (!j[key].is_string()) {
            bad.push_back(path + "." + key + ": expected a string");
            return fallback;
        }
        return j[key].get<std::string>();
    }

    void known_keys(const json& j, const std::string& path,
                    std::initializer_list<const char*> keys) {
        if (!j.is_object()) {
            bad.push_back(path + ": expected an object");
            return;
        }
        for (auto it = j.begin(); it != j.end(); ++it) {
            bool ok = false;
            for (const char* k : keys)
                if (it.key() == k) ok = true;
            if (!ok) bad.push_back(path + "." + it.key() + ": unknown key");
        }
    }
};

template <typename T>
std::vector<T> list_of(const json& j, const std::string& path, const char* key,
                       Checker& c) {
    std::vector<T> out;
    if (!j.contains(key)) return out;
    if (!j[key].is_array()) {
        c.bad.push_back(path + "." + key + ": expected an array of numbers");
        return out;
    }
    for (const auto& e : j[key]) {
        if (!e.is_number()) {
            c.bad.push_back(path + "." + key + ": non-numeric element");
            return out;
        }
        out.push_back(e.get<T>());
    }
    return out;
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i] >= v[i - 1]) return false;
    return true;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("JSON parse error: ") + e.what()});
    }

    Checker c;
    RunConfig cfg;
    c.known_keys(j, "config",
                 {"geometry", "model", "time", "initial", "experiment"});
    if (!c.bad.empty() && !j.is_object()) throw ConfigError(c.bad);

    if (j.contains("geometry")) {
        const json& g = j["geometry"];
        c.known_keys(g, "geometry", {"kind", "n", "n_r", "n_theta"});
        if (g.is_object()) {
            const std::string kind = c.str(g, "geometry", "kind", "interval");
            if (kind == "interval")
                cfg.geometry.kind = GeomKind::Interval;
            else if (kind == "disk")
                cfg.geometry.kind = GeomKind::Disk;
            else
                c.bad.push_back("geometry.kind: must be 'interval' or 'disk'");
            cfg.geometry.n = c.integer(g, "geometry", "n", cfg.geometry.n);
            cfg.geometry.n_r = c.integer(g, "geometry", "n_r", cfg.geometry.n_r);
            cfg.geometry.n_theta =
                c.integer(g, "geometry", "n_theta", cfg.geometry.n_theta);
        }
    }
    if (cfg.geometry.kind == GeomKind::Interval)
        c.require(cfg.geometry.n >= 3, "geometry.n: at least 3 cells required");
    else {
        c.require(cfg.geometry.n_r >= 3, "geometry.n_r: at least 3 required");
        c.require(cfg.geometry.n_theta >= 8 && cfg.geometry.n_theta % 2 == 0,
                  "geometry.n_theta: at least 8 and even required");
    }

    if (j.contains("model")) {
        const json& m = j["model"];
        c.known_keys(m, "model",
                     {"alpha", "beta", "d_u", "d_v", "epsilon", "delta", "kind",
                      "trace_order"});
        if (m.is_object()) {
            cfg.model.alpha = c.integer(m, "model", "alpha", cfg.model.alpha);
            cfg.model.beta = c.integer(m, "model", "beta", cfg.model.beta);
            cfg.model.d_u = c.num(m, "model", "d_u", cfg.model.d_u);
            cfg.model.d_v = c.num(m, "model", "d_v", cfg.model.d_v);
            cfg.model.epsilon = c.num(m, "model", "epsilon", cfg.model.epsilon);
            cfg.model.delta = c.num(m, "model", "delta", cfg.model.delta);
            cfg.trace_order = c.integer(m, "model", "trace_order", 2);
            const std::string kind = c.str(m, "model", "kind", "full");
            if (kind == "full")
                cfg.model.kind = SystemKind::Full;
            else if (kind == "regularized")
                cfg.model.kind = SystemKind::Regularized;
            else if (kind == "limit")
                cfg.model.kind = SystemKind::Limit;
            else
                c.bad.push_back(
                    "model.kind: must be 'full', 'regularized' or 'limit'");
        }
    }
    c.require(cfg.model.alpha >= 1, "model.alpha: exponents must be >= 1");
    c.require(cfg.model.beta >= 1, "model.beta: exponents must be >= 1");
    c.require(cfg.model.d_u > 0.0, "model.d_u: must be positive");
    c.require(cfg.model.d_v >= 0.0, "model.d_v: must be nonnegative");
    c.require(cfg.model.epsilon > 0.0, "model.epsilon: must be positive");
    c.require(cfg.model.delta >= 0.0, "model.delta: must be nonnegative");
    c.require(cfg.trace_order == 1 || cfg.trace_order == 2,
              "model.trace_order: must be 1 or 2");
    c.require(!(cfg.geometry.kind == GeomKind::Interval && cfg.model.d_v > 0.0),
              "model.d_v: the two-point interval boundary carries no surface "
              "diffusion; set d_v = 0 for interval geometry");
    if (cfg.model.kind == SystemKind::Regularized)
        c.require(cfg.model.delta > 0.0,
                  "model.delta: regularized kind needs delta > 0");

    if (j.contains("time")) {
        const json& t = j["time"];
        c.known_keys(t, "time",
                     {"dt", "t_end", "snapshot_every", "newton_tol",
                      "newton_max_iter", "entropy_shift"});
        if (t.is_object()) {
            cfg.time.dt = c.num(t, "time", "dt", cfg.time.dt);
            cfg.time.t_end = c.num(t, "time", "t_end", cfg.time.t_end);
            cfg.time.snapshot_every =
                c.integer(t, "time", "snapshot_every", cfg.time.snapshot_every);
            cfg.time.newton_tol =
                c.num(t, "time", "newton_tol", cfg.time.newton_tol);
            cfg.time.newton_max_iter =
                c.integer(t, "time", "newton_max_iter", cfg.time.newton_max_iter);
            cfg.time.entropy_shift =
                c.num(t, "time", "entropy_shift", cfg.time.entropy_shift);
        }
    }
    c.require(cfg.time.dt > 0.0, "time.dt: must be positive");
    c.require(cfg.time.t_end > 0.0, "time.t_end: must be positive");
    c.require(cfg.time.dt <= cfg.time.t_end + 1e-15,
              "time.dt: must not exceed t_end");
    c.require(cfg.time.newton_tol > 0.0, "time.newton_tol: must be positive");
    c.require(cfg.time.newton_max_iter >= 1,
              "time.newton_max_iter: must be >= 1");
    c.require(cfg.time.snapshot_every >= 1, "time.snapshot_every: must be >= 1");
    c.require(cfg.time.entropy_shift > 0.0,
              "time.entropy_shift: must be positive");

    if (j.contains("initial")) {
        const json& ic = j["initial"];
        c.known_keys(ic, "initial", {"preset", "u", "v"});
        if (ic.is_object()) {
            const bool has_expr = ic.contains("u") || ic.contains("v");
            if (has_expr) {
                cfg.initial.preset.clear();
                cfg.initial.u_expr = c.str(ic, "initial", "u", "");
                cfg.initial.v_expr = c.str(ic, "initial", "v", "");
                c.require(!cfg.initial.u_expr.empty() &&
                              !cfg.initial.v_expr.empty(),
                          "initial: inline data needs both 'u' and 'v'");
                for (const char* key : {"u", "v"}) {
                    const std::string& e = key[0] == 'u' ? cfg.initial.u_expr
                                                         : cfg.initial.v_expr;
                    if (e.empty()) continue;
                    try {
                        Expr::parse(e);
                    } catch (const ExprError& err) {
                        c.bad.push_back(std::string("initial.") + key + ": " +
                                        err.what());
                    }
                }
            } else {
                cfg.initial.preset =
                    c.str(ic, "initial", "preset", cfg.initial.preset);
                const bool known = cfg.initial.preset == "equilibrium" ||
                                   cfg.initial.preset == "compatible-positive" ||
                                   cfg.initial.preset == "incompatible-jump" ||
                                   cfg.initial.preset == "linear-L2";
                c.require(known, "initial.preset: unknown preset '" +
                                     cfg.initial.preset + "'");
            }
        }
    }

    if (j.contains("experiment")) {
        const json& e = j["experiment"];
        c.known_keys(e, "experiment",
                     {"eps_list", "delta_list", "mms_levels", "galerkin_modes"});
        if (e.is_object()) {
            cfg.experiment.eps_list =
                list_of<double>(e, "experiment", "eps_list", c);
            cfg.experiment.delta_list =
                list_of<double>(e, "experiment", "delta_list", c);
            auto lv = list_of<double>(e, "experiment", "mms_levels", c);
            if (!lv.empty()) {
                cfg.experiment.mms_levels.clear();
                for (double x : lv)
                    cfg.experiment.mms_levels.push_back(int(std::lround(x)));
            }
            cfg.experiment.galerkin_modes = c.integer(
                e, "experiment", "galerkin_modes", cfg.experiment.galerkin_modes);
        }
    }
    if (!cfg.experiment.eps_list.empty()) {
        c.require(strictly_decreasing(cfg.experiment.eps_list),
                  "experiment.eps_list: must be strictly decreasing");
        for (double x : cfg.experiment.eps_list)
            c.require(x > 0.0, "experiment.eps_list: values must be positive");
    }
    if (!cfg.experiment.delta_list.empty()) {
        c.require(strictly_decreasing(cfg.experiment.delta_list),
                  "experiment.delta_list: must be strictly decreasing");
        for (double x : cfg.experiment.delta_list)
            c.require(x >= 1e-8,
                      "experiment.delta_list: values must be >= 1e-8");
    }
    c.require(cfg.experiment.galerkin_modes >= 1,
              "experiment.galerkin_modes: must be >= 1");

    if (!c.bad.empty()) throw ConfigError(c.bad);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot open config file: " + path});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

Geometry build_geometry(const GeometryConfig& g) {
    return g.kind == GeomKind::Interval ? build_interval(g.n)
                                        : build_disk(g.n_r, g.n_theta);
}

StatePair make_initial(const InitialConfig& ic, const Geometry& geom,
                       const DiscreteOperators& ops) {
    const int nb = geom.num_bulk();
    const int ns = geom.num_surf();
    StatePair s;
    s.u.resize(nb);
    s.v.resize(ns);
    s.t = 0.0;

    auto vars_at = [&](double x, double y) {
        std::map<std::string, double> vars;
        vars["x"] = x;
        vars["y"] = y;
        vars["r"] = std::sqrt(x * x + y * y);
        vars["theta"] = std::atan2(y, x);
        return vars;
    };

    if (!ic.u_expr.empty()) {
        const Expr eu = Expr::parse(ic.u_expr);
        const Expr ev = Expr::parse(ic.v_expr);
        for (int i = 0; i < nb; ++i)
            s.u[i] = eu.eval(vars_at(
                geom.bulk_x[i], geom.kind == GeomKind::Disk ? geom.bulk_y[i] : 0));
        for (int i = 0; i < ns; ++i)
            s.v[i] = ev.eval(vars_at(
                geom.surf_x[i], geom.kind == GeomKind::Disk ? geom.surf_y[i] : 0));
        return s;
    }

    if (ic.preset == "equilibrium") {
        s.u.setOnes();
        s.v.setOnes();
    } else if (ic.preset == "compatible-positive") {
        if (geom.kind == GeomKind::Interval)
            for (int i = 0; i < nb; ++i)
                s.u[i] = 1.0 + 0.5 * std::sin(M_PI * geom.bulk_x[i]);
        else
            for (int i = 0; i < nb; ++i)
                s.u[i] = 1.0 + 0.3 * geom.bulk_x[i]; // 1 + 0.3 r cos(theta)
        s.v = ops.trace * s.u;
    } else if (ic.preset == "incompatible-jump") {
        s.u.setOnes();
        s.v.setZero();
    } else if (ic.preset == "linear-L2") {
        // Nonnegative but not strictly positive (touches zero).
        if (geom.kind == GeomKind::Interval)
            for (int i = 0; i < nb; ++i)
                s.u[i] = std::abs(2.0 * geom.bulk_x[i] - 1.0);
        else
            for (int i = 0; i < nb; ++i) {
                const double r = std::sqrt(geom.bulk_x[i] * geom.bulk_x[i] +
                                           geom.bulk_y[i] * geom.bulk_y[i]);
                const double th = std::atan2(geom.bulk_y[i], geom.bulk_x[i]);
                s.u[i] = 0.5 * r * (1.0 + std::cos(th));
            }
        s.v = (ops.trace * s.u).cwiseMax(0.0);
    } else {
        throw std::invalid_argument("make_initial: unknown preset '" +
                                    ic.preset + "'");
    }
    return s;
}

} // namespace bsr
