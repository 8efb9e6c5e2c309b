#include "bsr/model.hpp"

#include <cmath>

namespace bsr {

void ModelParams::validate() const {
    if (alpha < 1 || beta < 1)
        throw std::invalid_argument("ModelParams: alpha, beta must be >= 1");
    if (d_u <= 0.0)
        throw std::invalid_argument("ModelParams: d_u must be positive");
    if (d_v < 0.0)
        throw std::invalid_argument("ModelParams: d_v must be nonnegative");
    if (epsilon <= 0.0)
        throw std::invalid_argument("ModelParams: epsilon must be positive");
    if (delta < 0.0)
        throw std::invalid_argument("ModelParams: delta must be nonnegative");
    if (eta < 0.0)
        throw std::invalid_argument("ModelParams: eta must be nonnegative");
}

double ipow_signed(double x, int n) {
    double a = std::abs(x);
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= a;
    return x < 0.0 ? -r : r;
}

double fpow_floor(double x, double g, double eta) {
    return std::pow(std::max(x, eta), g);
}

namespace {

constexpr double kNegTol = 1e-12;

void check_nonneg(const Vec& x, const char* what) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] < -kNegTol)
            throw std::domain_error(std::string("reaction: negative ") + what +
                                    " input signals loss of positivity");
}

// Raw reaction density, sign-preserving for transiently negative traces.
Vec eval_raw(const Vec& u_trace, const Vec& v, const ModelParams& p) {
    Vec f(u_trace.size());
    for (Eigen::Index i = 0; i < f.size(); ++i)
        f[i] = ipow_signed(u_trace[i], p.alpha) - ipow_signed(v[i], p.beta);
    return f;
}

bool use_regularization(const ModelParams& p) {
    return p.kind == SystemKind::Regularized && p.delta > 0.0;
}

Vec eval_F(const Vec& u_trace, const Vec& v, const ModelParams& p) {
    Vec f = eval_raw(u_trace, v, p);
    if (use_regularization(p))
        for (Eigen::Index i = 0; i < f.size(); ++i)
            f[i] /= 1.0 + p.delta * std::abs(f[i]);
    return f;
}

void eval_dF(const Vec& u_trace, const Vec& v, const ModelParams& p, Vec& dFdu,
             Vec& dFdv) {
    const Eigen::Index n = u_trace.size();
    dFdu.resize(n);
    dFdv.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        dFdu[i] = p.alpha * std::pow(std::abs(u_trace[i]), p.alpha - 1);
        dFdv[i] = -p.beta * std::pow(std::abs(v[i]), p.beta - 1);
    }
    if (use_regularization(p)) {
        const Vec s = eval_raw(u_trace, v, p);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = 1.0 + p.delta * std::abs(s[i]);
            dFdu[i] /= d * d;
            dFdv[i] /= d * d;
        }
    }
}

// z^gamma and gamma*z^{gamma-1}, exact for integer gamma, floored at eta
// otherwise (the limit system needs strictly positive boundary data).
Vec pow_gamma(const Vec& z, const ModelParams& p, bool check) {
    const double g = p.gamma();
    Vec r(z.size());
    if (p.gamma_is_integer()) {
        const int gi = p.alpha / p.beta;
        for (Eigen::Index i = 0; i < z.size(); ++i) r[i] = ipow_signed(z[i], gi);
    } else {
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            if (check && z[i] < p.eta)
                throw std::domain_error(
                    "residual_limit: boundary value below the positivity floor; "
                    "fractional exponent requires a positive lower bound");
            r[i] = fpow_floor(z[i], g, p.eta);
        }
    }
    return r;
}

Vec dpow_gamma(const Vec& z, const ModelParams& p) {
    const double g = p.gamma();
    Vec r(z.size());
    if (p.gamma_is_integer()) {
        const int gi = p.alpha / p.beta;
        for (Eigen::Index i = 0; i < z.size(); ++i)
            r[i] = gi * std::pow(std::abs(z[i]), gi - 1);
    } else {
        for (Eigen::Index i = 0; i < z.size(); ++i)
            r[i] = g * std::pow(std::max(z[i], p.eta), g - 1.0);
    }
    return r;
}

void append_block(std::vector<Eigen::Triplet<double>>& t, const SpMat& m,
                  int row_off, int col_off, double scale = 1.0) {
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it)
            t.emplace_back(int(it.row()) + row_off, int(it.col()) + col_off,
                           scale * it.value());
}

} // namespace

Vec reaction(const Vec& u_trace, const Vec& v, const ModelParams& p) {
    if (u_trace.size() != v.size())
        throw std::invalid_argument("reaction: dimension mismatch");
    check_nonneg(u_trace, "trace");
    check_nonneg(v, "surface");
    ModelParams q = p;
    q.kind = SystemKind::Full;
    return eval_F(u_trace, v, q);
}

Vec reaction_regularized(const Vec& u_trace, const Vec& v,
                         const ModelParams& p) {
    if (p.delta <= 0.0)
        throw std::invalid_argument("reaction_regularized: delta must be > 0");
    if (u_trace.size() != v.size())
        throw std::invalid_argument("reaction_regularized: dimension mismatch");
    check_nonneg(u_trace, "trace");
    check_nonneg(v, "surface");
    ModelParams q = p;
    q.kind = SystemKind::Regularized;
    return eval_F(u_trace, v, q);
}

void reaction_jacobian(const Vec& u_trace, const Vec& v, const ModelParams& p,
                       Vec& dFdu, Vec& dFdv) {
    check_nonneg(u_trace, "trace");
    check_nonneg(v, "surface");
    eval_dF(u_trace, v, p, dFdu, dFdv);
}

Vec residual_full(const StatePair& state_new, const StatePair& state_old,
                  double dt, const DiscreteOperators& ops, const ModelParams& p,
                  const SourceSet* src) {
    if (dt <= 0.0) throw std::invalid_argument("residual_full: dt must be > 0");
    const int nb = ops.num_bulk();
    const int ns = ops.num_surf();
    if (state_new.u.size() != nb || state_new.v.size() != ns)
        throw std::invalid_argument("residual_full: dimension mismatch");

    const double t_new = state_old.t + dt;
    const Vec tr = ops.trace * state_new.u;
    const Vec F = eval_F(tr, state_new.v, p);
    const double inv_eps = 1.0 / p.epsilon;

    Vec r(nb + ns);
    r.head(nb) = (state_new.u - state_old.u) / dt +
                 ops.bulk_stiffness * state_new.u +
                 (p.alpha * inv_eps) * (ops.flux_in * F);
    r.tail(ns) = (state_new.v - state_old.v) / dt +
                 ops.surface_stiffness * state_new.v -
                 (p.beta * inv_eps) * F;
    if (src) {
        if (src->bulk) r.head(nb) -= src->bulk(t_new);
        if (src->flux) r.head(nb) -= ops.flux_in * src->flux(t_new);
        if (src->surface) r.tail(ns) -= src->surface(t_new);
    }
    return r;
}

Vec residual_limit(const StatePair& state_new, const StatePair& state_old,
                   double dt, const DiscreteOperators& ops, const ModelParams& p,
                   const SourceSet* src) {
    if (dt <= 0.0) throw std::invalid_argument("residual_limit: dt must be > 0");
    const int nb = ops.num_bulk();
    const int ns = ops.num_surf();
    if (state_new.u.size() != nb || state_new.v.size() != ns)
        throw std::invalid_argument("residual_limit: dimension mismatch");

    const double t_new = state_old.t + dt;
    const double ratio = double(p.alpha) / double(p.beta);
    const Vec zg_new = pow_gamma(state_new.v, p, /*check=*/true);
    const Vec zg_old = pow_gamma(state_old.v, p, /*check=*/false);
    const Vec lam =
        ratio * ((zg_new - zg_old) / dt + ops.surface_stiffness * zg_new);

    Vec r(nb + ns);
    r.head(nb) = (state_new.u - state_old.u) / dt +
                 ops.bulk_stiffness * state_new.u + ops.flux_in * lam;
    r.tail(ns) = state_new.v - ops.trace * state_new.u;
    if (src && src->bulk) r.head(nb) -= src->bulk(t_new);
    return r;
}

Vec residual(const StatePair& state_new, const StatePair& state_old, double dt,
             const DiscreteOperators& ops, const ModelParams& p,
             const SourceSet* src) {
    if (p.kind == SystemKind::Limit)
        return residual_limit(state_new, state_old, dt, ops, p, src);
    return residual_full(state_new, state_old, dt, ops, p, src);
}

SpMat residual_jacobian(const StatePair& state_new, double dt,
                        const DiscreteOperators& ops, const ModelParams& p) {
    const int nb = ops.num_bulk();
    const int ns = ops.num_surf();
    const int n = nb + ns;
    std::vector<Eigen::Triplet<double>> t;

    if (p.kind == SystemKind::Limit) {
        const double ratio = double(p.alpha) / double(p.beta);
        const Vec gz = dpow_gamma(state_new.v, p);
        SpMat D(ns, ns);
        {
            std::vector<Eigen::Triplet<double>> dt_;
            for (int i = 0; i < ns; ++i) dt_.emplace_back(i, i, gz[i]);
            D.setFromTriplets(dt_.begin(), dt_.end());
        }
        SpMat dlam_dv = ratio * ((D / dt) + SpMat(ops.surface_stiffness * D));
        append_block(t, ops.bulk_stiffness, 0, 0);
        for (int i = 0; i < nb; ++i) t.emplace_back(i, i, 1.0 / dt);
        append_block(t, SpMat(ops.flux_in * dlam_dv), 0, nb);
        append_block(t, ops.trace, nb, 0, -1.0);
        for (int i = 0; i < ns; ++i) t.emplace_back(nb + i, nb + i, 1.0);
    } else {
        const Vec tr = ops.trace * state_new.u;
        Vec dFdu, dFdv;
        eval_dF(tr, state_new.v, p, dFdu, dFdv);
        const double inv_eps = 1.0 / p.epsilon;
        SpMat Du(ns, ns), Dv(ns, ns);
        {
            std::vector<Eigen::Triplet<double>> du_, dv_;
            for (int i = 0; i < ns; ++i) {
                du_.emplace_back(i, i, dFdu[i]);
                dv_.emplace_back(i, i, dFdv[i]);
            }
            Du.setFromTriplets(du_.begin(), du_.end());
            Dv.setFromTriplets(dv_.begin(), dv_.end());
        }
        append_block(t, ops.bulk_stiffness, 0, 0);
        for (int i = 0; i < nb; ++i) t.emplace_back(i, i, 1.0 / dt);
        append_block(t, SpMat(ops.flux_in * Du * ops.trace), 0, 0,
                     p.alpha * inv_eps);
        append_block(t, SpMat(ops.flux_in * Dv), 0, nb, p.alpha * inv_eps);
        append_block(t, SpMat(Du * ops.trace), nb, 0, -p.beta * inv_eps);
        append_block(t, ops.surface_stiffness, nb, nb);
        for (int i = 0; i < ns; ++i)
            t.emplace_back(nb + i, nb + i, 1.0 / dt - p.beta * inv_eps * dFdv[i]);
    }

    SpMat J(n, n);
    J.setFromTriplets(t.begin(), t.end());
    return J;
}

} // namespace bsr
