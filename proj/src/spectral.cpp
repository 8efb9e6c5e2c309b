#include "bsr/spectral.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace bsr {

namespace {

double mode_trace0(int j) { return j == 0 ? 1.0 : std::sqrt(2.0); }
double mode_trace1(int j) {
    return mode_trace0(j) * (j % 2 == 0 ? 1.0 : -1.0);
}

double eval_F_scalar(double u, double v, const ModelParams& p) {
    double s = ipow_signed(u, p.alpha) - ipow_signed(v, p.beta);
    if (p.kind == SystemKind::Regularized && p.delta > 0.0)
        s /= 1.0 + p.delta * std::abs(s);
    return s;
}

void eval_dF_scalar(double u, double v, const ModelParams& p, double& dFdu,
                    double& dFdv) {
    dFdu = p.alpha * std::pow(std::abs(u), p.alpha - 1);
    dFdv = -p.beta * std::pow(std::abs(v), p.beta - 1);
    if (p.kind == SystemKind::Regularized && p.delta > 0.0) {
        const double s = ipow_signed(u, p.alpha) - ipow_signed(v, p.beta);
        const double d = 1.0 + p.delta * std::abs(s);
        dFdu /= d * d;
        dFdv /= d * d;
    }
}

} // namespace

double GalerkinSystem::trace_left() const {
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += a[j] * mode_trace0(j);
    return s;
}

double GalerkinSystem::trace_right() const {
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += a[j] * mode_trace1(j);
    return s;
}

GalerkinSystem project_initial(const std::function<double(double)>& u0,
                               double v0_left, double v0_right, int m,
                               const ModelParams& p) {
    if (m < 1) throw std::invalid_argument("project_initial: m must be >= 1");
    GalerkinSystem sys;
    sys.m = m;
    sys.params = p;
    sys.a.setZero(m);
    sys.b << v0_left, v0_right;
    // Composite Simpson on a fine uniform grid.
    const int N = 4096;
    const double h = 1.0 / N;
    for (int j = 0; j < m; ++j) {
        auto phi = [j](double x) {
            return j == 0 ? 1.0 : std::sqrt(2.0) * std::cos(j * M_PI * x);
        };
        double s = u0(0.0) * phi(0.0) + u0(1.0) * phi(1.0);
        for (int i = 1; i < N; ++i) {
            const double x = i * h;
            s += (i % 2 ? 4.0 : 2.0) * u0(x) * phi(x);
        }
        sys.a[j] = s * h / 3.0;
    }
    return sys;
}

Eigen::VectorXd galerkin_rhs(const GalerkinSystem& sys) {
    const ModelParams& p = sys.params;
    const int m = sys.m;
    const double u0 = sys.trace_left();
    const double u1 = sys.trace_right();
    const double F0 = eval_F_scalar(u0, sys.b[0], p);
    const double F1 = eval_F_scalar(u1, sys.b[1], p);
    const double inv_eps = 1.0 / p.epsilon;

    Eigen::VectorXd rhs(m + 2);
    for (int j = 0; j < m; ++j) {
        const double lambda_j = (j * M_PI) * (j * M_PI);
        rhs[j] = -p.d_u * lambda_j * sys.a[j] -
                 p.alpha * inv_eps * (F0 * mode_trace0(j) + F1 * mode_trace1(j));
    }
    rhs[m] = p.beta * inv_eps * F0;
    rhs[m + 1] = p.beta * inv_eps * F1;
    return rhs;
}

Eigen::VectorXd reconstruct(const GalerkinSystem& sys,
                            const std::vector<double>& x) {
    Eigen::VectorXd u(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        double s = sys.a[0];
        for (int j = 1; j < sys.m; ++j)
            s += sys.a[j] * std::sqrt(2.0) * std::cos(j * M_PI * x[i]);
        u[i] = s;
    }
    return u;
}

namespace {

// Backward-Euler residual and Jacobian of the coefficient ODE.
Eigen::VectorXd be_residual(const GalerkinSystem& sys,
                            const Eigen::VectorXd& y_old, double dt) {
    const int n = sys.m + 2;
    Eigen::VectorXd y(n);
    y.head(sys.m) = sys.a;
    y[sys.m] = sys.b[0];
    y[sys.m + 1] = sys.b[1];
    return (y - y_old) / dt - galerkin_rhs(sys);
}

Eigen::MatrixXd be_jacobian(const GalerkinSystem& sys, double dt) {
    const ModelParams& p = sys.params;
    const int m = sys.m;
    const int n = m + 2;
    const double u0 = sys.trace_left();
    const double u1 = sys.trace_right();
    double dF0du, dF0dv, dF1du, dF1dv;
    eval_dF_scalar(u0, sys.b[0], p, dF0du, dF0dv);
    eval_dF_scalar(u1, sys.b[1], p, dF1du, dF1dv);
    const double inv_eps = 1.0 / p.epsilon;

    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < m; ++j) {
        const double lambda_j = (j * M_PI) * (j * M_PI);
        J(j, j) += 1.0 / dt + p.d_u * lambda_j;
        for (int k = 0; k < m; ++k)
            J(j, k) += p.alpha * inv_eps *
                       (dF0du * mode_trace0(k) * mode_trace0(j) +
                        dF1du * mode_trace1(k) * mode_trace1(j));
        J(j, m) += p.alpha * inv_eps * dF0dv * mode_trace0(j);
        J(j, m + 1) += p.alpha * inv_eps * dF1dv * mode_trace1(j);
    }
    for (int k = 0; k < m; ++k) {
        J(m, k) = -p.beta * inv_eps * dF0du * mode_trace0(k);
        J(m + 1, k) = -p.beta * inv_eps * dF1du * mode_trace1(k);
    }
    J(m, m) = 1.0 / dt - p.beta * inv_eps * dF0dv;
    J(m + 1, m + 1) = 1.0 / dt - p.beta * inv_eps * dF1dv;
    return J;
}

void unpack(GalerkinSystem& sys, const Eigen::VectorXd& y) {
    sys.a = y.head(sys.m);
    sys.b[0] = y[sys.m];
    sys.b[1] = y[sys.m + 1];
}

Eigen::VectorXd pack(const GalerkinSystem& sys) {
    Eigen::VectorXd y(sys.m + 2);
    y.head(sys.m) = sys.a;
    y[sys.m] = sys.b[0];
    y[sys.m + 1] = sys.b[1];
    return y;
}

} // namespace

Trajectory run_galerkin(GalerkinSystem sys, const TimeStepperConfig& cfg,
                        const Geometry& geom, const DiscreteOperators& ops) {
    cfg.validate();
    if (geom.kind != GeomKind::Interval)
        throw std::invalid_argument("run_galerkin: interval geometry required");

    std::vector<double> xs(geom.bulk_x.begin(), geom.bulk_x.end());
    auto snapshot = [&](const GalerkinSystem& s) {
        StatePair st;
        st.u = reconstruct(s, xs);
        st.v.resize(2);
        st.v << s.b[0], s.b[1];
        st.t = s.t;
        return st;
    };

    Trajectory traj;
    {
        StatePair st = snapshot(sys);
        traj.snapshots.push_back(st);
        traj.diagnostics.push_back(
            compute_record(st, geom, ops, sys.params, cfg.entropy_shift));
    }

    const double span = cfg.t_end - sys.t;
    const long n_steps = std::lround(std::ceil(span / cfg.dt - 1e-9));
    for (long k = 0; k < n_steps; ++k) {
        const double dt = std::min(cfg.dt, cfg.t_end - sys.t);
        if (dt <= 0.0) break;
        const Eigen::VectorXd y_old = pack(sys);
        sys.t += dt;

        Eigen::VectorXd r = be_residual(sys, y_old, dt);
        double rnorm = r.norm();
        const double rscale = std::max(1.0, rnorm);
        int iter = 0;
        while (rnorm > cfg.newton_tol) {
            if (iter >= cfg.newton_max_iter)
                throw NewtonDiverged(sys.t, rnorm, iter);
            ++iter;
            const Eigen::MatrixXd J = be_jacobian(sys, dt);
            const Eigen::VectorXd d = J.partialPivLu().solve(r);
            Eigen::VectorXd y = pack(sys) - d;
            unpack(sys, y);
            r = be_residual(sys, y_old, dt);
            const double rn = r.norm();
            if (rn <= cfg.newton_tol * rscale && d.norm() <= cfg.newton_tol) {
                rnorm = rn;
                break;
            }
            rnorm = rn;
        }
        traj.total_steps += 1;
        traj.total_newton_iterations += iter;

        if ((k + 1) % cfg.snapshot_every == 0 || k + 1 == n_steps) {
            StatePair st = snapshot(sys);
            traj.snapshots.push_back(st);
            traj.diagnostics.push_back(
                compute_record(st, geom, ops, sys.params, cfg.entropy_shift));
        }
    }
    return traj;
}

} // namespace bsr
