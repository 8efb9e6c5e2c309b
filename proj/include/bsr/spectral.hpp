#ifndef BSR_SPECTRAL_HPP
#define BSR_SPECTRAL_HPP

#include <functional>

#include "bsr/stepper.hpp"

namespace bsr {

/// Galerkin system on the unit interval: bulk projected onto the
/// Neumann cosine eigenbasis phi_0 = 1, phi_j = sqrt(2) cos(j pi x)
/// with eigenvalues (j pi)^2; the surface basis at the two endpoints is
/// the identity. Serves as an independent oracle for the
/// finite-difference solver.
struct GalerkinSystem {
    int m = 1;
    ModelParams params;
    Eigen::VectorXd a;  // bulk mode coefficients, length m
    Eigen::Vector2d b;  // endpoint values (x=0, x=1)
    double t = 0.0;

    double trace_left() const;   // u(0) = sum a_j phi_j(0)
    double trace_right() const;  // u(1)
};

/// a_j(0) = int u0 phi_j by composite Simpson; b(0) = v0 directly.
GalerkinSystem project_initial(const std::function<double(double)>& u0,
                               double v0_left, double v0_right, int m,
                               const ModelParams& p);

/// Time derivative of (a, b): projected diffusion plus endpoint
/// reaction flux (F or F_delta per params).
Eigen::VectorXd galerkin_rhs(const GalerkinSystem& sys);

/// Series evaluation of the bulk field at given points.
Eigen::VectorXd reconstruct(const GalerkinSystem& sys,
                            const std::vector<double>& x);

/// Backward Euler + Newton on the (m+2)-dimensional ODE system;
/// snapshots are reconstructed on the given interval geometry so the
/// standard diagnostics apply.
Trajectory run_galerkin(GalerkinSystem sys, const TimeStepperConfig& cfg,
                        const Geometry& geom, const DiscreteOperators& ops);

} // namespace bsr

#endif
