#ifndef BSR_STEPPER_HPP
#define BSR_STEPPER_HPP

#include <string>

#include "bsr/diagnostics.hpp"
#include "bsr/model.hpp"

namespace bsr {

struct TimeStepperConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    double newton_tol = 1e-10;
    int newton_max_iter = 50;
    bool backtracking = true;
    int snapshot_every = 1;
    double entropy_shift = 1e-8; // lambda used by the log-entropy diagnostic
    void validate() const;
};

struct NewtonStats {
    int iterations = 0;
    double final_residual = 0.0;
};

class NewtonDiverged : public std::runtime_error {
  public:
    NewtonDiverged(double t, double residual, int iterations);
    double t;
    double residual;
    int iterations;
};

/// One backward-Euler step: solves the implicit residual by damped
/// Newton with the analytic Jacobian and a sparse direct factorization.
/// Backtracking halves the update up to 20 times when the residual norm
/// does not decrease. Throws NewtonDiverged past newton_max_iter.
StatePair step(const StatePair& state, double dt, const DiscreteOperators& ops,
               const ModelParams& p, const TimeStepperConfig& cfg,
               const SourceSet* src = nullptr, NewtonStats* stats = nullptr);

struct Trajectory {
    std::vector<StatePair> snapshots;
    std::vector<DiagnosticsRecord> diagnostics;
    long total_steps = 0;
    long total_newton_iterations = 0;
    double avg_newton_iterations() const {
        return total_steps ? double(total_newton_iterations) / double(total_steps)
                           : 0.0;
    }
};

/// Repeated step() until t_end, recording diagnostics (and the state)
/// every snapshot_every steps plus the initial and final states.
Trajectory run(const StatePair& initial, const Geometry& geom,
               const DiscreteOperators& ops, const ModelParams& p,
               const TimeStepperConfig& cfg, const SourceSet* src = nullptr);

/// Weighted 2-norm over [bulk; surface] residual blocks.
double weighted_norm(const Vec& r, const DiscreteOperators& ops);

} // namespace bsr

#endif
