#ifndef BSR_EXPERIMENTS_HPP
#define BSR_EXPERIMENTS_HPP

#include <string>
#include <utility>
#include <vector>

#include "bsr/spectral.hpp"
#include "bsr/stepper.hpp"

namespace bsr {

class RateFitUnreliable : public std::runtime_error {
  public:
    explicit RateFitUnreliable(const std::string& why)
        : std::runtime_error("rate fit unreliable: " + why) {}
};

class OrderRegression : public std::runtime_error {
  public:
    OrderRegression(const std::string& what, double observed, double expected);
    double observed, expected;
};

struct SweepRecord {
    double param = 0.0;
    double err_u = 0.0;       // L2(Omega) error vs reference at T
    double err_v = 0.0;       // L2(Gamma) error vs reference at T
    double defect_int = 0.0;  // time-integrated squared defect
    double dt_used = 0.0;
    double newton_avg_iters = 0.0;
    bool excluded = false;    // below the discretization floor
};

struct SweepReport {
    std::string param_name;  // "eps" or "delta"
    std::vector<SweepRecord> records;
    double slope = 0.0;
    double fit_residual = 0.0;
    double floor_estimate = 0.0;
    std::string reference;
};

struct FitResult {
    double slope = 0.0;
    double residual = 0.0;
    std::vector<int> excluded;
};

/// Least-squares slope of log(err) vs log(param). Points with
/// err <= 3*floor_value (or err <= 0) are excluded; fewer than 3
/// surviving points raises RateFitUnreliable.
FitResult fit_slope(const std::vector<std::pair<double, double>>& points,
                    double floor_value = 0.0);

/// Convergence to the same-grid discrete Wentzell reference (alpha =
/// beta required): solves the limit system once per dt actually used,
/// the full system per eps, and fits the slope of the L2 error sum.
/// dt per eps is min(cfg.dt, 10*eps).
SweepReport run_rate_sweep(const Geometry& geom, const ModelParams& p_base,
                           const std::vector<double>& eps_list,
                           const TimeStepperConfig& cfg, const StatePair& initial,
                           int threads = 0);

/// Time-integrated squared boundary defect per eps (trapezoid over
/// per-step diagnostics); expected slope near 1.
SweepReport run_defect_sweep(const Geometry& geom, const ModelParams& p_base,
                             const std::vector<double>& eps_list,
                             const TimeStepperConfig& cfg,
                             const StatePair& initial, int threads = 0);

/// Error at T of the delta-regularized run against the delta = 0 run,
/// at fixed eps; also reports max |F_delta| observed (must be <= 1/delta).
struct DeltaSweepReport : SweepReport {
    std::vector<double> max_Fdelta;
};
DeltaSweepReport run_delta_sweep(const Geometry& geom, const ModelParams& p_base,
                                 const std::vector<double>& delta_list,
                                 const TimeStepperConfig& cfg,
                                 const StatePair& initial, int threads = 0);

/// Manufactured-solution order verification. Spatial study scales dt
/// with h^2 and measures against the analytic fields; temporal study
/// fixes the finest grid and measures against a small-dt reference.
struct MmsReport {
    std::vector<std::pair<double, double>> spatial_points;   // (h, err)
    std::vector<std::pair<double, double>> temporal_points;  // (dt, err)
    double spatial_order = 0.0;
    double temporal_order = 0.0;
};
MmsReport run_mms(GeomKind kind, const ModelParams& p,
                  const TimeStepperConfig& cfg,
                  const std::vector<int>& spatial_levels, int trace_order = 2);

/// Weighted L2 norms over the geometry quadrature.
double l2_bulk(const Geometry& geom, const Vec& x);
double l2_surf(const Geometry& geom, const Vec& x);

} // namespace bsr

#endif
