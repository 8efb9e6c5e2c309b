#ifndef BSR_MODEL_HPP
#define BSR_MODEL_HPP

#include <functional>
#include <stdexcept>

#include "bsr/operators.hpp"

namespace bsr {

enum class SystemKind { Full, Regularized, Limit };

struct ModelParams {
    int alpha = 1;
    int beta = 1;
    double d_u = 1.0;
    double d_v = 0.0;
    double epsilon = 1.0; // = 1/k
    double delta = 0.0;   // 0 means unregularized
    SystemKind kind = SystemKind::Full;
    double eta = 1e-14; // positivity floor for fractional powers

    double gamma() const { return double(alpha) / double(beta); }
    bool gamma_is_integer() const { return alpha % beta == 0; }
    void validate() const;
};

/// Bulk field u, surface field v, current time. For SystemKind::Limit,
/// u holds w and v holds the boundary trace w|_Gamma.
struct StatePair {
    Vec u;
    Vec v;
    double t = 0.0;
};

/// Optional sources for manufactured-solution runs: a bulk volumetric
/// source, a surface flux correction (distributed through flux_in), and
/// a surface volumetric source, each as a function of time.
struct SourceSet {
    std::function<Vec(double)> bulk;
    std::function<Vec(double)> flux;
    std::function<Vec(double)> surface;
};

/// Reaction density u^alpha - v^beta, componentwise. Rejects inputs
/// below -1e-12 (loss of positivity upstream).
Vec reaction(const Vec& u_trace, const Vec& v, const ModelParams& p);

/// Bounded regularization F_delta = (u^a - v^b)/(1 + delta|u^a - v^b|);
/// |result| <= 1/delta always. Requires p.delta > 0.
Vec reaction_regularized(const Vec& u_trace, const Vec& v, const ModelParams& p);

/// Componentwise partial derivatives (dF/du, dF/dv) of the reaction (or
/// of F_delta when kind == Regularized and delta > 0).
void reaction_jacobian(const Vec& u_trace, const Vec& v, const ModelParams& p,
                       Vec& dFdu, Vec& dFdv);

/// Backward-Euler residual of the full (or regularized) system,
/// layout [bulk; surface].
Vec residual_full(const StatePair& state_new, const StatePair& state_old,
                  double dt, const DiscreteOperators& ops, const ModelParams& p,
                  const SourceSet* src = nullptr);

/// Backward-Euler residual of the limit (Wentzell) system. The bulk
/// block carries the dynamical boundary flux of w^{alpha/beta}; the
/// surface block is the algebraic constraint v = trace(u).
Vec residual_limit(const StatePair& state_new, const StatePair& state_old,
                   double dt, const DiscreteOperators& ops, const ModelParams& p,
                   const SourceSet* src = nullptr);

/// Dispatch on p.kind.
Vec residual(const StatePair& state_new, const StatePair& state_old, double dt,
             const DiscreteOperators& ops, const ModelParams& p,
             const SourceSet* src = nullptr);

/// Jacobian of the residual with respect to [u; v] at state_new.
SpMat residual_jacobian(const StatePair& state_new, double dt,
                        const DiscreteOperators& ops, const ModelParams& p);

/// Integer power. Negative bases use the odd (sign-preserving)
/// extension sign(x)|x|^n, which agrees with x^n on the admissible set.
double ipow_signed(double x, int n);

/// Fractional power with the eta positivity floor applied to the base.
double fpow_floor(double x, double g, double eta);

} // namespace bsr

#endif
