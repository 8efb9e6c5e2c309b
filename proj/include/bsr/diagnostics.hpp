#ifndef BSR_DIAGNOSTICS_HPP
#define BSR_DIAGNOSTICS_HPP

#include <iosfwd>
#include <map>

#include "bsr/model.hpp"

namespace bsr {

/// Every quantity the a-priori analysis controls, for one snapshot.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0; // stoichiometrically weighted total amount
    double entropy1 = 0.0, entropy2 = 0.0, entropy3 = 0.0;
    double log_entropy = 0.0;
    double log_entropy_shift = 1e-8;
    double fisher_bulk = 0.0, fisher_surface = 0.0;
    double min_u = 0.0, min_v = 0.0, max_u = 0.0, max_v = 0.0;
    double neg_norm = 0.0;
    double defect_L2G = 0.0;
    double trace_gap = 0.0;
};

/// Conserved mass of the system: beta*<u>_Omega + alpha*<v>_Gamma (for
/// the limit system the surface amount is <v^{alpha/beta}>_Gamma, the
/// limit of the surface concentration).
double mass(const StatePair& state, const Geometry& geom, const ModelParams& p);

/// E_p = 1/(p a^2 + a) int u^{pa+1} + 1/(p b^2 + b) int v^{pb+1}.
double entropy_p(const StatePair& state, const Geometry& geom,
                 const ModelParams& p, int p_exp);

/// int (u+l)(log(u+l)-1) + int (v+l)(log(v+l)-1), shift l > 0.
double log_entropy(const StatePair& state, const Geometry& geom, double shift);

/// Discrete int |grad u|^2/(u+l) and int |grad_G v|^2/(v+l); face-based
/// with harmonic-mean denominators, nonnegative by construction.
void fisher(const StatePair& state, const Geometry& geom,
            const DiscreteOperators& ops, double shift, double& bulk,
            double& surface);

/// L2(Gamma) norm of trace(u)^alpha - v^beta.
double defect(const StatePair& state, const DiscreteOperators& ops,
              const ModelParams& p);

struct PositivityInfo {
    double min_u, min_v, max_u, max_v, neg_norm, trace_gap;
};
PositivityInfo positivity_and_linf(const StatePair& state, const Geometry& geom,
                                   const DiscreteOperators& ops);

DiagnosticsRecord compute_record(const StatePair& state, const Geometry& geom,
                                 const DiscreteOperators& ops,
                                 const ModelParams& p, double shift = 1e-8);

/// Fixed CSV column order:
/// t,mass,E1,E2,E3,logE,fisher_b,fisher_s,min_u,min_v,max_u,max_v,neg_norm,defect,trace_gap
void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const DiagnosticsRecord& r);

} // namespace bsr

#endif
