#ifndef BSR_OPERATORS_HPP
#define BSR_OPERATORS_HPP

#include <Eigen/Sparse>

#include "bsr/geometry.hpp"

namespace bsr {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

/// Sparse discrete operators for one (geometry, d_u, d_v) triple.
///
/// bulk_stiffness is the action of -d_u*Laplacian with the natural
/// (zero-flux) boundary condition; the reaction flux through the outer
/// boundary is applied separately through flux_in. surface_stiffness is
/// the action of -d_v*Laplace-Beltrami on the circle (zero on the
/// interval). Both have constants in their kernel and are symmetric
/// positive semidefinite under the weighted inner products.
///
/// flux_in distributes a surface flux density into the adjacent bulk
/// cell's balance (scaled by face measure / bulk weight); its weighted
/// adjoint is the surface quadrature, which is what makes the
/// stoichiometric mass exactly conserved.
struct DiscreteOperators {
    SpMat bulk_stiffness;     // Nb x Nb
    SpMat surface_stiffness;  // Ns x Ns
    SpMat flux_in;            // Nb x Ns
    SpMat trace;              // Ns x Nb
    std::vector<double> bulk_w, surf_w;
    int trace_order = 2;
    double d_u = 1.0, d_v = 0.0;

    int num_bulk() const { return static_cast<int>(bulk_w.size()); }
    int num_surf() const { return static_cast<int>(surf_w.size()); }
};

/// Assembles the operators. trace_order 1 uses the adjacent cell-center
/// value; trace_order 2 extrapolates one-sidedly to the boundary.
/// Rejects d_v > 0 on the interval (no surface diffusion there).
DiscreteOperators assemble(const Geometry& geom, double d_u, double d_v,
                           int trace_order = 2);

/// Bulk-balance contribution of a surface flux density; linear.
Vec apply_flux_coupling(const DiscreteOperators& ops, const Vec& flux_density);

} // namespace bsr

#endif
