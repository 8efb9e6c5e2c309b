#include "bsr/operators.hpp"

#include <stdexcept>
#include <vector>

namespace bsr {

namespace {

using Trip = Eigen::Triplet<double>;

SpMat interval_bulk(const Geometry& g, double d_u) {
    const int n = g.n_bulk;
    const double h = 1.0 / n;
    const double c = d_u / (h * h);
    std::vector<Trip> t;
    t.reserve(3 * n);
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        if (i > 0) {
            t.emplace_back(i, i - 1, -c);
            diag += c;
        }
        if (i < n - 1) {
            t.emplace_back(i, i + 1, -c);
            diag += c;
        }
        t.emplace_back(i, i, diag);
    }
    SpMat A(n, n);
    A.setFromTriplets(t.begin(), t.end());
    return A;
}

SpMat disk_bulk(const Geometry& g, double d_u) {
    const int nr = g.n_r, nt = g.n_theta;
    const double dr = 1.0 / nr;
    const double dth = 2.0 * M_PI / nt;
    const int nb = nr * nt;
    std::vector<Trip> t;
    t.reserve(5 * nb);
    auto idx = [nt](int i, int j) { return i * nt + j; };
    for (int i = 0; i < nr; ++i) {
        const double r = (i + 0.5) * dr;
        // Conservative radial fluxes through faces at r_{i +- 1/2}.
        // Inner face of cell 0 sits at r=0 (zero measure); outer face of
        // the last cell carries the reaction flux, applied via flux_in.
        const double c_in = (i > 0) ? d_u * (i * dr) / (r * dr * dr) : 0.0;
        const double c_out =
            (i < nr - 1) ? d_u * ((i + 1) * dr) / (r * dr * dr) : 0.0;
        const double c_th = d_u / (r * r * dth * dth);
        for (int j = 0; j < nt; ++j) {
            const int row = idx(i, j);
            double diag = 2.0 * c_th;
            if (i > 0) {
                t.emplace_back(row, idx(i - 1, j), -c_in);
                diag += c_in;
            }
            if (i < nr - 1) {
                t.emplace_back(row, idx(i + 1, j), -c_out);
                diag += c_out;
            }
            t.emplace_back(row, idx(i, (j + 1) % nt), -c_th);
            t.emplace_back(row, idx(i, (j + nt - 1) % nt), -c_th);
            t.emplace_back(row, row, diag);
        }
    }
    SpMat A(nb, nb);
    A.setFromTriplets(t.begin(), t.end());
    return A;
}

SpMat circle_surface(const Geometry& g, double d_v) {
    const int nt = g.n_theta;
    const double dth = 2.0 * M_PI / nt;
    const double c = d_v / (dth * dth);
    std::vector<Trip> t;
    t.reserve(3 * nt);
    for (int j = 0; j < nt; ++j) {
        t.emplace_back(j, j, 2.0 * c);
        t.emplace_back(j, (j + 1) % nt, -c);
        t.emplace_back(j, (j + nt - 1) % nt, -c);
    }
    SpMat S(nt, nt);
    S.setFromTriplets(t.begin(), t.end());
    return S;
}

} // namespace

DiscreteOperators assemble(const Geometry& geom, double d_u, double d_v,
                           int trace_order) {
    if (d_u <= 0.0)
        throw std::invalid_argument("assemble: d_u must be positive");
    if (d_v < 0.0)
        throw std::invalid_argument("assemble: d_v must be nonnegative");
    if (geom.kind == GeomKind::Interval && d_v > 0.0)
        throw std::invalid_argument(
            "assemble: interval surface carries no diffusion, d_v must be 0");
    if (trace_order != 1 && trace_order != 2)
        throw std::invalid_argument("assemble: trace_order must be 1 or 2");

    DiscreteOperators ops;
    ops.bulk_w = geom.bulk_w;
    ops.surf_w = geom.surf_w;
    ops.trace_order = trace_order;
    ops.d_u = d_u;
    ops.d_v = d_v;

    const int nb = geom.num_bulk();
    const int ns = geom.num_surf();

    if (geom.kind == GeomKind::Interval) {
        ops.bulk_stiffness = interval_bulk(geom, d_u);
        ops.surface_stiffness = SpMat(ns, ns); // identically zero
    } else {
        ops.bulk_stiffness = disk_bulk(geom, d_u);
        ops.surface_stiffness = circle_surface(geom, d_v);
    }

    {
        std::vector<Trip> t;
        t.reserve(ns);
        for (int s = 0; s < ns; ++s) {
            const int c = geom.boundary_cell[s];
            t.emplace_back(c, s, geom.face_measure[s] / geom.bulk_w[c]);
        }
        ops.flux_in = SpMat(nb, ns);
        ops.flux_in.setFromTriplets(t.begin(), t.end());
    }

    {
        std::vector<Trip> t;
        t.reserve(2 * ns);
        for (int s = 0; s < ns; ++s) {
            const int c = geom.boundary_cell[s];
            if (trace_order == 1) {
                t.emplace_back(s, c, 1.0);
            } else {
                // Cell centers sit at distances h/2 and 3h/2 from the
                // boundary; linear extrapolation to the boundary point.
                int inner;
                if (geom.kind == GeomKind::Interval)
                    inner = (c == 0) ? 1 : c - 1;
                else
                    inner = c - geom.n_theta;
                t.emplace_back(s, c, 1.5);
                t.emplace_back(s, inner, -0.5);
            }
        }
        ops.trace = SpMat(ns, nb);
        ops.trace.setFromTriplets(t.begin(), t.end());
    }
    return ops;
}

Vec apply_flux_coupling(const DiscreteOperators& ops, const Vec& flux_density) {
    if (flux_density.size() != ops.num_surf())
        throw std::invalid_argument("apply_flux_coupling: dimension mismatch");
    return ops.flux_in * flux_density;
}

} // namespace bsr
