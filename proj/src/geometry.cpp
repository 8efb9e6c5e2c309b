#include "bsr/geometry.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bsr {

double Geometry::domain_measure() const {
    return std::accumulate(bulk_w.begin(), bulk_w.end(), 0.0);
}

double Geometry::surface_measure() const {
    return std::accumulate(surf_w.begin(), surf_w.end(), 0.0);
}

Geometry build_interval(int n_bulk) {
    if (n_bulk < 3)
        throw std::invalid_argument("build_interval: n_bulk must be >= 3");
    Geometry g;
    g.kind = GeomKind::Interval;
    g.n_bulk = n_bulk;
    const double h = 1.0 / n_bulk;
    g.bulk_x.resize(n_bulk);
    g.bulk_y.assign(n_bulk, 0.0);
    g.bulk_w.assign(n_bulk, h);
    for (int i = 0; i < n_bulk; ++i)
        g.bulk_x[i] = (i + 0.5) * h;
    // Two endpoint "surface" nodes with counting measure.
    g.surf_x = {0.0, 1.0};
    g.surf_y = {0.0, 0.0};
    g.surf_w = {1.0, 1.0};
    g.boundary_cell = {0, n_bulk - 1};
    g.face_measure = {1.0, 1.0};
    return g;
}

Geometry build_disk(int n_r, int n_theta) {
    if (n_r < 3)
        throw std::invalid_argument("build_disk: n_r must be >= 3");
    if (n_theta < 8)
        throw std::invalid_argument("build_disk: n_theta must be >= 8");
    if (n_theta % 2 != 0)
        throw std::invalid_argument("build_disk: n_theta must be even");
    Geometry g;
    g.kind = GeomKind::Disk;
    g.n_r = n_r;
    g.n_theta = n_theta;
    const double dr = 1.0 / n_r;
    const double dth = 2.0 * M_PI / n_theta;
    const int nb = n_r * n_theta;
    g.bulk_x.resize(nb);
    g.bulk_y.resize(nb);
    g.bulk_w.resize(nb);
    for (int i = 0; i < n_r; ++i) {
        const double r = (i + 0.5) * dr;
        for (int j = 0; j < n_theta; ++j) {
            const double th = j * dth;
            const int idx = i * n_theta + j;
            g.bulk_x[idx] = r * std::cos(th);
            g.bulk_y[idx] = r * std::sin(th);
            g.bulk_w[idx] = r * dr * dth;
        }
    }
    g.surf_x.resize(n_theta);
    g.surf_y.resize(n_theta);
    g.surf_w.assign(n_theta, dth);
    g.boundary_cell.resize(n_theta);
    // Outer face measure taken at radius 1, so it equals the surface
    // quadrature weight and the flux pairing conserves mass exactly.
    g.face_measure.assign(n_theta, dth);
    for (int j = 0; j < n_theta; ++j) {
        const double th = j * dth;
        g.surf_x[j] = std::cos(th);
        g.surf_y[j] = std::sin(th);
        g.boundary_cell[j] = (n_r - 1) * n_theta + j;
    }
    return g;
}

} // namespace bsr
