#ifndef BSR_GEOMETRY_HPP
#define BSR_GEOMETRY_HPP

#include <vector>

namespace bsr {

enum class GeomKind { Interval, Disk };

/// Discrete geometry: bulk quadrature nodes/weights plus the boundary
/// nodes they couple to. Two instances are supported: the unit interval
/// (boundary = two points, counting measure) and the unit disk on a
/// cell-centered polar grid (boundary = unit circle).
///
/// Immutable after construction; safe to share across threads.
struct Geometry {
    GeomKind kind = GeomKind::Interval;
    int n_bulk = 0;   // interval cells (interval only)
    int n_r = 0;      // radial cells (disk only)
    int n_theta = 0;  // angular cells (disk only)

    // Bulk quadrature. Interval: x only. Disk: (x,y) with row-major
    // index i*n_theta + j for radial cell i, angular cell j.
    std::vector<double> bulk_x, bulk_y;
    std::vector<double> bulk_w;

    // Surface quadrature.
    std::vector<double> surf_x, surf_y;
    std::vector<double> surf_w;

    // For each surface node: the adjacent bulk cell and the measure of
    // the boundary face it owns. Face measures match surf_w exactly so
    // the discrete flux pairing conserves mass.
    std::vector<int> boundary_cell;
    std::vector<double> face_measure;

    int num_bulk() const { return static_cast<int>(bulk_w.size()); }
    int num_surf() const { return static_cast<int>(surf_w.size()); }
    double domain_measure() const;
    double surface_measure() const;
};

/// Cell-centered grid x_i = (i+1/2)/n on [0,1]. Requires n_bulk >= 3.
Geometry build_interval(int n_bulk);

/// Cell-centered polar grid on the unit disk, periodic in theta.
/// Requires n_r >= 3, n_theta >= 8 and even.
Geometry build_disk(int n_r, int n_theta);

} // namespace bsr

#endif
