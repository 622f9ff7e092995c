#pragma once

#include <cstddef>
#include <vector>

namespace chemotax {

/// A scalar value per grid cell, indexed x-fastest on 2D grids.
using Field = std::vector<double>;

/// Uniform cell-centered grid on an interval (1D) or axis-aligned
/// rectangle (2D). Midpoint quadrature; homogeneous Neumann boundaries
/// are realized by zero-flux faces (ghost-cell reflection).
struct Grid {
    int dimension = 1;            // 1 or 2
    double extent_x = 1.0;        // domain length per axis
    double extent_y = 1.0;        // unused in 1D
    std::size_t cells_x = 3;
    std::size_t cells_y = 1;      // 1 in 1D
    double hx = 0.0;              // spacing per axis
    double hy = 0.0;
    double cell_measure = 0.0;    // uniform cell length/area
    double domain_measure = 0.0;  // |Omega|

    std::size_t cell_count() const { return cells_x * cells_y; }
    std::size_t index(std::size_t i, std::size_t j = 0) const { return j * cells_x + i; }

    // cell-center coordinates
    double x_center(std::size_t i) const { return (static_cast<double>(i) + 0.5) * hx; }
    double y_center(std::size_t j) const { return (static_cast<double>(j) + 0.5) * hy; }
};

/// Builds a uniform grid. Rejects dimension outside {1,2}, non-positive
/// extents, and fewer than 3 cells per axis.
Grid build_grid(int dimension, double extent_x, std::size_t cells_x,
                double extent_y = 1.0, std::size_t cells_y = 1);

/// Second-order finite-volume Laplacian with zero-flux (Neumann) faces.
/// The stencil has zero column sums, so the weighted sum of the result
/// vanishes in exact arithmetic.
Field laplacian_neumann(const Field& f, const Grid& g);

/// Midpoint-rule integral: sum of cell_measure * f_i.
double integrate(const Field& f, const Grid& g);

/// Max over all cells.
double sup_norm(const Field& f);

/// Min over all cells.
double inf_val(const Field& f);

/// (||grad_h v||_2^2 + ||v||_2^2) / 2 with face-centered differences and
/// face quadrature for the gradient term.
double h1_energy(const Field& v, const Grid& g);

/// Largest face-centered difference quotient magnitude, max over faces
/// of both axes (the discrete W^{1,inf} seminorm of v).
double max_face_gradient(const Field& v, const Grid& g);

/// Throws SchemeFailureError if any entry is NaN or infinite.
void require_finite(const Field& f, const char* what);

} // namespace chemotax
