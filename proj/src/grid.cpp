#include "chemotax/grid.hpp"
#include "chemotax/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chemotax {

Grid build_grid(int dimension, double extent_x, std::size_t cells_x,
                double extent_y, std::size_t cells_y) {
    if (dimension != 1 && dimension != 2)
        throw ConfigError("grid dimension must be 1 or 2, got " + std::to_string(dimension));
    if (!(extent_x > 0.0))
        throw ConfigError("grid extent_x must be positive");
    if (cells_x < 3)
        throw ConfigError("grid needs at least 3 cells per axis, got cells_x = " +
                          std::to_string(cells_x));
    Grid g;
    g.dimension = dimension;
    g.extent_x = extent_x;
    g.cells_x = cells_x;
    if (dimension == 2) {
        if (!(extent_y > 0.0))
            throw ConfigError("grid extent_y must be positive");
        if (cells_y < 3)
            throw ConfigError("grid needs at least 3 cells per axis, got cells_y = " +
                              std::to_string(cells_y));
        g.extent_y = extent_y;
        g.cells_y = cells_y;
    } else {
        g.extent_y = 1.0;
        g.cells_y = 1;
    }
    g.hx = g.extent_x / static_cast<double>(g.cells_x);
    g.hy = (dimension == 2) ? g.extent_y / static_cast<double>(g.cells_y) : 0.0;
    g.cell_measure = (dimension == 2) ? g.hx * g.hy : g.hx;
    g.domain_measure = (dimension == 2) ? g.extent_x * g.extent_y : g.extent_x;
    return g;
}

Field laplacian_neumann(const Field& f, const Grid& g) {
    const std::size_t nx = g.cells_x, ny = g.cells_y;
    Field out(f.size(), 0.0);
    const double ax = 1.0 / (g.hx * g.hx);
    for (std::size_t j = 0; j < ny; ++j) {
        const std::size_t row = j * nx;
        for (std::size_t i = 0; i < nx; ++i) {
            const double c = f[row + i];
            double acc = 0.0;
            if (i > 0) acc += (f[row + i - 1] - c) * ax;
            if (i + 1 < nx) acc += (f[row + i + 1] - c) * ax;
            out[row + i] = acc;
        }
    }
    if (g.dimension == 2) {
        const double ay = 1.0 / (g.hy * g.hy);
        for (std::size_t j = 0; j < ny; ++j) {
            const std::size_t row = j * nx;
            for (std::size_t i = 0; i < nx; ++i) {
                const double c = f[row + i];
                double acc = 0.0;
                if (j > 0) acc += (f[row - nx + i] - c) * ay;
                if (j + 1 < ny) acc += (f[row + nx + i] - c) * ay;
                out[row + i] += acc;
            }
        }
    }
    return out;
}

double integrate(const Field& f, const Grid& g) {
    // Kahan summation: mass-drift verdicts resolve 1e-12 relative drift.
    double sum = 0.0, comp = 0.0;
    for (double x : f) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum * g.cell_measure;
}

double sup_norm(const Field& f) {
    return *std::max_element(f.begin(), f.end());
}

double inf_val(const Field& f) {
    return *std::min_element(f.begin(), f.end());
}

double h1_energy(const Field& v, const Grid& g) {
    const std::size_t nx = g.cells_x, ny = g.cells_y;
    double grad2 = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
        const std::size_t row = j * nx;
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            const double d = (v[row + i + 1] - v[row + i]) / g.hx;
            grad2 += d * d;
        }
    }
    if (g.dimension == 2) {
        for (std::size_t j = 0; j + 1 < ny; ++j) {
            const std::size_t row = j * nx;
            for (std::size_t i = 0; i < nx; ++i) {
                const double d = (v[row + nx + i] - v[row + i]) / g.hy;
                grad2 += d * d;
            }
        }
    }
    grad2 *= g.cell_measure; // face measure equals cell measure on a uniform grid
    double l2 = 0.0;
    for (double x : v) l2 += x * x;
    l2 *= g.cell_measure;
    return 0.5 * (grad2 + l2);
}

double max_face_gradient(const Field& v, const Grid& g) {
    const std::size_t nx = g.cells_x, ny = g.cells_y;
    double m = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
        const std::size_t row = j * nx;
        for (std::size_t i = 0; i + 1 < nx; ++i)
            m = std::max(m, std::abs(v[row + i + 1] - v[row + i]) / g.hx);
    }
    if (g.dimension == 2) {
        for (std::size_t j = 0; j + 1 < ny; ++j) {
            const std::size_t row = j * nx;
            for (std::size_t i = 0; i < nx; ++i)
                m = std::max(m, std::abs(v[row + nx + i] - v[row + i]) / g.hy);
        }
    }
    return m;
}

void require_finite(const Field& f, const char* what) {
    for (double x : f)
        if (!std::isfinite(x))
            throw SchemeFailureError(std::string("non-finite value in ") + what);
}

} // namespace chemotax
