#include "chemotax/elliptic.hpp"
#include "chemotax/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace chemotax {

namespace {

double max_abs(const Field& f) {
    double m = 0.0;
    for (double x : f) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

HelmholtzOperator::HelmholtzOperator(const Grid& grid) : grid_(grid) {
    const std::size_t n = grid_.cell_count();
    if (grid_.dimension == 1) {
        const double ax = 1.0 / (grid_.hx * grid_.hx);
        tri_diag_.assign(n, 0.0);
        tri_lower_.assign(n, 0.0);
        tri_upper_.assign(n, -ax);
        for (std::size_t i = 0; i < n; ++i) {
            const double neighbors = (i == 0 || i + 1 == n) ? 1.0 : 2.0;
            tri_diag_[i] = 1.0 + neighbors * ax;
        }
        // Thomas factorization, reused across solves
        for (std::size_t i = 1; i < n; ++i) {
            tri_lower_[i] = -ax / tri_diag_[i - 1];
            tri_diag_[i] -= tri_lower_[i] * tri_upper_[i - 1];
        }
    } else {
        const double ax = 1.0 / (grid_.hx * grid_.hx);
        const double ay = 1.0 / (grid_.hy * grid_.hy);
        inv_diag_.assign(n, 0.0);
        for (std::size_t j = 0; j < grid_.cells_y; ++j) {
            for (std::size_t i = 0; i < grid_.cells_x; ++i) {
                const double kx = (i == 0 || i + 1 == grid_.cells_x) ? 1.0 : 2.0;
                const double ky = (j == 0 || j + 1 == grid_.cells_y) ? 1.0 : 2.0;
                inv_diag_[grid_.index(i, j)] = 1.0 / (1.0 + kx * ax + ky * ay);
            }
        }
    }
}

Field HelmholtzOperator::apply(const Field& v) const {
    Field lap = laplacian_neumann(v, grid_);
    Field out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - lap[i];
    return out;
}

Field HelmholtzOperator::solve_tridiag(const Field& u) const {
    const std::size_t n = u.size();
    Field x(n);
    // forward substitution with the cached factorization
    x[0] = u[0];
    for (std::size_t i = 1; i < n; ++i) x[i] = u[i] - tri_lower_[i] * x[i - 1];
    x[n - 1] /= tri_diag_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - tri_upper_[i] * x[i + 1]) / tri_diag_[i];
    return x;
}

Field HelmholtzOperator::solve_pcg(const Field& u, const Field* warm_start) const {
    const std::size_t n = u.size();
    const double target = eps_ell * std::max(max_abs(u), 1e-300);
    const std::size_t cap = 10 * n;

    Field x = warm_start ? *warm_start : Field(n, 0.0);
    Field r = apply(x);
    for (std::size_t i = 0; i < n; ++i) r[i] = u[i] - r[i];
    if (max_abs(r) <= target) return x;

    Field z(n), p(n), Ap;
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag_[i] * r[i];
    p = z;
    double rz = 0.0;
    for (std::size_t i = 0; i < n; ++i) rz += r[i] * z[i];

    for (std::size_t it = 0; it < cap; ++it) {
        Ap = apply(p);
        double pAp = 0.0;
        for (std::size_t i = 0; i < n; ++i) pAp += p[i] * Ap[i];
        const double alpha = rz / pAp;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        if (max_abs(r) <= target) {
            // recompute the true residual; accept only if it meets the target
            Field rt = apply(x);
            double res = 0.0;
            for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(u[i] - rt[i]));
            if (res <= target) return x;
            for (std::size_t i = 0; i < n; ++i) r[i] = u[i] - rt[i];
        }
        double rz_new = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = inv_diag_[i] * r[i];
            rz_new += r[i] * z[i];
        }
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw NonConvergenceError("conjugate gradient hit the iteration cap (" +
                              std::to_string(cap) + ") on an SPD system");
}

Field HelmholtzOperator::solve(const Field& u, const Field* warm_start) const {
    if (u.size() != grid_.cell_count())
        throw SimError("solve: field size does not match grid");
    require_finite(u, "solve_A right-hand side");
    if (grid_.dimension == 2) return solve_pcg(u, warm_start);

    Field x = solve_tridiag(u);
    // iterative refinement until the inf-norm residual meets eps_ell
    const double target = eps_ell * std::max(max_abs(u), 1e-300);
    for (int pass = 0; pass < 4; ++pass) {
        Field r = apply(x);
        double res = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            r[i] = u[i] - r[i];
            res = std::max(res, std::abs(r[i]));
        }
        if (res <= target) return x;
        Field dx = solve_tridiag(r);
        for (std::size_t i = 0; i < u.size(); ++i) x[i] += dx[i];
    }
    throw NonConvergenceError("tridiagonal refinement failed to reach eps_ell");
}

double HelmholtzOperator::omega_star_discrete() const {
    const std::size_t n = grid_.cell_count();
    if (n > omega_star_cell_cap)
        throw SimError("omega_star_discrete refused: grid has " + std::to_string(n) +
                       " cells (> " + std::to_string(omega_star_cell_cap) + ")");
    double omega = std::numeric_limits<double>::infinity();
    Field rhs(n, 0.0);
    Field prev;
    for (std::size_t j = 0; j < n; ++j) {
        rhs[j] = 1.0;
        Field col = solve(rhs, prev.empty() ? nullptr : &prev);
        rhs[j] = 0.0;
        for (double g : col) omega = std::min(omega, g / grid_.cell_measure);
        prev = std::move(col);
    }
    return omega;
}

bool HelmholtzOperator::check_elliptic_comparison(const Field& f, const Field& g) const {
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] > g[i]) throw SimError("check_elliptic_comparison requires f <= g pointwise");
    const Field vf = solve(f);
    const Field vg = solve(g);
    for (std::size_t i = 0; i < vf.size(); ++i)
        if (vf[i] > vg[i] + 1e-10) return false;
    return true;
}

} // namespace chemotax
