#pragma once

#include "chemotax/grid.hpp"

#include <cstddef>
#include <vector>

namespace chemotax {

/// The screened-Poisson operator A = I - Lap_h with zero-flux faces.
/// Symmetric positive definite with an M-matrix sign pattern, so A^-1 is
/// order- and positivity-preserving. 1D right-hand sides are solved by a
/// direct tridiagonal factorization with iterative refinement; 2D by
/// conjugate gradient with a diagonal preconditioner.
class HelmholtzOperator {
public:
    explicit HelmholtzOperator(const Grid& grid);

    const Grid& grid() const { return grid_; }

    /// v - Lap_h v.
    Field apply(const Field& v) const;

    /// Solves A v = u to residual ||A v - u||_inf <= eps_ell * ||u||_inf.
    /// An optional warm start seeds the 2D conjugate-gradient iteration.
    Field solve(const Field& u, const Field* warm_start = nullptr) const;

    /// Discrete analogue of the positivity constant of A^-1: the minimum
    /// entry of the Green's matrix scaled by the cell measure. Solves one
    /// system per cell; refuses grids above 10^4 cells.
    double omega_star_discrete() const;

    /// Test hook for the elliptic comparison principle: requires f <= g
    /// pointwise, returns whether A^-1 f <= A^-1 g + 1e-10 pointwise.
    bool check_elliptic_comparison(const Field& f, const Field& g) const;

    static constexpr double eps_ell = 1e-11;           // relative residual target
    static constexpr std::size_t omega_star_cell_cap = 10000;

private:
    Field solve_tridiag(const Field& u) const;
    Field solve_pcg(const Field& u, const Field* warm_start) const;

    Grid grid_;
    // 1D Thomas factorization (LU of the tridiagonal system), reused per solve
    std::vector<double> tri_diag_;
    std::vector<double> tri_lower_;
    std::vector<double> tri_upper_;
    std::vector<double> inv_diag_; // Jacobi preconditioner (2D)
};

} // namespace chemotax
