#pragma once

#include "chemotax/motility.hpp"

#include <string>
#include <vector>

namespace chemotax {

/// One RK4 substep of dV/dt = (gamma(sup_v) - gamma(V)) * V with the
/// coupling coefficient sup_v frozen over the substep. Supersolution for
/// ||v(t)||_inf when gamma is non-decreasing on the relevant range.
double advance_V_monotone(double V, double dt, double sup_v, const MotilityFunction& gamma);

/// One RK4 substep of
///   dV/dt = [gamma(s*) + gamma_i(sup_v) - gamma(V)] * V + Gamma_d(V),
/// the general-motility ceiling ODE started at V(0) = s*.
double advance_V_general(double V, double dt, double sup_v, const SplitMotility& split);

/// One RK4 substep of dU/dt = Y * U * (sup_u - U); supersolution for
/// ||u(t)||_inf when gamma is non-decreasing and concave on the data range,
/// with Y = gamma'(min v_in) >= 0.
double advance_U(double U, double dt, double sup_u, double Y);

/// One RK4 substep of dpsi/dt = (sup_gprime_v / Y_inv) * psi * (sup_phi - psi);
/// supersolution for ||u gamma(v)||_inf, with 1/Y = gamma(min v_in) > 0.
double advance_psi(double psi, double dt, double sup_phi, double sup_gprime_v, double Y_inv);

enum class OdeKind { V_monotone, V_general, U_concave, psi };

struct OdeTrace {
    OdeKind kind;
    std::vector<double> t;
    std::vector<double> value;

    void append(double time, double val);
};

struct DominationReport {
    bool dominated = true;
    double worst_margin = 0.0;        // min over samples of ode + slack - sup_field
    double first_violation_time = -1.0;
    std::size_t violations = 0;
};

/// Per-sample margins ode(t) + slack - sup_field(t) over aligned samples.
DominationReport check_domination(const std::vector<double>& field_sup_series,
                                  const OdeTrace& ode_trace, double slack);

const char* ode_kind_name(OdeKind kind);

} // namespace chemotax
