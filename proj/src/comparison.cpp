#include "chemotax/comparison.hpp"
#include "chemotax/errors.hpp"

#include <cmath>
#include <limits>

namespace chemotax {

namespace {

template <class Rhs>
double rk4_step(double y, double dt, const Rhs& f) {
    const double k1 = f(y);
    const double k2 = f(y + 0.5 * dt * k1);
    const double k3 = f(y + 0.5 * dt * k2);
    const double k4 = f(y + dt * k3);
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

double advance_V_monotone(double V, double dt, double sup_v, const MotilityFunction& gamma) {
    const double g_sup = gamma.eval(sup_v);
    return rk4_step(V, dt, [&](double y) { return (g_sup - gamma.eval(y)) * y; });
}

double advance_V_general(double V, double dt, double sup_v, const SplitMotility& split) {
    const double forcing = split.gamma_at_s_star() + split.gamma_i(sup_v);
    return rk4_step(V, dt, [&](double y) {
        return (forcing - split.gamma().eval(y)) * y + split.Gamma_d(y);
    });
}

double advance_U(double U, double dt, double sup_u, double Y) {
    if (Y < 0.0) throw SimError("advance_U requires Y >= 0");
    return rk4_step(U, dt, [&](double y) { return Y * y * (sup_u - y); });
}

double advance_psi(double psi, double dt, double sup_phi, double sup_gprime_v,
                   double Y_inv) {
    if (!(Y_inv > 0.0)) throw SimError("advance_psi requires Y_inv > 0");
    const double rate = sup_gprime_v / Y_inv;
    return rk4_step(psi, dt, [&](double y) { return rate * y * (sup_phi - y); });
}

void OdeTrace::append(double time, double val) {
    if (!t.empty() && time <= t.back())
        throw SimError("OdeTrace samples must be strictly increasing in t");
    if (!std::isfinite(val) || val <= 0.0)
        throw SimError("OdeTrace values must be finite and positive");
    t.push_back(time);
    value.push_back(val);
}

DominationReport check_domination(const std::vector<double>& field_sup_series,
                                  const OdeTrace& ode_trace, double slack) {
    if (field_sup_series.size() != ode_trace.value.size())
        throw SimError("check_domination: series lengths differ");
    DominationReport rep;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < field_sup_series.size(); ++i) {
        const double margin = ode_trace.value[i] + slack - field_sup_series[i];
        if (margin < rep.worst_margin) rep.worst_margin = margin;
        if (margin < 0.0) {
            ++rep.violations;
            if (rep.first_violation_time < 0.0) rep.first_violation_time = ode_trace.t[i];
        }
    }
    rep.dominated = (rep.violations == 0);
    return rep;
}

const char* ode_kind_name(OdeKind kind) {
    switch (kind) {
        case OdeKind::V_monotone: return "V_monotone";
        case OdeKind::V_general: return "V_general";
        case OdeKind::U_concave: return "U_concave";
        case OdeKind::psi: return "psi";
    }
    return "unknown";
}

} // namespace chemotax
