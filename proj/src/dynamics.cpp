#include "chemotax/dynamics.hpp"
#include "chemotax/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace chemotax {

Simulator::Simulator(const Grid& grid, MotilityFunction gamma)
    : grid_(grid), gamma_(std::move(gamma)), op_(grid) {}

void Simulator::refresh_caches(SimulationState& state) const {
    require_finite(state.u, "u");
    require_finite(state.v, "v");
    state.phi.resize(state.u.size());
    for (std::size_t i = 0; i < state.u.size(); ++i)
        state.phi[i] = state.u[i] * gamma_.eval(state.v[i]);
    require_finite(state.phi, "phi = u*gamma(v)");
    state.mass = integrate(state.u, grid_);
    state.sup_u = sup_norm(state.u);
    state.inf_u = inf_val(state.u);
    state.sup_v = sup_norm(state.v);
    state.inf_v = inf_val(state.v);
    state.sup_phi = sup_norm(state.phi);
}

SimulationState Simulator::init_state(const Field& u_in) const {
    if (u_in.size() != grid_.cell_count())
        throw SimError("init_state: initial data size does not match grid");
    if (inf_val(u_in) < 0.0)
        throw NegativityError("initial cell density has negative values");
    SimulationState s;
    s.t = 0.0;
    s.u = u_in;
    if (integrate(u_in, grid_) <= 0.0)
        throw ZeroMassError("initial mass must be positive");
    s.v = op_.solve(u_in);
    refresh_caches(s);
    return s;
}

double Simulator::stable_dt(const SimulationState& state, const StepControl& ctrl) const {
    double gamma_max = 0.0;
    for (double vi : state.v) gamma_max = std::max(gamma_max, gamma_.eval(vi));
    double coeff = 2.0 / (grid_.hx * grid_.hx);
    if (grid_.dimension == 2) coeff += 2.0 / (grid_.hy * grid_.hy);
    const double dt_cfl = ctrl.sigma / (gamma_max * coeff);
    if (dt_cfl < ctrl.dt_min)
        throw DtUnderflowError("required dt " + std::to_string(dt_cfl) +
                               " fell below dt_min (gamma(v) blow-up?)");
    return std::min(dt_cfl, ctrl.dt_max);
}

void Simulator::step(SimulationState& state, double dt, const StepControl& ctrl) const {
    Field lap = laplacian_neumann(state.phi, grid_);
    for (std::size_t i = 0; i < state.u.size(); ++i) state.u[i] += dt * lap[i];
    if (ctrl.nonconservative_stencil)
        state.u[0] += dt * 1e-3 * state.phi[0]; // test fixture: breaks column sums
    const double floor = -1e-13 * std::max(state.sup_u, 1.0);
    for (double ui : state.u)
        if (ui < floor)
            throw SchemeFailureError("negativity beyond roundoff after step at t = " +
                                     std::to_string(state.t));
    state.v = op_.solve(state.u, &state.v);
    state.t += dt;
    state.steps += 1;
    refresh_caches(state);
}

SimulationState Simulator::run(SimulationState state, const StepControl& ctrl,
                               const Observer& observe) const {
    if (!(ctrl.sigma > 0.0 && ctrl.sigma <= 1.0))
        throw ConfigError("step control sigma must lie in (0,1]");
    if (!(ctrl.dt_min <= ctrl.dt_max))
        throw ConfigError("step control requires dt_min <= dt_max");
    if (observe) observe(state, 0.0);
    while (state.t < ctrl.end_time && state.steps < ctrl.max_steps) {
        double dt = stable_dt(state, ctrl);
        // absorb the final step into this one when the remainder would be a
        // roundoff-sized sliver (a sliver dt wrecks difference quotients)
        const double remaining = ctrl.end_time - state.t;
        if (remaining <= dt * (1.0 + 1e-9)) dt = remaining;
        else dt = std::min(dt, remaining);
        step(state, dt, ctrl);
        if (observe) observe(state, dt);
    }
    return state;
}

} // namespace chemotax
