#pragma once

#include "chemotax/elliptic.hpp"
#include "chemotax/grid.hpp"
#include "chemotax/motility.hpp"

#include <cstddef>
#include <functional>

namespace chemotax {

/// Coupled state (t, u, v) with v = A^-1[u] re-solved every step, plus
/// cached norms and the flux field phi = u * gamma(v).
struct SimulationState {
    double t = 0.0;
    Field u;
    Field v;
    Field phi;
    double mass = 0.0;
    double sup_u = 0.0, inf_u = 0.0;
    double sup_v = 0.0, inf_v = 0.0;
    double sup_phi = 0.0;
    std::size_t steps = 0;
};

struct StepControl {
    double sigma = 0.9;      // CFL safety factor in (0,1]
    double dt_min = 1e-14;
    double dt_max = 1e-2;
    double end_time = 1.0;
    std::size_t max_steps = 50'000'000;
    // Test-only: breaks the zero-column-sum property of the update stencil
    // so the mass-conservation verdict has a negative fixture.
    bool nonconservative_stencil = false;
};

class Simulator {
public:
    Simulator(const Grid& grid, MotilityFunction gamma);

    const Grid& grid() const { return grid_; }
    const HelmholtzOperator& op() const { return op_; }
    const MotilityFunction& gamma() const { return gamma_; }

    /// t = 0 state from initial data: v = A^-1[u_in], caches filled.
    /// Rejects negative values and zero total mass.
    SimulationState init_state(const Field& u_in) const;

    /// Largest dt keeping every cell's self-coefficient nonnegative:
    /// sigma / (max gamma(v) * sum_axes 2/h^2), clamped to [dt_min, dt_max].
    /// On an isotropic grid this is sigma * h^2 / (2 * dim * max gamma(v)).
    double stable_dt(const SimulationState& state, const StepControl& ctrl) const;

    /// One conservative explicit Euler step: u+ = u + dt * Lap_h(u gamma(v)),
    /// then v+ = A^-1[u+].
    void step(SimulationState& state, double dt, const StepControl& ctrl) const;

    /// Advances until t >= end_time or max_steps. The observer is invoked
    /// once on the initial state and then after every step; it receives the
    /// state and the dt that produced it (dt = 0 for the initial call).
    using Observer = std::function<void(const SimulationState&, double dt)>;
    SimulationState run(SimulationState state, const StepControl& ctrl,
                        const Observer& observe = {}) const;

private:
    void refresh_caches(SimulationState& state) const;

    Grid grid_;
    MotilityFunction gamma_;
    HelmholtzOperator op_;
};

} // namespace chemotax
