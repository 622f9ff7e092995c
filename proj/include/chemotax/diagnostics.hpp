#pragma once

#include "chemotax/comparison.hpp"
#include "chemotax/dynamics.hpp"

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace chemotax {

/// One recorded ledger row. Inactive ODE traces are NaN.
struct LedgerSample {
    double t = 0.0;
    double mass = 0.0;
    double sup_u = 0.0, inf_u = 0.0;
    double sup_v = 0.0, inf_v = 0.0;
    double sup_phi = 0.0;
    double V = std::numeric_limits<double>::quiet_NaN();
    double U = std::numeric_limits<double>::quiet_NaN();
    double psi = std::numeric_limits<double>::quiet_NaN();
    double E = 0.0;
    double dissipation = 0.0;
};

/// Run metadata every verdict needs; serialized alongside the series so
/// checks are reproducible from the ledger alone.
struct LedgerMeta {
    std::string version;
    std::string preset;
    int dimension = 1;
    std::size_t cells_x = 0, cells_y = 0;
    double extent_x = 0.0, extent_y = 0.0;
    double hx = 0.0, hy = 0.0;
    double domain_measure = 0.0;
    double sigma = 0.0;
    double end_time = 0.0;
    double mass0 = 0.0;
    double sup_uin = 0.0, inf_uin = 0.0;
    double sup_vin = 0.0, inf_vin = 0.0;
    double sup_phiin = 0.0;
    double omega_star = std::numeric_limits<double>::quiet_NaN();
    double v_star = std::numeric_limits<double>::quiet_NaN();
    double s_star = std::numeric_limits<double>::quiet_NaN();
    double gamma_s_star = std::numeric_limits<double>::quiet_NaN();
    double tol_h = 0.0;  // C*h^2, C = 10*(1 + gamma(s*))
    double tol_E = 0.0;  // C*(h^2 + dt)*max E
    double gamma_inf_vin = std::numeric_limits<double>::quiet_NaN();  // 1/Y of the psi ODE
    double gamma_prime_inf_vin = std::numeric_limits<double>::quiet_NaN();  // Y of the U ODE
    bool hyp_monotone = false;  // gamma' >= 0 probed on [inf v_in, sup v_in]
    bool hyp_concave = false;   // gamma'' <= 0 probed likewise
    bool gamma_nondecreasing = false;
    std::size_t cadence = 1;
    std::size_t total_steps = 0;
};

/// Running extrema tracked every step (stronger than the sampled series).
struct LedgerAggregates {
    double mass_drift_max = 0.0;
    double inf_v_min = std::numeric_limits<double>::infinity();
    double sup_v_max = -std::numeric_limits<double>::infinity();
    double sup_u_max = -std::numeric_limits<double>::infinity();
    double sup_phi_max = -std::numeric_limits<double>::infinity();
    double sup_v_minus_sup_u_max = -std::numeric_limits<double>::infinity();
    double viol_v_vs_V_max = -std::numeric_limits<double>::infinity();
    double viol_u_vs_U_max = -std::numeric_limits<double>::infinity();
    double viol_phi_vs_psi_max = -std::numeric_limits<double>::infinity();
    double V_increase_max = 0.0;
    double U_increase_max = 0.0;
    double psi_increase_max = 0.0;
    double E_increase_max = 0.0;
    double E_max = 0.0;
    double liapunov_residual_max = 0.0;
    double final_u_dev = 0.0;     // ||u(T) - m/|Omega|||_inf
    double final_v_dev = 0.0;     // ||v(T) - m/|Omega|||_inf
    double final_grad_v = 0.0;    // max face gradient of v(T)
    double dt_last = 0.0;
};

struct BoundLedger {
    LedgerMeta meta;
    std::vector<LedgerSample> samples;
    LedgerAggregates agg;
};

struct Verdict {
    enum class Status { Pass, Fail, Skip };
    std::string key;
    Status status = Status::Skip;
    double margin = 0.0;  // positive margin = distance from the failure boundary
    std::string detail;
};

/// Observer that fills a BoundLedger while a simulation runs: advances the
/// comparison ODEs with the PDE's dt (coefficients frozen per step),
/// evaluates the energy and its dissipation, and records samples at the
/// given cadence.
class LedgerRecorder {
public:
    struct Options {
        std::size_t cadence = 1;
        bool trace_V_monotone = false;      // requires gamma non-decreasing
        const SplitMotility* split = nullptr; // enables the general V trace
        bool trace_U = false;               // requires hyp_monotone && hyp_concave
        bool trace_psi = false;             // requires hyp_monotone
    };

    LedgerRecorder(const Simulator& sim, LedgerMeta meta, Options opt);

    /// dynamics::Simulator::Observer entry point.
    void operator()(const SimulationState& state, double dt);

    /// Records the final state if the cadence missed it.
    void finalize(const SimulationState& state);

    const BoundLedger& ledger() const { return ledger_; }
    BoundLedger take_ledger() { return std::move(ledger_); }

private:
    double dissipation(const Field& v) const;
    void record(const SimulationState& state);

    const Simulator& sim_;
    Options opt_;
    BoundLedger ledger_;
    bool initialized_ = false;
    double V_ = 0.0, U_ = 0.0, psi_ = 0.0;
    double prev_sup_v_ = 0.0, prev_sup_u_ = 0.0, prev_sup_phi_ = 0.0;
    double prev_sup_gprime_v_ = 0.0;
    double prev_E_ = 0.0, prev_D_ = 0.0;
    std::size_t last_recorded_step_ = 0;
};

// --- bound checks: pure functions of the ledger ---------------------------

Verdict check_mass(const BoundLedger& ledger);
Verdict check_v_floor(const BoundLedger& ledger);
Verdict check_invariant_region(const BoundLedger& ledger);
std::vector<Verdict> check_u_bounds(const BoundLedger& ledger);
Verdict check_v_ceiling(const BoundLedger& ledger);
Verdict check_sup_v_le_sup_u(const BoundLedger& ledger);
std::vector<Verdict> check_domination_ledger(const BoundLedger& ledger);
Verdict check_liapunov(const BoundLedger& ledger);
Verdict check_stabilization(const BoundLedger& ledger, double delta_stab);

struct CheckToggles {
    bool mass = true;
    bool v_floor = true;
    bool invariant_region = true;
    bool u_bounds = true;
    bool v_ceiling = true;
    bool v_le_u = true;
    bool domination = true;
    bool liapunov = true;
    bool stabilization = false;
    double delta_stab = 1e-3;
};

std::vector<Verdict> run_all_checks(const BoundLedger& ledger, const CheckToggles& toggles);

/// Paired-run continuous-dependence experiment: for each delta, advances the
/// base and the perturbed simulation in lockstep (common dt) and records
/// D(delta) = max over steps of ||u_d - u||_inf + ||v_d - v||_inf.
struct ContinuousDependenceReport {
    std::vector<double> deltas;
    std::vector<double> D;
    bool monotone = false;     // D non-increasing as delta decreases
    double max_ratio = 0.0;    // max D(delta)/delta
};

ContinuousDependenceReport continuous_dependence_experiment(
    const Simulator& sim, const Field& u_in, const Field& perturbation_shape,
    std::vector<double> deltas, const StepControl& ctrl);

double mass_drift_tolerance(double mass0);

} // namespace chemotax
