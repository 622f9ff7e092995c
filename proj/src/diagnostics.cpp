#include "chemotax/diagnostics.hpp"
#include "chemotax/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

namespace chemotax {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

double grid_h(const LedgerMeta& m) {
    return (m.dimension == 2) ? std::max(m.hx, m.hy) : m.hx;
}

Verdict pass_fail(std::string key, double margin, std::string detail) {
    Verdict v;
    v.key = std::move(key);
    v.status = margin >= 0.0 ? Verdict::Status::Pass : Verdict::Status::Fail;
    v.margin = margin;
    v.detail = std::move(detail);
    return v;
}

Verdict skip(std::string key, std::string detail) {
    Verdict v;
    v.key = std::move(key);
    v.status = Verdict::Status::Skip;
    v.detail = std::move(detail);
    return v;
}

} // namespace

double mass_drift_tolerance(double mass0) { return 1e-11 * mass0; }

LedgerRecorder::LedgerRecorder(const Simulator& sim, LedgerMeta meta, Options opt)
    : sim_(sim), opt_(opt) {
    if (opt_.trace_V_monotone && opt_.split)
        throw SimError("LedgerRecorder: choose one V trace, not both");
    ledger_.meta = std::move(meta);
    ledger_.meta.cadence = std::max<std::size_t>(1, opt_.cadence);
}

double LedgerRecorder::dissipation(const Field& v) const {
    const Grid& g = sim_.grid();
    const MotilityFunction& gamma = sim_.gamma();
    const std::size_t nx = g.cells_x, ny = g.cells_y;
    // -int (v gamma'(v) + gamma(v)) |grad_h v|^2, coefficient averaged to faces
    auto coeff = [&gamma](double s) { return s * gamma.deriv(s) + gamma.eval(s); };
    double grad_term = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
        const std::size_t row = j * nx;
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            const double d = (v[row + i + 1] - v[row + i]) / g.hx;
            grad_term += 0.5 * (coeff(v[row + i]) + coeff(v[row + i + 1])) * d * d;
        }
    }
    if (g.dimension == 2) {
        for (std::size_t j = 0; j + 1 < ny; ++j) {
            const std::size_t row = j * nx;
            for (std::size_t i = 0; i < nx; ++i) {
                const double d = (v[row + nx + i] - v[row + i]) / g.hy;
                grad_term += 0.5 * (coeff(v[row + i]) + coeff(v[row + nx + i])) * d * d;
            }
        }
    }
    grad_term *= g.cell_measure;
    // -int gamma(v) |Lap_h v|^2
    Field lap = laplacian_neumann(v, g);
    double lap_term = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) lap_term += gamma.eval(v[i]) * lap[i] * lap[i];
    lap_term *= g.cell_measure;
    return -grad_term - lap_term;
}

void LedgerRecorder::record(const SimulationState& state) {
    LedgerSample s;
    s.t = state.t;
    s.mass = state.mass;
    s.sup_u = state.sup_u;
    s.inf_u = state.inf_u;
    s.sup_v = state.sup_v;
    s.inf_v = state.inf_v;
    s.sup_phi = state.sup_phi;
    if (opt_.trace_V_monotone || opt_.split) s.V = V_;
    if (opt_.trace_U) s.U = U_;
    if (opt_.trace_psi) s.psi = psi_;
    s.E = prev_E_;
    s.dissipation = prev_D_;
    ledger_.samples.push_back(s);
    last_recorded_step_ = state.steps;
}

void LedgerRecorder::operator()(const SimulationState& state, double dt) {
    LedgerAggregates& agg = ledger_.agg;
    const MotilityFunction& gamma = sim_.gamma();

    if (!initialized_) {
        initialized_ = true;
        if (opt_.trace_V_monotone) V_ = state.sup_v;
        if (opt_.split) V_ = opt_.split->s_star();
        if (opt_.trace_U) U_ = state.sup_u;
        if (opt_.trace_psi) psi_ = state.sup_phi;
        prev_E_ = h1_energy(state.v, sim_.grid());
        prev_D_ = dissipation(state.v);
        agg.E_max = prev_E_;
    } else {
        // advance the comparison ODEs with the PDE dt, coefficients frozen
        // at the values held when the step began
        const double V_prev = V_, U_prev = U_, psi_prev = psi_;
        if (opt_.trace_V_monotone) V_ = advance_V_monotone(V_, dt, prev_sup_v_, gamma);
        if (opt_.split) V_ = advance_V_general(V_, dt, prev_sup_v_, *opt_.split);
        if (opt_.trace_U)
            U_ = advance_U(U_, dt, prev_sup_u_, ledger_.meta.gamma_prime_inf_vin);
        if (opt_.trace_psi)
            psi_ = advance_psi(psi_, dt, prev_sup_phi_, prev_sup_gprime_v_,
                               ledger_.meta.gamma_inf_vin);
        if (opt_.trace_V_monotone || opt_.split)
            agg.V_increase_max = std::max(agg.V_increase_max, V_ - V_prev);
        if (opt_.trace_U) agg.U_increase_max = std::max(agg.U_increase_max, U_ - U_prev);
        if (opt_.trace_psi)
            agg.psi_increase_max = std::max(agg.psi_increase_max, psi_ - psi_prev);

        const double E = h1_energy(state.v, sim_.grid());
        const double D = dissipation(state.v);
        agg.E_increase_max = std::max(agg.E_increase_max, E - prev_E_);
        agg.E_max = std::max(agg.E_max, E);
        agg.liapunov_residual_max =
            std::max(agg.liapunov_residual_max, std::abs((E - prev_E_) / dt - prev_D_));
        prev_E_ = E;
        prev_D_ = D;
        agg.dt_last = dt;
    }

    agg.mass_drift_max =
        std::max(agg.mass_drift_max, std::abs(state.mass - ledger_.meta.mass0));
    agg.inf_v_min = std::min(agg.inf_v_min, state.inf_v);
    agg.sup_v_max = std::max(agg.sup_v_max, state.sup_v);
    agg.sup_u_max = std::max(agg.sup_u_max, state.sup_u);
    agg.sup_phi_max = std::max(agg.sup_phi_max, state.sup_phi);
    agg.sup_v_minus_sup_u_max =
        std::max(agg.sup_v_minus_sup_u_max, state.sup_v - state.sup_u);
    if (opt_.trace_V_monotone || opt_.split)
        agg.viol_v_vs_V_max = std::max(agg.viol_v_vs_V_max, state.sup_v - V_);
    if (opt_.trace_U) agg.viol_u_vs_U_max = std::max(agg.viol_u_vs_U_max, state.sup_u - U_);
    if (opt_.trace_psi)
        agg.viol_phi_vs_psi_max = std::max(agg.viol_phi_vs_psi_max, state.sup_phi - psi_);

    const double mean = ledger_.meta.mass0 / ledger_.meta.domain_measure;
    double udev = 0.0, vdev = 0.0;
    for (double x : state.u) udev = std::max(udev, std::abs(x - mean));
    for (double x : state.v) vdev = std::max(vdev, std::abs(x - mean));
    agg.final_u_dev = udev;
    agg.final_v_dev = vdev;
    agg.final_grad_v = max_face_gradient(state.v, sim_.grid());

    prev_sup_v_ = state.sup_v;
    prev_sup_u_ = state.sup_u;
    prev_sup_phi_ = state.sup_phi;
    if (opt_.trace_psi) {
        double gp = 0.0;
        for (double vi : state.v) gp = std::max(gp, gamma.deriv(vi));
        prev_sup_gprime_v_ = gp;
    }
    ledger_.meta.total_steps = state.steps;

    if (state.steps % ledger_.meta.cadence == 0) record(state);
}

void LedgerRecorder::finalize(const SimulationState& state) {
    if (last_recorded_step_ != state.steps || ledger_.samples.empty()) record(state);
}

Verdict check_mass(const BoundLedger& ledger) {
    const double tol = mass_drift_tolerance(ledger.meta.mass0);
    return pass_fail("mass_conservation", tol - ledger.agg.mass_drift_max,
                     "max |m(t)-m(0)| = " + fmt(ledger.agg.mass_drift_max) +
                         ", tol = " + fmt(tol));
}

Verdict check_v_floor(const BoundLedger& ledger) {
    if (std::isnan(ledger.meta.omega_star))
        return skip("v_floor", "omega_star unavailable (grid above the Green-scan cap)");
    const double floor = ledger.meta.v_star - 1e-10;
    return pass_fail("v_floor", ledger.agg.inf_v_min - floor,
                     "inf v = " + fmt(ledger.agg.inf_v_min) +
                         ", m*omega_star = " + fmt(ledger.meta.v_star));
}

Verdict check_invariant_region(const BoundLedger& ledger) {
    if (!ledger.meta.hyp_monotone)
        return skip("invariant_region",
                    "HypothesisNotMet: gamma' < 0 somewhere on [inf v_in, sup v_in]");
    const double lower = ledger.agg.inf_v_min - (ledger.meta.inf_vin - ledger.meta.tol_h);
    const double upper = (ledger.meta.sup_vin + ledger.meta.tol_h) - ledger.agg.sup_v_max;
    return pass_fail("invariant_region", std::min(lower, upper),
                     "v range [" + fmt(ledger.agg.inf_v_min) + ", " +
                         fmt(ledger.agg.sup_v_max) + "] vs v_in range [" +
                         fmt(ledger.meta.inf_vin) + ", " + fmt(ledger.meta.sup_vin) +
                         "] + tol_h " + fmt(ledger.meta.tol_h));
}

std::vector<Verdict> check_u_bounds(const BoundLedger& ledger) {
    std::vector<Verdict> out;
    if (!ledger.meta.hyp_monotone) {
        out.push_back(skip("u_bound_initial_data", "HypothesisNotMet: gamma' < 0 on data range"));
        out.push_back(skip("u_bound_concave", "HypothesisNotMet: gamma' < 0 on data range"));
        out.push_back(skip("phi_bound", "HypothesisNotMet: gamma' < 0 on data range"));
        return out;
    }
    const double bound1 = ledger.meta.sup_phiin / ledger.meta.gamma_inf_vin;
    out.push_back(pass_fail(
        "u_bound_initial_data", bound1 + ledger.meta.tol_h - ledger.agg.sup_u_max,
        "sup u = " + fmt(ledger.agg.sup_u_max) + " vs ||u_in gamma(v_in)||/gamma(min v_in) = " +
            fmt(bound1)));
    if (ledger.meta.hyp_concave) {
        out.push_back(pass_fail("u_bound_concave",
                                ledger.meta.sup_uin + ledger.meta.tol_h - ledger.agg.sup_u_max,
                                "sup u = " + fmt(ledger.agg.sup_u_max) + " vs ||u_in|| = " +
                                    fmt(ledger.meta.sup_uin)));
    } else {
        out.push_back(skip("u_bound_concave", "HypothesisNotMet: gamma'' > 0 on data range"));
    }
    out.push_back(pass_fail("phi_bound",
                            ledger.meta.sup_phiin + ledger.meta.tol_h - ledger.agg.sup_phi_max,
                            "sup phi = " + fmt(ledger.agg.sup_phi_max) +
                                " vs ||u_in gamma(v_in)|| = " + fmt(ledger.meta.sup_phiin)));
    return out;
}

Verdict check_v_ceiling(const BoundLedger& ledger) {
    if (std::isnan(ledger.meta.s_star))
        return skip("v_ceiling", "s* unavailable (NoSStarFound or search skipped)");
    return pass_fail("v_ceiling",
                     ledger.meta.s_star + ledger.meta.tol_h - ledger.agg.sup_v_max,
                     "sup v = " + fmt(ledger.agg.sup_v_max) + " vs s* = " +
                         fmt(ledger.meta.s_star) + " + tol_h " + fmt(ledger.meta.tol_h));
}

Verdict check_sup_v_le_sup_u(const BoundLedger& ledger) {
    const double tol = 10.0 * HelmholtzOperator::eps_ell * std::max(ledger.agg.sup_u_max, 1.0);
    return pass_fail("v_le_u", tol - ledger.agg.sup_v_minus_sup_u_max,
                     "max(sup v - sup u) = " + fmt(ledger.agg.sup_v_minus_sup_u_max));
}

std::vector<Verdict> check_domination_ledger(const BoundLedger& ledger) {
    std::vector<Verdict> out;
    const double inf = std::numeric_limits<double>::infinity();
    const double monotone_tol = 1e-9;
    auto trace = [&](const char* key, double viol, double incr, bool active) {
        if (!active) {
            out.push_back(skip(std::string("domination_") + key, "trace inactive"));
            return;
        }
        out.push_back(pass_fail(std::string("domination_") + key,
                                ledger.meta.tol_h - viol,
                                "max violation = " + fmt(viol) + ", slack tol_h = " +
                                    fmt(ledger.meta.tol_h)));
        out.push_back(pass_fail(std::string("trace_nonincreasing_") + key,
                                monotone_tol - incr,
                                "max increment = " + fmt(incr)));
    };
    trace("V", ledger.agg.viol_v_vs_V_max, ledger.agg.V_increase_max,
          ledger.agg.viol_v_vs_V_max > -inf);
    trace("U", ledger.agg.viol_u_vs_U_max, ledger.agg.U_increase_max,
          ledger.agg.viol_u_vs_U_max > -inf);
    trace("psi", ledger.agg.viol_phi_vs_psi_max, ledger.agg.psi_increase_max,
          ledger.agg.viol_phi_vs_psi_max > -inf);
    return out;
}

Verdict check_liapunov(const BoundLedger& ledger) {
    if (!ledger.meta.hyp_monotone)
        return skip("liapunov_decay",
                    "HypothesisNotMet: gamma' < 0 somewhere on [inf v_in, sup v_in]");
    const double h = grid_h(ledger.meta);
    const double C = ledger.meta.tol_h / (h * h);
    const double tol_E = C * (h * h + ledger.agg.dt_last) * ledger.agg.E_max;
    return pass_fail("liapunov_decay", tol_E - ledger.agg.E_increase_max,
                     "max E increment = " + fmt(ledger.agg.E_increase_max) +
                         ", tol_E = " + fmt(tol_E));
}

Verdict check_stabilization(const BoundLedger& ledger, double delta_stab) {
    const double value =
        ledger.agg.final_u_dev + ledger.agg.final_v_dev + ledger.agg.final_grad_v;
    Verdict v = pass_fail("stabilization", delta_stab - value,
                          "||u(T)-mean|| + ||v(T)-mean|| + max|grad v(T)| = " + fmt(value) +
                              ", threshold = " + fmt(delta_stab));
    if (v.status == Verdict::Status::Fail) v.detail += " (not yet stabilized)";
    return v;
}

std::vector<Verdict> run_all_checks(const BoundLedger& ledger, const CheckToggles& t) {
    std::vector<Verdict> out;
    if (t.mass) out.push_back(check_mass(ledger));
    if (t.v_floor) out.push_back(check_v_floor(ledger));
    if (t.invariant_region) out.push_back(check_invariant_region(ledger));
    if (t.u_bounds) {
        auto u = check_u_bounds(ledger);
        out.insert(out.end(), u.begin(), u.end());
    }
    if (t.v_ceiling) out.push_back(check_v_ceiling(ledger));
    if (t.v_le_u) out.push_back(check_sup_v_le_sup_u(ledger));
    if (t.domination) {
        auto d = check_domination_ledger(ledger);
        out.insert(out.end(), d.begin(), d.end());
    }
    if (t.liapunov) out.push_back(check_liapunov(ledger));
    if (t.stabilization) out.push_back(check_stabilization(ledger, t.delta_stab));
    return out;
}

ContinuousDependenceReport continuous_dependence_experiment(
    const Simulator& sim, const Field& u_in, const Field& perturbation_shape,
    std::vector<double> deltas, const StepControl& ctrl) {
    if (perturbation_shape.size() != u_in.size())
        throw SimError("perturbation shape size mismatch");
    ContinuousDependenceReport rep;
    rep.deltas = std::move(deltas);
    for (double delta : rep.deltas) {
        Field pert = u_in;
        for (std::size_t i = 0; i < pert.size(); ++i)
            pert[i] += delta * perturbation_shape[i];
        if (inf_val(pert) < 0.0)
            throw NegativityError("perturbation of size " + fmt(delta) +
                                  " makes the initial data negative");
        SimulationState a = sim.init_state(u_in);
        SimulationState b = sim.init_state(pert);
        auto dist = [&]() {
            double d = 0.0;
            for (std::size_t i = 0; i < a.u.size(); ++i)
                d = std::max(d, std::abs(a.u[i] - b.u[i]));
            double dv = 0.0;
            for (std::size_t i = 0; i < a.v.size(); ++i)
                dv = std::max(dv, std::abs(a.v[i] - b.v[i]));
            return d + dv;
        };
        double D = dist();
        while (a.t < ctrl.end_time && a.steps < ctrl.max_steps) {
            double dt = std::min(sim.stable_dt(a, ctrl), sim.stable_dt(b, ctrl));
            dt = std::min(dt, ctrl.end_time - a.t);
            sim.step(a, dt, ctrl);
            sim.step(b, dt, ctrl);
            D = std::max(D, dist());
        }
        rep.D.push_back(D);
    }
    rep.monotone = true;
    for (std::size_t i = 1; i < rep.D.size(); ++i)
        if (rep.D[i] > rep.D[i - 1] + 1e-14) rep.monotone = false;
    rep.max_ratio = 0.0;
    for (std::size_t i = 0; i < rep.D.size(); ++i)
        if (rep.deltas[i] > 0.0) rep.max_ratio = std::max(rep.max_ratio, rep.D[i] / rep.deltas[i]);
    return rep;
}

} // namespace chemotax
