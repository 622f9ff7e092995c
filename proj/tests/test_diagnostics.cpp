#include <doctest.h>

#include "chemotax/diagnostics.hpp"
#include "chemotax/errors.hpp"
#include "chemotax/runner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

using namespace chemotax;

namespace {

RunConfig base_config() {
    RunConfig cfg;
    cfg.dimension = 1;
    cfg.cells_x = 32;
    cfg.preset = "power_growth";
    cfg.initial.kind = "cosine_bump";
    cfg.initial.level = 1.0;
    cfg.initial.amplitude = 0.9;
    cfg.initial.mode = 1;
    cfg.end_time = 0.5;
    return cfg;
}

} // namespace

TEST_CASE("recorder cadence and sample structure") {
    RunConfig cfg = base_config();
    cfg.cadence = 7;
    RunResult r = run_simulation(cfg);
    const BoundLedger& led = r.ledger;
    REQUIRE(!led.samples.empty());
    CHECK(led.samples.front().t == 0.0);
    CHECK(led.samples.back().t == doctest::Approx(cfg.end_time));
    // interior samples land on the cadence; the final one may not
    const std::size_t expected = led.meta.total_steps / 7 + 1 +
                                 (led.meta.total_steps % 7 != 0 ? 1 : 0);
    CHECK(led.samples.size() == expected);
    for (const auto& s : led.samples) {
        CHECK(std::isfinite(s.V));
        CHECK(std::isfinite(s.U));
        CHECK(std::isfinite(s.psi));
        CHECK(s.inf_u <= s.sup_u);
        CHECK(s.inf_v <= s.sup_v);
    }
}

TEST_CASE("recorder traces dominate and decay on a monotone run") {
    RunResult r = run_simulation(base_config());
    const LedgerAggregates& a = r.ledger.agg;
    CHECK(a.viol_v_vs_V_max <= 0.0 + 1e-12);
    CHECK(a.viol_u_vs_U_max <= 0.0 + 1e-12);
    CHECK(a.viol_phi_vs_psi_max <= 0.0 + 1e-12);
    CHECK(a.V_increase_max <= 1e-12);
    CHECK(a.U_increase_max <= 1e-12);
    CHECK(a.psi_increase_max <= 1e-12);
    CHECK(a.E_increase_max <= 1e-12);
    CHECK(a.mass_drift_max <= mass_drift_tolerance(r.ledger.meta.mass0));
    // energy decays toward the flat-state value |Omega| mean^2 / 2
    const double mean = r.ledger.meta.mass0 / r.ledger.meta.domain_measure;
    CHECK(r.ledger.samples.back().E >= 0.5 * mean * mean - 1e-9);
    CHECK(r.ledger.samples.front().E == doctest::Approx(a.E_max));
}

TEST_CASE("liapunov identity residual shrinks ~4x under (h, dt) -> (h/2, dt/4)") {
    RunConfig coarse = base_config();
    coarse.cells_x = 32;
    coarse.end_time = 0.05;
    // fix dt via dt_max so refinement scales it exactly by 1/4
    coarse.dt_max = 1e-4;
    coarse.sigma = 1.0;
    RunConfig fine = coarse;
    fine.cells_x = 64;
    fine.dt_max = 2.5e-5;
    const double rc = run_simulation(coarse).ledger.agg.liapunov_residual_max;
    const double rf = run_simulation(fine).ledger.agg.liapunov_residual_max;
    CHECK(rc / rf > 2.5);
    CHECK(rc / rf < 7.0);
}

TEST_CASE("checks pass on the clean ledger and every toggle appears once") {
    RunConfig cfg = base_config();
    cfg.checks.stabilization = true;
    cfg.checks.delta_stab = 1e3; // generous: only exercises the plumbing here
    RunResult r = run_simulation(cfg);
    CHECK(all_pass_or_skip(r.verdicts));
    std::vector<std::string> keys;
    for (const auto& v : r.verdicts) keys.push_back(v.key);
    for (const char* k :
         {"mass_conservation", "v_floor", "invariant_region", "u_bound_initial_data",
          "u_bound_concave", "phi_bound", "v_ceiling", "v_le_u", "domination_V",
          "trace_nonincreasing_V", "domination_U", "trace_nonincreasing_U",
          "domination_psi", "trace_nonincreasing_psi", "liapunov_decay", "stabilization"})
        CHECK(std::count(keys.begin(), keys.end(), std::string(k)) == 1);
    CHECK(keys.size() == 16);
}

TEST_CASE("check toggles drop their verdicts") {
    RunConfig cfg = base_config();
    cfg.end_time = 0.05;
    cfg.checks.domination = false;
    cfg.checks.liapunov = false;
    RunResult r = run_simulation(cfg);
    for (const auto& v : r.verdicts) {
        CHECK(v.key.find("domination") == std::string::npos);
        CHECK(v.key != "liapunov_decay");
    }
}

TEST_CASE("hypothesis gating: chemoattractive run skips monotone-only checks") {
    RunConfig cfg = base_config();
    cfg.preset = "exp_decay";
    cfg.motility_params.chi = 0.2;
    cfg.end_time = 0.05;
    RunResult r = run_simulation(cfg);
    auto find = [&](const std::string& key) {
        for (const auto& v : r.verdicts)
            if (v.key == key) return v;
        return Verdict{};
    };
    CHECK(find("invariant_region").status == Verdict::Status::Skip);
    CHECK(find("u_bound_initial_data").status == Verdict::Status::Skip);
    CHECK(find("liapunov_decay").status == Verdict::Status::Skip);
    CHECK(find("v_ceiling").status == Verdict::Status::Skip); // no s* exists
    CHECK(find("mass_conservation").status == Verdict::Status::Pass);
    CHECK(find("v_floor").status == Verdict::Status::Pass);
}

TEST_CASE("wobble run uses the general V ceiling trace") {
    RunConfig cfg = base_config();
    cfg.preset = "wobble";
    cfg.motility_params.a = 0.5;
    cfg.motility_params.b = 1.0;
    cfg.end_time = 0.2;
    RunResult r = run_simulation(cfg);
    REQUIRE(r.split != nullptr);
    CHECK(std::isfinite(r.ledger.meta.s_star));
    CHECK(r.ledger.samples.front().V == doctest::Approx(r.ledger.meta.s_star));
    auto find = [&](const std::string& key) {
        for (const auto& v : r.verdicts)
            if (v.key == key) return v;
        return Verdict{};
    };
    CHECK(find("v_ceiling").status == Verdict::Status::Pass);
    CHECK(find("domination_V").status == Verdict::Status::Pass);
    // U trace needs concavity, wobble is not concave on the data range
    CHECK(find("domination_U").status == Verdict::Status::Skip);
}

TEST_CASE("synthetic corrupted ledgers fail the matching check") {
    RunResult good = run_simulation(base_config());

    BoundLedger drifted = good.ledger;
    drifted.agg.mass_drift_max = 1.0;
    CHECK(check_mass(drifted).status == Verdict::Status::Fail);

    BoundLedger sunk = good.ledger;
    sunk.agg.inf_v_min = sunk.meta.v_star - 1.0;
    CHECK(check_v_floor(sunk).status == Verdict::Status::Fail);

    BoundLedger escaped = good.ledger;
    escaped.agg.sup_v_max = escaped.meta.sup_vin + 10.0;
    CHECK(check_invariant_region(escaped).status == Verdict::Status::Fail);
    CHECK(check_v_ceiling(escaped).status == Verdict::Status::Fail);

    BoundLedger rising = good.ledger;
    rising.agg.E_increase_max = 1.0;
    CHECK(check_liapunov(rising).status == Verdict::Status::Fail);

    BoundLedger unstable = good.ledger;
    unstable.agg.final_u_dev = 1.0;
    CHECK(check_stabilization(unstable, 1e-3).status == Verdict::Status::Fail);
    CHECK(check_stabilization(good.ledger, 1e9).status == Verdict::Status::Pass);
}

TEST_CASE("v_floor skips when omega_star is unavailable") {
    BoundLedger led;
    led.meta.omega_star = std::numeric_limits<double>::quiet_NaN();
    CHECK(check_v_floor(led).status == Verdict::Status::Skip);
}

TEST_CASE("continuous dependence is monotone with bounded ratio") {
    Grid g = build_grid(1, 1.0, 32);
    Simulator sim(g, preset("power_growth", {}));
    const double pi = std::acos(-1.0);
    Field u(g.cell_count()), shape(g.cell_count());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = 1.0 + 0.5 * std::cos(pi * g.x_center(i));
        shape[i] = std::cos(2.0 * pi * g.x_center(i));
    }
    StepControl ctrl;
    ctrl.end_time = 0.1;
    ContinuousDependenceReport rep =
        continuous_dependence_experiment(sim, u, shape, {0.1, 0.05, 0.025}, ctrl);
    REQUIRE(rep.D.size() == 3);
    CHECK(rep.monotone);
    CHECK(rep.D[0] > rep.D[1]);
    CHECK(rep.D[1] > rep.D[2]);
    CHECK(rep.max_ratio > 0.0);
    CHECK(rep.max_ratio < 100.0);

    Field bad_shape(g.cell_count(), -100.0);
    CHECK_THROWS_AS(
        continuous_dependence_experiment(sim, u, bad_shape, {0.1}, ctrl),
        NegativityError);
}
