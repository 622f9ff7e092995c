#include "chemotax/runner.hpp"

#include "chemotax/errors.hpp"
#include "chemotax/version.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace chemotax {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

const char* status_name(Verdict::Status s) {
    switch (s) {
    case Verdict::Status::Pass: return "pass";
    case Verdict::Status::Fail: return "fail";
    default: return "skip";
    }
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

bool all_pass_or_skip(const std::vector<Verdict>& verdicts) {
    for (const auto& v : verdicts)
        if (v.status == Verdict::Status::Fail) return false;
    return true;
}

RunResult run_simulation(const RunConfig& cfg) {
    RunResult res;
    res.cfg = cfg;
    res.grid = build_grid(cfg.dimension, cfg.extent_x, cfg.cells_x, cfg.extent_y, cfg.cells_y);
    MotilityFunction gamma = preset(cfg.preset, cfg.motility_params);
    Field u_in = evaluate_initial(cfg.initial, res.grid, cfg.seed);

    Simulator sim(res.grid, gamma);
    res.initial_state = sim.init_state(u_in);
    const SimulationState& s0 = res.initial_state;

    LedgerMeta meta;
    meta.version = kVersion;
    meta.preset = cfg.preset;
    meta.dimension = res.grid.dimension;
    meta.cells_x = res.grid.cells_x;
    meta.cells_y = res.grid.cells_y;
    meta.extent_x = res.grid.extent_x;
    meta.extent_y = res.grid.extent_y;
    meta.hx = res.grid.hx;
    meta.hy = res.grid.hy;
    meta.domain_measure = res.grid.domain_measure;
    meta.sigma = cfg.sigma;
    meta.end_time = cfg.end_time;
    meta.mass0 = s0.mass;
    meta.sup_uin = s0.sup_u;
    meta.inf_uin = s0.inf_u;
    meta.sup_vin = s0.sup_v;
    meta.inf_vin = s0.inf_v;
    meta.sup_phiin = s0.sup_phi;

    if (res.grid.cell_count() <= HelmholtzOperator::omega_star_cell_cap) {
        meta.omega_star = sim.op().omega_star_discrete();
        meta.v_star = meta.mass0 * meta.omega_star;
    }

    meta.hyp_monotone = gamma.is_nondecreasing_on(s0.inf_v, s0.sup_v);
    meta.hyp_concave = gamma.is_concave_on(s0.inf_v, s0.sup_v);
    meta.gamma_nondecreasing = gamma.nondecreasing;
    meta.gamma_inf_vin = gamma.eval(s0.inf_v);
    meta.gamma_prime_inf_vin = gamma.deriv(s0.inf_v);

    if (gamma.nondecreasing) {
        meta.s_star = s0.sup_v;
    } else if (std::isfinite(meta.v_star) && meta.v_star > 0.0) {
        try {
            meta.s_star = find_s_star(gamma, meta.v_star, s0.sup_v, default_s_cap(s0.sup_v));
        } catch (const NoSStarFoundError&) {
            // ceiling trace and check stay inactive (anchor does not exist
            // below the scan cap, e.g. chemoattractive exp_decay)
        }
    }
    if (std::isfinite(meta.s_star)) meta.gamma_s_star = gamma.eval(meta.s_star);

    const double h = (res.grid.dimension == 2) ? std::max(res.grid.hx, res.grid.hy)
                                               : res.grid.hx;
    const double gref = std::isfinite(meta.gamma_s_star)
                            ? meta.gamma_s_star
                            : std::max(gamma.eval(s0.inf_v), gamma.eval(s0.sup_v));
    meta.tol_h = 10.0 * (1.0 + gref) * h * h;

    if (!gamma.nondecreasing && std::isfinite(meta.s_star))
        res.split = std::make_shared<SplitMotility>(gamma, meta.s_star, meta.v_star,
                                                    default_s_cap(s0.sup_v));

    StepControl ctrl;
    ctrl.sigma = cfg.sigma;
    ctrl.dt_min = cfg.dt_min;
    ctrl.dt_max = cfg.dt_max;
    ctrl.end_time = cfg.end_time;
    ctrl.max_steps = cfg.max_steps;
    ctrl.nonconservative_stencil = cfg.nonconservative_stencil;

    std::size_t cadence = cfg.cadence;
    if (cadence == 0) {
        const double dt0 = sim.stable_dt(s0, ctrl);
        const double est_steps = cfg.end_time / dt0;
        cadence = std::max<std::size_t>(1, static_cast<std::size_t>(est_steps / 1000.0));
    }

    LedgerRecorder::Options opt;
    opt.cadence = cadence;
    opt.trace_V_monotone = gamma.nondecreasing;
    opt.split = res.split.get();
    opt.trace_U = meta.hyp_monotone && meta.hyp_concave && meta.gamma_prime_inf_vin >= 0.0;
    opt.trace_psi = meta.hyp_monotone;

    LedgerRecorder recorder(sim, meta, opt);
    res.final_state = sim.run(res.initial_state, ctrl, std::ref(recorder));
    recorder.finalize(res.final_state);
    res.ledger = recorder.take_ledger();

    const double C = res.ledger.meta.tol_h / (h * h);
    res.ledger.meta.tol_E = C * (h * h + res.ledger.agg.dt_last) * res.ledger.agg.E_max;

    res.verdicts = run_all_checks(res.ledger, cfg.checks);
    return res;
}

int run_command(const RunConfig& cfg, const std::string& out_override) {
    RunConfig c = cfg;
    if (!out_override.empty()) c.out_dir = out_override;
    try {
        RunResult r = run_simulation(c);
        write_outputs(r.ledger, r.verdicts, c, r.grid, r.initial_state, r.final_state,
                      c.out_dir);
        for (const auto& v : r.verdicts)
            std::cout << v.key << ": " << status_name(v.status) << " (" << v.detail << ")\n";
        return all_pass_or_skip(r.verdicts) ? 0 : 1;
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

namespace {

struct OverrideAxis {
    std::string key;
    std::vector<std::string> values;
};

std::vector<OverrideAxis> parse_override_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open parameter grid: " + path);
    std::vector<OverrideAxis> axes;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("parameter grid line " + std::to_string(lineno) +
                              ": expected 'section.key = v1, v2, ...'");
        OverrideAxis axis;
        axis.key = trim(line.substr(0, eq));
        std::stringstream values(line.substr(eq + 1));
        std::string item;
        while (std::getline(values, item, ',')) {
            item = trim(item);
            if (!item.empty()) axis.values.push_back(item);
        }
        if (axis.key.empty() || axis.values.empty())
            throw ConfigError("parameter grid line " + std::to_string(lineno) +
                              ": empty key or value list");
        axes.push_back(std::move(axis));
    }
    if (axes.empty()) throw ConfigError("parameter grid is empty: " + path);
    return axes;
}

} // namespace

int sweep_command(const std::string& config_path, const std::string& grid_path) {
    RunConfig base;
    std::vector<OverrideAxis> axes;
    try {
        base = load_config_file(config_path);
        axes = parse_override_grid(grid_path);
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::size_t total = 1;
    for (const auto& a : axes) total *= a.values.size();

    const std::filesystem::path base_dir(base.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(base_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create output directory: " << base.out_dir << "\n";
        return 2;
    }

    std::ofstream summary(base_dir / "summary.csv", std::ios::binary | std::ios::trunc);
    summary << "# " << kVersion << "\n";
    summary << "run,dir";
    for (const auto& a : axes) summary << ',' << a.key;
    summary << ",status,final_E,mass_drift_max,final_u_dev\n";

    bool any_failed = false;
    std::vector<double> final_E(total, std::numeric_limits<double>::quiet_NaN());
    std::vector<std::size_t> idx(axes.size(), 0);
    for (std::size_t r = 0; r < total; ++r) {
        char tag[32];
        std::snprintf(tag, sizeof(tag), "run_%03zu", r);
        RunConfig cfg = base;
        cfg.out_dir = (base_dir / tag).string();
        std::string status = "pass";
        double drift = std::numeric_limits<double>::quiet_NaN();
        double udev = std::numeric_limits<double>::quiet_NaN();
        try {
            for (std::size_t a = 0; a < axes.size(); ++a)
                apply_override(cfg, axes[a].key, axes[a].values[idx[a]]);
            RunResult res = run_simulation(cfg);
            write_outputs(res.ledger, res.verdicts, cfg, res.grid, res.initial_state,
                          res.final_state, cfg.out_dir);
            if (!all_pass_or_skip(res.verdicts)) status = "fail";
            if (!res.ledger.samples.empty()) final_E[r] = res.ledger.samples.back().E;
            drift = res.ledger.agg.mass_drift_max;
            udev = res.ledger.agg.final_u_dev;
        } catch (const SimError& e) {
            status = "error";
            std::cerr << tag << ": " << e.what() << "\n";
        }
        if (status != "pass") any_failed = true;

        summary << tag << ',' << tag;
        for (std::size_t a = 0; a < axes.size(); ++a) summary << ',' << axes[a].values[idx[a]];
        summary << ',' << status << ',' << fmt(final_E[r]) << ',' << fmt(drift) << ','
                << fmt(udev) << '\n';
        std::cout << tag << ": " << status << "\n";

        for (std::size_t a = axes.size(); a-- > 0;) {
            if (++idx[a] < axes[a].values.size()) break;
            idx[a] = 0;
        }
    }

    // Refinement study: a single swept cell-count axis with >= 3 points
    // yields an observed convergence order from the final energies of the
    // last three (finest) runs via the Richardson ratio.
    if (axes.size() == 1 && axes[0].key.find("cells") != std::string::npos &&
        final_E.size() >= 3) {
        const std::size_t n = final_E.size();
        const double d1 = std::abs(final_E[n - 3] - final_E[n - 2]);
        const double d2 = std::abs(final_E[n - 2] - final_E[n - 1]);
        const double order = (d2 > 0.0 && d1 > 0.0) ? std::log2(d1 / d2)
                                                    : std::numeric_limits<double>::quiet_NaN();
        summary << "# observed_order," << fmt(order) << '\n';
        std::cout << "observed_order: " << fmt(order) << "\n";
    }

    if (!summary) {
        std::cerr << "error: write failed: " << (base_dir / "summary.csv").string() << "\n";
        return 2;
    }
    return any_failed ? 1 : 0;
}

namespace {

RunConfig selftest_config() {
    RunConfig cfg;
    cfg.dimension = 1;
    cfg.extent_x = 1.0;
    cfg.cells_x = 16;
    cfg.preset = "power_growth";
    cfg.motility_params.k = 1.0;
    cfg.initial.kind = "cosine_bump";
    cfg.initial.level = 1.0;
    cfg.initial.amplitude = 0.5;
    cfg.initial.mode = 1;
    cfg.sigma = 0.9;
    cfg.end_time = 0.2;
    return cfg;
}

bool files_identical(const std::filesystem::path& a, const std::filesystem::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    return sa.str() == sb.str();
}

Verdict find_verdict(const std::vector<Verdict>& verdicts, const std::string& key) {
    for (const auto& v : verdicts)
        if (v.key == key) return v;
    Verdict missing;
    missing.key = key;
    missing.detail = "verdict missing from summary";
    return missing;
}

} // namespace

int selftest_command() {
    bool ok = true;
    auto report = [&ok](const char* name, bool good, const std::string& detail) {
        std::cout << "selftest " << name << ": " << (good ? "ok" : "FAILED");
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
        if (!good) ok = false;
    };

    try {
        // positive control: every enabled check passes on a benign run
        RunResult good = run_simulation(selftest_config());
        report("positive_run", all_pass_or_skip(good.verdicts),
               std::to_string(good.verdicts.size()) + " verdicts");

        // determinism: repeated runs are byte-identical
        const auto tmp = std::filesystem::temp_directory_path() / "chemotax_selftest";
        std::filesystem::remove_all(tmp);
        const auto dir_a = tmp / "a", dir_b = tmp / "b";
        RunResult again = run_simulation(selftest_config());
        write_outputs(good.ledger, good.verdicts, selftest_config(), good.grid,
                      good.initial_state, good.final_state, dir_a.string());
        write_outputs(again.ledger, again.verdicts, selftest_config(), again.grid,
                      again.initial_state, again.final_state, dir_b.string());
        bool identical = true;
        std::size_t compared = 0;
        for (const auto& entry : std::filesystem::directory_iterator(dir_a)) {
            ++compared;
            if (!files_identical(entry.path(), dir_b / entry.path().filename()))
                identical = false;
        }
        report("determinism", identical && compared >= 4,
               std::to_string(compared) + " files compared");

        // fixture 1: non-conservative stencil must trip the mass check
        RunConfig bad_mass = selftest_config();
        bad_mass.nonconservative_stencil = true;
        RunResult broken = run_simulation(bad_mass);
        Verdict mass = find_verdict(broken.verdicts, "mass_conservation");
        report("nonconservative_stencil_detected", mass.status == Verdict::Status::Fail,
               mass.detail);

        // fixture 2: halving the recorded V trace must trip domination
        BoundLedger corrupted = good.ledger;
        OdeTrace halved{OdeKind::V_monotone, {}, {}};
        std::vector<double> sup_v_series;
        double worst = -std::numeric_limits<double>::infinity();
        for (auto& s : corrupted.samples) {
            s.V *= 0.5;
            halved.append(s.t, s.V);
            sup_v_series.push_back(s.sup_v);
            worst = std::max(worst, s.sup_v - s.V);
        }
        corrupted.agg.viol_v_vs_V_max = worst;
        Verdict dom = find_verdict(run_all_checks(corrupted, selftest_config().checks),
                                   "domination_V");
        DominationReport rep = check_domination(sup_v_series, halved, corrupted.meta.tol_h);
        report("halved_V_trace_detected",
               dom.status == Verdict::Status::Fail && !rep.dominated && rep.violations > 0,
               "first violation at t = " + fmt(rep.first_violation_time));

        // fixture 3: a ledger claiming inf v below the floor must trip v_floor
        BoundLedger sunk = good.ledger;
        sunk.agg.inf_v_min = sunk.meta.v_star - 1.0;
        Verdict floor_v = find_verdict(run_all_checks(sunk, selftest_config().checks),
                                       "v_floor");
        report("floor_violation_detected", floor_v.status == Verdict::Status::Fail,
               floor_v.detail);

        std::filesystem::remove_all(tmp);
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::cout << (ok ? "selftest: all checks behaved as expected\n"
                     : "selftest: FAILURES detected\n");
    return ok ? 0 : 1;
}

} // namespace chemotax
