#include "chemotax/output.hpp"

#include "chemotax/errors.hpp"
#include "chemotax/version.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace chemotax {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt_short(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

const char* status_name(Verdict::Status s) {
    switch (s) {
    case Verdict::Status::Pass: return "pass";
    case Verdict::Status::Fail: return "fail";
    default: return "skip";
    }
}

// NaN-safe JSON value: nlohmann renders non-finite doubles as null, which
// loses the distinction; encode them as strings instead.
nlohmann::ordered_json jnum(double x) {
    if (std::isfinite(x)) return x;
    return fmt(x);
}

void write_ledger_csv(const BoundLedger& ledger, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "# " << kVersion << "\n";
    out << "t,mass,sup_u,inf_u,sup_v,inf_v,sup_phi,V,U,psi,E,dissipation\n";
    for (const auto& s : ledger.samples) {
        out << fmt(s.t) << ',' << fmt(s.mass) << ',' << fmt(s.sup_u) << ','
            << fmt(s.inf_u) << ',' << fmt(s.sup_v) << ',' << fmt(s.inf_v) << ','
            << fmt(s.sup_phi) << ',' << fmt(s.V) << ',' << fmt(s.U) << ','
            << fmt(s.psi) << ',' << fmt(s.E) << ',' << fmt(s.dissipation) << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

void write_verdicts_json(const BoundLedger& ledger, const std::vector<Verdict>& verdicts,
                         const std::filesystem::path& path) {
    nlohmann::ordered_json doc;
    doc["version"] = kVersion;

    nlohmann::ordered_json vj = nlohmann::ordered_json::array();
    for (const auto& v : verdicts) {
        nlohmann::ordered_json one;
        one["key"] = v.key;
        one["status"] = status_name(v.status);
        one["margin"] = jnum(v.margin);
        one["detail"] = v.detail;
        vj.push_back(std::move(one));
    }
    doc["verdicts"] = std::move(vj);

    const auto& a = ledger.agg;
    nlohmann::ordered_json agg;
    agg["mass_drift_max"] = jnum(a.mass_drift_max);
    agg["inf_v_min"] = jnum(a.inf_v_min);
    agg["sup_v_max"] = jnum(a.sup_v_max);
    agg["sup_u_max"] = jnum(a.sup_u_max);
    agg["sup_phi_max"] = jnum(a.sup_phi_max);
    agg["sup_v_minus_sup_u_max"] = jnum(a.sup_v_minus_sup_u_max);
    agg["viol_v_vs_V_max"] = jnum(a.viol_v_vs_V_max);
    agg["viol_u_vs_U_max"] = jnum(a.viol_u_vs_U_max);
    agg["viol_phi_vs_psi_max"] = jnum(a.viol_phi_vs_psi_max);
    agg["V_increase_max"] = jnum(a.V_increase_max);
    agg["U_increase_max"] = jnum(a.U_increase_max);
    agg["psi_increase_max"] = jnum(a.psi_increase_max);
    agg["E_increase_max"] = jnum(a.E_increase_max);
    agg["E_max"] = jnum(a.E_max);
    agg["liapunov_residual_max"] = jnum(a.liapunov_residual_max);
    agg["final_u_dev"] = jnum(a.final_u_dev);
    agg["final_v_dev"] = jnum(a.final_v_dev);
    agg["final_grad_v"] = jnum(a.final_grad_v);
    agg["dt_last"] = jnum(a.dt_last);
    doc["aggregates"] = std::move(agg);

    const auto& m = ledger.meta;
    nlohmann::ordered_json meta;
    meta["preset"] = m.preset;
    meta["dimension"] = m.dimension;
    meta["cells_x"] = m.cells_x;
    meta["cells_y"] = m.cells_y;
    meta["extent_x"] = jnum(m.extent_x);
    meta["extent_y"] = jnum(m.extent_y);
    meta["hx"] = jnum(m.hx);
    meta["hy"] = jnum(m.hy);
    meta["domain_measure"] = jnum(m.domain_measure);
    meta["sigma"] = jnum(m.sigma);
    meta["end_time"] = jnum(m.end_time);
    meta["mass0"] = jnum(m.mass0);
    meta["sup_uin"] = jnum(m.sup_uin);
    meta["inf_uin"] = jnum(m.inf_uin);
    meta["sup_vin"] = jnum(m.sup_vin);
    meta["inf_vin"] = jnum(m.inf_vin);
    meta["sup_phiin"] = jnum(m.sup_phiin);
    meta["omega_star"] = jnum(m.omega_star);
    meta["v_star"] = jnum(m.v_star);
    meta["s_star"] = jnum(m.s_star);
    meta["gamma_s_star"] = jnum(m.gamma_s_star);
    meta["tol_h"] = jnum(m.tol_h);
    meta["tol_E"] = jnum(m.tol_E);
    meta["gamma_inf_vin"] = jnum(m.gamma_inf_vin);
    meta["gamma_prime_inf_vin"] = jnum(m.gamma_prime_inf_vin);
    meta["hyp_monotone"] = m.hyp_monotone;
    meta["hyp_concave"] = m.hyp_concave;
    meta["gamma_nondecreasing"] = m.gamma_nondecreasing;
    meta["cadence"] = m.cadence;
    meta["total_steps"] = m.total_steps;
    doc["meta"] = std::move(meta);

    auto out = open_out(path);
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

void write_meta_txt(const BoundLedger& ledger, const RunConfig& cfg,
                    const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "# " << kVersion << "\n";
    out << "# resolved configuration\n";
    out << render_config(cfg);
    const auto& m = ledger.meta;
    out << "\n# derived quantities\n";
    out << "# hx = " << fmt(m.hx) << "\n";
    if (m.dimension == 2) out << "# hy = " << fmt(m.hy) << "\n";
    out << "# mass0 = " << fmt(m.mass0) << "\n";
    out << "# omega_star = " << fmt(m.omega_star) << "\n";
    out << "# v_star = " << fmt(m.v_star) << "\n";
    out << "# s_star = " << fmt(m.s_star) << "\n";
    out << "# gamma_s_star = " << fmt(m.gamma_s_star) << "\n";
    out << "# tol_h = " << fmt(m.tol_h) << "\n";
    out << "# tol_E = " << fmt(m.tol_E) << "\n";
    out << "# total_steps = " << m.total_steps << "\n";
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace

void write_snapshot(const Grid& grid, const SimulationState& state, const std::string& path) {
    auto out = open_out(path);
    out << "# " << kVersion << "\n";
    if (grid.dimension == 1) {
        out << "index,x,u,v\n";
        for (std::size_t i = 0; i < grid.cells_x; ++i)
            out << i << ',' << fmt(grid.x_center(i)) << ',' << fmt(state.u[i]) << ','
                << fmt(state.v[i]) << '\n';
    } else {
        out << "index,x,y,u,v\n";
        for (std::size_t j = 0; j < grid.cells_y; ++j)
            for (std::size_t i = 0; i < grid.cells_x; ++i) {
                const std::size_t k = grid.index(i, j);
                out << k << ',' << fmt(grid.x_center(i)) << ',' << fmt(grid.y_center(j))
                    << ',' << fmt(state.u[k]) << ',' << fmt(state.v[k]) << '\n';
            }
    }
    if (!out) throw IoError("write failed: " + path);
}

void write_outputs(const BoundLedger& ledger, const std::vector<Verdict>& verdicts,
                   const RunConfig& cfg, const Grid& grid,
                   const SimulationState& initial_state,
                   const SimulationState& final_state, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir);
    const std::filesystem::path base(dir);

    write_ledger_csv(ledger, base / "ledger.csv");
    write_verdicts_json(ledger, verdicts, base / "verdicts.json");
    write_meta_txt(ledger, cfg, base / "meta.txt");
    write_snapshot(grid, initial_state,
                   (base / ("snapshot_" + fmt_short(initial_state.t) + ".csv")).string());
    write_snapshot(grid, final_state,
                   (base / ("snapshot_" + fmt_short(final_state.t) + ".csv")).string());
}

} // namespace chemotax
