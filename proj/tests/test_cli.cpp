#include <doctest.h>

#include "chemotax/errors.hpp"
#include "chemotax/output.hpp"
#include "chemotax/runner.hpp"
#include "chemotax/version.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace chemotax;
namespace fs = std::filesystem;

namespace {

RunConfig quick_config() {
    RunConfig cfg;
    cfg.dimension = 1;
    cfg.cells_x = 16;
    cfg.preset = "power_growth";
    cfg.initial.kind = "cosine_bump";
    cfg.initial.level = 1.0;
    cfg.initial.amplitude = 0.5;
    cfg.end_time = 0.05;
    return cfg;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

fs::path fresh_dir(const char* name) {
    fs::path p = fs::temp_directory_path() / "chemotax_cli_tests" / name;
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("write_outputs emits the full artifact set with frozen columns") {
    RunConfig cfg = quick_config();
    RunResult r = run_simulation(cfg);
    fs::path dir = fresh_dir("artifacts");
    write_outputs(r.ledger, r.verdicts, cfg, r.grid, r.initial_state, r.final_state,
                  dir.string());

    CHECK(fs::exists(dir / "ledger.csv"));
    CHECK(fs::exists(dir / "verdicts.json"));
    CHECK(fs::exists(dir / "meta.txt"));
    CHECK(fs::exists(dir / "snapshot_0.csv"));
    CHECK(fs::exists(dir / "snapshot_0.05.csv"));

    auto lines = split_lines(slurp(dir / "ledger.csv"));
    REQUIRE(lines.size() >= 3);
    CHECK(lines[0] == std::string("# ") + kVersion);
    CHECK(lines[1] == "t,mass,sup_u,inf_u,sup_v,inf_v,sup_phi,V,U,psi,E,dissipation");
    CHECK(lines.size() == 2 + r.ledger.samples.size());

    // version string embedded in every output
    for (const char* f : {"verdicts.json", "meta.txt", "snapshot_0.csv"})
        CHECK(slurp(dir / f).find(kVersion) != std::string::npos);
}

TEST_CASE("snapshot column count is 2 + dimension (+ u,v payload)") {
    RunConfig cfg1 = quick_config();
    RunResult r1 = run_simulation(cfg1);
    fs::path dir = fresh_dir("snapshots");
    fs::create_directories(dir);
    write_snapshot(r1.grid, r1.initial_state, (dir / "s1.csv").string());
    auto l1 = split_lines(slurp(dir / "s1.csv"));
    CHECK(l1[1] == "index,x,u,v");
    CHECK(std::count(l1[2].begin(), l1[2].end(), ',') == 3);
    CHECK(l1.size() == 2 + r1.grid.cell_count());

    RunConfig cfg2 = quick_config();
    cfg2.dimension = 2;
    cfg2.cells_x = 6;
    cfg2.cells_y = 5;
    RunResult r2 = run_simulation(cfg2);
    write_snapshot(r2.grid, r2.initial_state, (dir / "s2.csv").string());
    auto l2 = split_lines(slurp(dir / "s2.csv"));
    CHECK(l2[1] == "index,x,y,u,v");
    CHECK(std::count(l2[2].begin(), l2[2].end(), ',') == 4);
    CHECK(l2.size() == 2 + r2.grid.cell_count());
}

TEST_CASE("identical config and seed produce byte-identical outputs") {
    RunConfig cfg = quick_config();
    cfg.initial.kind = "random";
    cfg.seed = 1234;
    fs::path da = fresh_dir("det_a"), db = fresh_dir("det_b");
    RunResult a = run_simulation(cfg);
    RunResult b = run_simulation(cfg);
    write_outputs(a.ledger, a.verdicts, cfg, a.grid, a.initial_state, a.final_state,
                  da.string());
    write_outputs(b.ledger, b.verdicts, cfg, b.grid, b.initial_state, b.final_state,
                  db.string());
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(da)) {
        ++compared;
        CHECK(slurp(entry.path()) == slurp(db / entry.path().filename()));
    }
    CHECK(compared == 5);
}

TEST_CASE("flat run ledger has a constant V column") {
    RunConfig cfg = quick_config();
    cfg.initial.kind = "flat";
    cfg.initial.level = 1.0;
    RunResult r = run_simulation(cfg);
    const double V0 = r.ledger.samples.front().V;
    for (const auto& s : r.ledger.samples) CHECK(s.V == doctest::Approx(V0).epsilon(1e-13));
}

TEST_CASE("run_command exit statuses") {
    fs::path dir = fresh_dir("run_cmd");
    RunConfig ok = quick_config();
    CHECK(run_command(ok, (dir / "ok").string()) == 0);
    CHECK(fs::exists(dir / "ok" / "verdicts.json"));

    // corrupted fixture: non-conservative stencil must fail a check but
    // still write the full ledger
    RunConfig broken = quick_config();
    broken.nonconservative_stencil = true;
    CHECK(run_command(broken, (dir / "broken").string()) == 1);
    CHECK(fs::exists(dir / "broken" / "ledger.csv"));

    // runtime errors map to exit 2
    RunConfig unwritable = quick_config();
    CHECK(run_command(unwritable, "/proc/definitely/not/writable") == 2);
}

TEST_CASE("sweep runs the cartesian product and writes a summary") {
    fs::path dir = fresh_dir("sweep");
    fs::create_directories(dir);
    RunConfig base = quick_config();
    base.out_dir = (dir / "out").string();
    {
        std::ofstream cfg(dir / "template.ini");
        cfg << render_config(base);
        std::ofstream grid(dir / "grid.txt");
        grid << "motility.k = 1, 2\n";
        grid << "step.sigma = 0.5, 0.9\n";
    }
    CHECK(sweep_command((dir / "template.ini").string(), (dir / "grid.txt").string()) == 0);
    for (const char* run : {"run_000", "run_001", "run_002", "run_003"})
        CHECK(fs::exists(dir / "out" / run / "verdicts.json"));
    auto lines = split_lines(slurp(dir / "out" / "summary.csv"));
    CHECK(lines[1] == "run,dir,motility.k,step.sigma,status,final_E,mass_drift_max,final_u_dev");
    CHECK(lines.size() == 2 + 4);
    CHECK(lines[2].find("run_000") == 0);
    CHECK(lines[2].find(",pass,") != std::string::npos);
}

TEST_CASE("refinement sweep reports an observed convergence order") {
    fs::path dir = fresh_dir("sweep_refine");
    fs::create_directories(dir);
    RunConfig base = quick_config();
    base.end_time = 0.02;
    base.out_dir = (dir / "out").string();
    {
        std::ofstream cfg(dir / "template.ini");
        cfg << render_config(base);
        std::ofstream grid(dir / "grid.txt");
        grid << "grid.cells_x = 16, 32, 64\n";
    }
    CHECK(sweep_command((dir / "template.ini").string(), (dir / "grid.txt").string()) == 0);
    const std::string summary = slurp(dir / "out" / "summary.csv");
    CHECK(summary.find("# observed_order,") != std::string::npos);
}

TEST_CASE("sweep rejects an empty parameter grid") {
    fs::path dir = fresh_dir("sweep_empty");
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "template.ini");
        cfg << render_config(quick_config());
        std::ofstream grid(dir / "grid.txt");
        grid << "# nothing here\n";
    }
    CHECK(sweep_command((dir / "template.ini").string(), (dir / "grid.txt").string()) == 2);
}

TEST_CASE("sweep records individual failures and keeps going") {
    fs::path dir = fresh_dir("sweep_fail");
    fs::create_directories(dir);
    RunConfig base = quick_config();
    base.out_dir = (dir / "out").string();
    {
        std::ofstream cfg(dir / "template.ini");
        cfg << render_config(base);
        std::ofstream grid(dir / "grid.txt");
        grid << "debug.nonconservative_stencil = off, on\n";
    }
    CHECK(sweep_command((dir / "template.ini").string(), (dir / "grid.txt").string()) == 1);
    const std::string summary = slurp(dir / "out" / "summary.csv");
    CHECK(summary.find(",pass,") != std::string::npos);
    CHECK(summary.find(",fail,") != std::string::npos);
}
