#pragma once

#include "chemotax/config.hpp"
#include "chemotax/diagnostics.hpp"
#include "chemotax/dynamics.hpp"
#include "chemotax/output.hpp"

#include <memory>
#include <string>
#include <vector>

namespace chemotax {

/// Everything a run produces, before or after serialization.
struct RunResult {
    RunConfig cfg;
    Grid grid;
    BoundLedger ledger;
    std::vector<Verdict> verdicts;
    SimulationState initial_state;
    SimulationState final_state;
    // Kept alive for callers that want to re-evaluate the general V ODE.
    std::shared_ptr<const SplitMotility> split;
};

/// Executes one full simulation: grid + preset construction, initial data,
/// the Green-scan floor constant (grids up to the module cap), the s*
/// anchor, the comparison-ODE traces that the hypotheses admit, and all
/// enabled checks. Throws SimError subtypes on invalid input or scheme
/// failure.
RunResult run_simulation(const RunConfig& cfg);

bool all_pass_or_skip(const std::vector<Verdict>& verdicts);

/// run subcommand: simulate, write outputs into cfg.out_dir (or the
/// override), print one line per verdict. Returns the process exit status:
/// 0 all checks pass or skip, 1 any check failed, 2 runtime error.
int run_command(const RunConfig& cfg, const std::string& out_override = {});

/// sweep subcommand: template config + override-grid file with lines
/// "section.key = v1, v2, ...". Runs the cartesian product into per-run
/// directories run_### under the template's output directory and writes
/// summary.csv. A pure cell-count sweep with >= 3 points also reports the
/// observed convergence order of the final energy. Returns 0 iff every run
/// passed.
int sweep_command(const std::string& config_path, const std::string& grid_path);

/// selftest subcommand: one positive flat run, a byte-determinism check on
/// repeated runs, and three corrupted fixtures (non-conservative stencil,
/// halved V trace, floor-violating ledger) that each must be caught.
/// Returns 0 iff every detector fires as expected.
int selftest_command();

} // namespace chemotax
