#pragma once

#include "chemotax/config.hpp"
#include "chemotax/diagnostics.hpp"
#include "chemotax/dynamics.hpp"

#include <string>
#include <vector>

namespace chemotax {

/// Writes the run artifacts into dir (created if missing):
///   ledger.csv        one row per recorded sample
///   verdicts.json     check verdicts, aggregates, and meta
///   snapshot_<t>.csv  cell coordinates plus u and v at t = 0 and t = T
///   meta.txt          resolved config echo plus derived constants
/// All floating-point values are written in round-trip precision; output is
/// byte-deterministic for a given config and seed.
void write_outputs(const BoundLedger& ledger, const std::vector<Verdict>& verdicts,
                   const RunConfig& cfg, const Grid& grid,
                   const SimulationState& initial_state,
                   const SimulationState& final_state, const std::string& dir);

void write_snapshot(const Grid& grid, const SimulationState& state, const std::string& path);

} // namespace chemotax
