#pragma once

#include "chemotax/diagnostics.hpp"
#include "chemotax/grid.hpp"
#include "chemotax/motility.hpp"

#include <cstdint>
#include <string>

namespace chemotax {

/// Initial-condition specification; evaluated on cell centers.
struct InitialSpec {
    std::string kind = "flat";  // flat | cosine_bump | gaussian_bump | random | file
    double level = 1.0;
    double amplitude = 0.5;
    int mode = 1;
    double center_x = 0.5;
    double center_y = 0.5;
    double width = 0.1;
    double floor = 0.1;
    std::string path;
};

/// Fully resolved run configuration. Parsed from sectioned key = value
/// text; unknown sections or keys are errors.
struct RunConfig {
    // [grid]
    int dimension = 1;
    double extent_x = 1.0;
    double extent_y = 1.0;
    std::size_t cells_x = 64;
    std::size_t cells_y = 64;
    // [motility]
    std::string preset = "power_growth";
    MotilityParams motility_params;
    // [initial]
    InitialSpec initial;
    // [step]
    double sigma = 0.9;
    double end_time = 1.0;
    double dt_min = 1e-14;
    double dt_max = 1e-2;
    std::size_t max_steps = 50'000'000;
    // [observe]
    std::size_t cadence = 0;  // 0 = automatic (~1000 samples per run)
    // [checks]
    CheckToggles checks;
    // [output]
    std::string out_dir = "out";
    // [misc]
    std::uint64_t seed = 0;
    // [debug] test-only fixture switch
    bool nonconservative_stencil = false;
};

/// Parses the sectioned key = value grammar (see README). Throws
/// ConfigError with a line number on parse or validation problems.
RunConfig parse_config(const std::string& text);

RunConfig load_config_file(const std::string& path);

/// Applies one override, addressed as "section.key". Used by sweeps.
void apply_override(RunConfig& cfg, const std::string& dotted_key, const std::string& value);

/// Serializes the resolved config back into the config grammar
/// (round-trippable; used for the meta echo in run outputs).
std::string render_config(const RunConfig& cfg);

/// Evaluates the initial-condition spec on the grid's cell centers.
/// Only the "random" kind consumes the seed.
Field evaluate_initial(const InitialSpec& spec, const Grid& grid, std::uint64_t seed);

} // namespace chemotax
