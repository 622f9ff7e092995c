#include "chemotax/config.hpp"
#include "chemotax/errors.hpp"
#include "chemotax/runner.hpp"
#include "chemotax/version.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Chemotaxis simulator and bound-verification harness"};
    app.set_version_flag("--version", chemotax::kVersion);
    app.require_subcommand(1);

    std::string run_config, run_out;
    auto* run = app.add_subcommand("run", "Simulate one configuration and verify its bounds");
    run->add_option("--config", run_config, "Path to the config file")->required();
    run->add_option("--out", run_out, "Output directory (overrides [output] out_dir)");

    std::string sweep_config, sweep_grid;
    auto* sweep = app.add_subcommand("sweep", "Run the cartesian product of a parameter grid");
    sweep->add_option("--config", sweep_config, "Path to the template config")->required();
    sweep->add_option("--grid", sweep_grid, "Path to the override-grid file")->required();

    auto* selftest = app.add_subcommand("selftest", "Run the built-in fixture suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            chemotax::RunConfig cfg = chemotax::load_config_file(run_config);
            return chemotax::run_command(cfg, run_out);
        }
        if (sweep->parsed()) return chemotax::sweep_command(sweep_config, sweep_grid);
        if (selftest->parsed()) return chemotax::selftest_command();
    } catch (const chemotax::SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
