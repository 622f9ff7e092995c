#include <doctest.h>

#include "chemotax/config.hpp"
#include "chemotax/errors.hpp"

#include <cmath>
#include <cstdio>

using namespace chemotax;

TEST_CASE("minimal config fills defaults") {
    RunConfig cfg = parse_config("[grid]\ncells_x = 48\n\n[motility]\npreset = sqrt\n\n"
                                 "[step]\nT = 2.5\n");
    CHECK(cfg.dimension == 1);
    CHECK(cfg.cells_x == 48);
    CHECK(cfg.preset == "sqrt");
    CHECK(cfg.end_time == doctest::Approx(2.5));
    CHECK(cfg.sigma == doctest::Approx(0.9));
    CHECK(cfg.initial.kind == "flat");
    CHECK(cfg.checks.mass);
    CHECK_FALSE(cfg.checks.stabilization);
    CHECK(cfg.out_dir == "out");
    CHECK(cfg.seed == 0);
}

TEST_CASE("comments, blank lines, and whitespace are tolerated") {
    RunConfig cfg = parse_config("# header comment\n\n[grid]\n  cells_x   =  10  # inline\n"
                                 "\n[step]\nsigma = 0.5\n");
    CHECK(cfg.cells_x == 10);
    CHECK(cfg.sigma == doctest::Approx(0.5));
}

TEST_CASE("strict mode: unknown keys and sections are fatal with line numbers") {
    CHECK_THROWS_WITH_AS(parse_config("[grid]\ncellsx = 10\n"),
                         doctest::Contains("line 2"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grids]\ncells_x = 10\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("cells_x = 10\n"), ConfigError);       // before any section
    CHECK_THROWS_AS(parse_config("[grid]\ncells_x\n"), ConfigError);    // no assignment
    CHECK_THROWS_AS(parse_config("[grid\ncells_x = 10\n"), ConfigError); // malformed header
    CHECK_THROWS_AS(parse_config("[grid]\ncells_x = ten\n"), ConfigError);
}

TEST_CASE("validation: cells >= 3") {
    CHECK_THROWS_WITH_AS(parse_config("[grid]\ncells_x = 2\n"),
                         doctest::Contains("cells >= 3"), ConfigError);
}

TEST_CASE("validation: wobble positivity") {
    CHECK_THROWS_AS(parse_config("[motility]\npreset = wobble\na = 1.5\n"), ConfigError);
}

TEST_CASE("validation: step control ranges") {
    CHECK_THROWS_AS(parse_config("[step]\nsigma = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[step]\nsigma = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[step]\ndt_min = 1.0\ndt_max = 0.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[step]\nT = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[checks]\ndelta_stab = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[initial]\nkind = blob\n"), ConfigError);
}

TEST_CASE("render_config round-trips") {
    RunConfig cfg = parse_config(
        "[grid]\ndimension = 2\nextent_x = 1.5\nextent_y = 2\ncells_x = 12\ncells_y = 20\n"
        "[motility]\npreset = wobble\na = 0.25\nb = 3\n"
        "[initial]\nkind = gaussian_bump\ncenter_x = 0.7\nwidth = 0.05\nfloor = 0.2\n"
        "[step]\nsigma = 0.8\nT = 0.125\n"
        "[observe]\ncadence = 5\n"
        "[checks]\nstabilization = on\ndelta_stab = 0.01\n"
        "[output]\ndir = /tmp/x\n"
        "[misc]\nseed = 42\n");
    RunConfig back = parse_config(render_config(cfg));
    CHECK(back.dimension == cfg.dimension);
    CHECK(back.extent_y == cfg.extent_y);
    CHECK(back.cells_y == cfg.cells_y);
    CHECK(back.preset == cfg.preset);
    CHECK(back.motility_params.a == cfg.motility_params.a);
    CHECK(back.initial.kind == cfg.initial.kind);
    CHECK(back.initial.width == cfg.initial.width);
    CHECK(back.sigma == cfg.sigma);
    CHECK(back.end_time == cfg.end_time);
    CHECK(back.cadence == cfg.cadence);
    CHECK(back.checks.stabilization == cfg.checks.stabilization);
    CHECK(back.checks.delta_stab == cfg.checks.delta_stab);
    CHECK(back.out_dir == cfg.out_dir);
    CHECK(back.seed == cfg.seed);
    // idempotent after one round trip
    CHECK(render_config(back) == render_config(cfg));
}

TEST_CASE("apply_override addresses keys as section.key") {
    RunConfig cfg = parse_config("[grid]\ncells_x = 8\n");
    apply_override(cfg, "grid.cells_x", "64");
    CHECK(cfg.cells_x == 64);
    apply_override(cfg, "motility.k", "2.5");
    CHECK(cfg.motility_params.k == doctest::Approx(2.5));
    CHECK_THROWS_AS(apply_override(cfg, "cells_x", "32"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "grid.cells_x", "2"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "grid.nope", "1"), ConfigError);
}

TEST_CASE("evaluate_initial: flat and cosine bump") {
    Grid g = build_grid(1, 1.0, 16);
    InitialSpec flat;
    flat.level = 2.0;
    Field u = evaluate_initial(flat, g, 0);
    for (double x : u) CHECK(x == 2.0);

    InitialSpec bump;
    bump.kind = "cosine_bump";
    bump.level = 1.0;
    bump.amplitude = 0.9;
    bump.mode = 1;
    Field b = evaluate_initial(bump, g, 0);
    const double pi = std::acos(-1.0);
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(b[i] == doctest::Approx(1.0 + 0.9 * std::cos(pi * g.x_center(i))));
        CHECK(b[i] > 0.0);
    }
}

TEST_CASE("evaluate_initial: gaussian stays above its floor, random is seeded") {
    Grid g = build_grid(2, 1.0, 8, 1.0, 8);
    InitialSpec gb;
    gb.kind = "gaussian_bump";
    gb.floor = 0.3;
    gb.amplitude = 1.0;
    gb.width = 0.1;
    Field u = evaluate_initial(gb, g, 0);
    for (double x : u) {
        CHECK(x >= 0.3);
        CHECK(x <= 1.3 + 1e-12);
    }

    InitialSpec rnd;
    rnd.kind = "random";
    rnd.level = 1.0;
    rnd.amplitude = 0.5;
    Field a = evaluate_initial(rnd, g, 7);
    Field b = evaluate_initial(rnd, g, 7);
    Field c = evaluate_initial(rnd, g, 8);
    CHECK(a == b);
    CHECK(a != c);
    for (double x : a) {
        CHECK(x >= 1.0);
        CHECK(x <= 1.5);
    }
}

TEST_CASE("evaluate_initial: file kind reads values and reports shortfalls") {
    Grid g = build_grid(1, 1.0, 4);
    InitialSpec fs;
    fs.kind = "file";
    fs.path = "/tmp/chemotax_test_init.txt";
    {
        std::FILE* f = std::fopen(fs.path.c_str(), "w");
        REQUIRE(f);
        std::fputs("0.5 1.5 2.5 3.5\n", f);
        std::fclose(f);
    }
    Field u = evaluate_initial(fs, g, 0);
    CHECK(u == Field{0.5, 1.5, 2.5, 3.5});
    {
        std::FILE* f = std::fopen(fs.path.c_str(), "w");
        REQUIRE(f);
        std::fputs("0.5 1.5\n", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(evaluate_initial(fs, g, 0), IoError);
    fs.path = "/tmp/does_not_exist_chemotax.txt";
    CHECK_THROWS_AS(evaluate_initial(fs, g, 0), IoError);
}

TEST_CASE("load_config_file errors on missing files") {
    CHECK_THROWS_AS(load_config_file("/tmp/missing_chemotax.ini"), IoError);
}
