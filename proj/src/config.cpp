#include "chemotax/config.hpp"
#include "chemotax/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace chemotax {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing junk");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                          "' expects a number, got '" + v + "'");
    }
}

long long parse_int(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing junk");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                          "' expects an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& v, const std::string& key, int line) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "' expects on/off, got '" + v + "'");
}

void apply_kv(RunConfig& cfg, const std::string& section, const std::string& key,
              const std::string& value, int line) {
    auto unknown = [&]() -> ConfigError {
        return ConfigError("line " + std::to_string(line) + ": unknown key '" + key +
                           "' in section [" + section + "]");
    };
    if (section == "grid") {
        if (key == "dimension") cfg.dimension = static_cast<int>(parse_int(value, key, line));
        else if (key == "extent_x") cfg.extent_x = parse_double(value, key, line);
        else if (key == "extent_y") cfg.extent_y = parse_double(value, key, line);
        else if (key == "cells_x") {
            const long long n = parse_int(value, key, line);
            if (n < 3) throw ConfigError("line " + std::to_string(line) + ": cells >= 3 required");
            cfg.cells_x = static_cast<std::size_t>(n);
        } else if (key == "cells_y") {
            const long long n = parse_int(value, key, line);
            if (n < 3) throw ConfigError("line " + std::to_string(line) + ": cells >= 3 required");
            cfg.cells_y = static_cast<std::size_t>(n);
        } else throw unknown();
    } else if (section == "motility") {
        if (key == "preset") cfg.preset = value;
        else if (key == "k") cfg.motility_params.k = parse_double(value, key, line);
        else if (key == "chi") cfg.motility_params.chi = parse_double(value, key, line);
        else if (key == "a") cfg.motility_params.a = parse_double(value, key, line);
        else if (key == "b") cfg.motility_params.b = parse_double(value, key, line);
        else throw unknown();
    } else if (section == "initial") {
        if (key == "kind") cfg.initial.kind = value;
        else if (key == "level") cfg.initial.level = parse_double(value, key, line);
        else if (key == "amplitude") cfg.initial.amplitude = parse_double(value, key, line);
        else if (key == "mode") cfg.initial.mode = static_cast<int>(parse_int(value, key, line));
        else if (key == "center_x") cfg.initial.center_x = parse_double(value, key, line);
        else if (key == "center_y") cfg.initial.center_y = parse_double(value, key, line);
        else if (key == "width") cfg.initial.width = parse_double(value, key, line);
        else if (key == "floor") cfg.initial.floor = parse_double(value, key, line);
        else if (key == "path") cfg.initial.path = value;
        else throw unknown();
    } else if (section == "step") {
        if (key == "sigma") cfg.sigma = parse_double(value, key, line);
        else if (key == "T") cfg.end_time = parse_double(value, key, line);
        else if (key == "dt_min") cfg.dt_min = parse_double(value, key, line);
        else if (key == "dt_max") cfg.dt_max = parse_double(value, key, line);
        else if (key == "max_steps") cfg.max_steps = static_cast<std::size_t>(parse_int(value, key, line));
        else throw unknown();
    } else if (section == "observe") {
        if (key == "cadence") cfg.cadence = static_cast<std::size_t>(parse_int(value, key, line));
        else throw unknown();
    } else if (section == "checks") {
        if (key == "mass") cfg.checks.mass = parse_bool(value, key, line);
        else if (key == "v_floor") cfg.checks.v_floor = parse_bool(value, key, line);
        else if (key == "invariant_region") cfg.checks.invariant_region = parse_bool(value, key, line);
        else if (key == "u_bounds") cfg.checks.u_bounds = parse_bool(value, key, line);
        else if (key == "v_ceiling") cfg.checks.v_ceiling = parse_bool(value, key, line);
        else if (key == "v_le_u") cfg.checks.v_le_u = parse_bool(value, key, line);
        else if (key == "domination") cfg.checks.domination = parse_bool(value, key, line);
        else if (key == "liapunov") cfg.checks.liapunov = parse_bool(value, key, line);
        else if (key == "stabilization") cfg.checks.stabilization = parse_bool(value, key, line);
        else if (key == "delta_stab") cfg.checks.delta_stab = parse_double(value, key, line);
        else throw unknown();
    } else if (section == "output") {
        if (key == "dir") cfg.out_dir = value;
        else throw unknown();
    } else if (section == "misc") {
        if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(value, key, line));
        else throw unknown();
    } else if (section == "debug") {
        if (key == "nonconservative_stencil")
            cfg.nonconservative_stencil = parse_bool(value, key, line);
        else throw unknown();
    } else {
        throw ConfigError("line " + std::to_string(line) + ": unknown section [" + section + "]");
    }
}

void validate(const RunConfig& cfg) {
    if (cfg.dimension != 1 && cfg.dimension != 2)
        throw ConfigError("grid.dimension must be 1 or 2");
    if (!(cfg.sigma > 0.0 && cfg.sigma <= 1.0))
        throw ConfigError("step.sigma must lie in (0,1]");
    if (!(cfg.dt_min > 0.0 && cfg.dt_min <= cfg.dt_max))
        throw ConfigError("step tolerances require 0 < dt_min <= dt_max");
    if (cfg.end_time < 0.0) throw ConfigError("step.T must be nonnegative");
    if (!(cfg.checks.delta_stab > 0.0))
        throw ConfigError("checks.delta_stab must be positive");
    // motility parameter ranges are rejected by preset() itself
    (void)preset(cfg.preset, cfg.motility_params);
    const std::string& k = cfg.initial.kind;
    if (k != "flat" && k != "cosine_bump" && k != "gaussian_bump" && k != "random" &&
        k != "file")
        throw ConfigError("initial.kind '" + k + "' is not one of flat | cosine_bump | "
                          "gaussian_bump | random | file");
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const std::size_t hash = s.find('#');
        if (hash != std::string::npos) s.erase(hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("line " + std::to_string(line) + ": malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) +
                              ": expected 'key = value', got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (section.empty())
            throw ConfigError("line " + std::to_string(line) + ": assignment before any section");
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line) + ": empty key or value");
        apply_kv(cfg, section, key, value, line);
    }
    validate(cfg);
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_override(RunConfig& cfg, const std::string& dotted_key, const std::string& value) {
    const std::size_t dot = dotted_key.find('.');
    if (dot == std::string::npos)
        throw ConfigError("override key '" + dotted_key + "' must be section.key");
    apply_kv(cfg, dotted_key.substr(0, dot), dotted_key.substr(dot + 1), trim(value), 0);
    validate(cfg);
}

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

const char* onoff(bool b) { return b ? "on" : "off"; }

} // namespace

std::string render_config(const RunConfig& cfg) {
    std::ostringstream o;
    o << "[grid]\n"
      << "dimension = " << cfg.dimension << "\n"
      << "extent_x = " << num(cfg.extent_x) << "\n"
      << "cells_x = " << cfg.cells_x << "\n";
    if (cfg.dimension == 2)
        o << "extent_y = " << num(cfg.extent_y) << "\n"
          << "cells_y = " << cfg.cells_y << "\n";
    o << "\n[motility]\n"
      << "preset = " << cfg.preset << "\n"
      << "k = " << num(cfg.motility_params.k) << "\n"
      << "chi = " << num(cfg.motility_params.chi) << "\n"
      << "a = " << num(cfg.motility_params.a) << "\n"
      << "b = " << num(cfg.motility_params.b) << "\n"
      << "\n[initial]\n"
      << "kind = " << cfg.initial.kind << "\n"
      << "level = " << num(cfg.initial.level) << "\n"
      << "amplitude = " << num(cfg.initial.amplitude) << "\n"
      << "mode = " << cfg.initial.mode << "\n"
      << "center_x = " << num(cfg.initial.center_x) << "\n"
      << "center_y = " << num(cfg.initial.center_y) << "\n"
      << "width = " << num(cfg.initial.width) << "\n"
      << "floor = " << num(cfg.initial.floor) << "\n";
    if (!cfg.initial.path.empty()) o << "path = " << cfg.initial.path << "\n";
    o << "\n[step]\n"
      << "sigma = " << num(cfg.sigma) << "\n"
      << "T = " << num(cfg.end_time) << "\n"
      << "dt_min = " << num(cfg.dt_min) << "\n"
      << "dt_max = " << num(cfg.dt_max) << "\n"
      << "max_steps = " << cfg.max_steps << "\n"
      << "\n[observe]\n"
      << "cadence = " << cfg.cadence << "\n"
      << "\n[checks]\n"
      << "mass = " << onoff(cfg.checks.mass) << "\n"
      << "v_floor = " << onoff(cfg.checks.v_floor) << "\n"
      << "invariant_region = " << onoff(cfg.checks.invariant_region) << "\n"
      << "u_bounds = " << onoff(cfg.checks.u_bounds) << "\n"
      << "v_ceiling = " << onoff(cfg.checks.v_ceiling) << "\n"
      << "v_le_u = " << onoff(cfg.checks.v_le_u) << "\n"
      << "domination = " << onoff(cfg.checks.domination) << "\n"
      << "liapunov = " << onoff(cfg.checks.liapunov) << "\n"
      << "stabilization = " << onoff(cfg.checks.stabilization) << "\n"
      << "delta_stab = " << num(cfg.checks.delta_stab) << "\n"
      << "\n[output]\n"
      << "dir = " << cfg.out_dir << "\n"
      << "\n[misc]\n"
      << "seed = " << cfg.seed << "\n";
    if (cfg.nonconservative_stencil)
        o << "\n[debug]\nnonconservative_stencil = on\n";
    return o.str();
}

Field evaluate_initial(const InitialSpec& spec, const Grid& grid, std::uint64_t seed) {
    const std::size_t n = grid.cell_count();
    Field u(n, 0.0);
    const double pi = std::acos(-1.0);
    if (spec.kind == "flat") {
        std::fill(u.begin(), u.end(), spec.level);
    } else if (spec.kind == "cosine_bump") {
        for (std::size_t j = 0; j < grid.cells_y; ++j) {
            for (std::size_t i = 0; i < grid.cells_x; ++i) {
                double val = spec.amplitude *
                             std::cos(spec.mode * pi * grid.x_center(i) / grid.extent_x);
                if (grid.dimension == 2)
                    val *= std::cos(spec.mode * pi * grid.y_center(j) / grid.extent_y);
                u[grid.index(i, j)] = spec.level + val;
            }
        }
    } else if (spec.kind == "gaussian_bump") {
        const double w2 = 2.0 * spec.width * spec.width;
        for (std::size_t j = 0; j < grid.cells_y; ++j) {
            for (std::size_t i = 0; i < grid.cells_x; ++i) {
                double r2 = (grid.x_center(i) - spec.center_x) * (grid.x_center(i) - spec.center_x);
                if (grid.dimension == 2)
                    r2 += (grid.y_center(j) - spec.center_y) * (grid.y_center(j) - spec.center_y);
                u[grid.index(i, j)] = spec.floor + spec.amplitude * std::exp(-r2 / w2);
            }
        }
    } else if (spec.kind == "random") {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) u[i] = spec.level + spec.amplitude * uni(rng);
    } else if (spec.kind == "file") {
        std::ifstream in(spec.path);
        if (!in) throw IoError("cannot open initial-data file '" + spec.path + "'");
        for (std::size_t i = 0; i < n; ++i)
            if (!(in >> u[i]))
                throw IoError("initial-data file '" + spec.path + "' has fewer than " +
                              std::to_string(n) + " values");
    } else {
        throw ConfigError("unknown initial kind '" + spec.kind + "'");
    }
    return u;
}

} // namespace chemotax
