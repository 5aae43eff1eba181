#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spde/model.hpp"

namespace spde {

/// u (or kappa) grid: explicit values, an evenly spaced lo:hi:count range, or
/// `auto`, which spreads `u_points` quantiles of the closed-form law.
struct UGrid {
    enum class Kind { Auto, Explicit };
    Kind kind = Kind::Auto;
    std::vector<double> values;
};

struct RunSettings {
    std::vector<double> t{1.0};
    std::vector<double> x{0.5};
    UGrid u_grid;
    int u_points = 20;
    double T = 2.0;
    std::optional<double> dt;
    std::uint64_t n_paths = 10'000;
    std::uint64_t n_samples = 10'000;
    std::optional<std::uint64_t> seed;
    int modes = 10;
    std::string scheme;  // exact | euler; empty means the model default

    // Fokker-Planck residual study
    std::optional<double> fp_x;
    std::optional<std::pair<double, double>> fp_t_range;
    std::optional<std::pair<double, double>> fp_u_range;
    double fp_du = 0.1;
    double fp_dt = 0.1;
    int fp_levels = 3;
    int fp_points = 1000;

    // Chapman-Kolmogorov check
    std::vector<double> ck_times{0.2, 0.5, 1.0};
    double ck_w = 1.0;
    int ck_mode = 1;
};

struct Scenario {
    std::string name;
    Model model;
    RunSettings run;
    /// output kind (density, fk, oracle, residual, ck) -> file name
    std::map<std::string, std::string> outputs;
};

/// Parses the [model] / [run] / [outputs] format. Throws ParseError with a
/// line number, UnknownKey for keys outside the grammar, and InvalidParameter
/// when the model or the grids violate their invariants.
Scenario parse_config(const std::string& text, const std::string& origin = "<config>");
Scenario load_config(const std::string& path);

/// Strict decimal parsing; the whole token must be consumed.
double parse_double(const std::string& token, int line = 0);

/// Bundled scenarios by name.
std::vector<std::string> bundled_scenarios();
std::optional<std::string> bundled_scenario_text(const std::string& name);

}  // namespace spde
