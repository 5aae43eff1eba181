#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spde/config.hpp"

namespace spde {

/// A CSV table whose cells are already formatted. Doubles use 17 significant
/// digits, so every field reads back to the exact value written.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string render() const;
};

std::string format_double(double v);

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never see a partial file.
void write_atomically(const std::string& path, const std::string& content);

struct RunOptions {
    std::uint64_t seed = 0;
    int threads = 0;
};

/// --seed beats SPDE_DENSITY_SEED, which beats the config's seed; default 0.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const Scenario& scenario);

/// u (or kappa) points for one (t, x): the explicit grid, or `u_points`
/// evenly spaced values between the 0.1% and 99.9% quantiles of the law.
std::vector<double> u_grid_for(const Scenario& scenario, double t, double x);

CsvTable density_table(const Scenario& scenario);
CsvTable fk_table(const Scenario& scenario, const RunOptions& options);
CsvTable oracle_table(const Scenario& scenario, const RunOptions& options);
CsvTable residual_table(const Scenario& scenario, const RunOptions& options);
CsvTable ck_table(const Scenario& scenario);

/// Entry point of the spde-density executable. Returns 0 on success, 1 for
/// validation errors and 2 for numerical failures.
int run_cli(int argc, char** argv);

}  // namespace spde
