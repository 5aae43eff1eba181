#include "spde/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <unistd.h>

#include "spde/densities.hpp"
#include "spde/errors.hpp"
#include "spde/feynman_kac.hpp"
#include "spde/fokker_planck.hpp"
#include "spde/spectral_moments.hpp"
#include "spde/spectral_oracle.hpp"

namespace spde {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string format_integer(std::uint64_t v) { return std::to_string(v); }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::shared_ptr<const AdditiveSystem> make_system(const AdditiveModel& model) {
    return std::make_shared<const AdditiveSystem>(model);
}

// Truncated law with the run's mode count, matching the Monte Carlo estimators.
DensityLaw closed_law(const Scenario& s, const AdditiveSystem* system, double t, double x) {
    return std::visit(Overloaded{
                          [&](const AdditiveModel&) {
                              return additive_law(sum_series_truncated(*system, t, x, s.run.modes, false));
                          },
                          [&](const MultiplicativeModel& m) { return multiplicative_law(t, x, m); },
                          [&](const KpzModel& m) { return kpz_law(t, x, m); },
                      },
                      s.model);
}

double closed_pdf(const Scenario& s, const DensityLaw& law, double t, double x, double u) {
    if (const auto* m = std::get_if<MultiplicativeModel>(&s.model)) return multiplicative_pdf(u, t, x, *m);
    return law.pdf(u);
}

std::vector<double> grid_from_law(const Scenario& s, const DensityLaw& law) {
    if (s.run.u_grid.kind == UGrid::Kind::Explicit) return s.run.u_grid.values;
    if (law.is_atom()) throw DegenerateLaw("the law is an atom here; give an explicit u_grid");
    const double lo = law.quantile(0.001);
    const double hi = law.quantile(0.999);
    std::vector<double> grid(s.run.u_points);
    for (int i = 0; i < s.run.u_points; ++i) grid[i] = lo + (hi - lo) * i / (s.run.u_points - 1);
    return grid;
}

std::unique_ptr<AdditiveSystem> system_for(const Scenario& s) {
    if (const auto* m = std::get_if<AdditiveModel>(&s.model)) return std::make_unique<AdditiveSystem>(*m);
    return nullptr;
}

double representative_x(const Scenario& s) { return s.run.fp_x.value_or(s.run.x.front()); }

}  // namespace

std::string CsvTable::render() const {
    std::string out;
    const auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header);
    for (const auto& row : rows) line(row);
    return out;
}

void write_atomically(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path temp = target;
    temp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + temp.string());
        out << content;
        out.flush();
        if (!out) {
            out.close();
            fs::remove(temp);
            throw std::runtime_error("short write to " + temp.string());
        }
    }
    fs::rename(temp, target);
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const Scenario& scenario) {
    if (flag) return *flag;
    if (const char* env = std::getenv("SPDE_DENSITY_SEED"); env && *env) {
        const std::string s(env);
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw InvalidParameter("SPDE_DENSITY_SEED", "must be an unsigned 64-bit integer");
        }
        return v;
    }
    return scenario.run.seed.value_or(0);
}

std::vector<double> u_grid_for(const Scenario& scenario, double t, double x) {
    const auto system = system_for(scenario);
    return grid_from_law(scenario, closed_law(scenario, system.get(), t, x));
}

CsvTable density_table(const Scenario& s) {
    CsvTable table{{"u", "t", "x", "p_closed"}, {}};
    const auto system = system_for(s);
    for (const double t : s.run.t) {
        for (const double x : s.run.x) {
            const DensityLaw law = closed_law(s, system.get(), t, x);
            for (const double u : grid_from_law(s, law)) {
                table.rows.push_back({format_double(u), format_double(t), format_double(x),
                                      format_double(closed_pdf(s, law, t, x, u))});
            }
        }
    }
    return table;
}

CsvTable fk_table(const Scenario& s, const RunOptions& options) {
    CsvTable table{{"u", "t", "x", "p_closed", "p_fk", "stderr", "n_paths", "dt", "seed"}, {}};
    const auto system = system_for(s);
    McOptions mc;
    mc.n_paths = s.run.n_paths;
    mc.seed = options.seed;
    mc.threads = options.threads;
    for (const double t : s.run.t) {
        for (const double x : s.run.x) {
            const DensityLaw law = closed_law(s, system.get(), t, x);
            for (const double u : grid_from_law(s, law)) {
                const double closed = closed_pdf(s, law, t, x, u);
                McEstimate est = std::visit(
                    Overloaded{
                        [&](const AdditiveModel&) {
                            mc.dt = s.run.dt.value_or(kDefaultAdditiveDt);
                            return estimate_additive_pdf(u, t, x, s.run.T, *system, s.run.modes, mc);
                        },
                        [&](const MultiplicativeModel& m) {
                            mc.dt = s.run.dt.value_or(kDefaultMultiplicativeDt);
                            // The representation holds on the support only; the density is 0 elsewhere.
                            if (!classify_region(u, x, m.m).supported()) {
                                return McEstimate{0.0, 0.0, mc.n_paths, mc.seed, mc.dt};
                            }
                            const auto scheme = s.run.scheme == "euler" ? GbmScheme::Euler : GbmScheme::Exact;
                            return estimate_multiplicative_pdf(u, t, x, m, mc, scheme);
                        },
                        [&](const KpzModel& m) {
                            mc.dt = s.run.dt.value_or(kDefaultKpzDt);
                            const auto scheme = s.run.scheme == "exact" ? KpzScheme::Exact : KpzScheme::Euler;
                            return estimate_kpz_pdf(u, t, x, s.run.T, m, mc, scheme);
                        },
                    },
                    s.model);
                table.rows.push_back({format_double(u), format_double(t), format_double(x),
                                      format_double(closed), format_double(est.value),
                                      format_double(est.std_error), format_integer(est.n_paths),
                                      format_double(est.dt), format_integer(est.seed)});
            }
        }
    }
    return table;
}

CsvTable oracle_table(const Scenario& s, const RunOptions& options) {
    CsvTable table{{"t", "x", "n", "ks", "mean_emp", "mean_analytic", "var_emp", "var_analytic"}, {}};
    const auto system = system_for(s);
    OracleOptions oracle;
    oracle.n_samples = s.run.n_samples;
    oracle.seed = options.seed;
    oracle.threads = options.threads;
    for (const double t : s.run.t) {
        for (const double x : s.run.x) {
            const DensityLaw law = closed_law(s, system.get(), t, x);
            const EnsembleStats stats = std::visit(
                Overloaded{
                    [&](const AdditiveModel&) { return sample_additive(t, x, s.run.modes, *system, oracle); },
                    [&](const MultiplicativeModel& m) { return sample_multiplicative(t, x, m, oracle); },
                    [&](const KpzModel& m) { return sample_kpz(t, x, m, oracle); },
                },
                s.model);
            table.rows.push_back({format_double(t), format_double(x), format_integer(stats.n),
                                  format_double(stats.ks), format_double(stats.mean), format_double(law.mean()),
                                  format_double(stats.variance), format_double(law.variance())});
        }
    }
    return table;
}

CsvTable residual_table(const Scenario& s, const RunOptions& options) {
    CsvTable table{{"du", "dt", "max_residual", "order"}, {}};
    if (const auto* m = std::get_if<MultiplicativeModel>(&s.model)) {
        // Analytic partials, so there is no grid to refine.
        const IdentitySweep sweep = fp_identity_sweep(*m, s.run.fp_points, options.seed);
        table.rows.push_back({format_double(0.0), format_double(0.0), format_double(sweep.max_abs_residual),
                              format_double(kNaN)});
        return table;
    }
    const double x = representative_x(s);
    const auto system = system_for(s);
    const GaussianEvolution law = system ? additive_evolution(*system, x, s.run.modes)
                                         : kpz_evolution(std::get<KpzModel>(s.model), x);
    ResidualGrid grid;
    const auto [t_lo, t_hi] = s.run.fp_t_range.value_or(std::pair{0.5 * s.run.t.front(), 1.5 * s.run.t.front()});
    grid.t_lo = t_lo;
    grid.t_hi = t_hi;
    if (s.run.fp_u_range) {
        grid.u_lo = s.run.fp_u_range->first;
        grid.u_hi = s.run.fp_u_range->second;
    } else {
        const double tm = 0.5 * (t_lo + t_hi);
        const double sd = std::sqrt(law.variance(tm));
        grid.u_lo = law.mean(tm) - 4.0 * sd;
        grid.u_hi = law.mean(tm) + 4.0 * sd;
    }
    grid.du = s.run.fp_du;
    grid.dt = s.run.fp_dt;
    double previous = kNaN;
    for (int level = 0; level < s.run.fp_levels; ++level) {
        const double r = gaussian_fp_max_residual(law, grid);
        table.rows.push_back({format_double(grid.du), format_double(grid.dt), format_double(r),
                              format_double(level == 0 ? kNaN : std::log2(previous / r))});
        previous = r;
        grid = grid.halved();
    }
    return table;
}

CsvTable ck_table(const Scenario& s) {
    CsvTable table{{"s", "r", "t", "max_error"}, {}};
    const TransitionKernel kernel = std::visit(
        Overloaded{
            [&](const AdditiveModel& m) {
                return TransitionKernel::additive_mode(make_system(m), s.run.ck_mode, representative_x(s));
            },
            [&](const MultiplicativeModel& m) { return TransitionKernel::multiplicative_gbm(m); },
            [&](const KpzModel& m) { return TransitionKernel::kpz_brownian(m); },
        },
        s.model);
    const double st = s.run.ck_times[0], r = s.run.ck_times[1], t = s.run.ck_times[2];
    const auto grid = default_ck_grid(kernel, s.run.ck_w, st, t);
    const CkReport report = ck_check(kernel, s.run.ck_w, st, r, t, grid);
    table.rows.push_back({format_double(st), format_double(r), format_double(t), format_double(report.max_error)});
    return table;
}

namespace {

struct Job {
    std::string kind;
    CsvTable (*make)(const Scenario&, const RunOptions&);
};

const std::vector<Job>& jobs() {
    static const std::vector<Job> all{
        {"density", [](const Scenario& s, const RunOptions&) { return density_table(s); }},
        {"fk", fk_table},
        {"oracle", oracle_table},
        {"residual", residual_table},
        {"ck", [](const Scenario& s, const RunOptions&) { return ck_table(s); }},
    };
    return all;
}

std::string output_path(const Scenario& s, const std::string& kind, const std::string& out_dir) {
    const auto it = s.outputs.find(kind);
    const std::string file = it != s.outputs.end() ? it->second
                                                   : (s.name.empty() ? "spde" : s.name) + "_" + kind + ".csv";
    return (fs::path(out_dir) / file).string();
}

// Tables are computed before anything is written, so a failure leaves no new files.
void run_jobs(const Scenario& s, const std::vector<std::string>& kinds, const std::string& out_dir,
              const RunOptions& options) {
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& kind : kinds) {
        for (const Job& job : jobs()) {
            if (job.kind == kind) files.emplace_back(output_path(s, kind, out_dir), job.make(s, options).render());
        }
    }
    for (const auto& [path, content] : files) {
        write_atomically(path, content);
        std::cout << path << '\n';
    }
}

Scenario load_scenario(const std::string& config, const std::string& bundled) {
    if (!bundled.empty()) {
        const auto text = bundled_scenario_text(bundled);
        if (!text) {
            std::string names;
            for (const auto& n : bundled_scenarios()) names += " " + n;
            throw InvalidParameter("scenario", "unknown bundled scenario '" + bundled + "' (known:" + names + ")");
        }
        return parse_config(*text, bundled);
    }
    if (config.empty()) throw InvalidParameter("--config", "is required");
    return load_config(config);
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Closed-form densities of stochastic heat equations and their numerical checks",
                 "spde-density"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::string bundled;

    const auto common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config, "Scenario file");
        cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
        cmd->add_option("--seed", seed, "Random seed (overrides SPDE_DENSITY_SEED and the config)");
        cmd->add_option("--threads", threads, "Worker threads; 0 picks the hardware count")
            ->check(CLI::NonNegativeNumber);
    };

    const std::vector<std::pair<std::string, std::string>> single{
        {"density", "density"}, {"fk-estimate", "fk"}, {"oracle-sample", "oracle"},
        {"fp-residual", "residual"}, {"ck-check", "ck"}};
    std::vector<std::pair<CLI::App*, std::string>> commands;
    for (const auto& [name, kind] : single) {
        CLI::App* cmd = app.add_subcommand(name, "Write the " + kind + " CSV");
        common(cmd);
        commands.emplace_back(cmd, kind);
    }
    CLI::App* scenario = app.add_subcommand("scenario", "Run every job of a scenario");
    common(scenario);
    CLI::App* scenario_run = scenario->add_subcommand("run", "Run a bundled scenario by name");
    scenario_run->add_option("name", bundled, "Bundled scenario")->required();
    scenario_run->fallthrough();
    CLI::App* scenario_list = scenario->add_subcommand("list", "List bundled scenarios");
    scenario->require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (scenario_list->parsed()) {
            for (const auto& n : bundled_scenarios()) std::cout << n << '\n';
            return 0;
        }
        const Scenario s = load_scenario(config, scenario_run->parsed() ? bundled : "");
        const RunOptions options{resolve_seed(seed, s), threads};
        if (scenario->parsed()) {
            run_jobs(s, {"density", "fk", "oracle", "residual", "ck"}, out_dir, options);
            return 0;
        }
        for (const auto& [cmd, kind] : commands) {
            if (cmd->parsed()) run_jobs(s, {kind}, out_dir, options);
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
        return e.category() == ErrorCategory::Validation ? 1 : 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: IoError: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace spde
