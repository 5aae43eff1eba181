#include <doctest.h>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>
#include <unistd.h>

#include "spde/cli.hpp"
#include "spde/errors.hpp"

using namespace spde;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "spde-density");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("spde_cli_test_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(path / name) << text;
        return path / name;
    }
};

const char* kSmallKpz = R"(name = small
[model]
type = kpz
theta = 1
xi = 1
epsilon = 0.70710678118654757
log_mean = 1
log_variance = 0.25
[run]
t = 0.3
x = 0.125, 0.625
T = 0.5
n_paths = 500
n_samples = 500
u_points = 5
fp_t_range = 0.1:0.5
fp_dt = 0.05
fp_levels = 2
)";

}  // namespace

TEST_CASE("doubles round-trip through the CSV format") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-50.0, 50.0);
    for (int i = 0; i < 10'000; ++i) {
        const double v = std::exp(U(rng)) * (i % 2 ? -1.0 : 1.0);
        const std::string s = format_double(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
    }
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
}

TEST_CASE("tables render with a header row and LF endings") {
    CsvTable t{{"a", "b"}, {{"1", "2"}, {"3", "4"}}};
    CHECK(t.render() == "a,b\n1,2\n3,4\n");
    CsvTable empty{{"s", "r", "t", "max_error"}, {}};
    CHECK(empty.render() == "s,r,t,max_error\n");
}

TEST_CASE("atomic writes leave no temporary files") {
    TempDir dir;
    const auto target = dir.path / "sub" / "out.csv";
    write_atomically(target.string(), "x\n1\n");
    write_atomically(target.string(), "x\n2\n");
    CHECK(slurp(target) == "x\n2\n");
    int files = 0;
    for (const auto& entry : fs::directory_iterator(target.parent_path())) {
        (void)entry;
        ++files;
    }
    CHECK(files == 1);
}

TEST_CASE("seed precedence: flag, then environment, then config") {
    const Scenario s = parse_config(std::string(kSmallKpz) + "seed = 4\n");
    ::unsetenv("SPDE_DENSITY_SEED");
    CHECK(resolve_seed(std::nullopt, s) == 4);
    CHECK(resolve_seed(std::nullopt, parse_config(kSmallKpz)) == 0);
    ::setenv("SPDE_DENSITY_SEED", "9", 1);
    CHECK(resolve_seed(std::nullopt, s) == 9);
    CHECK(resolve_seed(std::uint64_t{12}, s) == 12);
    ::setenv("SPDE_DENSITY_SEED", "nine", 1);
    CHECK_THROWS_AS(resolve_seed(std::nullopt, s), InvalidParameter);
    ::unsetenv("SPDE_DENSITY_SEED");
}

TEST_CASE("exit codes") {
    TempDir dir;
    const auto good = dir.write("good.ini", kSmallKpz);
    const std::string out = (dir.path / "out").string();
    CHECK(run({"density", "--config", good.string(), "--out", out}) == 0);
    CHECK(fs::exists(dir.path / "out" / "small_density.csv"));
    CHECK(run({"teleport"}) == 1);
    CHECK(run({"density", "--out", out}) == 1);
    CHECK(run({"density", "--config", (dir.path / "missing.ini").string()}) == 1);
    CHECK(run({"scenario", "run", "example9"}) == 1);

    std::string bad(kSmallKpz);
    bad.replace(bad.find("theta = 1"), 9, "theta = -1");
    CHECK(run({"density", "--config", dir.write("bad.ini", bad).string(), "--out", out}) == 1);

    // x on the nodal point of a single-mode multiplicative problem: the law is an atom
    const auto atom = dir.write("atom.ini", "[model]\ntype = multiplicative\nm = 2\nlog_variance = 0.25\n[run]\nx = 0.5\n");
    CHECK(run({"density", "--config", atom.string(), "--out", out}) == 2);
}

TEST_CASE("a failing job writes nothing") {
    TempDir dir;
    std::string text(kSmallKpz);
    text.replace(text.find("T = 0.5"), 7, "T = 0.2");  // t = 0.3 > T breaks the estimator
    const auto cfg = dir.write("late.ini", text);
    CHECK(run({"scenario", "--config", cfg.string(), "--out", dir.path.string()}) == 1);
    CHECK_FALSE(fs::exists(dir.path / "small_density.csv"));
    CHECK_FALSE(fs::exists(dir.path / "small_fk.csv"));
}

TEST_CASE("outputs depend on the seed only") {
    TempDir dir;
    const auto cfg = dir.write("small.ini", kSmallKpz);
    const auto run_into = [&](const std::string& sub, std::vector<std::string> extra) {
        std::vector<std::string> args{"scenario", "--config", cfg.string(), "--out", (dir.path / sub).string()};
        args.insert(args.end(), extra.begin(), extra.end());
        REQUIRE(run(args) == 0);
    };
    ::unsetenv("SPDE_DENSITY_SEED");
    run_into("a", {});
    run_into("b", {"--threads", "3"});
    run_into("c", {"--seed", "0", "--threads", "1"});
    run_into("d", {"--seed", "1"});
    for (const char* kind : {"density", "fk", "oracle", "residual", "ck"}) {
        const std::string name = std::string("small_") + kind + ".csv";
        CAPTURE(name);
        const std::string a = slurp(dir.path / "a" / name);
        CHECK_FALSE(a.empty());
        CHECK(a == slurp(dir.path / "b" / name));
        CHECK(a == slurp(dir.path / "c" / name));
    }
    CHECK(slurp(dir.path / "a" / "small_fk.csv") != slurp(dir.path / "d" / "small_fk.csv"));
    CHECK(slurp(dir.path / "a" / "small_density.csv") == slurp(dir.path / "d" / "small_density.csv"));
    const std::string fk = slurp(dir.path / "a" / "small_fk.csv");
    CHECK(fk.rfind("u,t,x,p_closed,p_fk,stderr,n_paths,dt,seed\n", 0) == 0);
    CHECK(fk.find('\r') == std::string::npos);
}
