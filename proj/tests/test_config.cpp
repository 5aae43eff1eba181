#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "spde/config.hpp"
#include "spde/errors.hpp"

using namespace spde;

namespace {

const char* kMinimal = R"(
[model]
type = kpz
theta = 1
xi = 1
epsilon = 0.5
log_mean = 0
log_variance = 1
)";

}  // namespace

TEST_CASE("bundled first example carries the worked-example parameters") {
    const auto text = bundled_scenario_text("example1");
    REQUIRE(text);
    const Scenario s = parse_config(*text);
    CHECK(s.name == "example1");
    const auto& m = std::get<AdditiveModel>(s.model);
    CHECK(m.a == 1.0);
    CHECK(m.b == 1.0);
    CHECK(m.sigma == 1.0);
    CHECK(m.noise.rule() == NoiseSpec::Rule::Reciprocal);
    CHECK(m.noise.amplitude(7) == doctest::Approx(1.0 / 7.0));
    CHECK(m.noise.truncation_order() == 10);
    CHECK(m.initial_mode(1).variance == 1.0 / 16.0);
    CHECK(m.initial_mode(1).mean == 0.0);
    CHECK(m.initial_mode(2).variance == 0.0);
    CHECK(m.boundary.row == 0);
    CHECK(m.boundary.g(0.7) == std::sin(0.7));
    CHECK(m.boundary.h(0.7) == std::cos(0.7));
    const auto ref = fixtures::example1();
    for (double x : {0.0, 0.3, 0.9}) CHECK(m.forcing(0.4, x) == doctest::Approx(ref.forcing(0.4, x)).epsilon(1e-15));
    CHECK(s.run.t == std::vector<double>{1.0});
    CHECK(s.run.x == std::vector<double>{0.3, 0.5, 0.7});
    CHECK(s.run.T == 2.0);
    CHECK(*s.run.dt == 0.01);
    CHECK(s.run.n_paths == 10'000);
    CHECK(s.outputs.at("fk") == "example1_fk.csv");
}

TEST_CASE("bundled multiplicative and KPZ scenarios") {
    const Scenario s3 = parse_config(*bundled_scenario_text("example3-multiplicative"));
    const auto& m = std::get<MultiplicativeModel>(s3.model);
    const auto ref = fixtures::example3();
    CHECK(m.c == doctest::Approx(ref.c).epsilon(1e-16));
    CHECK(m.epsilon == ref.epsilon);
    CHECK(m.b_m() == doctest::Approx(5.25).epsilon(1e-14));
    CHECK(s3.run.x == std::vector<double>{0.125, 0.625, 0.495, 0.995});
    const Scenario s4 = parse_config(*bundled_scenario_text("example4-kpz"));
    const auto& k = std::get<KpzModel>(s4.model);
    CHECK(k.theta == 1.0);
    CHECK(k.window.lo == 0.001);
    CHECK(s4.run.T == 0.5);
    CHECK(bundled_scenarios().size() == 3);
    CHECK_FALSE(bundled_scenario_text("nope"));
}

TEST_CASE("malformed input") {
    CHECK_THROWS_AS(parse_config(""), ParseError);
    CHECK_THROWS_AS(parse_config("  # only a comment\n\n"), ParseError);
    try {
        parse_config(std::string(kMinimal) + "theta = 2\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("theta") != std::string::npos);
        CHECK(std::string(e.what()).find("line 9") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "colour = red\n"), UnknownKey);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[extras]\n"), UnknownKey);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "sigma = 1\n"), UnknownKey);  // additive-only key
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[run]\nt = 1.0x\n"), ParseError);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[run]\nt = \n"), ParseError);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[run\n"), ParseError);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "just words\n"), ParseError);
    CHECK_THROWS_AS(parse_config("[model]\ntype = quantum\n"), ParseError);
    CHECK_THROWS_AS(parse_config("[run]\nt = 1\n"), ParseError);
}

TEST_CASE("invalid parameters name the field") {
    auto text = *bundled_scenario_text("example3-multiplicative");
    text.replace(text.find("alpha = 0.5"), 11, "alpha = 3");
    try {
        parse_config(text);
        FAIL("expected InvalidParameter");
    } catch (const InvalidParameter& e) {
        REQUIRE(e.violations().size() == 1);
        CHECK(e.violations()[0].field == "alpha");
    }
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[run]\nx = 1.5\n"), InvalidParameter);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[run]\nck_times = 0.1, 0.2\n"), InvalidParameter);
}

TEST_CASE("value grammar") {
    CHECK(parse_double("1e-3") == 1e-3);
    CHECK(parse_double(" +2.5 ") == 2.5);
    CHECK(parse_double("0.1") == 0.1);
    CHECK_THROWS_AS(parse_double("1,5"), ParseError);
    CHECK_THROWS_AS(parse_double("nanx"), ParseError);

    const Scenario a = parse_config(R"(
[model]
type = additive
forcing = harmonic:0.5,1,-2,3 * x^2 + const:2.5e+0*e3 + sin*1
g = const:1
h = zero
noise = single:2:0.5
truncation = 4
initial_modes = 0:0.1, 1.5:0.2
[run]
u_grid = -1:1:5
fp_t_range = 0.1:0.9
)");
    const auto& m = std::get<AdditiveModel>(a.model);
    const double t = 0.3, x = 0.4;
    const double expect = (0.5 + std::cos(3 * t) - 2 * std::sin(3 * t)) * x * x +
                          2.5 * std::sqrt(2.0) * std::cos(2.5 * std::numbers::pi * x) + std::sin(t);
    CHECK(m.forcing(t, x) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(m.forcing.terms().size() == 3);
    CHECK(m.noise.amplitude(2) == 0.5);
    CHECK(m.noise.amplitude(1) == 0.0);
    CHECK(m.noise.truncation_order() == 4);
    CHECK(m.initial_mode(2).mean == 1.5);
    CHECK(a.run.u_grid.values == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
    CHECK(a.run.fp_t_range->second == 0.9);

    const Scenario l = parse_config("[model]\ntype = additive\nnoise = 1, 0.5, 0.25\n");
    CHECK(std::get<AdditiveModel>(l.model).noise.truncation_order() == 3);
    CHECK(std::get<AdditiveModel>(l.model).noise.amplitude(3) == 0.25);

    const Scenario s = parse_config(R"(
[model]
type = multiplicative
stratonovich_c = 1.0
epsilon = 0.5
q_m = 2
log_variance = 0.1
)");
    CHECK(std::get<MultiplicativeModel>(s.model).c == doctest::Approx(1.5));
    CHECK_THROWS_AS(parse_config("[model]\ntype = multiplicative\nc = 1\nstratonovich_c = 1\nlog_variance = 1\n"),
                    ParseError);
}
