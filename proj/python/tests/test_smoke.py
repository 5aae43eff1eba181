import math
import os

import pytest

import spde_density as sd


def example3():
    m = sd.MultiplicativeModel()
    m.a, m.b, m.alpha, m.m, m.q_m = 1.0, 1.0, 0.5, 2, 1.0
    m.c = 5.5 + math.sqrt(2 * math.pi) + 4 * math.pi**2
    m.epsilon = math.sqrt(2) / 2
    m.initial = sd.LogNormalLaw(1.0, 0.25)
    return m


def example4():
    k = sd.KpzModel()
    k.theta, k.xi, k.epsilon, k.m, k.q_m = 1.0, 1.0, math.sqrt(2) / 2, 1, 1.0
    k.initial = sd.LogNormalLaw(1.0, 0.25)
    k.window = sd.Window(1e-3, 1 - 1e-3)
    return k


def test_multiplicative_moments():
    m = example3()
    t, x = 0.4, 0.1
    mu = (4 + 21 * t) / 4 + math.log(abs(math.sqrt(2) * math.sin(2 * math.pi * x)))
    assert sd.multiplicative_log_mean(t, x, m) == pytest.approx(mu, abs=1e-12)
    assert sd.multiplicative_log_variance(t, m) == pytest.approx((1 + 2 * t) / 4, abs=1e-12)
    assert m.b_m == pytest.approx(21 / 4)


def test_fk_constants():
    A, B, C = sd.multiplicative_fp_coefficients(example3())
    assert (A, B, C) == pytest.approx((0.25, -4.5, -5.0), abs=1e-12)
    drift, diffusion = sd.kpz_fk_coefficients(example4())
    assert drift == pytest.approx(2 * (math.pi**2 + 0.25), abs=1e-12)
    assert diffusion == pytest.approx(math.sqrt(2), abs=1e-12)


def test_pdf_sign_support():
    m = example3()
    assert sd.multiplicative_pdf(-1.0, 0.3, 0.125, m) == 0.0
    assert sd.multiplicative_pdf(10.0, 0.3, 0.125, m) > 0.0
    assert sd.multiplicative_pdf(-10.0, 0.3, 0.625, m) > 0.0


def test_validation_error_names_field():
    m = example3()
    m.alpha = 3.0
    with pytest.raises(sd.ValidationError, match="alpha") as info:
        sd.multiplicative_log_variance(0.3, m)
    assert isinstance(info.value, sd.Error)


def test_bundled_scenarios():
    names = sd.bundled_scenarios()
    assert {"example1", "example3-multiplicative", "example4-kpz"} <= set(names)
    s = sd.bundled_scenario("example1")
    assert s.kind == "additive"
    with pytest.raises(KeyError):
        sd.bundled_scenario_text("nope")


def test_unknown_key_is_validation_error():
    text = sd.bundled_scenario_text("example1").replace("[run]", "[run]\nbogus = 1", 1)
    with pytest.raises(sd.ValidationError) as info:
        sd.parse_config(text)
    assert info.value.kind == "UnknownKey"


def test_density_table_matches_closed_form():
    s = sd.bundled_scenario("example4-kpz")
    cols = sd.columns(sd.density_table(s))
    k = example4()
    for u, t, x, p in zip(cols["u"], cols["t"], cols["x"], cols["p_closed"]):
        assert p == pytest.approx(sd.kpz_pdf(u, t, x, k), rel=1e-14)


def test_cli_writes_csv(tmp_path):
    code = sd.run_cli(["density", "--config", "unused"])
    assert code == 1
    assert sd.run_cli(["scenario", "run", "example4-kpz", "--out", str(tmp_path)]) == 0
    written = sorted(os.listdir(tmp_path))
    assert any(n.endswith("_density.csv") for n in written)
    dens = sd.read_csv(tmp_path / next(n for n in written if n.endswith("_density.csv")))
    assert len(dens["u"]) > 0
