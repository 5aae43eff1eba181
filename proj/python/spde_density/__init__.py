"""Closed-form densities and verification jobs for linear SPDEs and KPZ."""

import csv
import io

from ._core import (
    Error,
    KpzModel,
    LogNormalLaw,
    MultiplicativeModel,
    NumericalError,
    Scenario,
    ValidationError,
    Window,
    bundled_scenario_text,
    bundled_scenarios,
    ck_table,
    density_table,
    dirac_limit_mass,
    fk_table,
    kpz_fk_coefficients,
    kpz_mean,
    kpz_pdf,
    kpz_variance,
    ks_critical_value,
    load_config,
    multiplicative_fp_coefficients,
    multiplicative_log_mean,
    multiplicative_log_variance,
    multiplicative_pdf,
    oracle_table,
    parse_config,
    residual_table,
    run_cli,
)


def bundled_scenario(name):
    return parse_config(bundled_scenario_text(name), name)


def columns(table):
    """(header, rows) as returned by the *_table functions -> {column: [float]}."""
    header, rows = table
    return {h: [float(r[i]) for r in rows] for i, h in enumerate(header)}


def read_csv(path):
    """A CSV written by the CLI -> {column: [float]}."""
    with open(path, newline="", encoding="utf-8") as f:
        text = f.read()
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    return columns((header, list(reader)))
