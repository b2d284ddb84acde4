import json
import math

import numpy as np
import pytest

from rhmsp import analysis
from rhmsp.analysis import (CheckReport, DEFAULT_U_GRID, ft_check,
                            holder_slope, lnd_study, localizability_error)
from rhmsp.lepage import LePageConfig, PathEnsemble
from rhmsp.norms import OptimizerConfig
from rhmsp.quad import QuadratureConfig

from conftest import make_spec


# ---------------------------------------------------------------------------
# CheckReport
# ---------------------------------------------------------------------------

def test_report_pass_consistency_enforced():
    with pytest.raises(ValueError):
        CheckReport(check="c", parameters={}, metric=2.0, threshold=1.0,
                    direction="<=", passed=True)
    with pytest.raises(ValueError):
        CheckReport(check="c", parameters={}, metric=2.0, threshold=1.0,
                    direction=">", passed=True)


def test_report_json_schema():
    rep = CheckReport(check="demo", parameters={"b": 1, "a": 2}, metric=0.5,
                      threshold=1.0, direction="<=", passed=True,
                      artifacts=("x.csv",))
    data = json.loads(rep.to_json())
    assert set(data) == {"check", "parameters", "metric", "threshold",
                         "direction", "pass", "artifacts"}
    assert data["pass"] is True
    assert rep.to_json() == rep.to_json()  # deterministic serialization
    rep2 = rep.with_artifacts(["y.csv", "z.json"])
    assert rep2.artifacts == ("y.csv", "z.json")
    assert rep.artifacts == ("x.csv",)


# ---------------------------------------------------------------------------
# Hoelder slope
# ---------------------------------------------------------------------------

def _linear_double(h_spec="const:0.5"):
    spec = make_spec(hurst=h_spec)
    grid = tuple(np.linspace(0.0, 1.0, 2049))
    paths = np.vstack([np.asarray(grid), 2.0 * np.asarray(grid)])
    return PathEnsemble(grid=grid, paths=paths, spec=spec,
                        config=LePageConfig(terms=100),
                        per_path_seeds=((0, 0), (0, 1)))


def test_holder_slope_linear_double_is_one():
    rep = holder_slope(_linear_double(), [2.0 ** -k for k in range(4, 10)])
    assert rep.parameters["median_slope"] == pytest.approx(1.0, abs=0.01)


def test_holder_slope_input_validation():
    ens = _linear_double()
    with pytest.raises(ValueError):
        holder_slope(ens, [0.1, 0.2, 0.3])          # too few deltas
    with pytest.raises(ValueError):
        holder_slope(ens, [2.0, 3.0, 4.0, 5.0])     # lags off the grid
    bad = PathEnsemble(grid=(0.0, 0.1, 0.3, 0.7), paths=np.zeros((1, 4)),
                       spec=ens.spec, config=ens.config,
                       per_path_seeds=((0, 0),))
    with pytest.raises(ValueError):
        holder_slope(bad, [0.1, 0.2, 0.3, 0.4])     # non-uniform grid


def test_holder_slope_uses_window_hurst_range():
    # sampled window [0, 1] of sine:0.5,0.1,1 has min H = 0.5, not the
    # whole-horizon minimum
    rep = holder_slope(_linear_double("sine:0.5,0.1,1"),
                       [2.0 ** -k for k in range(4, 10)])
    assert rep.parameters["h_hat"] == pytest.approx(0.5)


# ---------------------------------------------------------------------------
# localizability
# ---------------------------------------------------------------------------

def test_localizability_constant_h_is_exact(default_spec):
    rep = localizability_error(default_spec, 0.5, 0.1,
                               cfg=QuadratureConfig(rel_tol=1e-6))
    assert rep.metric <= 4e-6
    assert rep.passed


# ---------------------------------------------------------------------------
# LND study
# ---------------------------------------------------------------------------

def test_lnd_study_n2_ratio_identically_one(default_spec):
    rep = lnd_study(default_spec, 0.5, [2.0 ** -4, 2.0 ** -6], 2,
                    cfg=QuadratureConfig(rel_tol=1e-5), floor_value=0.999)
    assert rep.metric == 1.0
    for row in rep.parameters["table"]:
        assert row["ratio"] == 1.0


def test_lnd_study_validation(default_spec):
    with pytest.raises(ValueError):
        lnd_study(default_spec, 0.0, [0.1], 2)
    with pytest.raises(ValueError):
        lnd_study(default_spec, 0.5, [0.1], 5)
    with pytest.raises(ValueError):
        lnd_study(default_spec, 0.5, [10.0], 2)


# ---------------------------------------------------------------------------
# appendix FT identity
# ---------------------------------------------------------------------------

def test_ft_check_direct_branch_golden():
    rep = ft_check(1.5, 1.0)
    assert rep.metric <= 1e-4
    assert rep.passed
    assert set(rep.parameters["u_grid"]) == set(DEFAULT_U_GRID)


def test_ft_check_duality_branch():
    # h <= 1: absolute convergence fails, duality surrogate takes over
    rep = ft_check(0.8, 1.0, u_grid=(-1.0, 0.5), alpha=1.5)
    assert rep.metric <= 1e-6


def test_ft_check_h_one_indicator_case():
    rep = ft_check(1.0, 1.0, u_grid=(0.25, 0.75), alpha=1.5)
    assert rep.metric <= 1e-6


def test_ft_check_validation():
    with pytest.raises(ValueError):
        ft_check(2.5, 1.0)
    with pytest.raises(ValueError):
        ft_check(1.5, -1.0)
