import math

import numpy as np
import pytest

from rhmsp.lepage import (LePageConfig, bias_budget, derive_constants,
                          empirical_cf, ensemble_to_csv, sample_paths,
                          truncation_diagnostic)
from rhmsp.norms import FddPoint, exact_cf
from rhmsp.quad import QuadratureConfig

from conftest import make_spec

GRID = tuple(np.linspace(0.0, 1.0, 17))


def test_config_validation():
    with pytest.raises(ValueError):
        LePageConfig(terms=10)
    with pytest.raises(ValueError):
        LePageConfig(aux_density="uniform")
    with pytest.raises(ValueError):
        LePageConfig(seed=-1)


# ---------------------------------------------------------------------------
# series constants
# ---------------------------------------------------------------------------

def test_constants_match_reflection_identity():
    for a in (1.2, 1.5, 1.8):
        c, _ = derive_constants(make_spec(alpha=a).alpha)
        # int_0^inf x^{-a} sin x dx = Gamma(1-a) cos(pi a / 2)
        # (both factors negative on (1,2), product positive)
        ident = (math.gamma(1.0 - a) * math.cos(math.pi * a / 2.0)) ** (-1.0 / a)
        assert c == pytest.approx(ident, rel=1e-10)


def test_gauss_sigma_closed_form():
    for a in (1.2, 1.5, 1.8):
        _, sigma = derive_constants(make_spec(alpha=a).alpha)
        moment = 2.0 ** (a / 2.0) * math.gamma((a + 1.0) / 2.0) / math.sqrt(math.pi)
        assert sigma == pytest.approx(moment ** (-1.0 / a), rel=1e-12)


# ---------------------------------------------------------------------------
# sampling contract
# ---------------------------------------------------------------------------

def test_grid_validation(default_spec):
    cfg = LePageConfig(terms=100)
    with pytest.raises(ValueError):
        sample_paths(default_spec, (0.5, 1.0), 1, cfg)        # no 0
    with pytest.raises(ValueError):
        sample_paths(default_spec, (0.0, 0.5, 0.5), 1, cfg)   # not increasing
    with pytest.raises(ValueError):
        sample_paths(default_spec, (0.0, 10.0), 1, cfg)       # leaves horizon
    with pytest.raises(ValueError):
        sample_paths(default_spec, (0.0, 1.0), 0, cfg)


def test_paths_start_at_zero(default_spec):
    ens = sample_paths(default_spec, GRID, 3, LePageConfig(terms=150, seed=5))
    assert np.all(ens.paths[:, 0] == 0.0)
    assert ens.paths.shape == (3, len(GRID))


def test_determinism_and_per_path_streams(default_spec):
    cfg = LePageConfig(terms=150, seed=9)
    a = sample_paths(default_spec, GRID, 3, cfg)
    b = sample_paths(default_spec, GRID, 3, cfg)
    assert np.array_equal(a.paths, b.paths)
    # path j is keyed by (seed, j) alone: unaffected by the ensemble size
    c = sample_paths(default_spec, GRID, 2, cfg)
    assert np.array_equal(a.paths[:2], c.paths)


def test_seed_changes_paths(default_spec):
    a = sample_paths(default_spec, GRID, 1, LePageConfig(terms=150, seed=1))
    b = sample_paths(default_spec, GRID, 1, LePageConfig(terms=150, seed=2))
    assert not np.array_equal(a.paths, b.paths)


def test_marginal_scale_matches_exact_law(default_spec):
    # invert |cf| = exp(-(scale * lam)^alpha) at a mildly informative lambda
    from rhmsp.norms import scale_norm
    ens = sample_paths(default_spec, (0.0, 0.5, 1.0), 400,
                       LePageConfig(terms=800, seed=7))
    cfg = QuadratureConfig(rel_tol=1e-6)
    for t in (0.5, 1.0):
        true = scale_norm(default_spec, FddPoint(times=(t,), coeffs=(1.0,)), cfg)
        lam = 0.2 / true
        emp, se = empirical_cf(ens, FddPoint(times=(t,), coeffs=(lam,)))
        sig = (-math.log(abs(emp))) ** (1.0 / 1.5) / lam
        assert sig == pytest.approx(true, rel=0.15)


def test_empirical_cf_against_exact(default_spec):
    ens = sample_paths(default_spec, (0.0, 0.25, 0.75), 500,
                       LePageConfig(terms=1000, seed=3))
    budget = bias_budget(default_spec.alpha, 1000)
    cfg = QuadratureConfig(rel_tol=1e-6)
    for point in (FddPoint(times=(0.25,), coeffs=(0.4,)),
                  FddPoint(times=(0.25, 0.75), coeffs=(0.3, -0.2))):
        emp, se = empirical_cf(ens, point)
        assert abs(emp - exact_cf(default_spec, point, cfg)) <= 3.0 * se + budget


def test_empirical_cf_requires_grid_times(default_spec):
    ens = sample_paths(default_spec, (0.0, 0.5), 2, LePageConfig(terms=100))
    with pytest.raises(ValueError):
        empirical_cf(ens, FddPoint(times=(0.3,), coeffs=(1.0,)))


# ---------------------------------------------------------------------------
# diagnostics and CSV
# ---------------------------------------------------------------------------

def test_truncation_diagnostic_golden_and_monotone(default_spec):
    idx = default_spec.alpha
    assert truncation_diagnostic(idx, 5000) == pytest.approx(
        0.04871931387729569, rel=1e-12)
    vals = [truncation_diagnostic(idx, n) for n in (200, 1000, 5000, 20000)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert bias_budget(idx, 5000) == 0.5 * truncation_diagnostic(idx, 5000)


def test_csv_shape_and_determinism(default_spec):
    ens = sample_paths(default_spec, GRID, 2, LePageConfig(terms=100, seed=4))
    text = ensemble_to_csv(ens)
    lines = text.strip().split("\n")
    assert lines[0] == "t,path_0,path_1"
    assert len(lines) == len(GRID) + 1
    assert text == ensemble_to_csv(ens)
    # values round-trip through the %.17g formatting exactly
    row = lines[3].split(",")
    assert float(row[2]) == ens.paths[1, 2]
