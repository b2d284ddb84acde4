"""Monte-Carlo simulation of the process by the truncated LePage series.

A path is C_alpha Re Sum_{k<=N} Gamma_k^{-1/alpha} phi(xi_k)^{-1/alpha}
f(t, xi_k) g_k with Gamma_k the arrival times of a unit-rate Poisson process,
xi_k drawn from an auxiliary density phi equivalent to Lebesgue measure, and
g_k rotationally invariant complex Gaussians normalized so E|Re g_k|^alpha = 1.
The auxiliary density here is the standard Cauchy: heavy-tailed enough that
phi(xi)^{-1/alpha} f(t, xi) keeps a finite alpha-moment for every kernel
variant and Hurst range supported.

Reproducibility contract: each path uses its own counter-based Philox stream
keyed by (seed, path index), so ensembles are byte-identical for a fixed
(seed, spec, grid, config) regardless of generation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np
from scipy.special import gamma as _gamma_fn
from scipy.special import roots_genlaguerre as _roots_genlaguerre
from scipy.special import zeta as _zeta

from .model import ProcessSpec, StabilityIndex, eval_kernel
from .norms import FddPoint

__all__ = [
    "LePageConfig",
    "PathEnsemble",
    "derive_constants",
    "sample_paths",
    "empirical_cf",
    "truncation_diagnostic",
    "bias_budget",
]


@dataclass(frozen=True)
class LePageConfig:
    terms: int = 5000
    aux_density: str = "Cauchy"
    seed: int = 0
    tail_compensation: bool = True

    def __post_init__(self):
        if self.terms < 100:
            raise ValueError("terms must be >= 100")
        if self.aux_density != "Cauchy":
            raise ValueError("only the Cauchy auxiliary density is supported")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class PathEnsemble:
    grid: Tuple[float, ...]
    paths: np.ndarray          # (pathCount, gridLength)
    spec: ProcessSpec
    config: LePageConfig
    per_path_seeds: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if self.paths.shape != (len(self.per_path_seeds), len(self.grid)):
            raise ValueError("inconsistent ensemble dimensions")


def derive_constants(alpha: StabilityIndex) -> Tuple[float, float]:
    """(cAlpha, gaussSigma) from Theorem-level normalizations.

    cAlpha = (int_0^inf x^{-alpha} sin x dx)^{-1/alpha}, so that
    cAlpha * Sum Gamma_k^{-1/alpha} eps_k has unit scale; the sine integral is
    evaluated by a power series on the first half-period plus Euler-accelerated
    alternating half-period integrals. gaussSigma = (E|N(0,1)|^alpha)^{-1/alpha}
    with the absolute moment from generalized Gauss-Laguerre quadrature.
    """
    a = alpha.alpha
    # head [0, pi]: int x^{-a} sin x = sum_j (-1)^j pi^{2j+2-a} / ((2j+1)! (2j+2-a))
    head = 0.0
    term_scale = 1.0  # 1/(2j+1)!
    for j in range(40):
        term = (-1.0) ** j * math.pi ** (2 * j + 2 - a) * term_scale / (2 * j + 2 - a)
        head += term
        if abs(term) < 1e-18 * abs(head):
            break
        term_scale /= (2 * j + 2) * (2 * j + 3)
    # alternating half-period integrals b_k = int_{k pi}^{(k+1) pi} x^{-a} |sin x|
    nodes, weights = np.polynomial.legendre.leggauss(48)
    b = []
    for k in range(1, 61):
        lo, hi = k * math.pi, (k + 1) * math.pi
        x = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
        b.append(0.5 * (hi - lo) * float(np.sum(weights * x ** (-a) * np.abs(np.sin(x)))))
    # tail = sum_{k>=1} (-1)^k b_k = -sum_{n>=0} (-1)^n D^n b_1 / 2^{n+1}
    # (Euler transform; D = forward difference on the b sequence)
    diffs = np.asarray(b)
    tail = 0.0
    for j in range(len(b)):
        tail -= (-1.0) ** j * diffs[0] / 2.0 ** (j + 1)
        diffs = diffs[1:] - diffs[:-1]
        if diffs.size == 0:
            break
    integral = head + tail
    if not integral > 0.0:
        raise ArithmeticError("sine-integral quadrature produced %g" % integral)
    c_alpha = integral ** (-1.0 / a)

    # E|N(0,1)|^alpha = (2^{(alpha+1)/2}/sqrt(2 pi)) int_0^inf u^{(alpha-1)/2} e^{-u} du
    u, w = _roots_genlaguerre(24, (a - 1.0) / 2.0)
    moment = 2.0 ** ((a + 1.0) / 2.0) / math.sqrt(2.0 * math.pi) * float(np.sum(w))
    gauss_sigma = moment ** (-1.0 / a)
    return c_alpha, gauss_sigma


def _cauchy_density(x):
    return 1.0 / (math.pi * (1.0 + x * x))


def _tail_variance_profile(spec: ProcessSpec, grid, config: LePageConfig,
                           c_alpha: float, gauss_sigma: float) -> np.ndarray:
    """Per-grid-point variance of the truncated tail, conditionally Gaussian:
    Var = cAlpha^2 sigma^2 V(t) sum_{k>N} E[Gamma_k^{-2/alpha}],
    V(t) = int phi(x)^{1-2/alpha} |f(t,x)|^2 dx (finite iff 2H+1 > 2/alpha).
    """
    from .quad import OscillationHint, QuadratureConfig, integrate_even_singular

    a = spec.alpha.alpha
    r = 2.0 / a
    h_min = spec.hurst.h_hat
    if not 2.0 * h_min + 1.0 > r:
        raise ValueError(
            "tail compensation needs 2*min H + 1 > 2/alpha "
            "(got H_min=%g, alpha=%g); disable it for this spec" % (h_min, a))
    # sum_{k>N} E[Gamma_k^{-r}] with E[Gamma_k^{-r}] = Gamma(k-r)/Gamma(k),
    # bounded by the integral tail: ~ N^{1-r}/(r-1)
    n = config.terms
    tail_weight = float(_zeta(r, n + 1)) if r > 1 else math.inf
    # E[Gamma_k^{-r}] ~ k^{-r} (1 + O(1/k)); the Hurwitz-zeta tail is the
    # leading term and the relative correction is O(r(r+1)/2N), negligible here
    cfg = QuadratureConfig(rel_tol=1e-7, abs_tol=1e-12)
    grid = np.asarray(grid, dtype=float)
    pos = np.unique(grid[grid > 0.0])
    if pos.size > 33:
        nodes = np.unique(np.concatenate([
            pos[[0, -1]], np.quantile(pos, np.linspace(0, 1, 31))]))
    else:
        nodes = pos
    vals = []
    for t in nodes:
        p = spec.hurst(t) + 1.0 / a
        sing = max(0.0, 2.0 * p - 2.0)
        decay = 2.0 * spec.hurst(t) + 1.0 - r

        def g(x, t=t, p=p):
            f = eval_kernel(spec, t, x)
            return np.abs(f) ** 2 * _cauchy_density(x) ** (1.0 - r)

        def mean_env(x, t=t, p=p):
            x = np.asarray(x, dtype=float)
            return 2.0 * x ** (-2.0 * p) * _cauchy_density(x) ** (1.0 - r)

        hint = OscillationHint(frequencies=(t,), mean_envelope=mean_env)
        vals.append(integrate_even_singular(g, decay, sing, cfg,
                                            oscillation=hint).value)
    if nodes.size > 1:
        from scipy.interpolate import PchipInterpolator
        v_of_t = PchipInterpolator(nodes, vals)
        v_grid = np.where(grid > 0.0, np.maximum(v_of_t(grid), 0.0), 0.0)
    else:
        v_grid = np.where(grid > 0.0, vals[0] if vals else 0.0, 0.0)
    return c_alpha ** 2 * gauss_sigma ** 2 * tail_weight * v_grid


def sample_paths(spec: ProcessSpec, grid: Sequence[float], path_count: int,
                 config: LePageConfig = LePageConfig()) -> PathEnsemble:
    """Simulate path_count paths of the process on the grid."""
    grid = tuple(float(t) for t in grid)
    if len(grid) == 0 or grid[0] != 0.0:
        raise ValueError("grid must start at 0")
    if any(b <= a for a, b in zip(grid[:-1], grid[1:])):
        raise ValueError("grid must be strictly increasing")
    if grid[-1] > spec.horizon:
        raise ValueError("grid leaves the horizon")
    if path_count < 1:
        raise ValueError("pathCount must be >= 1")
    a = spec.alpha.alpha
    n = config.terms
    c_alpha, gauss_sigma = derive_constants(spec.alpha)
    t_arr = np.asarray(grid)
    if config.tail_compensation:
        tail_var = _tail_variance_profile(spec, t_arr, config, c_alpha, gauss_sigma)
        tail_sd = np.sqrt(np.maximum(tail_var, 0.0))
    else:
        tail_sd = None

    seeds = tuple((int(config.seed), j) for j in range(path_count))
    paths = np.empty((path_count, len(grid)))
    block = max(1, min(len(grid), (1 << 22) // n))
    for j in range(path_count):
        rng = np.random.Generator(np.random.Philox(
            key=np.array([config.seed, j], dtype=np.uint64)))
        gammas = np.cumsum(rng.exponential(size=n))
        xi = rng.standard_cauchy(size=n)
        g_re = rng.standard_normal(size=n)
        g_im = rng.standard_normal(size=n)
        gk = gauss_sigma * (g_re + 1j * g_im)
        w = (gammas ** (-1.0 / a) * _cauchy_density(xi) ** (-1.0 / a)) * gk
        row = np.empty(len(grid))
        for lo in range(0, len(grid), block):
            hi = min(lo + block, len(grid))
            acc = np.zeros(hi - lo)
            for i, t in enumerate(grid[lo:hi]):
                if t == 0.0:
                    acc[i] = 0.0  # f(0, .) = 0 for every variant
                else:
                    acc[i] = np.sum((eval_kernel(spec, t, xi) * w).real)
            row[lo:hi] = c_alpha * acc
        if tail_sd is not None:
            row = row + tail_sd * rng.standard_normal(size=len(grid))
            row[t_arr == 0.0] = 0.0
        paths[j] = row
    return PathEnsemble(grid=grid, paths=paths, spec=spec, config=config,
                        per_path_seeds=seeds)


def empirical_cf(ensemble: PathEnsemble, point: FddPoint) -> Tuple[complex, float]:
    """Monte-Carlo characteristic function mean exp(i Sum lambda_k X(t_k))
    and its standard error (max of the Re/Im component errors)."""
    idx = []
    for t in point.times:
        match = [i for i, g in enumerate(ensemble.grid) if g == t]
        if not match:
            raise ValueError("time %g not on the ensemble grid" % t)
        idx.append(match[0])
    lam = np.asarray(point.coeffs)
    phase = ensemble.paths[:, idx] @ lam
    z = np.exp(1j * phase)
    value = complex(np.mean(z))
    m = z.size
    se_re = float(np.std(z.real, ddof=1)) / math.sqrt(m)
    se_im = float(np.std(z.imag, ddof=1)) / math.sqrt(m)
    return value, max(se_re, se_im)


def truncation_diagnostic(alpha: StabilityIndex, terms: int) -> float:
    """Relative tail mass of the conditional-variance series S = sum k^{-2/alpha}:
    zeta(2/alpha, N+1) / zeta(2/alpha)."""
    if terms < 100:
        raise ValueError("terms must be >= 100")
    r = 2.0 / alpha.alpha
    return float(_zeta(r, terms + 1) / _zeta(r, 1))


def bias_budget(alpha: StabilityIndex, terms: int) -> float:
    """Documented cf-bias allowance for the truncated series.

    The tail the truncation removes carries a conditional standard deviation
    of order sqrt(tail mass) relative to the whole series, and with tail
    compensation the residual cf bias is observed well inside half the
    diagnostic; the budget 0.5 * truncation_diagnostic is the advertised
    mapping used by the acceptance checks.
    """
    return 0.5 * truncation_diagnostic(alpha, terms)


def ensemble_to_csv(ensemble: PathEnsemble) -> str:
    """Render `t,path_0,...` CSV (deterministic %.17g formatting)."""
    m = ensemble.paths.shape[0]
    lines = ["t," + ",".join("path_%d" % j for j in range(m))]
    for i, t in enumerate(ensemble.grid):
        lines.append("%.17g," % t
                     + ",".join("%.17g" % v for v in ensemble.paths[:, i]))
    return "\n".join(lines) + "\n"
