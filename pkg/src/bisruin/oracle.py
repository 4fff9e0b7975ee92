"""Brute-force checks on the recursive engine.

Both routes work straight from the surplus process definition: capital u,
one premium unit per period, ruin as soon as the surplus is <= 0.  The DP
gives survival over a finite number of claim pairs, which bounds ultimate
survival from above; the Monte Carlo simulates paths.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numba
import numpy as np
from scipy.signal import convolve

from .joint import DEFAULT_TRUNC_EPS, DependenceSpec, JointMatrix, build_joint

__all__ = [
    "finite_horizon_table",
    "finite_horizon_survival",
    "monte_carlo_ruin",
    "MCResult",
    "oracle_matrix",
    "GENERATOR",
]

GENERATOR = "PCG64"
MC_BLOCKS = 16
TAIL_WARN = 1e-6


def oracle_matrix(
    spec: DependenceSpec,
    u_max: int,
    pairs: int,
    prec: int = 128,
    trunc_eps=DEFAULT_TRUNC_EPS,
) -> JointMatrix:
    """Matrix wide enough that any omitted claim on a heavy axis ruins the
    process within the DP's capital range."""
    cap = u_max + 2 * pairs + 2
    return build_joint(spec, 0, trunc_eps, prec, heavy_index=cap)


def finite_horizon_table(m: JointMatrix | np.ndarray, u_max: int, pairs: int) -> np.ndarray:
    """Survival probability over ``pairs`` claim pairs for u = 0..u_max.

    Capital rises by at most 2 per pair, so levels above u_max + 2*pairs are
    never needed and the state space shrinks by two at each stage.
    """
    h = m.to_numpy() if isinstance(m, JointMatrix) else np.asarray(m, dtype=float)
    kx = h.shape[0]
    phi = np.ones(u_max + 2 * pairs + 1)
    for _ in range(pairs):
        g = phi.copy()
        g[0] = 0.0  # surplus 0 after the second claim is ruin
        c = convolve(h, g[None, :])
        n = len(phi) - 2
        new = np.zeros(n)
        # capital v survives the first claim x only if x <= v
        for x in range(min(kx, n)):
            new[x:] += c[x, 2 : 2 + n - x]
        phi = np.clip(new, 0.0, 1.0)
    return phi[: u_max + 1]


def finite_horizon_survival(m: JointMatrix | np.ndarray, u: int, pairs: int) -> float:
    return float(finite_horizon_table(m, u, pairs)[u])


@numba.njit(cache=True)
def _ruined_paths(rng, cdf, xs, ts, u, horizon, n):
    last = cdf.size - 1
    ruined = 0
    for _ in range(n):
        w = u
        for _k in range(horizon):
            j = np.searchsorted(cdf, rng.random(), side="right")
            if j > last:
                j = last
            if w + 1 - xs[j] <= 0 or w + 2 - ts[j] <= 0:
                ruined += 1
                break
            w += 2 - ts[j]
    return ruined


@dataclass(frozen=True)
class MCResult:
    estimate: float
    stderr: float
    n_paths: int
    horizon_pairs: int
    seed: int
    generator: str = GENERATOR
    warnings: tuple = field(default_factory=tuple)


def _outcome_table(m: JointMatrix | np.ndarray):
    h = m.to_numpy() if isinstance(m, JointMatrix) else np.asarray(m, dtype=float)
    nz = np.flatnonzero(h.ravel() > 0)
    p = h.ravel()[nz]
    xs, ys = np.divmod(nz, h.shape[1])
    cdf = np.cumsum(p)
    cdf /= cdf[-1]
    return cdf, xs.astype(np.int64), (xs + ys).astype(np.int64), 1.0 - p.sum()


def monte_carlo_ruin(
    m: JointMatrix | np.ndarray,
    u: int,
    horizon_pairs: int,
    n_paths: int,
    seed: int,
) -> MCResult:
    """Fraction of simulated paths ruined within ``horizon_pairs`` pairs.

    Paths are split into a fixed number of blocks, each driven by its own
    stream spawned from ``seed``, so results do not depend on scheduling.
    Mass outside the matrix window is not sampled.
    """
    if n_paths < 1:
        raise ValueError("n_paths must be positive")
    cdf, xs, ts, tail = _outcome_table(m)
    notes = []
    if tail > TAIL_WARN:
        notes.append(f"truncated tail mass {tail:.3g} is not sampled")
        warnings.warn(notes[-1], RuntimeWarning, stacklevel=2)
    children = np.random.SeedSequence(seed).spawn(MC_BLOCKS)
    sizes = np.full(MC_BLOCKS, n_paths // MC_BLOCKS)
    sizes[: n_paths % MC_BLOCKS] += 1
    ruined = 0
    for child, size in zip(children, sizes):
        if size == 0:
            continue
        rng = np.random.Generator(np.random.PCG64(child))
        ruined += _ruined_paths(rng, cdf, xs, ts, int(u), int(horizon_pairs), int(size))
    p = ruined / n_paths
    return MCResult(
        estimate=p,
        stderr=float(np.sqrt(p * (1 - p) / n_paths)),
        n_paths=n_paths,
        horizon_pairs=horizon_pairs,
        seed=seed,
        warnings=tuple(notes),
    )
