"""Joint law of the claim pair (X, Y) as a truncated probability matrix.

``h[i][j] = P(X=i, Y=j)`` is held for ``0 <= i <= K_X`` and ``0 <= j <= K_Y``.
Entries with ``i + j <= min(K_X, K_Y)`` are complete, so the pair-sum pmf
``s_k`` and the column ``h[k][0]`` are exact up to that index.  Means come
from closed forms, never from the truncated window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import mpmath
import numpy as np
from mpmath import mpf

from ._numeric import DEFAULT_PREC, to_fraction, to_mpf, workprec
from .errors import ParameterError, PrecisionError
from .marginal import MarginalDist, MarginalSpec, Poisson

__all__ = [
    "Explicit",
    "Product",
    "BivariatePoisson",
    "Clayton",
    "DependenceSpec",
    "JointMatrix",
    "build_joint",
    "build_explicit",
    "build_product",
    "build_bivariate_poisson",
    "build_clayton_coupled",
    "clayton_cdf",
    "sum_pmf",
    "pearson_correlation",
    "UNDEFINED",
]

DEFAULT_TRUNC_EPS = mpf("1e-15")
CLAMP_TOL = mpf("1e-30")


@dataclass(frozen=True)
class Explicit:
    matrix: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.matrix)
        if not rows or not all(rows):
            raise ParameterError("explicit matrix is empty")
        object.__setattr__(self, "matrix", rows)
        q = [to_fraction(v) for r in rows for v in r]
        if any(v < 0 for v in q):
            raise ParameterError("explicit matrix has a negative entry")
        total = sum(q)
        if total > 1 or total < 1 - Fraction(1, 10**10):
            raise ParameterError(f"explicit matrix mass {float(total)} not in [1-1e-10, 1]")


@dataclass(frozen=True)
class Product:
    x: MarginalSpec
    y: MarginalSpec


@dataclass(frozen=True)
class BivariatePoisson:
    lambda1: object
    lambda2: object
    lam: object

    def __post_init__(self):
        l1, l2, l0 = (to_fraction(v) for v in (self.lambda1, self.lambda2, self.lam))
        if l1 <= 0 or l2 <= 0:
            raise ParameterError("bivariate Poisson rates must be positive")
        if not 0 <= l0 < min(l1, l2):
            raise ParameterError(
                f"covariance parameter must lie in [0, min(lambda1, lambda2)), got {self.lam}"
            )


@dataclass(frozen=True)
class Clayton:
    theta: object
    x: MarginalSpec
    y: MarginalSpec

    def __post_init__(self):
        t = to_fraction(self.theta)
        if t < -1 or t == 0:
            raise ParameterError(f"Clayton theta must lie in [-1, inf) without 0, got {self.theta}")


DependenceSpec = Union[Explicit, Product, BivariatePoisson, Clayton]


class _Undefined:
    """Marker for a correlation that does not exist (infinite or zero variance)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNDEFINED"

    def __str__(self):
        return "undefined"

    def __bool__(self):
        return False


UNDEFINED = _Undefined()


@dataclass(frozen=True, eq=False)
class JointMatrix:
    entries: list  # list of rows of mpf, shape (K_X+1, K_Y+1)
    x: list  # marginal pmf of X on 0..K_X
    y: list  # marginal pmf of Y on 0..K_Y
    mean_x: mpf
    mean_y: mpf
    tail_mass: mpf
    prec: int = DEFAULT_PREC
    mean_sum_rational: Fraction | None = None
    finite_variance: bool = True
    spec: object = None
    s: list = field(init=False, repr=False)
    h_col: list = field(init=False, repr=False)

    def __post_init__(self):
        with workprec(self.prec):
            object.__setattr__(self, "s", _sum_pmf(self.entries))
            object.__setattr__(self, "h_col", [row[0] for row in self.entries])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.entries[0])

    @property
    def exact_upto(self) -> int:
        """Largest k for which ``s_k`` and ``h[k][0]`` are complete."""
        kx, ky = self.shape
        return min(kx, ky) - 1

    @property
    def mean_sum(self) -> mpf:
        with workprec(self.prec):
            return self.mean_x + self.mean_y

    def h(self, i: int, j: int) -> mpf:
        kx, ky = self.shape
        if 0 <= i < kx and 0 <= j < ky:
            return self.entries[i][j]
        return mpf(0)

    def s_at(self, k: int) -> mpf:
        if k < 0:
            return mpf(0)
        if k > self.exact_upto:
            raise IndexError(f"s_{k} lies outside the exact window (<= {self.exact_upto})")
        return self.s[k]

    def h0_at(self, k: int) -> mpf:
        if k < 0:
            return mpf(0)
        if k > self.exact_upto:
            raise IndexError(f"h_{k},0 lies outside the exact window (<= {self.exact_upto})")
        return self.h_col[k]

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.entries])


def _sum_pmf(entries) -> list[mpf]:
    kx, ky = len(entries), len(entries[0])
    s = [mpf(0)] * (kx + ky - 1)
    for i, row in enumerate(entries):
        for j, v in enumerate(row):
            s[i + j] += v
    return s


def sum_pmf(m: JointMatrix) -> list[mpf]:
    """``s_k = P(X+Y=k)`` for k up to the exact window."""
    return list(m.s[: m.exact_upto + 1])


def _window(dist: MarginalDist, min_index: int, trunc_eps, heavy_index: int | None) -> int:
    if dist.heavy_tailed:
        return max(min_index, heavy_index or 0)
    return max(min_index, dist.truncation_index(trunc_eps))


def build_explicit(matrix, min_index: int = 0, prec: int = DEFAULT_PREC) -> JointMatrix:
    spec = matrix if isinstance(matrix, Explicit) else Explicit(matrix)
    q = [[to_fraction(v) for v in row] for row in spec.matrix]
    width = max(len(r) for r in q)
    kx = max(len(q), min_index + 1)
    ky = max(width, min_index + 1)
    q = [r + [Fraction(0)] * (ky - len(r)) for r in q]
    q += [[Fraction(0)] * ky for _ in range(kx - len(q))]
    total = sum(sum(r) for r in q)
    mx = sum(i * sum(r) for i, r in enumerate(q))
    my = sum(j * q[i][j] for i in range(kx) for j in range(ky))
    with workprec(prec):
        entries = [[to_mpf(v) for v in r] for r in q]
        x = [to_mpf(sum(r)) for r in q]
        y = [to_mpf(sum(q[i][j] for i in range(kx))) for j in range(ky)]
        return JointMatrix(
            entries=entries,
            x=x,
            y=y,
            mean_x=to_mpf(mx),
            mean_y=to_mpf(my),
            tail_mass=to_mpf(1 - total),
            prec=prec,
            mean_sum_rational=mx + my,
            spec=spec,
        )


def _rational_sum(dx: MarginalDist, dy: MarginalDist) -> Fraction | None:
    a, b = dx.mean_rational, dy.mean_rational
    return None if a is None or b is None else a + b


def build_product(
    x: MarginalSpec,
    y: MarginalSpec,
    min_index: int = 0,
    trunc_eps=DEFAULT_TRUNC_EPS,
    prec: int = DEFAULT_PREC,
    heavy_index: int | None = None,
) -> JointMatrix:
    dx, dy = MarginalDist(x, prec), MarginalDist(y, prec)
    kx = _window(dx, min_index, trunc_eps, heavy_index)
    ky = _window(dy, min_index, trunc_eps, heavy_index)
    with workprec(prec):
        px, py = dx.pmf_array(kx), dy.pmf_array(ky)
        entries = [[a * b for b in py] for a in px]
        return JointMatrix(
            entries=entries,
            x=px,
            y=py,
            mean_x=dx.mean,
            mean_y=dy.mean,
            tail_mass=1 - mpmath.fsum(px) * mpmath.fsum(py),
            prec=prec,
            mean_sum_rational=_rational_sum(dx, dy),
            finite_variance=dx.finite_variance and dy.finite_variance,
            spec=Product(x, y),
        )


def build_bivariate_poisson(
    lambda1,
    lambda2,
    lam,
    trunc_eps=DEFAULT_TRUNC_EPS,
    min_index: int = 0,
    prec: int = DEFAULT_PREC,
) -> JointMatrix:
    """Trivariate-reduction bivariate Poisson: X = U + W, Y = V + W."""
    spec = BivariatePoisson(lambda1, lambda2, lam)
    dx = MarginalDist(Poisson(lambda1), prec)
    dy = MarginalDist(Poisson(lambda2), prec)
    kx = _window(dx, min_index, trunc_eps, None)
    ky = _window(dy, min_index, trunc_eps, None)
    with workprec(prec):
        l1, l2, l0 = to_mpf(lambda1), to_mpf(lambda2), to_mpf(lam)
        a, b = l1 - l0, l2 - l0
        scale = mpmath.exp(-(l1 + l2 - l0))
        fa = [a**k / mpmath.factorial(k) for k in range(kx + 1)]
        fb = [b**k / mpmath.factorial(k) for k in range(ky + 1)]
        fc = [l0**k / mpmath.factorial(k) for k in range(min(kx, ky) + 1)]
        entries = [
            [
                scale * mpmath.fsum(fa[k - i] * fb[l - i] * fc[i] for i in range(min(k, l) + 1))
                for l in range(ky + 1)
            ]
            for k in range(kx + 1)
        ]
        px, py = dx.pmf_array(kx), dy.pmf_array(ky)
        total = mpmath.fsum(v for row in entries for v in row)
        return JointMatrix(
            entries=entries,
            x=px,
            y=py,
            mean_x=l1,
            mean_y=l2,
            tail_mass=1 - total,
            prec=prec,
            mean_sum_rational=to_fraction(lambda1) + to_fraction(lambda2),
            spec=spec,
        )


def _clayton_gen(u: mpf, theta: mpf) -> mpf:
    # u^-theta - 1, accurate when u is close to 1
    return mpmath.expm1(-theta * mpmath.log(u))


def _clayton_from_gen(a: mpf, b: mpf, theta: mpf) -> mpf:
    t = a + b
    if t <= -1:
        return mpf(0)
    return mpmath.exp(-mpmath.log1p(t) / theta)


def clayton_cdf(u1, u2, theta) -> mpf:
    """``max(u1^-theta + u2^-theta - 1, 0)^(-1/theta)`` at current precision.

    Powers are taken through ``expm1``/``log1p`` so that large ``theta``
    neither overflows nor loses the 1 - u information near the upper edge.
    """
    th = to_mpf(theta)
    if th == 0:
        raise ParameterError("theta = 0 is the independence copula; use a product spec")
    if th < -1:
        raise ParameterError(f"Clayton theta must be >= -1, got {theta}")
    u1, u2 = to_mpf(u1), to_mpf(u2)
    if not (0 <= u1 <= 1 and 0 <= u2 <= 1):
        raise ParameterError("copula arguments must lie in [0, 1]")
    if u1 == 0 or u2 == 0:
        return mpf(0)
    return _clayton_from_gen(_clayton_gen(u1, th), _clayton_gen(u2, th), th)


def build_clayton_coupled(
    theta,
    x: MarginalSpec,
    y: MarginalSpec,
    trunc_eps=DEFAULT_TRUNC_EPS,
    min_index: int = 0,
    prec: int = DEFAULT_PREC,
    heavy_index: int | None = None,
) -> JointMatrix:
    """Rectangle masses of the Clayton copula over the marginal cdf grid."""
    spec = Clayton(theta, x, y)
    dx, dy = MarginalDist(x, prec), MarginalDist(y, prec)
    kx = _window(dx, min_index, trunc_eps, heavy_index)
    ky = _window(dy, min_index, trunc_eps, heavy_index)
    with workprec(prec):
        th = to_mpf(theta)
        px, py = dx.pmf_array(kx), dy.pmf_array(ky)
        fx, fy = _cumsum(px), _cumsum(py)
        ga = [_clayton_gen(min(u, mpf(1)), th) for u in fx]
        gb = [_clayton_gen(min(u, mpf(1)), th) for u in fy]
        # grid[i+1][j+1] = C(F_X(i), F_Y(j)); row/column 0 stand for F(-1) = 0
        grid = [[mpf(0)] * (ky + 2)]
        for a in ga:
            grid.append([mpf(0)] + [_clayton_from_gen(a, b, th) for b in gb])
        entries = []
        for i in range(kx + 1):
            row = []
            for j in range(ky + 1):
                v = grid[i + 1][j + 1] - grid[i][j + 1] - grid[i + 1][j] + grid[i][j]
                if v < 0:
                    if v < -CLAMP_TOL:
                        raise PrecisionError(
                            f"Clayton rectangle mass h[{i}][{j}] = {mpmath.nstr(v, 5)} is "
                            "negative beyond rounding; increase the precision"
                        )
                    v = mpf(0)
                row.append(v)
            entries.append(row)
        return JointMatrix(
            entries=entries,
            x=px,
            y=py,
            mean_x=dx.mean,
            mean_y=dy.mean,
            tail_mass=1 - grid[kx + 1][ky + 1],
            prec=prec,
            mean_sum_rational=_rational_sum(dx, dy),
            finite_variance=dx.finite_variance and dy.finite_variance,
            spec=spec,
        )


def _cumsum(p):
    out, acc = [], mpf(0)
    for v in p:
        acc += v
        out.append(acc)
    return out


def build_joint(
    spec: DependenceSpec,
    min_index: int = 0,
    trunc_eps=DEFAULT_TRUNC_EPS,
    prec: int = DEFAULT_PREC,
    heavy_index: int | None = None,
) -> JointMatrix:
    """Build the matrix for any dependence spec.

    ``min_index`` is the smallest window size per axis; light-tailed axes
    grow further until their omitted tail is below ``trunc_eps``.  Heavy
    (zeta) axes stop at ``max(min_index, heavy_index)``.
    """
    if isinstance(spec, Explicit):
        return build_explicit(spec, min_index, prec)
    if isinstance(spec, Product):
        return build_product(spec.x, spec.y, min_index, trunc_eps, prec, heavy_index)
    if isinstance(spec, BivariatePoisson):
        return build_bivariate_poisson(
            spec.lambda1, spec.lambda2, spec.lam, trunc_eps, min_index, prec
        )
    if isinstance(spec, Clayton):
        return build_clayton_coupled(
            spec.theta, spec.x, spec.y, trunc_eps, min_index, prec, heavy_index
        )
    raise TypeError(f"unknown dependence spec {spec!r}")


def pearson_correlation(m: JointMatrix):
    """Correlation of (X, Y) from moments over the matrix window.

    Returns ``UNDEFINED`` when a marginal has infinite or zero variance.
    """
    if not m.finite_variance:
        return UNDEFINED
    with workprec(m.prec):
        ex = ey = exx = eyy = exy = mpf(0)
        for i, row in enumerate(m.entries):
            for j, v in enumerate(row):
                ex += i * v
                ey += j * v
                exx += i * i * v
                eyy += j * j * v
                exy += i * j * v
        var = (exx - ex**2) * (eyy - ey**2)
        if var <= 0:
            return UNDEFINED
        return (exy - ex * ey) / mpmath.sqrt(var)
