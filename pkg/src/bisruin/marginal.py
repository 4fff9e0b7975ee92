"""Nonnegative integer-valued claim distributions.

Three families are supported: Poisson, the zeta law shifted to start at
zero (``P(Y=m) = (m+1)^-s / zeta(s)``) and an explicit finite pmf.  All
values are mpmath floats at a caller-chosen working precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import mpmath
from mpmath import mpf

from ._numeric import DEFAULT_PREC, to_fraction, to_mpf, workprec
from .errors import InfiniteMeanError, ParameterError

__all__ = [
    "Poisson",
    "ShiftedZeta",
    "Finite",
    "MarginalSpec",
    "MarginalDist",
    "poisson_pmf",
    "riemann_zeta",
    "hurwitz_zeta",
    "shifted_zeta_pmf",
    "exact_mean",
]

ZETA_TOL = mpf("1e-24")


@dataclass(frozen=True)
class Poisson:
    rate: object

    def __post_init__(self):
        if to_fraction(self.rate) <= 0:
            raise ParameterError(f"Poisson rate must be positive, got {self.rate}")


@dataclass(frozen=True)
class ShiftedZeta:
    exponent: object

    def __post_init__(self):
        if to_fraction(self.exponent) <= 1:
            raise ParameterError(
                f"zeta exponent must exceed 1, got {self.exponent}"
            )


@dataclass(frozen=True)
class Finite:
    pmf: tuple

    def __post_init__(self):
        object.__setattr__(self, "pmf", tuple(self.pmf))
        if not self.pmf:
            raise ParameterError("finite pmf is empty")
        q = [to_fraction(p) for p in self.pmf]
        if any(p < 0 for p in q):
            raise ParameterError("finite pmf has a negative entry")
        if abs(sum(q) - 1) > Fraction(1, 10**12):
            raise ParameterError(f"finite pmf sums to {float(sum(q))}, not 1")


MarginalSpec = Union[Poisson, ShiftedZeta, Finite]


def poisson_pmf(rate, k: int) -> mpf:
    """``exp(-rate) rate^k / k!`` at the current precision."""
    lam = to_mpf(rate)
    if lam <= 0:
        raise ParameterError(f"Poisson rate must be positive, got {rate}")
    if k < 0:
        return mpf(0)
    if k < 170:
        return mpmath.exp(-lam) * lam**k / mpmath.factorial(k)
    return mpmath.exp(k * mpmath.log(lam) - lam - mpmath.loggamma(k + 1))


def _em_terms_needed(s: mpf, a: mpf, tol: mpf) -> int:
    # First omitted Euler-Maclaurin term (B6) bounds the remainder; compare
    # it with the lower bound a^(1-s)/(s-1) of the Hurwitz sum.
    c = 2 * s * (s + 1) * (s + 2) * (s + 3) * (s + 4) / (42 * 720)
    lower = a ** (1 - s) / (s - 1)
    x = (c / (tol * lower)) ** (1 / (s + 5))
    return max(int(mpmath.ceil(x - a)), 8)


def hurwitz_zeta(s, a=1, tol=ZETA_TOL) -> mpf:
    """``sum_{n>=0} (n+a)^-s`` by direct summation plus an Euler-Maclaurin
    tail through the B2 and B4 corrections."""
    s = to_mpf(s)
    a = to_mpf(a)
    if s <= 1:
        raise ParameterError(f"zeta requires s > 1, got {s}")
    if a <= 0:
        raise ParameterError("Hurwitz offset must be positive")
    M = _em_terms_needed(s, a, mpf(tol))
    head = mpmath.fsum((a + n) ** (-s) for n in range(M))
    x = a + M
    tail = (
        x ** (1 - s) / (s - 1)
        + x ** (-s) / 2
        + s * x ** (-s - 1) / 12
        - s * (s + 1) * (s + 2) * x ** (-s - 3) / 720
    )
    return head + tail


@lru_cache(maxsize=64)
def _zeta_cached(s: Fraction, prec: int) -> mpf:
    with workprec(prec):
        return hurwitz_zeta(s, 1)


def riemann_zeta(s) -> mpf:
    """Riemann zeta for real ``s > 1`` at the current precision."""
    q = to_fraction(s)
    if q <= 1:
        raise ParameterError(f"zeta requires s > 1, got {s}")
    return +_zeta_cached(q, mpmath.mp.prec)


def shifted_zeta_pmf(exponent, m: int) -> mpf:
    s = to_mpf(exponent)
    if s <= 1:
        raise ParameterError(f"zeta exponent must exceed 1, got {exponent}")
    if m < 0:
        return mpf(0)
    return (m + 1) ** (-s) / riemann_zeta(exponent)


def exact_mean(spec: MarginalSpec) -> mpf:
    """Closed-form mean at the current precision."""
    if isinstance(spec, Poisson):
        return to_mpf(spec.rate)
    if isinstance(spec, ShiftedZeta):
        if to_fraction(spec.exponent) <= 2:
            raise InfiniteMeanError(
                f"shifted zeta with exponent {spec.exponent} has infinite mean"
            )
        s = to_fraction(spec.exponent)
        return riemann_zeta(s - 1) / riemann_zeta(s) - 1
    if isinstance(spec, Finite):
        return mpmath.fsum(k * to_mpf(p) for k, p in enumerate(spec.pmf))
    raise TypeError(f"unknown marginal spec {spec!r}")


def exact_mean_rational(spec: MarginalSpec) -> Fraction | None:
    """The mean as an exact rational when the family admits one."""
    if isinstance(spec, Poisson):
        return to_fraction(spec.rate)
    if isinstance(spec, Finite):
        return sum(k * to_fraction(p) for k, p in enumerate(spec.pmf))
    return None


@dataclass(frozen=True)
class MarginalDist:
    """A marginal law evaluated at fixed working precision."""

    spec: MarginalSpec
    prec: int = DEFAULT_PREC

    @property
    def heavy_tailed(self) -> bool:
        return isinstance(self.spec, ShiftedZeta)

    @property
    def finite_variance(self) -> bool:
        if isinstance(self.spec, ShiftedZeta):
            return to_fraction(self.spec.exponent) > 3
        return True

    @property
    def mean(self) -> mpf:
        with workprec(self.prec):
            return exact_mean(self.spec)

    @property
    def mean_rational(self) -> Fraction | None:
        return exact_mean_rational(self.spec)

    def pmf(self, k: int) -> mpf:
        with workprec(self.prec):
            spec = self.spec
            if isinstance(spec, Poisson):
                return poisson_pmf(spec.rate, k)
            if isinstance(spec, ShiftedZeta):
                return shifted_zeta_pmf(spec.exponent, k)
            if 0 <= k < len(spec.pmf):
                return to_mpf(spec.pmf[k])
            return mpf(0)

    def pmf_array(self, K: int) -> list[mpf]:
        """pmf(0..K)."""
        with workprec(self.prec):
            spec = self.spec
            if isinstance(spec, Poisson):
                lam = to_mpf(spec.rate)
                out = [mpmath.exp(-lam)]
                for k in range(1, K + 1):
                    out.append(out[-1] * lam / k)
                return out
            if isinstance(spec, ShiftedZeta):
                s = to_mpf(spec.exponent)
                z = riemann_zeta(spec.exponent)
                return [(m + 1) ** (-s) / z for m in range(K + 1)]
            return [self.pmf(k) for k in range(K + 1)]

    def cdf_array(self, K: int) -> list[mpf]:
        with workprec(self.prec):
            out, acc = [], mpf(0)
            for p in self.pmf_array(K):
                acc += p
                out.append(acc)
            return out

    def cdf(self, k: int) -> mpf:
        if k < 0:
            return mpf(0)
        with workprec(self.prec):
            if isinstance(self.spec, ShiftedZeta) and k > 10_000:
                return 1 - self.tail_bound(k)
            return mpmath.fsum(self.pmf_array(k))

    def tail_bound(self, K: int) -> mpf:
        """Upper bound on ``P(X > K)``; exact for Poisson and finite laws."""
        with workprec(self.prec):
            spec = self.spec
            if isinstance(spec, ShiftedZeta):
                s = to_mpf(spec.exponent)
                return hurwitz_zeta(s, K + 2) / riemann_zeta(spec.exponent)
            if isinstance(spec, Finite):
                return mpmath.fsum(to_mpf(p) for p in spec.pmf[K + 1:])
            return max(1 - mpmath.fsum(self.pmf_array(K)), mpf(0))

    def truncation_index(self, eps) -> int:
        """Smallest K with ``P(X > K) < eps``."""
        with workprec(self.prec):
            eps = to_mpf(eps)
            spec = self.spec
            if isinstance(spec, Poisson):
                lam = to_mpf(spec.rate)
                p = mpmath.exp(-lam)
                acc, k = p, 0
                while 1 - acc >= eps:
                    k += 1
                    p = p * lam / k
                    acc += p
                return k
            if isinstance(spec, Finite):
                k = len(spec.pmf) - 1
                while k > 0 and self.tail_bound(k - 1) < eps:
                    k -= 1
                return k
            # P(Y > K) <= (K+1)^(1-s) / ((s-1) zeta(s)) gives a valid upper
            # index; bisect on the exact tail below it.
            s = to_mpf(spec.exponent)
            z = riemann_zeta(spec.exponent)
            hi = max(int(mpmath.ceil((eps * (s - 1) * z) ** (-1 / (s - 1)))), 0)
            lo = -1
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if self.tail_bound(mid) < eps:
                    hi = mid
                else:
                    lo = mid
            return hi
