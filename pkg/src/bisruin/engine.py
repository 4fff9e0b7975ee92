"""Ultimate ruin probabilities for the two-season discrete-time model.

Premium income is 1 per period and claims arrive in pairs (X, Y), i.i.d.
across pairs.  The survival function ``phi = 1 - psi`` is obtained by

* the ratio limit of two auxiliary sequences ``a_n``, ``b_n`` when
  ``P(X=0, Y=0) > 0``,
* a forward recursion in ``s_1`` when ``P(X=0, Y=0) = 0``,
* closed forms when ``E[X+Y] >= 2``.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import mpmath
from mpmath import mpf

from ._numeric import DEFAULT_PREC, workprec
from .errors import ModelClassError, PrecisionError
from .joint import DEFAULT_TRUNC_EPS, DependenceSpec, JointMatrix, build_joint

__all__ = [
    "ModelClass",
    "ABSequences",
    "Diagnostics",
    "RuinTable",
    "classify",
    "ab_sequences",
    "phi0_estimate",
    "survival_table",
    "verify_identities",
    "required_index",
    "ruin_table",
]

ES_TOL = mpf("1e-30")
CLAMP_SLACK = mpf("1e-10")


class ModelClass(enum.Enum):
    NET_PROFIT_S0_POS = "NetProfit_S0Pos"
    NET_PROFIT_S0_ZERO_X0_POS = "NetProfit_S0Zero_X0Pos"
    NET_PROFIT_S0_ZERO_Y0_POS = "NetProfit_S0Zero_Y0Pos"
    # s0 = 0 while both x0 and y0 are positive, e.g. mass only on (0,1), (1,0)
    NET_PROFIT_S0_ZERO_BOTH_POS = "NetProfit_S0Zero_BothPos"
    DEFICIT = "Deficit"
    BOUNDARY_S2_LT1 = "Boundary_S2lt1"
    BOUNDARY_S2_EQ1_H20_ZERO = "Boundary_S2eq1_H20zero"
    BOUNDARY_S2_EQ1_H20_POS = "Boundary_S2eq1_H20pos"

    @property
    def net_profit(self) -> bool:
        return self.value.startswith("NetProfit")

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ABSequences:
    a: list
    b: list
    N: int

    def residuals(self, m: JointMatrix) -> list:
        """Re-substitution residuals of the defining recursion, n >= 2."""
        with workprec(m.prec):
            s0 = m.s_at(0)
            out = []
            for seq, first in ((self.a, self.a[1]), (self.b, self.b[1])):
                for n in range(2, len(seq)):
                    rhs = (
                        seq[n - 2]
                        - mpmath.fsum(m.s_at(i) * seq[n - i] for i in range(1, n))
                        + first * m.h0_at(n - 1)
                    )
                    out.append(abs(s0 * seq[n] - rhs))
            return out


@dataclass(frozen=True)
class Diagnostics:
    recursion_residuals: list = field(default_factory=list)
    balance_residual: mpf | None = None

    @property
    def max_recursion(self) -> mpf:
        return max(self.recursion_residuals, default=mpf(0))


@dataclass(frozen=True)
class RuinTable:
    psi: list
    phi: list
    delta: mpf
    model_class: ModelClass
    N_used: int | None
    es: mpf
    diagnostics: Diagnostics | None = None

    @property
    def u_max(self) -> int:
        return len(self.psi) - 1

    def psi_float(self) -> list[float]:
        return [float(v) for v in self.psi]


def _is_rational_es(m: JointMatrix) -> bool:
    return m.mean_sum_rational is not None


def _compare_es(m: JointMatrix, tol=ES_TOL) -> int:
    """Sign of ``E[X+Y] - 2``."""
    if _is_rational_es(m):
        d = m.mean_sum_rational - 2
        return (d > 0) - (d < 0)
    with workprec(m.prec):
        d = m.mean_sum - 2
        if abs(d) <= tol:
            if d != 0:
                warnings.warn(
                    f"E[X+Y] is within {mpmath.nstr(tol, 3)} of 2; treated as the boundary case",
                    RuntimeWarning,
                    stacklevel=3,
                )
            return 0
        return 1 if d > 0 else -1


def _is_one(v: mpf, tol=ES_TOL) -> bool:
    return abs(v - 1) <= tol


def classify(m: JointMatrix, es_tol=ES_TOL) -> ModelClass:
    """Position of the model in the case tree."""
    sign = _compare_es(m, es_tol)
    with workprec(m.prec):
        if sign > 0:
            return ModelClass.DEFICIT
        if sign == 0:
            s2 = m.s_at(2) if m.exact_upto >= 2 else mpmath.fsum(
                m.h(i, 2 - i) for i in range(3)
            )
            if not _is_one(s2):
                return ModelClass.BOUNDARY_S2_LT1
            if m.h(2, 0) > 0:
                return ModelClass.BOUNDARY_S2_EQ1_H20_POS
            return ModelClass.BOUNDARY_S2_EQ1_H20_ZERO
        if m.h(0, 0) > 0:
            return ModelClass.NET_PROFIT_S0_POS
        x0, y0 = m.x[0], m.y[0]
        if x0 != 0 and y0 == 0:
            return ModelClass.NET_PROFIT_S0_ZERO_X0_POS
        if x0 == 0 and y0 != 0:
            return ModelClass.NET_PROFIT_S0_ZERO_Y0_POS
        if x0 != 0 and y0 != 0:
            return ModelClass.NET_PROFIT_S0_ZERO_BOTH_POS
        raise ModelClassError("x0 = y0 = 0 forces E[X+Y] >= 2")


def required_index(u_max: int, N: int) -> int:
    """Window size that makes every recursion input exact."""
    return max(N + 2, u_max) + 1


def ab_sequences(m: JointMatrix, N: int, upto: int | None = None) -> ABSequences:
    """``a_n``, ``b_n`` for n = 0 .. max(N + 2, upto).

    Two terms past N are produced so that the estimates at N and N + 1
    (and hence the error bound) can both be formed.
    """
    last = max(N + 2, upto or 0)
    if last > m.exact_upto + 1:
        raise IndexError(
            f"matrix window exact to {m.exact_upto}, sequences need {last - 1}"
        )
    with workprec(m.prec):
        s0 = m.h(0, 0)
        if s0 == 0:
            raise ModelClassError("a_n/b_n require P(X=0, Y=0) > 0")
        y0 = m.y[0]
        limit = mpf(2) ** (m.prec // 2)
        s = [m.s_at(i) for i in range(last)]
        a = [mpf(1), -1 / y0]
        b = [mpf(0), 1 / y0]
        for n in range(2, last + 1):
            conv_a = mpmath.fsum(s[i] * a[n - i] for i in range(1, n))
            conv_b = mpmath.fsum(s[i] * b[n - i] for i in range(1, n))
            h = m.h0_at(n - 1)
            a.append((a[n - 2] - conv_a + a[1] * h) / s0)
            b.append((b[n - 2] - conv_b + b[1] * h) / s0)
            if abs(a[n]) > limit or abs(b[n]) > limit:
                raise PrecisionError(
                    f"|a_{n}| exceeds 2^{m.prec // 2}; increase the precision"
                )
        return ABSequences(a=a, b=b, N=N)


def phi0_estimate(seq: ABSequences, es) -> tuple[mpf, mpf]:
    """Survival at zero capital from the ratio limit, with the error bound
    ``|phi_N(0) - phi_{N+1}(0)|``."""
    N = seq.N
    if N < 2:
        raise ValueError("N must be at least 2")
    a, b = seq.a, seq.b
    ests = []
    for n in (N, N + 1):
        den = a[n] - a[n + 1]
        if den == 0:
            raise PrecisionError(f"a_{n} = a_{n + 1}; the ratio is degenerate, try a larger N")
        ests.append((2 - es) * (b[n + 1] - b[n]) / den)
    return ests[0], abs(ests[0] - ests[1])


def _clamp(phi: list, u_max: int) -> list:
    out = []
    for u, v in enumerate(phi):
        if v < -CLAMP_SLACK or v > 1 + CLAMP_SLACK:
            raise PrecisionError(
                f"phi({u}) = {mpmath.nstr(v, 8)} is outside [0, 1]; "
                "the truncation window is too small or precision too low"
            )
        out.append(min(max(v, mpf(0)), mpf(1)))
    return out


def _s1_recursion(m: JointMatrix, phi: list, u_max: int, with_h: bool) -> None:
    s1 = m.s_at(1)
    if s1 == 0:
        raise ModelClassError("s_1 = 0 with s_0 = 0 and E[X+Y] < 2 is impossible")
    start = len(phi)
    for u in range(start, u_max + 1):
        acc = phi[u - 1] - mpmath.fsum(m.s_at(k) * phi[u - k + 1] for k in range(2, u + 1))
        if with_h:
            acc += m.h0_at(u) * phi[1]
        phi.append(acc / s1)


def survival_table(
    m: JointMatrix, u_max: int = 12, N: int = 20, es_tol=ES_TOL, check: bool = True
) -> RuinTable:
    """psi(u) for u = 0..u_max."""
    if u_max < 0:
        raise ValueError("u_max must be nonnegative")
    cls = classify(m, es_tol)
    with workprec(m.prec):
        es = m.mean_sum
        delta = mpf(0)
        n_used = None
        if cls is ModelClass.NET_PROFIT_S0_POS:
            seq = ab_sequences(m, N, upto=u_max)
            phi0, delta = phi0_estimate(seq, es)
            phi = [seq.a[u] * phi0 + seq.b[u] * (2 - es) for u in range(u_max + 1)]
            phi[0] = phi0
            n_used = N
        elif cls is ModelClass.NET_PROFIT_S0_ZERO_X0_POS:
            phi = [2 - es]
            _s1_recursion(m, phi, u_max, with_h=False)
        elif cls is ModelClass.NET_PROFIT_S0_ZERO_Y0_POS:
            phi = [mpf(0), (2 - es) / m.y[0]]
            _s1_recursion(m, phi, u_max, with_h=True)
        elif cls is ModelClass.NET_PROFIT_S0_ZERO_BOTH_POS:
            # basic recursion at u=0 gives phi(0) = h_{0,1} phi(1); combined
            # with 2 - ES = y0 phi(1) + phi(0)
            h01 = m.h(0, 1)
            phi1 = (2 - es) / (m.y[0] + h01)
            phi = [h01 * phi1, phi1]
            _s1_recursion(m, phi, u_max, with_h=True)
        elif cls is ModelClass.BOUNDARY_S2_EQ1_H20_ZERO:
            phi = [mpf(0)] + [mpf(1)] * u_max
        elif cls is ModelClass.BOUNDARY_S2_EQ1_H20_POS:
            phi = ([mpf(0), mpf(0)] + [mpf(1)] * max(u_max - 1, 0))[: u_max + 1]
        else:
            phi = [mpf(0)] * (u_max + 1)
        phi = phi[: u_max + 1]
        raw = phi
        phi = _clamp(raw, u_max)
        table = RuinTable(
            psi=[1 - v for v in phi],
            phi=phi,
            delta=delta,
            model_class=cls,
            N_used=n_used,
            es=es,
        )
        if check and cls.net_profit:
            diag = verify_identities(m, table, raw)
            table = RuinTable(**{**table.__dict__, "diagnostics": diag})
        return table


def verify_identities(m: JointMatrix, t: RuinTable, phi: list | None = None) -> Diagnostics:
    """Residuals of the one-pair total-probability recursion and of
    ``2 - ES = y0 phi(1) + phi(0)``.

    The recursion residual at u needs phi up to u + 2, so it is recorded
    for u = 0 .. u_max - 2.
    """
    phi = t.phi if phi is None else phi
    with workprec(m.prec):
        rec = []
        for u in range(0, len(phi) - 2):
            rhs = mpmath.fsum(m.s_at(k) * phi[u + 2 - k] for k in range(u + 2))
            rhs -= m.h0_at(u + 1) * phi[1]
            rec.append(abs(phi[u] - rhs))
        bal = None
        if len(phi) > 1:
            bal = abs((2 - t.es) - (m.y[0] * phi[1] + phi[0]))
        return Diagnostics(recursion_residuals=rec, balance_residual=bal)


def ruin_table(
    spec: DependenceSpec,
    u_max: int = 12,
    N: int = 20,
    prec: int = DEFAULT_PREC,
    trunc_eps=DEFAULT_TRUNC_EPS,
) -> tuple[RuinTable, JointMatrix]:
    """Build the matrix for ``spec`` with a window large enough for the
    requested table, then evaluate it."""
    m = build_joint(spec, required_index(u_max, N), trunc_eps, prec)
    return survival_table(m, u_max, N), m
