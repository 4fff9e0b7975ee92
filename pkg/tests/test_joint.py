import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bisruin._numeric import to_mpf
from bisruin.errors import ParameterError, PrecisionError
from bisruin.joint import (
    UNDEFINED,
    BivariatePoisson,
    Clayton,
    Explicit,
    build_bivariate_poisson,
    build_clayton_coupled,
    build_explicit,
    build_joint,
    build_product,
    clayton_cdf,
    pearson_correlation,
    sum_pmf,
)
from bisruin.marginal import MarginalDist, Poisson, ShiftedZeta, poisson_pmf


def mp(x):
    return mpmath.mpf(x)


def test_bivariate_poisson_independent_case():
    m = build_bivariate_poisson(0.3, 1.4, 0)
    for k in range(10):
        for l in range(10):
            assert abs(m.h(k, l) - poisson_pmf(0.3, k) * poisson_pmf(1.4, l)) < 1e-70


def test_bivariate_poisson_origin_mass():
    m = build_bivariate_poisson(0.3, 1.4, 0.15)
    with mpmath.workprec(256):
        assert abs(m.h(0, 0) - mpmath.exp(-(mp("0.3") + mp("1.4") - mp("0.15")))) < 1e-70


def test_bivariate_poisson_covariance():
    m = build_bivariate_poisson(0.3, 1.4, 0.15)
    with mpmath.workprec(256):
        ex = mpmath.fsum(i * v for i, r in enumerate(m.entries) for v in r)
        ey = mpmath.fsum(j * v for r in m.entries for j, v in enumerate(r))
        exy = mpmath.fsum(i * j * v for i, r in enumerate(m.entries) for j, v in enumerate(r))
    assert float(exy - ex * ey) == pytest.approx(0.15, abs=1e-8)


@pytest.mark.parametrize("lam", [0, 0.15, 0.29])
def test_bivariate_poisson_marginals(lam):
    m = build_bivariate_poisson(0.3, 1.4, lam)
    for i, row in enumerate(m.entries[:8]):
        assert abs(mpmath.fsum(row) - poisson_pmf(0.3, i)) < 1e-12
    cols = [mpmath.fsum(r[j] for r in m.entries) for j in range(8)]
    for j, c in enumerate(cols):
        assert abs(c - poisson_pmf(1.4, j)) < 1e-12
    assert m.mean_x == mp("0.3") and m.mean_y == mp("1.4")


@pytest.mark.parametrize(
    "args", [(0.3, 1.4, 0.3), (0.3, 1.4, -0.1), (0, 1.4, 0), (0.3, -1, 0)]
)
def test_bivariate_poisson_parameter_range(args):
    with pytest.raises(ParameterError):
        BivariatePoisson(*args)


def test_sum_pmf_point_masses():
    assert [float(v) for v in sum_pmf(build_explicit([[1]], 3))] == [1, 0, 0, 0]
    s = sum_pmf(build_explicit([[0, 0], [0, 1]], 4))
    assert [float(v) for v in s] == [0, 0, 1, 0, 0]


def test_sum_pmf_independent_poisson_convolution():
    m = build_bivariate_poisson(0.3, 1.4, 0, min_index=20)
    with mpmath.workprec(256):
        for k, v in enumerate(sum_pmf(m)):
            assert abs(v - poisson_pmf(mp("1.7"), k)) < 1e-12


def test_sum_pmf_mass():
    m = build_clayton_coupled(100, Poisson(0.3), Poisson(1.4), min_index=22)
    assert mpmath.fsum(sum_pmf(m)) + m.tail_mass >= 1 - 2e-15


# --- Clayton copula -------------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(
    u=st.floats(0, 1),
    theta=st.sampled_from([-1, -0.9, -0.3, 0.01, 0.5, 2, 100]),
)
def test_clayton_uniform_margins(u, theta):
    with mpmath.workprec(256):
        assert abs(clayton_cdf(u, 1, theta) - to_mpf(u)) < 1e-60
        assert abs(clayton_cdf(1, u, theta) - to_mpf(u)) < 1e-60
        assert clayton_cdf(u, 0, theta) == 0


@settings(max_examples=50, deadline=None)
@given(u1=st.floats(0, 1), u2=st.floats(0, 1))
def test_clayton_lower_frechet_bound(u1, u2):
    with mpmath.workprec(256):
        expected = max(to_mpf(u1) + to_mpf(u2) - 1, mp(0))
        assert abs(clayton_cdf(u1, u2, -1) - expected) < 1e-60


def test_clayton_countermonotone_example():
    assert clayton_cdf(0.5, 0.5, -1) == 0


def test_clayton_near_independence():
    assert float(clayton_cdf(0.5, 0.5, 0.01)) == pytest.approx(0.25, abs=1e-2)


def test_clayton_large_theta_is_finite():
    with mpmath.workprec(256):
        v = clayton_cdf(mp("0.2"), 1 - mp("1e-40"), 100)
        assert abs(v - mp("0.2")) < 1e-30


@pytest.mark.parametrize("theta", [0, -1.5])
def test_clayton_theta_range(theta):
    with pytest.raises(ParameterError):
        clayton_cdf(0.5, 0.5, theta)
    with pytest.raises(ParameterError):
        Clayton(theta, Poisson(1), Poisson(1))


def test_clayton_near_independence_matrix_close_to_product():
    c = build_clayton_coupled(0.01, Poisson(0.3), Poisson(1.4), min_index=22)
    p = build_product(Poisson(0.3), Poisson(1.4), min_index=22)
    assert c.shape == p.shape
    worst = max(abs(a - b) for ra, rb in zip(c.entries, p.entries) for a, b in zip(ra, rb))
    assert worst < 1e-2


@pytest.mark.parametrize("theta", [-0.9, 0.01, 100])
def test_clayton_rows_telescope(theta):
    x, y = Poisson(0.3), Poisson(1.4)
    m = build_clayton_coupled(theta, x, y, min_index=22)
    dx, dy = MarginalDist(x), MarginalDist(y)
    K = m.shape[1] - 1
    fy = dy.cdf(K)
    with mpmath.workprec(256):
        for i, row in enumerate(m.entries):
            expected = clayton_cdf(dx.cdf(i), fy, theta) - clayton_cdf(dx.cdf(i - 1), fy, theta)
            assert abs(mpmath.fsum(row) - expected) < 1e-60
            assert abs(mpmath.fsum(row) - m.x[i]) < 1e-14


def test_clayton_entries_nonnegative_and_complete():
    for theta in (-1, -0.9, 0.01, 100):
        m = build_clayton_coupled(theta, Poisson(0.2), ShiftedZeta(2.3), min_index=23)
        assert all(v >= 0 for r in m.entries for v in r)
        total = mpmath.fsum(v for r in m.entries for v in r)
        assert abs(total + m.tail_mass - 1) < 1e-10


def test_clayton_precision_abort_message():
    # 64-bit arithmetic cannot resolve the far-tail rectangles
    with pytest.raises(PrecisionError, match="precision"):
        build_clayton_coupled(0.01, Poisson(0.2), ShiftedZeta(2.3), prec=64, heavy_index=500)
    m = build_clayton_coupled(0.01, Poisson(0.2), ShiftedZeta(2.3), prec=256, heavy_index=500)
    assert all(v >= 0 for r in m.entries for v in r)


def test_same_marginals_same_mean():
    a = build_product(Poisson(0.3), Poisson(1.4))
    b = build_clayton_coupled(-0.9, Poisson(0.3), Poisson(1.4))
    assert a.mean_sum == b.mean_sum
    assert a.mean_sum_rational == b.mean_sum_rational
    assert str(a.mean_sum_rational) == "17/10"


@pytest.mark.parametrize(
    "spec",
    [
        BivariatePoisson(0.3, 1.4, 0.29),
        Clayton(-0.9, Poisson(0.3), Poisson(1.4)),
        Clayton(100, Poisson(1.4), Poisson(0.3)),
    ],
    ids=["bvp", "clayton-neg", "clayton-pos"],
)
def test_sum_moment_matches_exact_mean(spec):
    m = build_joint(spec, min_index=22)
    with mpmath.workprec(256):
        window = mpmath.fsum(k * v for k, v in enumerate(m.s))
        if isinstance(spec, BivariatePoisson):
            rx, ry = spec.lambda1, spec.lambda2
        else:
            rx, ry = spec.x.rate, spec.y.rate
        lx, ly = to_mpf(rx), to_mpf(ry)
        dx, dy = MarginalDist(Poisson(rx)), MarginalDist(Poisson(ry))
        kx, ky = m.shape[0] - 1, m.shape[1] - 1
        px, py = dx.tail_bound(kx), dy.tail_bound(ky)
        # E[X; X > K] = lam P(X >= K) for Poisson; cross terms by Cauchy-Schwarz
        bound = (
            lx * dx.tail_bound(kx - 1)
            + ly * dy.tail_bound(ky - 1)
            + mpmath.sqrt((lx + lx**2) * py)
            + mpmath.sqrt((ly + ly**2) * px)
        )
        assert abs(window - (m.mean_x + m.mean_y)) <= bound


def test_correlation_of_product_is_zero():
    m = build_product(Poisson(0.3), Poisson(1.4))
    assert abs(pearson_correlation(m)) < 1e-10


def test_correlation_bivariate_poisson_closed_form():
    m = build_bivariate_poisson(0.3, 1.4, 0.15)
    assert float(pearson_correlation(m)) == pytest.approx(0.15 / math.sqrt(0.3 * 1.4), abs=1e-6)
    assert float(pearson_correlation(m)) == pytest.approx(0.2315, abs=1e-4)


def test_correlation_undefined_for_heavy_tail():
    m = build_clayton_coupled(100, Poisson(0.2), ShiftedZeta(2.3), min_index=23)
    assert pearson_correlation(m) is UNDEFINED
    assert str(UNDEFINED) == "undefined"


def test_heavy_axis_window_follows_requirement():
    m = build_clayton_coupled(0.01, Poisson(0.2), ShiftedZeta(2.3), min_index=23)
    assert m.shape[1] == 24
    assert m.tail_mass > 1e-3  # zeta tail is tracked, not hidden
    assert m.exact_upto == 23


def test_explicit_validation():
    with pytest.raises(ParameterError):
        Explicit([[0.5, 0.6]])
    with pytest.raises(ParameterError):
        Explicit([[0.5, -0.1, 0.6]])
    m = build_explicit([["1/3", "1/3"], ["1/3"]])
    assert m.shape == (2, 2)
    assert str(m.mean_sum_rational) == "2/3"


def test_exact_window_guard():
    m = build_explicit([[1]], 3)
    with pytest.raises(IndexError):
        m.s_at(4)


def test_correlation_undefined_for_degenerate_claims():
    assert pearson_correlation(build_explicit([[1]])) is UNDEFINED
