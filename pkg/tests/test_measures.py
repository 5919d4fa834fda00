import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from cskbool import _kernels
from cskbool.config import Config
from cskbool.cumulants import moments_to_boolean
from cskbool.errors import ConvergenceError, DomainError
from cskbool.measures import (
    Measure,
    SqrtWeightDensity,
    bernoulli,
    boolean_power_atomic,
    cauchy_transform,
    csk_member_density,
    dirac,
    k_transform,
    marchenko_pastur,
    means_domain,
    pseudo_variance_numeric,
    transform_grid,
    verify_boolean_power_vf,
)

SEMICIRCLE = Measure((), (SqrtWeightDensity(-2.0, 2.0, (1 / (2 * math.pi),)),))
THREE_POINT = Measure(((-1.0, 0.25), (0.0, 0.25), (2.0, 0.5)))

CORPUS = {
    "bernoulli": bernoulli(),
    "mp1": marchenko_pastur(1),
    "mp2": marchenko_pastur(2),
    "mp_half": marchenko_pastur(0.5),
    "semicircle": SEMICIRCLE,
    "three_point": THREE_POINT,
}


def mp_cauchy_closed_form(a, z):
    # G(z(m)) = m / (1 + a m) with z = m + (1 + a m)/m, branch m -> 0 at infinity
    m = ((z - a) - math.sqrt((z - a) ** 2 - 4)) / 2
    return m / (1 + a * m)


def mp_cauchy_quad(a, z):
    """Adaptive QUADPACK with the algebraic edge weight handled exactly."""
    lo, hi = a - 2, a + 2
    if a == 1:
        # 1 + x cancels against the lower edge factor
        f, wvar = (lambda x: 1 / (2 * math.pi * (z - x))), (-0.5, 0.5)
    else:
        f, wvar = (lambda x: 1 / (2 * math.pi * (1 + a * x) * (z - x))), (0.5, 0.5)
    g, _ = integrate.quad(f, lo, hi, weight="alg", wvar=wvar, epsabs=1e-14, epsrel=1e-14, limit=200)
    if a * a > 1:
        g += (1 - 1 / a**2) / (z + 1 / a)
    return g


def in_domain_grid(nu, n=12):
    dom = means_domain(nu)
    lo, hi = dom.m0, dom.m_plus
    grid = np.linspace(lo, lo + 0.9 * (hi - lo), n + 2)[1:-1]
    return [m for m in grid if abs(m) > 1e-6]


# --- construction ----------------------------------------------------------------


def test_mass_must_be_one():
    with pytest.raises(DomainError):
        Measure(((0.0, 0.5),))
    with pytest.raises(DomainError):
        Measure(((0.0, 1.5), (1.0, -0.5)))


def test_density_with_interior_pole_rejected():
    with pytest.raises(DomainError):
        SqrtWeightDensity(-1.0, 1.0, (1.0,), (0.0, 1.0))


def test_negative_density_rejected():
    with pytest.raises(DomainError):
        SqrtWeightDensity(-1.0, 1.0, (0.0, 1.0))


def test_marchenko_pastur_atom():
    assert marchenko_pastur(2).all_atoms() == ((-0.5, 0.75),)
    assert marchenko_pastur(1).is_atomic is False
    assert marchenko_pastur(1).all_atoms() == ()


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_json_round_trip(name):
    nu = CORPUS[name]
    assert Measure.from_json(nu.to_json()) == nu


@pytest.mark.parametrize("a", [0.5, 1, 2, 3])
def test_mp_is_standardized(a):
    m1, m2 = marchenko_pastur(a).moments(2)
    assert abs(m1) < 1e-12 and abs(m2 - 1) < 1e-12


# --- transforms ------------------------------------------------------------------


def test_bernoulli_transforms():
    assert cauchy_transform(bernoulli(), 2.0) == pytest.approx(2 / 3, abs=1e-15)
    assert k_transform(bernoulli(), 2.0) == pytest.approx(0.5, abs=1e-15)


def test_point_mass_transforms():
    nu = dirac(1.5)
    for z in (1.6, 4.0, 100.0):
        assert cauchy_transform(nu, z) == pytest.approx(1 / (z - 1.5), rel=1e-15)
        assert k_transform(nu, z) == pytest.approx(1.5, abs=1e-12)


@pytest.mark.parametrize("a, z", [(1, 3.001), (1, 3.5), (1, 5.0), (2, 4.2), (2, 10.0), (0.5, 3.0)])
def test_mp_cauchy_against_oracles(a, z):
    got = cauchy_transform(marchenko_pastur(a), z)
    assert got == pytest.approx(mp_cauchy_quad(a, z), abs=1e-12)
    assert got == pytest.approx(mp_cauchy_closed_form(a, z), abs=1e-12)


def test_z_at_or_below_support_rejected():
    with pytest.raises(DomainError):
        cauchy_transform(marchenko_pastur(1), 3.0)
    with pytest.raises(DomainError):
        k_transform(bernoulli(), 0.5)


def test_array_evaluation_matches_scalar():
    nu = CORPUS["mp2"]
    z = np.array([4.5, 6.0, 9.0])
    g = cauchy_transform(nu, z)
    assert np.allclose(g, [cauchy_transform(nu, float(v)) for v in z], atol=0, rtol=1e-15)


@pytest.mark.parametrize("name", sorted(CORPUS))
@given(st.floats(min_value=1e-3, max_value=50), st.floats(min_value=1e-3, max_value=50))
def test_k_strictly_decreasing(name, d1, d2):
    nu = CORPUS[name]
    if abs(d1 - d2) < 1e-6:
        return
    b = nu.upper_bound
    z1, z2 = b + min(d1, d2), b + max(d1, d2)
    assert k_transform(nu, z1) > k_transform(nu, z2)


def test_transform_grid():
    grid = transform_grid(bernoulli(), [1.5, 2.0, 5.0])
    assert np.allclose(grid.K, [1 / 1.5, 0.5, 0.2], atol=1e-15)
    with pytest.raises(DomainError):
        transform_grid(bernoulli(), [2.0, 1.5])


# --- domain of means ------------------------------------------------------------


def test_bernoulli_domain():
    dom = means_domain(bernoulli())
    assert dom.m0 == pytest.approx(0, abs=1e-15)
    assert dom.m_plus == pytest.approx(1, abs=1e-8)
    assert dom.B == 1


def test_bernoulli_square_domain():
    mu = boolean_power_atomic(bernoulli(), 2)
    assert means_domain(mu).m_plus == pytest.approx(math.sqrt(2), abs=1e-8)


@pytest.mark.parametrize("a", [0.5, 1, 2])
def test_mp_upper_mean_matches_closed_form(a):
    # m_plus = B - 1/G(B) with G at the edge from the closed form
    b = a + 2
    want = b - 1 / mp_cauchy_closed_form(a, b)
    assert means_domain(marchenko_pastur(a)).m_plus == pytest.approx(want, abs=1e-8)


def test_degenerate_domain_is_flagged():
    dom = means_domain(dirac(2.0))
    assert dom.degenerate and dom.m0 == dom.m_plus == 2.0


def test_negative_support_uses_zero_for_B():
    nu = Measure(((-3.0, 0.5), (-1.0, 0.5)))
    dom = means_domain(nu)
    assert dom.B == 0
    # B lies above the support, so the limit is plain evaluation
    assert dom.m_plus == pytest.approx(-1 / cauchy_transform(nu, 0.0), abs=1e-14)


# --- pseudo-variance -------------------------------------------------------------


@pytest.mark.parametrize("a", [1, 2])
def test_mp_pseudo_variance(a):
    nu = marchenko_pastur(a)
    for m in np.linspace(0.01, 0.29, 15):
        assert pseudo_variance_numeric(nu, m) == pytest.approx(1 + a * m, abs=1e-8)


def test_bernoulli_pseudo_variance():
    for m in np.linspace(0.01, 0.49, 15):
        assert pseudo_variance_numeric(bernoulli(), m) == pytest.approx(1 - m * m, abs=1e-8)


def test_semicircle_pseudo_variance_is_one():
    for m in (0.1, 0.5, 0.9):
        assert pseudo_variance_numeric(SEMICIRCLE, m) == pytest.approx(1.0, abs=1e-8)


def test_pseudo_variance_domain_errors():
    with pytest.raises(DomainError):
        pseudo_variance_numeric(bernoulli(), 1.5)
    with pytest.raises(DomainError):
        pseudo_variance_numeric(dirac(0.0), 0.1)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_k_inverts_the_mean_map(name):
    nu = CORPUS[name]
    dom = means_domain(nu)
    zs = []
    for m in in_domain_grid(nu):
        vv = pseudo_variance_numeric(nu, m, domain=dom)
        z = m + vv / m
        assert abs(k_transform(nu, z) - m) <= 1e-10
        assert abs(cauchy_transform(nu, z) - m / vv) <= 1e-9
        zs.append(z)
    # z(m) decreases on each side of m = 0
    pos = [z for m, z in zip(in_domain_grid(nu), zs) if m > 0]
    neg = [z for m, z in zip(in_domain_grid(nu), zs) if m < 0]
    assert all(np.diff(pos) < 0) and all(np.diff(neg) < 0)


# --- family members ----------------------------------------------------------------


def test_member_at_mean_zero_is_the_generator():
    assert np.all(csk_member_density(marchenko_pastur(1), 0.0, np.array([-0.5, 1.0, 2.9])) == 1.0)


@pytest.mark.parametrize("m", [0.05, 0.1, 0.2])
def test_mp1_member_moments(m):
    nu = marchenko_pastur(1)

    def f(x):
        return csk_member_density(nu, m, x)

    assert nu.integrate(f) == pytest.approx(1, abs=1e-8)
    assert nu.integrate(lambda x: x * f(x)) == pytest.approx(m, abs=1e-8)
    assert nu.integrate(lambda x: (x - m) ** 2 * f(x)) == pytest.approx(1 + m, abs=1e-6)


def test_member_at_zero_with_negative_mean():
    # m0 < 0 < m_plus: the member at m = 0 is normalized with mean zero
    nu = Measure(((-2.0, 0.5), (1.0, 0.5)))
    dom = means_domain(nu)
    assert dom.m0 < 0 < dom.m_plus

    def f(x):
        return csk_member_density(nu, 0.0, x, domain=dom)

    assert nu.integrate(f) == pytest.approx(1, abs=1e-10)
    assert nu.integrate(lambda x: x * f(x)) == pytest.approx(0, abs=1e-10)


# --- atomic boolean powers ---------------------------------------------------------


def test_bernoulli_boolean_square():
    mu = boolean_power_atomic(bernoulli(), 2)
    (x1, p1), (x2, p2) = mu.all_atoms()
    assert x1 == pytest.approx(-math.sqrt(2), abs=1e-10)
    assert x2 == pytest.approx(math.sqrt(2), abs=1e-10)
    assert p1 == pytest.approx(0.5, abs=1e-12) and p2 == pytest.approx(0.5, abs=1e-12)


def test_power_one_is_identity():
    assert boolean_power_atomic(THREE_POINT, 1) == THREE_POINT


def test_power_of_point_mass():
    ((x, p),) = boolean_power_atomic(dirac(0.75), 3).all_atoms()
    assert x == pytest.approx(2.25, abs=1e-12) and p == pytest.approx(1.0, abs=1e-12)


def test_power_rejects_continuous_parts():
    with pytest.raises(DomainError):
        boolean_power_atomic(marchenko_pastur(2), 2)
    with pytest.raises(DomainError):
        boolean_power_atomic(bernoulli(), 0)


@st.composite
def atomic_measures(draw):
    k = draw(st.integers(min_value=2, max_value=5))
    xs = draw(st.lists(st.integers(min_value=-12, max_value=12), min_size=k, max_size=k, unique=True))
    ws = draw(st.lists(st.integers(min_value=1, max_value=9), min_size=k, max_size=k))
    total = sum(ws)
    return Measure(tuple((x / 4, w / total) for x, w in zip(xs, ws)))


alphas = st.sampled_from([F(1, 3), F(1, 2), F(3, 4), F(3, 2), F(2), F(5)])


@given(atomic_measures(), alphas)
def test_sturm_and_bisection_agree(nu, alpha):
    a = boolean_power_atomic(nu, alpha, method="sturm").all_atoms()
    b = boolean_power_atomic(nu, alpha, method="bisect").all_atoms()
    assert np.allclose(a, b, atol=1e-9, rtol=0)


@given(atomic_measures(), alphas, alphas)
def test_boolean_power_composes(nu, p, q):
    twice = boolean_power_atomic(boolean_power_atomic(nu, p), q).all_atoms()
    once = boolean_power_atomic(nu, p * q).all_atoms()
    assert np.allclose(twice, once, atol=1e-9, rtol=0)


@given(atomic_measures(), alphas)
def test_boolean_power_scales_k(nu, alpha):
    mu = boolean_power_atomic(nu, alpha)
    z = max(nu.upper_bound, mu.upper_bound) + 1.0
    assert k_transform(mu, z) == pytest.approx(float(alpha) * k_transform(nu, z), abs=1e-9)


@pytest.mark.parametrize("alpha", [0.5, 2.0])
def test_boolean_power_bridge(alpha):
    rep = verify_boolean_power_vf(bernoulli(), alpha, np.linspace(0.01, 0.19, 10))
    assert rep.max_deviation < 1e-8
    assert not rep.skipped


def test_boolean_power_bridge_identity_power():
    rep = verify_boolean_power_vf(THREE_POINT, 1, in_domain_grid(THREE_POINT, 6))
    assert rep.max_deviation <= 1e-12


def test_boolean_power_bridge_reports_skips():
    rep = verify_boolean_power_vf(bernoulli(), 2.0, [0.1, 1.9])
    assert rep.skipped == (1.9,) and rep.grid == (0.1,)
    with pytest.raises(DomainError):
        verify_boolean_power_vf(bernoulli(), 2.0, [5.0])


# --- bridge to the exact layer ----------------------------------------------------


def test_quadrature_moments_give_catalan():
    mom = marchenko_pastur(2).moments(9)
    r = moments_to_boolean([F(x) for x in mom]).values
    want = [0, 1, 2, 5, 14, 42, 132, 429, 1430]
    assert max(abs(float(a) - b) for a, b in zip(r, want)) <= 1e-7


# --- numerics plumbing ----------------------------------------------------------------


def test_quadrature_non_convergence_is_reported():
    tight = Config(quad_nodes=2, max_quad_nodes=4, quad_tol=1e-15)
    with pytest.raises(ConvergenceError):
        cauchy_transform(marchenko_pastur(1), 3.001, tight)


@pytest.mark.parametrize("name", _kernels.available_backends())
def test_backends_agree(name):
    nu = marchenko_pastur(2)
    previous = _kernels.backend()
    try:
        _kernels.set_backend("numpy")
        ref = (cauchy_transform(nu, 5.0), pseudo_variance_numeric(nu, 0.2))
        _kernels.set_backend(name)
        got = (cauchy_transform(nu, 5.0), pseudo_variance_numeric(nu, 0.2))
    finally:
        _kernels.set_backend(previous)
    assert got == pytest.approx(ref, abs=1e-13)


def test_unknown_backend():
    with pytest.raises(ValueError):
        _kernels.set_backend("fortran")
