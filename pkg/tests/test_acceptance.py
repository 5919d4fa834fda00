"""The thirteen acceptance criteria, each at its stated tolerance.

Every test prints one ``PASS``/``FAIL`` line. Run this file directly
(``python3 tests/test_acceptance.py``) for just the summary lines.
"""
from __future__ import annotations

import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))
from oracles import free_cumulants_by_enumeration  # noqa: E402

from cskbool import (
    VarianceFunction,
    bernoulli,
    boolean_power_atomic,
    boolean_to_moments,
    bp_map,
    csk_member_density,
    cubic_class_check,
    free_to_moments,
    hankel_psd_check,
    k_transform,
    lagrange_boolean_cumulants,
    marchenko_pastur,
    means_domain,
    moments_to_boolean,
    moments_to_free,
    pseudo_variance_numeric,
    verify_boolean_power_vf,
    vf_bt,
    vf_mixed_power,
)
from cskbool.exact import Polynomial

F = Fraction


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, ok: bool, detail: str = "") -> None:
        with capsys.disabled():
            status = "PASS" if ok else "FAIL"
            print(f"\n[{status}] criterion {number:2d}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, f"criterion {number} failed: {detail}"

    return emit


def random_sequence(rng: random.Random, n: int) -> list[Fraction]:
    return [F(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(n)]


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def test_01_catalan(report):
    start = time.perf_counter()
    r = lagrange_boolean_cumulants(VarianceFunction(Polynomial([1, 2]), 0), 9)
    elapsed = time.perf_counter() - start
    want = tuple(F(v) for v in (0, 1, 2, 5, 14, 42, 132, 429, 1430))
    ok = r.values == want and all(isinstance(v, Fraction) for v in r.values) and elapsed < 1.0
    report(1, "Catalan boolean cumulants from V = 1 + 2m", ok, f"{elapsed * 1e3:.1f} ms")


def test_02_fuss_catalan(report):
    r = lagrange_boolean_cumulants(VarianceFunction(Polynomial([1, 3, 2, 1]), 0), 9)
    fuss = (0,) + tuple(math.comb(3 * n + 1, n) // (3 * n + 1) for n in range(1, 9))
    want = tuple(F(v) for v in (0, 1, 3, 12, 55, 273, 1428, 7752, 43263))
    report(2, "Fuss-Catalan boolean cumulants from a cubic V", r.values == want == tuple(map(F, fuss)))


def test_03_bernoulli_suite(report):
    nu = bernoulli()
    zs = np.array([1.5, 2.0, 5.0, 10.0])
    k_dev = float(np.max(np.abs(k_transform(nu, zs) - 1.0 / zs)))
    mu = boolean_power_atomic(nu, 2)
    atoms = sorted(mu.all_atoms())
    atom_dev = max(abs(atoms[0][0] + math.sqrt(2)), abs(atoms[1][0] - math.sqrt(2)))
    weight_dev = max(abs(w - 0.5) for _, w in atoms)
    mp_nu = means_domain(nu).m_plus
    mp_mu = means_domain(mu).m_plus
    ok = (
        k_dev <= 1e-12
        and len(atoms) == 2
        and atom_dev <= 1e-10
        and weight_dev <= 1e-12
        and abs(mp_nu - 1) <= 1e-8
        and abs(mp_mu - math.sqrt(2)) <= 1e-8
        and abs(mp_mu - 2 * mp_nu) > 1e-8
    )
    detail = f"K {k_dev:.1e}, atoms {atom_dev:.1e}, weights {weight_dev:.1e}, m+ {mp_nu:.12f}/{mp_mu:.12f}"
    report(3, "Bernoulli K-transform, boolean square, upper means", ok, detail)


def test_04_round_trips(report):
    rng = random.Random(20240401)
    ok = True
    for _ in range(50):
        m = random_sequence(rng, 12)
        ok &= list(boolean_to_moments(moments_to_boolean(m)).values) == m
        ok &= list(free_to_moments(moments_to_free(m)).values) == m
    report(4, "moment/boolean and moment/free round trips (50 x N=12)", ok)


def test_05_noncrossing_oracle(report):
    rng = random.Random(7)
    ok = True
    for _ in range(20):
        m = random_sequence(rng, 6)
        ok &= list(moments_to_free(m).values) == free_cumulants_by_enumeration(m)
    report(5, "free cumulants equal non-crossing partition enumeration (n <= 6)", ok)


def _reference_moments(N: int) -> dict[str, list[Fraction]]:
    bern = [F(1 - n % 2) for n in range(1, N + 1)]
    semi = [F(0) if n % 2 else F(catalan(n // 2)) for n in range(1, N + 1)]
    mp2 = list(free_to_moments([F(0), F(1)] + [F(2) ** (n - 2) for n in range(3, N + 1)]).values)
    return {"bernoulli": bern, "semicircle": semi, "mp2": mp2}


def test_06_bercovici_pata_identity(report):
    ok = True
    for name, m in _reference_moments(10).items():
        ok &= moments_to_free(bp_map(m, 1)).values == moments_to_boolean(m).values
    report(6, "free cumulants of B_1(m) equal boolean cumulants of m (N=10)", ok)


def test_07_two_routes(report):
    start = time.perf_counter()
    exact = lagrange_boolean_cumulants(VarianceFunction(Polynomial([1, 2]), 0), 8).values
    quad = marchenko_pastur(2).moments(8)
    numeric = moments_to_boolean([F(x) for x in quad]).values
    elapsed = time.perf_counter() - start
    dev = max(abs(float(a) - float(b)) for a, b in zip(exact, numeric))
    report(7, "MP(2) boolean cumulants: Lagrange route vs quadrature route",
           dev <= 1e-7 and elapsed < 5.0, f"dev {dev:.1e}, {elapsed:.2f} s")


def test_08_pseudo_variance_recovery(report):
    dev = 0.0
    for a in (1, 2):
        nu = marchenko_pastur(a)
        m0 = means_domain(nu).m0
        for m in np.linspace(m0, m0 + 0.3, 22)[1:-1]:
            dev = max(dev, abs(pseudo_variance_numeric(nu, m) - (1 + a * m)))
    nu = bernoulli()
    for m in np.linspace(0.0, 0.3, 22)[1:-1]:
        dev = max(dev, abs(pseudo_variance_numeric(nu, m) - (1 - m * m)))
    report(8, "pseudo-variance of MP(1), MP(2), Bernoulli", dev <= 1e-8, f"dev {dev:.1e}")


def test_09_boolean_power_bridge(report):
    grid = np.linspace(0.05, 0.9, 18)
    devs = [verify_boolean_power_vf(bernoulli(), a, grid).max_deviation for a in (0.5, 2.0)]
    report(9, "boolean power pseudo-variance bridge on Bernoulli",
           max(devs) < 1e-8, f"dev {max(devs):.1e}")


def test_10_limit_structure(report):
    ok = True
    for V in (VarianceFunction(Polynomial([1, 2, 3]), 0), VarianceFunction(Polynomial([2, -1, 1, 1]), F(1, 3))):
        centered = Polynomial.x() * (Polynomial.x() - V.m0)
        for k in range(1, 11):
            alpha = F(2) ** k
            diff = vf_mixed_power(V, alpha, "boolean_then_free").poly - vf_bt(V, 1).poly
            ok &= diff == centered * (-1 / alpha)
            ok &= diff.coeffs[-1] == -1 / alpha
    report(10, "mixed power minus B_1 equals -m(m-m0)/alpha, alpha = 2..1024", ok)


def test_11_cubic_criterion(report):
    c1 = cubic_class_check(3, 2, 1)
    c2 = cubic_class_check(0, 3, 1)
    c3 = cubic_class_check(0, 0, 2)
    ok = (c1.in_V and not c1.in_V_inf) and (c2.in_V and c2.in_V_inf) and not c3.in_V
    report(11, "cubic membership criterion", ok)


def test_12_csk_member(report):
    nu = marchenko_pastur(1)
    dom = means_domain(nu)
    dev_mm, dev_var = 0.0, 0.0
    for m in (0.05, 0.1, 0.2):
        def f(x, m=m):
            return csk_member_density(nu, m, x, domain=dom)

        mass = nu.integrate(f)
        mean = nu.integrate(lambda x: x * f(x))
        var = nu.integrate(lambda x: (x - m) ** 2 * f(x))
        dev_mm = max(dev_mm, abs(mass - 1), abs(mean - m))
        dev_var = max(dev_var, abs(var - (1 + m)))
    report(12, "MP(1) family members: mass, mean, variance",
           dev_mm <= 1e-8 and dev_var <= 1e-6, f"mass/mean {dev_mm:.1e}, variance {dev_var:.1e}")


def test_13_hankel(report):
    good = hankel_psd_check([1, 2, 5, 14, 42, 132, 429], 4)
    bad = hankel_psd_check([1, 0, -1], 2)
    ok = good.is_psd and all(d >= 0 for d in good.determinants) and not bad.is_psd
    report(13, "Hankel positivity of shifted Catalan, failure of (1, 0, -1)", ok)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
