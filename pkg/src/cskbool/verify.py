"""Self-checks that tie the exact and numeric layers together.

:func:`verify_all` runs every check and returns a :class:`VerifyReport`.
Exact checks report deviation 0 on success and 1 on failure; numeric
checks report the largest absolute deviation they measured.
"""
from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable

import numpy as np

from .config import DEFAULT, Config
from .cumulants import (
    boolean_to_moments,
    bp_inverse,
    bp_map,
    free,
    free_to_moments,
    hankel_psd_check,
    moments,
    moments_to_boolean,
    moments_to_free,
)
from .errors import CSKError
from .exact import Polynomial
from .measures import (
    bernoulli,
    boolean_power_atomic,
    csk_member_density,
    k_transform,
    marchenko_pastur,
    means_domain,
    pseudo_variance_numeric,
    verify_boolean_power_vf,
)
from .variance import (
    VarianceFunction,
    cubic_class_check,
    free_cumulants_from_vf,
    lagrange_boolean_cumulants,
    vf_bt,
    vf_mixed_power,
)

__all__ = ["CheckResult", "VerifyReport", "verify_all", "CHECKS"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    deviation: float
    tolerance: float
    anchor: str
    suite: str
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "suite": self.suite,
            "status": "pass" if self.passed else "fail",
            "deviation": self.deviation,
            "tolerance": self.tolerance,
            "anchor": self.anchor,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class VerifyReport:
    suite: str
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "status": "pass" if self.passed else "fail",
            "checks": [c.to_json() for c in self.checks],
        }


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def fuss_catalan3(n: int) -> int:
    return comb(3 * n + 1, n) // (3 * n + 1)


def _random_sequence(rng: random.Random, n: int) -> list[Fraction]:
    return [Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(n)]


def _exact(flag: bool) -> float:
    return 0.0 if flag else 1.0


# Each check returns (deviation, detail). Exact checks pass
# only at deviation 0; numeric checks compare against `tol`.


def _check_catalan(N: int):
    got = lagrange_boolean_cumulants(VarianceFunction(Polynomial([1, 2])), N).values
    want = [0] + [catalan(n) for n in range(1, N)]
    return _exact(list(got) == want), ""


def _check_fuss(N: int):
    got = lagrange_boolean_cumulants(VarianceFunction(Polynomial([1, 3, 2, 1])), N).values
    want = [0] + [fuss_catalan3(n) for n in range(1, N)]
    return _exact(list(got) == want), ""


def _check_round_trips(N: int):
    rng = random.Random(20240601)
    ok = True
    for _ in range(20):
        m = moments(_random_sequence(rng, N))
        ok &= boolean_to_moments(moments_to_boolean(m)) == m
        ok &= free_to_moments(moments_to_free(m)) == m
    return _exact(ok), "20 seeded sequences"


def _reference_moment_sequences(N: int) -> dict[str, object]:
    zeros = [0] * N
    return {
        "bernoulli": moments([0 if n % 2 else 1 for n in range(1, N + 1)]),
        "semicircle": free_to_moments(free(([0, 1] + zeros)[:N])),
        "marchenko_pastur_2": free_to_moments(free_cumulants_from_vf(VarianceFunction(Polynomial([1, 2])), N)),
    }


def _check_bp_identity(N: int):
    ok = all(
        moments_to_free(bp_map(m, 1)).values == moments_to_boolean(m).values
        for m in _reference_moment_sequences(N).values()
    )
    return _exact(ok), "bernoulli, semicircle, marchenko_pastur_2"


def _check_bp_semigroup(N: int):
    rng = random.Random(7)
    ok = True
    for s, t in ((Fraction(1), Fraction(1, 2)), (Fraction(2, 3), Fraction(3))):
        m = moments(_random_sequence(rng, min(N, 8)))
        ok &= bp_map(bp_map(m, s), t) == bp_map(m, s + t)
        ok &= bp_inverse(bp_map(m, t), t) == m
    return _exact(ok), ""


def _check_two_routes(N: int):
    ok = True
    for coeffs in ([1, 2], [1, 3, 2, 1], [1], [1, 0, -1], [1, -1, 2, Fraction(1, 3)]):
        V = VarianceFunction(Polynomial(coeffs))
        kappa_b1 = free_cumulants_from_vf(vf_bt(V, 1), N)
        via_bp = moments_to_boolean(bp_inverse(free_to_moments(kappa_b1), 1))
        ok &= via_bp.values == lagrange_boolean_cumulants(V, N).values
    return _exact(ok), "quadratic and cubic V"


def _check_cubic(N: int):
    cases = {(3, 2, 1): (True, False), (0, 3, 1): (True, True), (0, 0, 2): (False, False), (0, 0, 0): (True, True)}
    ok = all(
        (r.in_V, r.in_V_inf) == want
        for (a, b, c), want in cases.items()
        for r in [cubic_class_check(a, b, c)]
    )
    return _exact(ok), ""


def _check_limit_structure(N: int):
    m = Polynomial.x()
    ok = True
    for coeffs, m0 in (([1, 2, 3], 0), ([1, 3, 2, 1], 0), ([2, 1, 1], Fraction(1, 2)), ([1, 0, 1, -1], -1)):
        V = VarianceFunction(Polynomial(coeffs), m0)
        for k in range(1, 11):
            alpha = 2**k
            diff = vf_mixed_power(V, alpha, "boolean_then_free").poly - vf_bt(V, 1).poly
            ok &= diff == m * (m - V.m0) * Fraction(-1, alpha)
    return _exact(ok), "alpha = 2..1024"


def _check_hankel(N: int):
    good = hankel_psd_check([1, 2, 5, 14, 42, 132, 429], 4)
    bad = hankel_psd_check([1, 0, -1], 2)
    return _exact(good.is_psd and all(d >= 0 for d in good.determinants) and not bad.is_psd), ""


def _check_k_monotone(N: int):
    worst = -math.inf
    for nu in (bernoulli(), marchenko_pastur(1), marchenko_pastur(2)):
        b = nu.upper_bound
        z = b + np.geomspace(1e-2, 50.0, 40)
        k = k_transform(nu, z)
        worst = max(worst, float(np.max(np.diff(k))))
    return (0.0 if worst < 0 else worst), "max successive increment of K"


def _check_k_inverts_means(N: int):
    dev = 0.0
    for nu in (bernoulli(), marchenko_pastur(1), marchenko_pastur(2)):
        dom = means_domain(nu)
        hi = min(dom.m_plus, dom.m0 + 0.3)
        for m in np.linspace(dom.m0, hi, 12)[1:-1]:
            vv = pseudo_variance_numeric(nu, m, domain=dom)
            dev = max(dev, abs(k_transform(nu, m + vv / m) - m))
    return dev, ""


def _check_mp_pseudo_variance(N: int):
    dev = 0.0
    for a in (1.0, 2.0):
        nu = marchenko_pastur(a)
        dom = means_domain(nu)
        for m in dom.m0 + np.linspace(0.0, 0.3, 22)[1:-1]:
            dev = max(dev, abs(pseudo_variance_numeric(nu, m, domain=dom) - (1 + a * m)))
    nu = bernoulli()
    for m in np.linspace(0.0, 0.5, 22)[1:-1]:
        dev = max(dev, abs(pseudo_variance_numeric(nu, m) - (1 - m * m)))
    return dev, "a in {1, 2} and Bernoulli"


def _check_bernoulli_power(N: int):
    nu = bernoulli()
    mu = boolean_power_atomic(nu, 2)
    xs = [x for x, _ in mu.atoms]
    ps = [p for _, p in mu.atoms]
    dev = max(abs(xs[0] + math.sqrt(2)), abs(xs[1] - math.sqrt(2)), *(abs(p - 0.5) for p in ps))
    dev = max(dev, abs(means_domain(nu).m_plus - 1.0), abs(means_domain(mu).m_plus - math.sqrt(2)))
    return dev, "atoms, weights and upper means"


def _check_boolean_power_bridge(N: int):
    dev = 0.0
    for alpha in (Fraction(1, 2), Fraction(2)):
        rep = verify_boolean_power_vf(bernoulli(), alpha, np.linspace(0.01, 0.19, 10))
        dev = max(dev, rep.max_deviation)
    return dev, "alpha in {1/2, 2}"


def _check_member(N: int):
    nu = marchenko_pastur(1)
    dom = means_domain(nu)
    dev = 0.0
    for m in (0.05, 0.1, 0.2):
        def fm(x, m=m):
            return csk_member_density(nu, m, x, domain=dom)

        mass = nu.integrate(fm)
        mean = nu.integrate(lambda x: x * fm(x))
        var = nu.integrate(lambda x: (x - m) ** 2 * fm(x))
        dev = max(dev, abs(mass - 1), abs(mean - m), abs(var - (1 + m)))
    return dev, "mass, mean, variance"


def _check_quadrature_catalan(N: int):
    n = min(N, 9)
    mom = marchenko_pastur(2).moments(n)
    r = moments_to_boolean([Fraction(x) for x in mom]).values
    want = [0] + [catalan(k) for k in range(1, n)]
    dev = max(abs(float(a) - b) for a, b in zip(r, want))
    return dev, f"n <= {n}"


# name -> (function, suite, default tolerance, anchor)
CHECKS: dict[str, tuple[Callable, str, float, str]] = {
    "catalan": (_check_catalan, "exact", 0.0, "boolean-cumulants-of-marchenko-pastur-2-are-catalan"),
    "fuss_catalan": (_check_fuss, "exact", 0.0, "boolean-cumulants-of-cubic-1+3m+2m2+m3-are-fuss-catalan"),
    "round_trips": (_check_round_trips, "exact", 0.0, "moment-cumulant-conversions-invert"),
    "bp_identity": (_check_bp_identity, "exact", 0.0, "boolean-cumulants-equal-free-cumulants-of-B1"),
    "bp_semigroup": (_check_bp_semigroup, "exact", 0.0, "Bt-semigroup-and-inverse"),
    "two_routes": (_check_two_routes, "exact", 0.0, "lagrange-route-equals-bijection-route"),
    "cubic_criterion": (_check_cubic, "exact", 0.0, "cubic-variance-class-criterion"),
    "limit_structure": (_check_limit_structure, "exact", 0.0, "mixed-power-approaches-B1-as-1/alpha"),
    "hankel": (_check_hankel, "exact", 0.0, "levy-khinchin-measure-hankel-positivity"),
    "k_monotone": (_check_k_monotone, "numeric", 0.0, "K-strictly-decreasing-above-support"),
    "k_inverts_means": (_check_k_inverts_means, "numeric", 1e-10, "K(m + V(m)/m) = m"),
    "pseudo_variance": (_check_mp_pseudo_variance, "numeric", 1e-8, "pseudo-variance-from-mean-inversion"),
    "bernoulli_power": (_check_bernoulli_power, "numeric", 1e-8, "bernoulli-boolean-square-and-upper-means"),
    "boolean_power_bridge": (_check_boolean_power_bridge, "numeric", 1e-8, "pseudo-variance-under-boolean-power"),
    "csk_member": (_check_member, "numeric", 1e-6, "family-member-mass-mean-variance"),
    "quadrature_catalan": (_check_quadrature_catalan, "numeric", 1e-7, "quadrature-moments-give-catalan"),
}


def _run_one(name: str, N: int, config: Config) -> CheckResult:
    fn, suite, tol, anchor = CHECKS[name]
    if suite == "numeric" and config.verify_numeric_tol is not None and tol > 0:
        tol = config.verify_numeric_tol
    try:
        dev, detail = fn(N)
    except CSKError as exc:
        return CheckResult(name, False, math.inf, tol, anchor, suite, f"error: {exc}")
    passed = bool(dev == 0.0 if tol == 0.0 else dev < tol)
    return CheckResult(name, passed, float(dev), tol, anchor, suite, detail)


def verify_all(config: Config = DEFAULT, N: int | None = None, jobs: int = 1,
               only: list[str] | None = None) -> VerifyReport:
    """Run the checks; output order is fixed regardless of ``jobs``."""
    N = N or min(config.series_order, 10)
    names = list(only) if only else list(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {unknown}")
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda n: _run_one(n, N, config), names))
    else:
        results = [_run_one(n, N, config) for n in names]
    return VerifyReport("all", tuple(results))
