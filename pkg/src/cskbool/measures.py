"""Concrete measures with support bounded above, and their transforms.

A :class:`Measure` is a finite set of atoms plus density components whose
densities carry a square-root edge factor. Integrals against a density use
Gauss-Chebyshev rules after an affine pullback to [-1, 1]; node counts
start at ``Config.quad_nodes`` and double until two successive results
agree to ``Config.quad_tol``.

All transforms are evaluated on the real half line z > sup supp(nu).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import _kernels
from .config import DEFAULT, Config
from .errors import ConvergenceError, DomainError, RootIsolationError
from .exact import Polynomial, isolate_real_roots, refine_root, to_rational

__all__ = [
    "SqrtWeightDensity",
    "MarchenkoPastur",
    "Measure",
    "MeansDomain",
    "TransformGrid",
    "BooleanPowerReport",
    "bernoulli",
    "dirac",
    "marchenko_pastur",
    "cauchy_transform",
    "k_transform",
    "transform_grid",
    "means_domain",
    "pseudo_variance_numeric",
    "csk_member_density",
    "boolean_power_atomic",
    "verify_boolean_power_vf",
]

MASS_TOL = 1e-12


def _as_coeffs(values) -> tuple[float, ...]:
    return tuple(float(to_rational(v)) if isinstance(v, str) else float(v) for v in values)


@lru_cache(maxsize=64)
def _cheb_u_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """n-point rule for the weight sqrt(1 - t^2) on [-1, 1]."""
    i = np.arange(1, n + 1)
    ang = i * np.pi / (n + 1)
    return np.cos(ang), (np.pi / (n + 1)) * np.sin(ang) ** 2


@lru_cache(maxsize=64)
def _cheb_w_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """n-point rule for the weight sqrt((1 - t)/(1 + t)) on [-1, 1]."""
    k = np.arange(1, n + 1)
    return np.cos(2 * k * np.pi / (2 * n + 1)), (4 * np.pi / (2 * n + 1)) * np.sin(
        k * np.pi / (2 * n + 1)
    ) ** 2


@dataclass(frozen=True)
class SqrtWeightDensity:
    """Density ``p(x) sqrt((upper - x)(x - lower)) / q(x)`` on [lower, upper].

    ``p`` and ``q`` are coefficient tuples, lowest degree first. A root of
    ``q`` at an endpoint is allowed; it is divided out and the matching
    Jacobi-type rule takes over the resulting inverse square root.
    """

    lower: float
    upper: float
    p: tuple[float, ...]
    q: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        object.__setattr__(self, "p", _as_coeffs(self.p))
        object.__setattr__(self, "q", _as_coeffs(self.q))
        object.__setattr__(self, "lower", float(self.lower))
        object.__setattr__(self, "upper", float(self.upper))
        if not self.lower < self.upper:
            raise DomainError("density support must satisfy lower < upper")
        if not any(self.q):
            raise DomainError("q must not be the zero polynomial")
        self._check_positive()

    def _edge(self) -> tuple[str, tuple[float, ...]]:
        """Which endpoint q vanishes at, and q with that root divided out."""
        scale = max(abs(c) for c in self.q)
        for side, root in (("lower", self.lower), ("upper", self.upper)):
            if abs(npoly.polyval(root, self.q)) <= 1e-14 * scale * max(1.0, abs(root)) ** len(self.q):
                quot, _ = npoly.polydiv(self.q, (-root, 1.0))
                return side, tuple(quot)
        return "none", self.q

    def _check_positive(self):
        t = np.cos(np.linspace(0.0, np.pi, 513))[1:-1]
        x = 0.5 * (self.upper + self.lower) + 0.5 * (self.upper - self.lower) * t
        side, qr = self._edge()
        qv = npoly.polyval(x, qr)
        if side == "none":
            roots = np.roots(list(reversed(self.q))) if len(self.q) > 1 else np.array([])
            real = roots[np.abs(roots.imag) < 1e-12].real
            if np.any((real >= self.lower) & (real <= self.upper)):
                raise DomainError("q has a zero on the density support")
        if side == "lower":
            qv = qv  # q = (x - lower) * qr with x - lower > 0 inside
        elif side == "upper":
            qv = -qv  # q = (x - upper) * qr with x - upper < 0 inside
        if np.any(npoly.polyval(x, self.p) / qv < -1e-14):
            raise DomainError("density is negative somewhere on its support")

    def nodes(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        c = 0.5 * (self.upper + self.lower)
        h = 0.5 * (self.upper - self.lower)
        side, qr = self._edge()
        if side == "none":
            t, wt = _cheb_u_rule(n)
            x = c + h * t
            w = h * h * wt * npoly.polyval(x, self.p) / npoly.polyval(x, self.q)
        elif side == "lower":
            # sqrt((u-x)(x-l))/(x-l) = sqrt((1-t)/(1+t))
            t, wt = _cheb_w_rule(n)
            x = c + h * t
            w = h * wt * npoly.polyval(x, self.p) / npoly.polyval(x, qr)
        else:
            # sqrt((u-x)(x-l))/(x-u) = -sqrt((1+t)/(1-t)); reflect t -> -t
            t, wt = _cheb_w_rule(n)
            x = c - h * t
            w = -h * wt * npoly.polyval(x, self.p) / npoly.polyval(x, qr)
        return x, w

    def to_json(self) -> dict:
        return {
            "kind": "sqrt_weight",
            "lower": self.lower,
            "upper": self.upper,
            "p": list(self.p),
            "q": list(self.q),
        }


@dataclass(frozen=True)
class MarchenkoPastur:
    """Centered Marchenko-Pastur law with variance function ``1 + a m``.

    Continuous part ``sqrt(4 - (x-a)^2) / (2 pi (1 + a x))`` on (a-2, a+2)
    and, for ``a^2 > 1``, an atom of mass ``1 - 1/a^2`` at ``-1/a``.
    """

    a: float

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))

    def continuous(self) -> SqrtWeightDensity:
        a = self.a
        return SqrtWeightDensity(a - 2.0, a + 2.0, (1.0,), (2 * math.pi, 2 * math.pi * a))

    def atoms(self) -> list[tuple[float, float]]:
        a = self.a
        if a * a > 1:
            return [(-1.0 / a, 1.0 - 1.0 / (a * a))]
        return []

    def to_json(self) -> dict:
        return {"kind": "marchenko_pastur", "a": self.a}


DensityComponent = SqrtWeightDensity | MarchenkoPastur


def density_from_json(data: dict) -> DensityComponent:
    kind = data.get("kind")
    if kind == "marchenko_pastur":
        return MarchenkoPastur(float(data["a"]))
    if kind == "sqrt_weight":
        return SqrtWeightDensity(
            float(data["lower"]), float(data["upper"]), tuple(data["p"]), tuple(data.get("q", [1.0]))
        )
    raise DomainError(f"unknown density kind {kind!r}")


@dataclass(frozen=True)
class Measure:
    """Probability measure: atoms ``(x, p)`` plus density components."""

    atoms: tuple[tuple[float, float], ...] = ()
    densities: tuple[DensityComponent, ...] = ()
    declared_upper_bound: float | None = None
    _parts: tuple = field(default=(), init=False, repr=False, compare=False)
    _atoms: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        atoms = tuple((float(x), float(p)) for x, p in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "densities", tuple(self.densities))
        all_atoms = list(atoms)
        parts = []
        for d in self.densities:
            if isinstance(d, MarchenkoPastur):
                all_atoms.extend(d.atoms())
                parts.append(d.continuous())
            elif isinstance(d, SqrtWeightDensity):
                parts.append(d)
            else:
                raise DomainError(f"unsupported density component {d!r}")
        if any(p <= 0 for _, p in all_atoms):
            raise DomainError("atom weights must be positive")
        if not all_atoms and not parts:
            raise DomainError("measure has no mass")
        object.__setattr__(self, "_parts", tuple(parts))
        object.__setattr__(self, "_atoms", tuple(sorted(all_atoms)))
        mass = self.integrate(np.ones_like)
        if abs(mass - 1.0) > MASS_TOL:
            raise DomainError(f"total mass is {mass!r}, not 1")
        b = self.upper_bound
        if self.declared_upper_bound is not None and self.declared_upper_bound < b:
            raise DomainError("declared upper bound lies below the support")

    @property
    def upper_bound(self) -> float:
        """sup supp(nu)."""
        tops = [x for x, _ in self._atoms] + [d.upper for d in self._parts]
        return max(tops)

    @property
    def is_atomic(self) -> bool:
        return not self._parts

    @property
    def is_degenerate(self) -> bool:
        return self.is_atomic and len(self._atoms) == 1

    def all_atoms(self) -> tuple[tuple[float, float], ...]:
        return self._atoms

    def discretize(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Support points and weights: atoms plus n nodes per density."""
        xs = [np.array([x for x, _ in self._atoms])]
        ws = [np.array([p for _, p in self._atoms])]
        for d in self._parts:
            x, w = d.nodes(n)
            xs.append(x)
            ws.append(w)
        return np.concatenate(xs), np.concatenate(ws)

    def adaptive(self, fn: Callable, config: Config = DEFAULT, tol: float | None = None):
        """Evaluate ``fn(x, w)`` with node doubling until it settles."""
        if self.is_atomic:
            return fn(*self.discretize(1))
        tol = config.quad_tol if tol is None else tol
        n = config.quad_nodes
        prev = fn(*self.discretize(n))
        while 2 * n <= config.max_quad_nodes:
            n *= 2
            cur = fn(*self.discretize(n))
            if np.max(np.abs(np.asarray(cur) - np.asarray(prev))) < tol:
                return cur
            prev = cur
        raise ConvergenceError(f"quadrature did not settle within {config.max_quad_nodes} nodes")

    def integrate(self, g: Callable, config: Config = DEFAULT):
        """``int g(x) nu(dx)`` for vectorized g."""
        return self.adaptive(lambda x, w: float(np.dot(w, g(x))), config)

    def moments(self, n: int, config: Config = DEFAULT) -> list[float]:
        """Raw moments m_1..m_n."""
        return list(
            self.adaptive(lambda x, w: np.array([np.dot(w, x**k) for k in range(1, n + 1)]), config)
        )

    def to_json(self) -> dict:
        return {
            "atoms": [{"x": x, "p": p} for x, p in self.atoms],
            "densities": [d.to_json() for d in self.densities],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Measure":
        try:
            atoms = tuple((float(a["x"]), float(a["p"])) for a in data.get("atoms", []))
            dens = tuple(density_from_json(d) for d in data.get("densities", []))
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed measure JSON: {exc}") from exc
        return cls(atoms, dens, data.get("upper_bound"))


def bernoulli() -> Measure:
    """Symmetric Bernoulli law on {-1, 1}."""
    return Measure(((-1.0, 0.5), (1.0, 0.5)))


def dirac(c: float) -> Measure:
    return Measure(((c, 1.0),))


def marchenko_pastur(a: float) -> Measure:
    return Measure((), (MarchenkoPastur(a),))


# --- transforms ------------------------------------------------------------


def _check_z(nu: Measure, z: np.ndarray):
    b = nu.upper_bound
    if np.any(z <= b):
        raise DomainError(f"z must exceed sup supp = {b!r}")


def cauchy_transform(nu: Measure, z, config: Config = DEFAULT):
    """``G(z) = int nu(dx)/(z - x)`` for real z above the support."""
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    _check_z(nu, zz)
    kern = _kernels.get("cauchy_sum")
    g = nu.adaptive(lambda x, w: kern(zz, x, w), config)
    return float(g[0]) if np.ndim(z) == 0 else g


def k_transform(nu: Measure, z, config: Config = DEFAULT):
    """Self-energy ``K(z) = z - 1/G(z)``."""
    g = np.atleast_1d(cauchy_transform(nu, z, config))
    if np.any(g == 0):
        raise DomainError("Cauchy transform vanishes")
    k = np.atleast_1d(np.asarray(z, dtype=float)) - 1.0 / g
    return float(k[0]) if np.ndim(z) == 0 else k


@dataclass(frozen=True)
class TransformGrid:
    points: tuple[float, ...]
    G: tuple[float, ...]
    K: tuple[float, ...]

    def rows(self):
        return zip(self.points, self.G, self.K)


def transform_grid(nu: Measure, zs: Sequence[float], config: Config = DEFAULT) -> TransformGrid:
    """G and K on increasing points; K must come out strictly decreasing."""
    z = np.asarray(zs, dtype=float)
    if np.any(np.diff(z) <= 0):
        raise DomainError("grid points must be strictly increasing")
    g = np.atleast_1d(cauchy_transform(nu, z, config))
    k = z - 1.0 / g
    if np.any(np.diff(k) >= 0):
        raise ConvergenceError("K is not strictly decreasing on the grid")
    return TransformGrid(tuple(z.tolist()), tuple(g.tolist()), tuple(k.tolist()))


# --- domain of means -------------------------------------------------------


@dataclass(frozen=True)
class MeansDomain:
    m0: float
    m_plus: float
    B: float
    degenerate: bool = False
    m0_infinite: bool = False

    def __contains__(self, m: float) -> bool:
        return self.m0 < m < self.m_plus

    def to_json(self) -> dict:
        return {
            "m0": self.m0,
            "m_plus": self.m_plus,
            "B": self.B,
            "degenerate": self.degenerate,
            "m0_infinite": self.m0_infinite,
        }


def _richardson_limit(g: Callable[[float], float], config: Config) -> float:
    """Limit of g(h) as h -> 0+ for g expanding in powers of sqrt(h).

    Samples h = 2^-j and eliminates one half-integer power per column.
    Accepts when three successive diagonal values agree to
    ``config.richardson_tol``.
    """
    rows: list[list[float]] = []
    diag: list[float] = []
    depth = config.richardson_depth
    for j in range(1, config.richardson_max_j + 1):
        try:
            row = [g(2.0**-j)]
        except ConvergenceError:
            break
        for k in range(1, min(len(rows), depth) + 1):
            f = 2.0 ** (k / 2) - 1.0
            row.append(row[k - 1] + (row[k - 1] - rows[-1][k - 1]) / f)
        rows.append(row)
        diag.append(row[-1])
        if len(diag) >= 3:
            d1, d2 = abs(diag[-1] - diag[-2]), abs(diag[-2] - diag[-3])
            if max(d1, d2) < config.richardson_tol:
                return diag[-1]
    raise ConvergenceError("extrapolation of the edge limit did not converge")


@lru_cache(maxsize=128)
def means_domain(nu: Measure, config: Config = DEFAULT) -> MeansDomain:
    """One-sided domain of means ``(m0, m_plus)`` of the family of nu.

    ``m0`` is the mean of nu; ``m_plus = B - lim_{z -> B+} 1/G(z)`` with
    ``B = max(0, sup supp)``.
    """
    b = nu.upper_bound
    B = max(0.0, b)
    mean = nu.integrate(lambda x: x, config)
    if nu.is_degenerate:
        return MeansDomain(mean, mean, B, degenerate=True)
    if B > b:
        limit = 1.0 / cauchy_transform(nu, B, config)
    else:
        limit = _richardson_limit(lambda h: 1.0 / cauchy_transform(nu, B + h, config), config)
    return MeansDomain(mean, B - limit, B)


# --- pseudo-variance and the family ------------------------------------------


def _solve_theta(nu: Measure, m: float, dom: MeansDomain, x, w, config: Config) -> float:
    tilted = _kernels.get("tilted_sums")
    bisect = _kernels.get("bisect_mean")
    lo = 0.0
    if dom.B > 0:
        hi = 1.0 / dom.B
    else:
        hi = 1.0
        while True:
            s1, s0 = tilted(hi, x, w)
            if s1 / s0 > m:
                break
            hi *= 2.0
            if hi > 1e300:
                raise ConvergenceError("could not bracket the tilt parameter")
    theta = bisect(m, x, w, lo, hi)
    s1, s0 = tilted(theta, x, w)
    if abs(s1 / s0 - m) > config.bisection_tol:
        raise ConvergenceError(f"tilt solve residual {abs(s1 / s0 - m):.3e} exceeds tolerance")
    return theta


def pseudo_variance_numeric(nu: Measure, m: float, config: Config = DEFAULT,
                            domain: MeansDomain | None = None) -> float:
    """Pseudo-variance at mean m, by inverting the mean of the tilted law.

    Finds theta with ``int x/(1 - theta x) dnu / int 1/(1 - theta x) dnu = m``
    by bisection and returns ``m (1/theta - m)``.
    """
    if nu.is_degenerate:
        raise DomainError("degenerate measure generates no family")
    dom = domain or means_domain(nu, config)
    m = float(m)
    if m == 0.0 and dom.m0 < 0.0 < dom.m_plus:
        return 0.0
    if not dom.m0 < m < dom.m_plus:
        raise DomainError(f"m = {m!r} outside the domain of means ({dom.m0!r}, {dom.m_plus!r})")
    if m == 0.0:
        raise DomainError("m = 0 is not an interior mean")

    def solve(x, w):
        theta = _solve_theta(nu, m, dom, x, w, config)
        return m * (1.0 / theta - m)

    return float(nu.adaptive(solve, config))


def csk_member_density(nu: Measure, m: float, x, config: Config = DEFAULT,
                       domain: MeansDomain | None = None):
    """Density of the family member with mean m with respect to nu."""
    if nu.is_degenerate:
        raise DomainError("degenerate measure generates no family")
    dom = domain or means_domain(nu, config)
    xx = np.asarray(x, dtype=float)
    if np.any(xx > nu.upper_bound):
        raise DomainError("x lies above the support")
    m = float(m)
    if m == 0.0:
        if abs(dom.m0) <= 1e-12:
            return np.ones_like(xx) if xx.ndim else 1.0
        if not dom.m0 < 0.0 < dom.m_plus:
            raise DomainError("m = 0 outside the domain of means")
        # pseudo-variance vanishes at 0; its slope is the root of K
        slope = _zero_of_k(nu, dom, config)
        return slope / (slope - xx)
    vv = pseudo_variance_numeric(nu, m, config, dom)
    return vv / (vv + m * (m - xx))


def _zero_of_k(nu: Measure, dom: MeansDomain, config: Config) -> float:
    # K(z) = 0  <=>  mean of the tilt 1/z equals 0
    return float(nu.adaptive(lambda x, w: 1.0 / _solve_theta(nu, 0.0, dom, x, w, config), config))


# --- boolean powers of atomic measures --------------------------------------


def _exact_polys(atoms, alpha: Fraction):
    xs = [to_rational(x) for x, _ in atoms]
    ps = [to_rational(p) for _, p in atoms]
    total = sum(ps)
    Q = Polynomial.from_roots(xs)
    P = Polynomial()
    for i, p in enumerate(ps):
        P = P + Polynomial.from_roots(xs[:i] + xs[i + 1:]) * (p / total)
    D = Polynomial.x() * P * (1 - alpha) + Q * alpha
    return P, Q, D


def _roots_sturm(atoms, alpha: Fraction) -> tuple[list[float], list[float]]:
    P, _, D = _exact_polys(atoms, alpha)
    intervals = isolate_real_roots(D)
    if len(intervals) != D.degree:
        raise RootIsolationError(
            f"{D.degree - len(intervals)} non-real roots detected; expected all real"
        )
    dD = D.derivative()
    roots, weights = [], []
    for a, b in intervals:
        width = Fraction(1, 2**62) * max(1, abs(a), abs(b))
        r = refine_root(D, a, b, width)
        roots.append(float(r))
        weights.append(float(P(r) / dD(r)))
    return roots, weights


def _bisect_float(f: Callable[[float], float], lo: float, hi: float) -> float:
    flo = f(lo)
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _roots_bisect(atoms, alpha: float) -> tuple[list[float], list[float]]:
    xs = np.array([x for x, _ in atoms])
    ps = np.array([p for _, p in atoms])
    ps = ps / ps.sum()
    k = len(xs)

    def P(z):
        return sum(ps[i] * np.prod(np.delete(z - xs, i)) for i in range(k))

    def Q(z):
        return float(np.prod(z - xs))

    def D(z):
        return (1 - alpha) * z * P(z) + alpha * Q(z)

    # poles of K are the zeros of G, one between consecutive atoms
    poles = [_bisect_float(P, xs[i], xs[i + 1]) for i in range(k - 1)]
    span = max(1.0, float(np.ptp(xs)), float(np.max(np.abs(xs))))
    edges = [None] + poles + [None]
    roots = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if lo is None:
            hi_ = hi if hi is not None else float(xs[0])
            lo_, step = hi_ - span, span
            while np.sign(D(lo_)) == np.sign(D(hi_)) or D(hi_) == 0:
                step *= 2
                lo_ = hi_ - step
                if step > 1e300:
                    raise RootIsolationError("could not bracket the lowest root")
            if hi is None:
                hi_ = float(xs[0]) + span
                while np.sign(D(lo_)) == np.sign(D(hi_)):
                    hi_ += span
            roots.append(_bisect_float(D, lo_, hi_))
        elif hi is None:
            hi_, step = lo + span, span
            while np.sign(D(hi_)) == np.sign(D(lo)):
                step *= 2
                hi_ = lo + step
                if step > 1e300:
                    raise RootIsolationError("could not bracket the top root")
            roots.append(_bisect_float(D, lo, hi_))
        else:
            if np.sign(D(lo)) == np.sign(D(hi)):
                raise RootIsolationError("no sign change between consecutive poles")
            roots.append(_bisect_float(D, lo, hi))

    def dD(z, h=None):
        # derivative of D via the product rule on the explicit forms
        dP = sum(
            ps[i] * sum(np.prod(np.delete(z - xs, [i, j])) for j in range(k) if j != i)
            for i in range(k)
        )
        dQ = sum(np.prod(np.delete(z - xs, j)) for j in range(k))
        return (1 - alpha) * (P(z) + z * dP) + alpha * dQ

    weights = [P(r) / dD(r) for r in roots]
    return roots, weights


def boolean_power_atomic(nu: Measure, alpha, method: str = "auto") -> Measure:
    """Boolean convolution power of a purely atomic measure.

    With ``G = P/Q`` the result has ``G = P / ((1 - alpha) z P + alpha Q)``;
    its atoms are the k real zeros of the denominator and its weights the
    residues there. ``method`` is ``"sturm"`` (exact isolation on rational
    data), ``"bisect"`` (floating bisection between consecutive zeros of
    G) or ``"auto"`` (Sturm for up to 12 atoms).
    """
    if not nu.is_atomic:
        raise DomainError("boolean_power_atomic needs a purely atomic measure")
    alpha_q = to_rational(alpha)
    if alpha_q <= 0:
        raise DomainError("alpha must be positive")
    atoms = nu.all_atoms()
    if alpha_q == 1:
        return nu
    if method == "auto":
        method = "sturm" if len(atoms) <= 12 else "bisect"
    if method == "sturm":
        roots, weights = _roots_sturm(atoms, alpha_q)
    elif method == "bisect":
        roots, weights = _roots_bisect(atoms, float(alpha_q))
    else:
        raise DomainError(f"unknown root method {method!r}")
    if any(w <= 0 for w in weights):
        raise RootIsolationError("non-positive residue; result is not a probability measure")
    total = sum(weights)
    if abs(total - 1.0) > MASS_TOL:
        raise RootIsolationError(f"residues sum to {total!r}")
    return Measure(tuple(zip(roots, weights)))


@dataclass(frozen=True)
class BooleanPowerReport:
    alpha: float
    grid: tuple[float, ...]
    measured: tuple[float, ...]
    predicted: tuple[float, ...]
    skipped: tuple[float, ...]
    max_deviation: float

    @property
    def valid_interval(self) -> tuple[float, float] | None:
        return (min(self.grid), max(self.grid)) if self.grid else None

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "grid": list(self.grid),
            "measured": list(self.measured),
            "predicted": list(self.predicted),
            "skipped": list(self.skipped),
            "max_deviation": self.max_deviation,
        }


def verify_boolean_power_vf(nu: Measure, alpha, m_grid: Iterable[float],
                            config: Config = DEFAULT) -> BooleanPowerReport:
    """Compare the pseudo-variance of ``nu^{boolean alpha}``, measured directly,
    with ``alpha*V(m/alpha) + m^2 (1/alpha - 1)`` where V is measured on nu.

    Grid points where either route has no valid bracket are skipped and
    listed; the surviving points show where the identity is usable.
    """
    a = float(alpha)
    mu = boolean_power_atomic(nu, alpha)
    dom_nu = means_domain(nu, config)
    dom_mu = means_domain(mu, config)
    grid, measured, predicted, skipped = [], [], [], []
    for m in m_grid:
        m = float(m)
        try:
            lhs = pseudo_variance_numeric(mu, m, config, dom_mu)
            rhs = a * pseudo_variance_numeric(nu, m / a, config, dom_nu) + m * m * (1.0 / a - 1.0)
        except DomainError:
            skipped.append(m)
            continue
        grid.append(m)
        measured.append(lhs)
        predicted.append(rhs)
    if not grid:
        raise DomainError("no grid point lies inside both domains of means")
    dev = max(abs(u - v) for u, v in zip(measured, predicted))
    return BooleanPowerReport(a, tuple(grid), tuple(measured), tuple(predicted), tuple(skipped), dev)
