"""Exact algebra of variance and pseudo-variance functions.

A variance function is a polynomial V(m) together with the mean m0 of the
generating measure. The pseudo-variance ``m*V(m)/(m - m0)`` is stored as a
reduced ratio of polynomials because affine changes of variable take it
out of the polynomial class.

Formulas are handled as global polynomial identities; the neighbourhood of
the mean where they describe an actual family is only checked numerically
in :mod:`cskbool.measures`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .cumulants import CumulantSequence
from .errors import DomainError
from .exact import Polynomial, format_rational, poly_derivative_power, to_rational

__all__ = [
    "VarianceFunction",
    "PseudoVarianceExpr",
    "CubicClass",
    "vf_to_pseudo",
    "vf_free_power",
    "vf_boolean_power",
    "pvf_boolean_power",
    "pvf_affine",
    "vf_bt",
    "vf_mixed_power",
    "lagrange_boolean_cumulants",
    "free_cumulants_from_vf",
    "cubic_class_check",
    "cubic_membership",
    "vf_bijection_pair",
]

_M = Polynomial.x()


@dataclass(frozen=True)
class VarianceFunction:
    poly: Polynomial
    m0: Fraction = Fraction(0)

    def __post_init__(self):
        poly = self.poly if isinstance(self.poly, Polynomial) else Polynomial(self.poly)
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "m0", to_rational(self.m0))
        if not poly(self.m0) > 0:
            raise DomainError(f"V(m0) must be positive, got V({self.m0}) = {poly(self.m0)}")

    def __call__(self, m):
        return self.poly(m)

    def to_json(self) -> dict:
        return {"poly": self.poly.to_json(), "m0": format_rational(self.m0)}

    @classmethod
    def from_json(cls, data: dict) -> "VarianceFunction":
        return cls(Polynomial.from_json(data["poly"]), to_rational(data.get("m0", 0)))


@dataclass(frozen=True)
class PseudoVarianceExpr:
    """Reduced ratio ``numerator/denominator`` with a monic denominator.

    ``left_sided`` marks expressions obtained through a reflection; they
    describe a family indexed by means below m0.
    """

    numerator: Polynomial
    denominator: Polynomial = field(default_factory=lambda: Polynomial([1]))
    left_sided: bool = False

    def __post_init__(self):
        num, den = self.numerator, self.denominator
        if den.is_zero():
            raise DomainError("pseudo-variance denominator is identically zero")
        g = num.gcd(den) if not num.is_zero() else den.monic()
        if g.degree > 0:
            num, den = num // g, den // g
        lead = den.leading
        object.__setattr__(self, "numerator", num / lead)
        object.__setattr__(self, "denominator", den / lead)

    def __call__(self, m):
        return self.numerator(m) / self.denominator(m)

    def is_polynomial(self) -> bool:
        return self.denominator.degree == 0

    def __add__(self, other: "PseudoVarianceExpr") -> "PseudoVarianceExpr":
        if isinstance(other, Polynomial):
            other = PseudoVarianceExpr(other)
        return PseudoVarianceExpr(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
            self.left_sided,
        )

    def to_json(self) -> dict:
        return {
            "numerator": self.numerator.to_json(),
            "denominator": self.denominator.to_json(),
            "left_sided": self.left_sided,
        }


def _positive(alpha) -> Fraction:
    alpha = to_rational(alpha)
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return alpha


def _nonnegative(t) -> Fraction:
    t = to_rational(t)
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    return t


def _centered_square(m0: Fraction) -> Polynomial:
    """The polynomial m(m - m0)."""
    return _M * (_M - m0)


def vf_to_pseudo(V: VarianceFunction) -> PseudoVarianceExpr:
    return PseudoVarianceExpr(_M * V.poly, _M - V.m0)


def vf_free_power(V: VarianceFunction, alpha) -> VarianceFunction:
    """``alpha * V(m/alpha)`` with mean ``alpha*m0``."""
    alpha = _positive(alpha)
    return VarianceFunction(V.poly.scale_argument(1 / alpha) * alpha, alpha * V.m0)


def vf_boolean_power(V: VarianceFunction, alpha) -> VarianceFunction:
    alpha = _positive(alpha)
    new_m0 = alpha * V.m0
    poly = V.poly.scale_argument(1 / alpha) * alpha + _centered_square(new_m0) * (1 / alpha - 1)
    return VarianceFunction(poly, new_m0)


def pvf_boolean_power(Vp: PseudoVarianceExpr, alpha) -> PseudoVarianceExpr:
    alpha = _positive(alpha)
    num = Vp.numerator.scale_argument(1 / alpha) * alpha
    den = Vp.denominator.scale_argument(1 / alpha)
    return PseudoVarianceExpr(num, den, Vp.left_sided) + (_M * _M) * (1 / alpha - 1)


def pvf_affine(Vp: PseudoVarianceExpr, gamma, delta) -> PseudoVarianceExpr:
    """Pseudo-variance of the law of ``(X - gamma)/delta``.

    Returns ``m/(delta*(delta*m + gamma)) * Vp(delta*m + gamma)``. A negative
    ``delta`` flips the side of the family.
    """
    gamma, delta = to_rational(gamma), to_rational(delta)
    if delta == 0:
        raise DomainError("delta must be nonzero")
    lin = Polynomial([gamma, delta])
    num = _M * Vp.numerator.compose(lin)
    den = lin * delta * Vp.denominator.compose(lin)
    return PseudoVarianceExpr(num, den, Vp.left_sided != (delta < 0))


def vf_bt(V: VarianceFunction, t) -> VarianceFunction:
    """Variance function of the image under the Bercovici-Pata semigroup."""
    t = _nonnegative(t)
    return VarianceFunction(V.poly + _centered_square(V.m0) * t, V.m0)


_MIXED = ("free_then_boolean", "boolean_then_free")


def vf_mixed_power(V: VarianceFunction, alpha, order: str) -> VarianceFunction:
    """Variance function after a free power 1/alpha and boolean power alpha.

    ``free_then_boolean`` is ``(nu^{free 1/alpha})^{boolean alpha}``;
    ``boolean_then_free`` swaps the two operations.
    """
    alpha = _positive(alpha)
    if order not in _MIXED:
        raise DomainError(f"order must be one of {_MIXED}, got {order!r}")
    coef = 1 / alpha - 1 if order == "free_then_boolean" else 1 - 1 / alpha
    return VarianceFunction(V.poly + _centered_square(V.m0) * coef, V.m0)


def _lagrange_coefficients(phi: Polynomial, m0: Fraction, N: int) -> list[Fraction]:
    out = [m0]
    for n in range(1, N):
        out.append(poly_derivative_power(phi, n, n - 1, m0) / factorial(n))
    return out[:N]


def lagrange_boolean_cumulants(V: VarianceFunction, N: int) -> CumulantSequence:
    """Boolean cumulants r_1..r_N of the generating measure of V.

    ``r_1 = m0`` and ``r_{n+1} = (1/n!) d^{n-1}/dm^{n-1} (V(m) + m(m-m0))^n``
    at ``m = m0``.
    """
    if N < 1:
        raise DomainError("N must be at least 1")
    phi = V.poly + _centered_square(V.m0)
    return CumulantSequence("boolean", tuple(_lagrange_coefficients(phi, V.m0, N)))


def free_cumulants_from_vf(V: VarianceFunction, N: int) -> CumulantSequence:
    """Free cumulants ``kappa_{n+1} = (1/n!) d^{n-1} V^n`` at m0."""
    if N < 1:
        raise DomainError("N must be at least 1")
    return CumulantSequence("free", tuple(_lagrange_coefficients(V.poly, V.m0, N)))


@dataclass(frozen=True)
class CubicClass:
    in_V: bool
    in_V_inf: bool

    def to_json(self) -> dict:
        return {"in_V": self.in_V, "in_V_inf": self.in_V_inf}


def cubic_class_check(a, b, c) -> CubicClass:
    """Membership of ``1 + a m + b m^2 + c m^3`` in the compactly supported
    class and in its dilation-stable subclass. The linear coefficient does
    not enter either criterion."""
    to_rational(a)
    b, c = to_rational(b), to_rational(c)
    return CubicClass((b + 1) ** 3 >= 27 * c * c, b**3 >= 27 * c * c)


def cubic_membership(V: VarianceFunction) -> CubicClass | None:
    """Cubic criterion when V is centered, standardized and of degree <= 3."""
    if V.m0 != 0 or V.poly.degree > 3 or V.poly[0] != 1:
        return None
    return cubic_class_check(V.poly[1], V.poly[2], V.poly[3])


def vf_bijection_pair(V: VarianceFunction, direction: str) -> VarianceFunction:
    """``V + m^2`` (forward) or ``V - m^2`` (inverse), for centered V.

    The inverse image is returned even when it leaves the admissible class;
    callers that care run :func:`cubic_membership` on the result.
    """
    if V.m0 != 0:
        raise DomainError("the bijection pair is only defined for m0 = 0")
    if direction == "forward":
        return VarianceFunction(V.poly + _M * _M, V.m0)
    if direction == "inverse":
        return VarianceFunction(V.poly - _M * _M, V.m0)
    raise DomainError(f"direction must be 'forward' or 'inverse', got {direction!r}")
