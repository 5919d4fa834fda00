"""Exact rational, polynomial and truncated power series arithmetic.

Rationals are :class:`fractions.Fraction`. Polynomials and truncated series
store their coefficients low degree first, so ``coeffs[k]`` multiplies the
k-th power of the variable. Every object here is immutable.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

from .errors import DomainError, RootIsolationError

__all__ = [
    "Rational",
    "to_rational",
    "format_rational",
    "parse_rational_list",
    "Polynomial",
    "TruncatedSeries",
    "series_mul",
    "series_reciprocal",
    "series_reversion",
    "series_compose",
    "poly_derivative_power",
    "sturm_sequence",
    "sturm_count",
    "isolate_real_roots",
    "refine_root",
]

Rational = Fraction


def to_rational(value) -> Fraction:
    """Convert ints, Fractions, floats, decimal strings or ``"p/q"`` strings.

    Floats convert exactly (every finite double is a dyadic rational).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise DomainError(f"cannot convert {value!r} to a rational")
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"malformed rational {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def format_rational(q: Fraction) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is one."""
    q = to_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational_list(values) -> list[Fraction]:
    """Parse a JSON array, a comma separated string, or any iterable."""
    if isinstance(values, str):
        values = [v for v in values.split(",") if v.strip()]
    return [to_rational(v) for v in values]


def _trim(coeffs: Iterable[Fraction]) -> tuple[Fraction, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Polynomial:
    """Univariate polynomial with exact rational coefficients.

    >>> p = Polynomial([1, 2])          # 1 + 2m
    >>> (p * p).coeffs
    (Fraction(1, 1), Fraction(4, 1), Fraction(4, 1))
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = ()):
        self._c = _trim(to_rational(c) for c in coeffs)

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c=1) -> "Polynomial":
        return cls([0] * degree + [c])

    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Polynomial":
        out = cls([1])
        for r in roots:
            out = out * cls([-to_rational(r), 1])
        return out

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    @property
    def leading(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        return self._c[k] if 0 <= k < len(self._c) else Fraction(0)

    def __len__(self) -> int:
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == _trim([to_rational(other)])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        return f"Polynomial([{', '.join(format_rational(c) for c in self._c)}])"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        terms = []
        for k, c in enumerate(self._c):
            if c == 0:
                continue
            s = format_rational(c)
            if k == 0:
                terms.append(s)
            else:
                mono = "m" if k == 1 else f"m^{k}"
                terms.append(mono if c == 1 else f"{s}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial([other])

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        n = max(len(self._c), len(other._c))
        return Polynomial(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self._c)

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            s = to_rational(other)
            return Polynomial(c * s for c in self._c)
        if not self._c or not other._c:
            return Polynomial()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if a == 0:
                continue
            for j, b in enumerate(other._c):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Polynomial":
        s = to_rational(scalar)
        if s == 0:
            raise ZeroDivisionError("polynomial divided by zero")
        return Polynomial(c / s for c in self._c)

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Polynomial([1]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x):
        """Horner evaluation; works for rationals, floats and polynomials."""
        acc = 0
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self._c):
            acc = acc * x + float(c)
        return acc

    def derivative(self, k: int = 1) -> "Polynomial":
        c = list(self._c)
        for _ in range(k):
            c = [i * c[i] for i in range(1, len(c))]
        return Polynomial(c)

    def compose(self, inner: "Polynomial") -> "Polynomial":
        return self(inner)

    def scale_argument(self, s) -> "Polynomial":
        """Return ``p(s*m)``."""
        s = to_rational(s)
        return Polynomial(c * s**k for k, c in enumerate(self._c))

    def shift(self, a) -> "Polynomial":
        """Return ``p(m + a)`` (Taylor shift)."""
        a = to_rational(a)
        c = list(self._c)
        n = len(c)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] += a * c[j + 1]
        return Polynomial(c)

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._c)
        dq = other.degree
        lead = other.leading
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            coef = rem[k] / lead
            if coef == 0:
                continue
            quot[k - dq] = coef
            for j, b in enumerate(other._c):
                rem[k - dq + j] -= coef * b
        return Polynomial(quot), Polynomial(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[1]

    def monic(self) -> "Polynomial":
        return self / self.leading if self._c else self

    def gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic greatest common divisor (zero if both are zero)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self._c]

    @classmethod
    def from_json(cls, values) -> "Polynomial":
        return cls(parse_rational_list(values))


class TruncatedSeries:
    """Power series known exactly through degree ``order``.

    ``var`` tags the formal variable (``"w"`` for 1/z expansions, ``"m"`` for
    expansions in the mean) so unrelated series are not mixed by accident.
    """

    __slots__ = ("_c", "order", "var")

    def __init__(self, coeffs: Iterable, order: int | None = None, var: str = "w"):
        c = [to_rational(x) for x in coeffs]
        if order is None:
            order = len(c) - 1
        if order < 0:
            raise ValueError("series order must be non-negative")
        c = (c + [Fraction(0)] * (order + 1))[: order + 1]
        self._c = tuple(c)
        self.order = order
        self.var = var

    @classmethod
    def one(cls, order: int, var: str = "w") -> "TruncatedSeries":
        return cls([1], order, var)

    @classmethod
    def variable(cls, order: int, var: str = "w") -> "TruncatedSeries":
        return cls([0, 1], order, var)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    def __getitem__(self, k: int) -> Fraction:
        return self._c[k]

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.var, self.order, self._c) == (other.var, other.order, other._c)

    def __hash__(self) -> int:
        return hash((self.var, self.order, self._c))

    def __repr__(self) -> str:
        body = ", ".join(format_rational(c) for c in self._c)
        return f"TruncatedSeries([{body}], order={self.order}, var={self.var!r})"

    def _check(self, other: "TruncatedSeries") -> int:
        if self.var != other.var:
            raise DomainError(f"variable mismatch: {self.var!r} vs {other.var!r}")
        return min(self.order, other.order)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot raise the order of a truncated series")
        return TruncatedSeries(self._c[: order + 1], order, self.var)

    def __add__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            c = list(self._c)
            c[0] += to_rational(other)
            return TruncatedSeries(c, self.order, self.var)
        n = self._check(other)
        return TruncatedSeries((self._c[k] + other._c[k] for k in range(n + 1)), n, self.var)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries((-c for c in self._c), self.order, self.var)

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-other)

    def __rsub__(self, other) -> "TruncatedSeries":
        return (-self) + other

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        s = to_rational(other)
        return TruncatedSeries((c * s for c in self._c), self.order, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "TruncatedSeries":
        result = TruncatedSeries.one(self.order, self.var)
        base = self
        while n:
            if n & 1:
                result = series_mul(result, base)
            base = series_mul(base, base)
            n >>= 1
        return result

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self._c]


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the smaller of the two orders."""
    n = a._check(b)
    ac, bc = a.coeffs, b.coeffs
    out = [Fraction(0)] * (n + 1)
    for i in range(n + 1):
        ai = ac[i]
        if ai == 0:
            continue
        for j in range(n + 1 - i):
            out[i + j] += ai * bc[j]
    return TruncatedSeries(out, n, a.var)


def series_reciprocal(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse, solved coefficient by coefficient."""
    c = a.coeffs
    if c[0] == 0:
        raise DomainError("series with zero constant term has no reciprocal")
    inv0 = 1 / c[0]
    b = [inv0]
    for n in range(1, a.order + 1):
        s = sum((c[k] * b[n - k] for k in range(1, n + 1)), Fraction(0))
        b.append(-s * inv0)
    return TruncatedSeries(b, a.order, a.var)


def series_compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """``outer(inner(w))`` for ``inner`` without constant term."""
    n = outer._check(inner)
    if inner[0] != 0:
        raise DomainError("inner series must have zero constant term")
    acc = TruncatedSeries([outer[n]], n, outer.var)
    inner = inner.truncate(n)
    for k in range(n - 1, -1, -1):
        acc = series_mul(acc, inner) + outer[k]
    return acc


def series_reversion(a: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse b with ``a(b(w)) = w`` through order N.

    Coefficients are fixed one degree at a time: with b_1..b_{n-1} known, the
    w^n coefficient of a(b) is ``a_1*b_n`` plus terms not involving b_n.
    """
    c = a.coeffs
    if c[0] != 0:
        raise DomainError("reversion requires a zero constant term")
    if a.order < 1 or c[1] == 0:
        raise DomainError("reversion requires a nonzero linear coefficient")
    n_max = a.order
    b = [Fraction(0), 1 / c[1]] + [Fraction(0)] * (n_max - 1)
    for n in range(2, n_max + 1):
        partial = TruncatedSeries(b[:n], n, a.var)
        comp = series_compose(a.truncate(n), partial)
        b[n] = -comp[n] / c[1]
    return TruncatedSeries(b, n_max, a.var)


def poly_derivative_power(phi: Polynomial, n: int, k: int, m0) -> Fraction:
    """k-th derivative of ``phi(m)**n`` evaluated at ``m0``, exactly.

    Expands ``phi(m0 + u)**n`` only through ``u**k`` and reads off
    ``k! * [u^k]``.
    """
    if n < 1:
        raise DomainError("n must be a positive integer")
    if k < 0:
        raise DomainError("k must be non-negative")
    shifted = TruncatedSeries(phi.shift(m0).coeffs, k, "m")
    return factorial(k) * (shifted**n)[k]


# --- real root isolation ---------------------------------------------------


def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    """Sturm chain p, p', -rem(...), ... of a square-free polynomial."""
    if p.degree < 1:
        return [p]
    seq = [p, p.derivative()]
    while True:
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(-r)
    return seq


def _sign_changes(seq: Sequence[Polynomial], x: Fraction) -> int:
    signs = [v for v in (q(x) for q in seq) if v != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))


def sturm_count(seq: Sequence[Polynomial], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in the half-open interval (a, b]."""
    return _sign_changes(seq, a) - _sign_changes(seq, b)


def _root_bound(p: Polynomial) -> Fraction:
    lead = abs(p.leading)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(p: Polynomial, max_splits: int = 4000) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals (a, b], each holding exactly one real root of p.

    ``p`` must be square-free; a repeated root raises RootIsolationError.
    """
    if p.degree < 1:
        return []
    g = p.gcd(p.derivative())
    if g.degree > 0:
        raise RootIsolationError("polynomial has a repeated root")
    seq = sturm_sequence(p)
    bound = _root_bound(p)
    stack = [(-bound, bound)]
    out: list[tuple[Fraction, Fraction]] = []
    splits = 0
    while stack:
        a, b = stack.pop()
        n = sturm_count(seq, a, b)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        splits += 1
        if splits > max_splits:
            raise RootIsolationError("root isolation did not terminate")
        mid = (a + b) / 2
        stack.append((a, mid))
        stack.append((mid, b))
    out.sort()
    return out


def refine_root(p: Polynomial, a: Fraction, b: Fraction, width: Fraction) -> Fraction:
    """Exact bisection of an isolating interval (a, b] down to ``width``."""
    fb = p(b)
    if fb == 0:
        return b
    # track the sign at b: a may itself be a root of a neighbouring interval
    while b - a > width:
        mid = (a + b) / 2
        fm = p(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (fb > 0):
            b = mid
        else:
            a = mid
    return (a + b) / 2
