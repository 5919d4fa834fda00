"""Moment, boolean cumulant and free cumulant sequences.

All sequences are 1-indexed: ``values[0]`` holds m_1, r_1 or kappa_1. The
zeroth entries (m_0 = 1, r_0 = kappa_0 = 0) are implicit and never stored.

Boolean cumulants are the coefficients of ``eta(w) = 1 - 1/M(w)`` with
``M(w) = 1 + sum m_n w^n``, equivalently of the K-transform
``K(z) = sum r_n z^{1-n}``. Free cumulants satisfy
``m_n = sum_k kappa_k [w^{n-k}] M(w)^k``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import DomainError
from .exact import TruncatedSeries, format_rational, series_reciprocal, to_rational

__all__ = [
    "CumulantSequence",
    "HankelReport",
    "moments_to_boolean",
    "boolean_to_moments",
    "moments_to_free",
    "free_to_moments",
    "boolean_power",
    "free_power",
    "bp_map",
    "bp_inverse",
    "hankel_psd_check",
    "convert",
    "moments",
    "boolean",
    "free",
]

KINDS = ("moments", "boolean", "free")


@dataclass(frozen=True)
class CumulantSequence:
    """A tagged, 1-indexed exact sequence."""

    kind: str
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown sequence kind {self.kind!r}")
        object.__setattr__(self, "values", tuple(to_rational(v) for v in self.values))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> Fraction:
        """One-based: ``seq[1]`` is the first stored value, ``seq[0]`` the implicit 1 or 0."""
        if n == 0:
            return Fraction(1) if self.kind == "moments" else Fraction(0)
        if n < 0:
            raise IndexError(n)
        return self.values[n - 1]

    @property
    def order(self) -> int:
        return len(self.values)

    def to_json(self) -> dict:
        return {"kind": self.kind, "values": [format_rational(v) for v in self.values]}

    @classmethod
    def from_json(cls, data: dict) -> "CumulantSequence":
        try:
            return cls(data["kind"], tuple(to_rational(v) for v in data["values"]))
        except KeyError as exc:
            raise DomainError(f"sequence JSON lacks field {exc}") from exc


def moments(values: Iterable) -> CumulantSequence:
    return CumulantSequence("moments", tuple(values))


def boolean(values: Iterable) -> CumulantSequence:
    return CumulantSequence("boolean", tuple(values))


def free(values: Iterable) -> CumulantSequence:
    return CumulantSequence("free", tuple(values))


def _values(seq, kind: str) -> tuple[Fraction, ...]:
    if isinstance(seq, CumulantSequence):
        if seq.kind != kind:
            raise DomainError(f"expected a {kind} sequence, got {seq.kind}")
        return seq.values
    return tuple(to_rational(v) for v in seq)


def _moment_series(m: tuple[Fraction, ...]) -> TruncatedSeries:
    return TruncatedSeries((1,) + m, len(m), "w")


def moments_to_boolean(m) -> CumulantSequence:
    m = _values(m, "moments")
    if not m:
        return boolean(())
    eta = 1 - series_reciprocal(_moment_series(m))
    return boolean(eta.coeffs[1:])


def boolean_to_moments(r) -> CumulantSequence:
    r = _values(r, "boolean")
    if not r:
        return moments(())
    one_minus_eta = TruncatedSeries((1,) + tuple(-x for x in r), len(r), "w")
    return moments(series_reciprocal(one_minus_eta).coeffs[1:])


def _moment_powers(m: list[Fraction], n_max: int) -> list[list[Fraction]]:
    """Coefficients of M(w)^k for k = 0..n_max, truncated at degree n_max."""
    base = [Fraction(1)] + m[:n_max] + [Fraction(0)] * (n_max - len(m))
    powers = [[Fraction(1)] + [Fraction(0)] * n_max]
    for _ in range(n_max):
        prev = powers[-1]
        nxt = [Fraction(0)] * (n_max + 1)
        for i, a in enumerate(prev):
            if a == 0:
                continue
            for j in range(n_max + 1 - i):
                nxt[i + j] += a * base[j]
        powers.append(nxt)
    return powers


def moments_to_free(m) -> CumulantSequence:
    m = list(_values(m, "moments"))
    n_max = len(m)
    # kappa_n only needs [w^{n-k}] M^k for k < n, i.e. moments below n.
    powers = _moment_powers(m, n_max)
    kappa: list[Fraction] = []
    for n in range(1, n_max + 1):
        s = sum((kappa[k - 1] * powers[k][n - k] for k in range(1, n)), Fraction(0))
        kappa.append(m[n - 1] - s)
    return free(kappa)


def free_to_moments(k) -> CumulantSequence:
    kappa = list(_values(k, "free"))
    n_max = len(kappa)
    m: list[Fraction] = []
    for n in range(1, n_max + 1):
        # powers of M built from m_1..m_{n-1}; degree n-k <= n-1 suffices
        powers = _moment_powers(m, n - 1) if n > 1 else [[Fraction(1)]]
        s = sum((kappa[k - 1] * powers[k][n - k] for k in range(1, n)), Fraction(0))
        m.append(kappa[n - 1] + s)
    return moments(m)


def _positive(alpha, name: str) -> Fraction:
    alpha = to_rational(alpha)
    if alpha <= 0:
        raise DomainError(f"{name} must be positive, got {alpha}")
    return alpha


def boolean_power(r, alpha) -> CumulantSequence:
    """Cumulants of the boolean convolution power: scale every r_n by alpha."""
    alpha = _positive(alpha, "alpha")
    return boolean(x * alpha for x in _values(r, "boolean"))


def free_power(k, alpha) -> CumulantSequence:
    alpha = _positive(alpha, "alpha")
    return free(x * alpha for x in _values(k, "free"))


def _nonnegative_t(t) -> Fraction:
    t = to_rational(t)
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    return t


def bp_map(m, t) -> CumulantSequence:
    """Moments of ``(nu^{free 1+t})^{boolean 1/(1+t)}`` from the moments of nu."""
    t = _nonnegative_t(t)
    m = moments(_values(m, "moments"))
    if t == 0:
        return m
    kappa = free_power(moments_to_free(m), 1 + t)
    r = boolean_power(moments_to_boolean(free_to_moments(kappa)), 1 / (1 + t))
    return boolean_to_moments(r)


def bp_inverse(m, t) -> CumulantSequence:
    """Inverse of :func:`bp_map`: boolean power 1+t, then free power 1/(1+t)."""
    t = _nonnegative_t(t)
    m = moments(_values(m, "moments"))
    if t == 0:
        return m
    r = boolean_power(moments_to_boolean(m), 1 + t)
    kappa = free_power(moments_to_free(boolean_to_moments(r)), 1 / (1 + t))
    return free_to_moments(kappa)


_CONVERTERS = {
    ("moments", "boolean"): moments_to_boolean,
    ("boolean", "moments"): boolean_to_moments,
    ("moments", "free"): moments_to_free,
    ("free", "moments"): free_to_moments,
}


def convert(seq: CumulantSequence, to: str) -> CumulantSequence:
    """Convert between any two kinds, routing through moments if needed."""
    if to not in KINDS:
        raise DomainError(f"unknown sequence kind {to!r}")
    if seq.kind == to:
        return seq
    if (seq.kind, to) in _CONVERTERS:
        return _CONVERTERS[seq.kind, to](seq)
    return _CONVERTERS["moments", to](_CONVERTERS[seq.kind, "moments"](seq))


@dataclass(frozen=True)
class HankelReport:
    is_psd: bool
    determinants: tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {
            "is_psd": self.is_psd,
            "determinants": [format_rational(d) for d in self.determinants],
        }


def _det(a: list[list[Fraction]]) -> Fraction:
    a = [row[:] for row in a]
    n = len(a)
    det = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if a[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            a[i], a[piv] = a[piv], a[i]
            det = -det
        det *= a[i][i]
        for r in range(i + 1, n):
            f = a[r][i] / a[i][i]
            if f:
                for c in range(i, n):
                    a[r][c] -= f * a[i][c]
    return det


def _is_psd(a: list[list[Fraction]]) -> bool:
    # symmetric elimination; a zero pivot forces its whole row to vanish
    a = [row[:] for row in a]
    while a:
        p = a[0][0]
        if p < 0:
            return False
        if p == 0:
            if any(x != 0 for x in a[0]):
                return False
            a = [row[1:] for row in a[1:]]
            continue
        a = [
            [a[i][j] - a[i][0] * a[0][j] / p for j in range(1, len(a))]
            for i in range(1, len(a))
        ]
    return True


def hankel_psd_check(s, size: int) -> HankelReport:
    """Leading principal minors of the Hankel matrix ``[s_{i+j}]``.

    ``s`` is 0-indexed here (``s[0]`` is the top-left entry). ``is_psd``
    is decided by exact symmetric elimination, which agrees with the
    minors test whenever the minors are all positive.
    """
    s = [to_rational(v) for v in s]
    if size < 1:
        raise DomainError("size must be at least 1")
    if len(s) < 2 * size - 1:
        raise DomainError(f"need {2 * size - 1} entries for size {size}, got {len(s)}")
    h = [[s[i + j] for j in range(size)] for i in range(size)]
    minors = tuple(_det([row[:k] for row in h[:k]]) for k in range(1, size + 1))
    return HankelReport(_is_psd(h), minors)
