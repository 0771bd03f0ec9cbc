"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis ``1, z, ..., z^(phi(N)-1)`` with
``z = exp(2 pi i / N)``, as integer numerators over one positive common
denominator.  Every value is reduced modulo the N-th cyclotomic polynomial
on construction, so two equal field elements of the same order always have
identical representations.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping, Union

import numpy as np

DEFAULT_ORDER = 24
MAX_ORDER = 360
ORDER_ENV_VAR = "GYBE_FIELD_ORDER"


class FieldOrderError(ValueError):
    """Raised when a cyclotomic order is invalid or exceeds ``MAX_ORDER``."""


def default_order() -> int:
    """Field order used when none is given; ``GYBE_FIELD_ORDER`` overrides 24."""
    raw = os.environ.get(ORDER_ENV_VAR)
    if not raw:
        return DEFAULT_ORDER
    try:
        order = int(raw)
    except ValueError:
        raise FieldOrderError(f"{ORDER_ENV_VAR}={raw!r} is not an integer") from None
    _check_order(order)
    return order


def _check_order(order: int) -> None:
    if order < 1:
        raise FieldOrderError(f"cyclotomic order must be positive, got {order}")
    if order > MAX_ORDER:
        raise FieldOrderError(f"cyclotomic order {order} exceeds the cap {MAX_ORDER}")


def common_order(*orders: int) -> int:
    """Least common multiple of field orders, subject to ``MAX_ORDER``."""
    out = 1
    for n in orders:
        out = math.lcm(out, n)
    _check_order(out)
    return out


# --- integer polynomial helpers (coefficient lists, lowest degree first) ---

def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for shift in range(len(out) - 1, -1, -1):
        q, r = divmod(num[shift + len(den) - 1], lead)
        assert r == 0
        out[shift] = q
        for k, c in enumerate(den):
            num[shift + k] -= q * c
    assert not any(num), "inexact polynomial division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def _totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def _mobius(n: int) -> int:
    sign, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            sign = -sign
        p += 1
    return -sign if n > 1 else sign


def _ramanujan_sum(c: int, n: int) -> int:
    # trace of zeta_n^c down to Q
    m = n // math.gcd(c, n)
    return _mobius(m) * _totient(n) // _totient(m)


@dataclass(frozen=True, eq=False)
class CyclotomicField:
    """Precomputed reduction tables for Q(zeta_N)."""

    order: int
    degree: int
    modulus: tuple[int, ...]
    power_table: np.ndarray = field(repr=False)
    mul_table: np.ndarray = field(repr=False)
    trace_vector: tuple[int, ...] = field(repr=False)
    units: tuple[int, ...] = field(repr=False)
    _cos: tuple[Fraction, ...] = field(repr=False)
    _sin: tuple[Fraction, ...] = field(repr=False)
    # sparse python copy of power_table for the scalar code paths
    _rows: tuple[tuple[tuple[int, int], ...], ...] = field(repr=False, default=())

    def reduce_exponents(self, coeffs: Mapping[int, int]) -> list[int]:
        """Power-basis integer vector of ``sum c_k z^k`` for integer ``c_k``."""
        out = [0] * self.degree
        for k, c in coeffs.items():
            if c:
                for j, e in self._rows[k % self.order]:
                    out[j] += c * e
        return out

    def galois_matrix(self, k: int) -> np.ndarray:
        """Matrix of the automorphism z -> z^k acting on power-basis row vectors."""
        return _galois_matrix(self.order, k % self.order)

    def embedding_matrix(self, target: int) -> np.ndarray:
        """Inclusion Q(zeta_N) -> Q(zeta_M) for N | M, on row vectors."""
        return _embedding_matrix(self.order, target)


@lru_cache(maxsize=None)
def cyclotomic_field(order: int) -> CyclotomicField:
    _check_order(order)
    modulus = cyclotomic_polynomial(order)
    deg = len(modulus) - 1
    table = np.zeros((order, deg), dtype=np.int64)
    vec = [0] * deg
    vec[0] = 1
    for e in range(order):
        table[e] = vec
        # multiply by z and reduce with the monic modulus
        top = vec[-1]
        vec = [0] + vec[:-1]
        if top:
            vec = [v - top * m for v, m in zip(vec, modulus[:-1])]
    mul = np.zeros((deg, deg, deg), dtype=np.int64)
    for a in range(deg):
        for b in range(deg):
            mul[a, b] = table[(a + b) % order]
    units = tuple(k for k in range(1, order + 1) if math.gcd(k, order) == 1)
    trace = tuple(_ramanujan_sum(c, order) for c in range(deg))
    import mpmath

    with mpmath.workdps(50):
        cos = tuple(Fraction(str(mpmath.cos(2 * mpmath.pi * c / order))) for c in range(deg))
        sin = tuple(Fraction(str(mpmath.sin(2 * mpmath.pi * c / order))) for c in range(deg))
    table.setflags(write=False)
    mul.setflags(write=False)
    rows = tuple(tuple((j, int(v)) for j, v in enumerate(r) if v) for r in table)
    return CyclotomicField(order, deg, modulus, table, mul, trace, units, cos, sin, rows)


@lru_cache(maxsize=None)
def _galois_matrix(order: int, k: int) -> np.ndarray:
    f = cyclotomic_field(order)
    mat = np.array([f.power_table[(c * k) % order] for c in range(f.degree)], dtype=np.int64)
    mat.setflags(write=False)
    return mat


@lru_cache(maxsize=None)
def _embedding_matrix(order: int, target: int) -> np.ndarray:
    if target % order:
        raise FieldOrderError(f"Q(zeta_{order}) does not embed in Q(zeta_{target})")
    src = cyclotomic_field(order)
    dst = cyclotomic_field(target)
    step = target // order
    mat = np.array([dst.power_table[(c * step) % target] for c in range(src.degree)], dtype=np.int64)
    mat.setflags(write=False)
    return mat


ScalarLike = Union["CycloScalar", int, Fraction]


class CycloScalar:
    """An exact element of Q(zeta_N).

    >>> z = root_of_unity(1, 3)
    >>> z + z * z
    CycloScalar(24, -1)
    """

    __slots__ = ("order", "num", "den")

    order: int
    num: tuple[int, ...]
    den: int

    def __init__(self, order: int, num: Iterable[int], den: int = 1):
        num = tuple(int(c) for c in num)
        f = cyclotomic_field(order)
        if len(num) != f.degree:
            raise ValueError(f"expected {f.degree} power-basis coefficients, got {len(num)}")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = tuple(-c for c in num), -den
        g = math.gcd(den, *num)
        if g > 1:
            num, den = tuple(c // g for c in num), den // g
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("CycloScalar is immutable")

    # --- constructors ---

    @classmethod
    def rational(cls, value: int | Fraction, order: int | None = None) -> CycloScalar:
        order = default_order() if order is None else order
        value = Fraction(value)
        deg = cyclotomic_field(order).degree
        return cls(order, [value.numerator] + [0] * (deg - 1), value.denominator)

    @classmethod
    def from_exponents(cls, order: int, coeffs: Mapping[int, int | Fraction]) -> CycloScalar:
        """Build ``sum c_k z_N^k``; exponents may be any integers."""
        fracs = {k: Fraction(c) for k, c in coeffs.items()}
        den = math.lcm(1, *(c.denominator for c in fracs.values()))
        ints = {}
        for k, c in fracs.items():
            ints[k % order] = ints.get(k % order, 0) + c.numerator * (den // c.denominator)
        return cls(order, cyclotomic_field(order).reduce_exponents(ints), den)

    @classmethod
    def from_terms(cls, terms: Iterable[Mapping[str, int]], order: int) -> CycloScalar:
        """Parse the serialized ``[{"p", "q", "k"}, ...]`` term list."""
        coeffs: dict[int, Fraction] = {}
        for term in terms:
            try:
                p, q, k = int(term["p"]), int(term["q"]), int(term["k"])
            except (KeyError, TypeError, ValueError):
                raise ValueError(f"malformed scalar term {term!r}") from None
            if q <= 0:
                raise ValueError(f"scalar term denominator must be positive: {term!r}")
            coeffs[k % order] = coeffs.get(k % order, Fraction(0)) + Fraction(p, q)
        return cls.from_exponents(order, coeffs)

    def to_terms(self) -> list[dict[str, int]]:
        out = []
        for k, c in enumerate(self.num):
            if c:
                frac = Fraction(c, self.den)
                out.append({"p": frac.numerator, "q": frac.denominator, "k": k})
        return out

    # --- promotion ---

    def promote(self, order: int) -> CycloScalar:
        if order == self.order:
            return self
        emb = _embedding_matrix(self.order, order)
        num = [0] * emb.shape[1]
        for c, coef in enumerate(self.num):
            if coef:
                for j, e in enumerate(emb[c]):
                    if e:
                        num[j] += coef * int(e)
        return CycloScalar(order, num, self.den)

    def _coerce(self, other) -> tuple[CycloScalar, CycloScalar] | None:
        if isinstance(other, CycloScalar):
            if other.order == self.order:
                return self, other
            n = common_order(self.order, other.order)
            return self.promote(n), other.promote(n)
        if isinstance(other, (int, Rational)):
            return self, CycloScalar.rational(Fraction(other), self.order)
        return None

    # --- predicates ---

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.num[0], self.den)

    def __eq__(self, other) -> bool:
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a.den == b.den and a.num == b.num

    def __hash__(self) -> int:
        # normalized trace is invariant under field promotion, so equal values hash equal
        f = cyclotomic_field(self.order)
        tr = sum(c * t for c, t in zip(self.num, f.trace_vector))
        return hash(Fraction(tr, self.den * f.degree))

    # --- arithmetic ---

    def __neg__(self) -> CycloScalar:
        return CycloScalar(self.order, [-c for c in self.num], self.den)

    def __pos__(self) -> CycloScalar:
        return self

    def __add__(self, other) -> CycloScalar:
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycloScalar(a.order, [x * b.den + y * a.den for x, y in zip(a.num, b.num)], a.den * b.den)

    __radd__ = __add__

    def __sub__(self, other) -> CycloScalar:
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycloScalar(a.order, [x * b.den - y * a.den for x, y in zip(a.num, b.num)], a.den * b.den)

    def __rsub__(self, other) -> CycloScalar:
        return (-self).__add__(other)

    def __mul__(self, other) -> CycloScalar:
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycloScalar(a.order, _poly_mulmod(a.order, a.num, b.num), a.den * b.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> CycloScalar:
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a * b.inverse()

    def __rtruediv__(self, other) -> CycloScalar:
        return self.inverse() * other

    def __pow__(self, exp: int) -> CycloScalar:
        if not isinstance(exp, int):
            return NotImplemented
        if exp < 0:
            return self.inverse() ** (-exp)
        result = CycloScalar.rational(1, self.order)
        base = self
        while exp:
            if exp & 1:
                result = result * base
            base = base * base
            exp >>= 1
        return result

    def galois(self, k: int) -> CycloScalar:
        """Apply the field automorphism z -> z^k (k coprime to the order)."""
        if math.gcd(k, self.order) != 1:
            raise ValueError(f"{k} is not a unit modulo {self.order}")
        mat = _galois_matrix(self.order, k % self.order)
        num = [0] * len(self.num)
        for c, coef in enumerate(self.num):
            if coef:
                for j, e in enumerate(mat[c]):
                    if e:
                        num[j] += coef * int(e)
        return CycloScalar(self.order, num, self.den)

    def conjugate(self) -> CycloScalar:
        return self.galois(self.order - 1) if self.order > 2 else self

    def inverse(self) -> CycloScalar:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CycloScalar.rational(1 / self.as_fraction(), self.order)
        # product of the non-trivial Galois conjugates; self * cofactor is the field norm
        cofactor = CycloScalar.rational(1, self.order)
        for k in cyclotomic_field(self.order).units:
            if k % self.order != 1:
                cofactor = cofactor * self.galois(k)
        norm = self * cofactor
        assert norm.is_rational()
        return cofactor * CycloScalar.rational(1 / norm.as_fraction(), self.order)

    # --- reporting ---

    def embed_complex(self) -> complex:
        """Floating-point value, for reporting only."""
        f = cyclotomic_field(self.order)
        re = sum((c * cs for c, cs in zip(self.num, f._cos) if c), Fraction(0))
        im = sum((c * sn for c, sn in zip(self.num, f._sin) if c), Fraction(0))
        return complex(float(re / self.den), float(im / self.den))

    def __complex__(self) -> complex:
        return self.embed_complex()

    def __repr__(self) -> str:
        parts = []
        for k, c in enumerate(self.num):
            if not c:
                continue
            coef = Fraction(c, self.den)
            if k == 0:
                parts.append(str(coef))
            else:
                mono = "z" if k == 1 else f"z^{k}"
                parts.append(mono if coef == 1 else f"-{mono}" if coef == -1 else f"{coef}*{mono}")
        body = " + ".join(parts).replace("+ -", "- ") or "0"
        return f"CycloScalar({self.order}, {body})"


def _poly_mulmod(order: int, a: tuple[int, ...], b: tuple[int, ...]) -> list[int]:
    f = cyclotomic_field(order)
    deg = f.degree
    conv = [0] * (2 * deg - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    conv[i + j] += x * y
    out = conv[:deg]
    rows = f._rows
    for e in range(deg, 2 * deg - 1):
        c = conv[e]
        if c:
            for j, v in rows[e % order]:
                out[j] += c * v
    return out


def as_scalar(value: ScalarLike, order: int | None = None) -> CycloScalar:
    if isinstance(value, CycloScalar):
        return value if order is None else value.promote(common_order(value.order, order))
    return CycloScalar.rational(Fraction(value), order)


def root_of_unity(p: int, q: int, order: int | None = None) -> CycloScalar:
    """``exp(2 pi i p / q)``.

    Lives in Q(zeta_lcm(N, q)) for the default order N, or in Q(zeta_q) when
    that lcm is over ``MAX_ORDER``.
    """
    if q <= 0:
        raise ValueError(f"root_of_unity needs a positive denominator, got {q}")
    base = default_order() if order is None else order
    n = math.lcm(base, q)
    if n > MAX_ORDER and order is None:
        # the default field is only a preference; Q(zeta_q) always suffices
        n = q
    _check_order(n)
    return CycloScalar.from_exponents(n, {(p * (n // q)) % n: 1})


def embed_complex(a: CycloScalar) -> complex:
    return a.embed_complex()
