"""Dense exact matrices over a cyclotomic field.

An :class:`ExactMatrix` keeps an integer array of shape ``(rows, cols, phi(N))``
holding power-basis numerators, plus one positive common denominator.  The
numerators are ``int64`` whenever every value fits comfortably and Python
integers (``dtype=object``) otherwise, so nothing can silently overflow.

Tensor products follow the Kronecker convention: basis vectors of
``V (x) W`` are ordered lexicographically.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .scalar import (
    CycloScalar,
    ScalarLike,
    as_scalar,
    common_order,
    cyclotomic_field,
    default_order,
)

MAX_ENTRIES = 2**20
_INT64_SAFE = 2**62
_EIGEN_TOL = 1e-9


class SingularMatrixError(ArithmeticError):
    """Raised when an exact inverse is requested for a singular matrix."""


class MatrixSizeError(ValueError):
    """Raised when a result would exceed ``MAX_ENTRIES`` entries."""


def _check_size(rows: int, cols: int) -> None:
    if rows * cols > MAX_ENTRIES:
        raise MatrixSizeError(f"{rows}x{cols} matrix exceeds the {MAX_ENTRIES}-entry cap")


def _max_abs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return max(abs(int(v)) for v in arr.flat)
    return int(np.abs(arr).max())


def _as_object(arr: np.ndarray) -> np.ndarray:
    return arr if arr.dtype == object else arr.astype(object)


def _fits(bound: int) -> bool:
    return bound < _INT64_SAFE


class ExactMatrix:
    """Immutable dense matrix with entries in Q(zeta_N)."""

    __slots__ = ("order", "_num", "_den")

    def __init__(self, rows: Sequence[Sequence[ScalarLike]], order: int | None = None):
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        orders = [v.order for r in rows for v in r if isinstance(v, CycloScalar)]
        if order is None:
            order = common_order(*orders) if orders else default_order()
        else:
            order = common_order(order, *orders)
        scalars = [[as_scalar(v, order) for v in r] for r in rows]
        den = math.lcm(*(s.den for r in scalars for s in r))
        deg = cyclotomic_field(order).degree
        num = np.empty((len(rows), ncols, deg), dtype=object)
        for i, r in enumerate(scalars):
            for j, s in enumerate(r):
                num[i, j] = [c * (den // s.den) for c in s.num]
        self._set(order, num, den)

    def _set(self, order: int, num: np.ndarray, den: int) -> None:
        if den <= 0:
            raise ValueError("denominator must be positive")
        if num.dtype == object:
            g = reduce(math.gcd, (int(v) for v in num.flat), den)
        else:
            g = math.gcd(int(np.gcd.reduce(num, axis=None)) if num.size else 0, den)
        if g > 1:
            num = num // g
            den //= g
        if num.dtype == object and _fits(_max_abs(num)):
            num = num.astype(np.int64)
        elif num.dtype != object and num.dtype != np.int64:
            num = num.astype(np.int64)
        num.setflags(write=False)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_num", num)
        object.__setattr__(self, "_den", int(den))

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def _from_arrays(cls, order: int, num: np.ndarray, den: int) -> ExactMatrix:
        self = cls.__new__(cls)
        self._set(order, num, den)
        return self

    # --- constructors ---

    @classmethod
    def identity(cls, n: int, order: int | None = None) -> ExactMatrix:
        return cls.diag([1] * n, order)

    @classmethod
    def zeros(cls, rows: int, cols: int, order: int | None = None) -> ExactMatrix:
        order = default_order() if order is None else order
        _check_size(rows, cols)
        deg = cyclotomic_field(order).degree
        return cls._from_arrays(order, np.zeros((rows, cols, deg), dtype=np.int64), 1)

    @classmethod
    def diag(cls, values: Sequence[ScalarLike], order: int | None = None) -> ExactMatrix:
        n = len(values)
        rows = [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return cls(rows, order)

    @classmethod
    def permutation(cls, perm: Sequence[int], order: int | None = None) -> ExactMatrix:
        """Matrix with a 1 at ``(i, perm[i])``, so ``(P v)[i] = v[perm[i]]``."""
        n = len(perm)
        if sorted(perm) != list(range(n)):
            raise ValueError(f"{perm} is not a permutation of range({n})")
        order = default_order() if order is None else order
        deg = cyclotomic_field(order).degree
        num = np.zeros((n, n, deg), dtype=np.int64)
        for i, p in enumerate(perm):
            num[i, p, 0] = 1
        return cls._from_arrays(order, num, 1)

    # --- shape and access ---

    @property
    def rows(self) -> int:
        return self._num.shape[0]

    @property
    def cols(self) -> int:
        return self._num.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx: tuple[int, int]) -> CycloScalar:
        i, j = idx
        return CycloScalar(self.order, (int(v) for v in self._num[i, j]), self._den)

    def entries(self) -> list[CycloScalar]:
        """All entries in row-major order."""
        return [self[i, j] for i in range(self.rows) for j in range(self.cols)]

    def tolist(self) -> list[list[CycloScalar]]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def promote(self, order: int) -> ExactMatrix:
        if order == self.order:
            return self
        emb = cyclotomic_field(self.order).embedding_matrix(order)
        num = _as_object(self._num) if not _fits(_max_abs(self._num) * self._num.shape[2]) else self._num
        return ExactMatrix._from_arrays(order, np.tensordot(num, emb, axes=([2], [0])), self._den)

    def _aligned(self, other: ExactMatrix) -> tuple[ExactMatrix, ExactMatrix]:
        if self.order == other.order:
            return self, other
        n = common_order(self.order, other.order)
        return self.promote(n), other.promote(n)

    # --- comparison ---

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        a, b = self._aligned(other)
        return a._den == b._den and np.array_equal(a._num, b._num)

    def __hash__(self) -> int:
        f = cyclotomic_field(self.order)
        traces = np.tensordot(_as_object(self._num), np.array(f.trace_vector, dtype=object), axes=([2], [0]))
        return hash((self.shape, tuple(Fraction(int(t), self._den * f.degree) for t in traces.flat)))

    def key(self) -> tuple:
        """Hashable exact fingerprint, valid for matrices of the same field order."""
        data = self._num.tobytes() if self._num.dtype != object else tuple(self._num.flat)
        return (self._num.shape, self._den, data)

    def is_zero(self) -> bool:
        return not self._num.any()

    def is_identity(self) -> bool:
        return self.is_square() and self == ExactMatrix.identity(self.rows, self.order)

    # --- arithmetic ---

    def _combine(self, other: ExactMatrix, sign: int) -> ExactMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        a, b = self._aligned(other)
        den = math.lcm(a._den, b._den)
        fa, fb = den // a._den, den // b._den
        bound = _max_abs(a._num) * fa + _max_abs(b._num) * fb
        na, nb = a._num, b._num
        if not _fits(bound):
            na, nb = _as_object(na), _as_object(nb)
        return ExactMatrix._from_arrays(a.order, na * fa + sign * (nb * fb), den)

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self._combine(other, 1)

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self._combine(other, -1)

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix._from_arrays(self.order, -self._num, self._den)

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        _check_size(self.rows, other.cols)
        a, b = self._aligned(other)
        table = cyclotomic_field(a.order).mul_table
        deg = table.shape[0]
        bound = _max_abs(a._num) * _max_abs(b._num) * a.cols * deg * deg * max(1, int(np.abs(table).max()))
        na, nb, tb = a._num, b._num, table
        if not _fits(bound):
            na, nb, tb = _as_object(na), _as_object(nb), _as_object(table)
        prod = np.tensordot(na, nb, axes=([1], [0]))  # (r, deg, c, deg)
        num = np.tensordot(prod, tb, axes=([1, 3], [0, 1]))
        return ExactMatrix._from_arrays(a.order, num, a._den * b._den)

    def scale(self, s: ScalarLike) -> ExactMatrix:
        s = as_scalar(s, self.order)
        m = self.promote(s.order)
        table = cyclotomic_field(s.order).mul_table
        mult = np.tensordot(table, np.array(s.num, dtype=object), axes=([1], [0]))  # (a, c)
        deg = table.shape[0]
        bound = _max_abs(m._num) * max(abs(v) for v in s.num) * deg * deg * max(1, int(np.abs(table).max()))
        num = m._num
        if _fits(bound):
            mult = mult.astype(np.int64)
        else:
            num = _as_object(num)
        return ExactMatrix._from_arrays(s.order, np.tensordot(num, mult, axes=([2], [0])), m._den * s.den)

    def __mul__(self, s: ScalarLike) -> ExactMatrix:
        if isinstance(s, ExactMatrix):
            return NotImplemented
        return self.scale(s)

    __rmul__ = __mul__

    def __pow__(self, exp: int) -> ExactMatrix:
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        if exp < 0:
            return self.inverse() ** (-exp)
        result = ExactMatrix.identity(self.rows, self.order)
        base = self
        while exp:
            if exp & 1:
                result = result @ base
            base = base @ base
            exp >>= 1
        return result

    def transpose(self) -> ExactMatrix:
        return ExactMatrix._from_arrays(self.order, self._num.transpose(1, 0, 2).copy(), self._den)

    @property
    def T(self) -> ExactMatrix:
        return self.transpose()

    def conjugate(self) -> ExactMatrix:
        if self.order <= 2:
            return self
        gal = cyclotomic_field(self.order).galois_matrix(self.order - 1)
        num = self._num
        if not _fits(_max_abs(num) * num.shape[2] * max(1, int(np.abs(gal).max()))):
            num, gal = _as_object(num), _as_object(gal)
        return ExactMatrix._from_arrays(self.order, np.tensordot(num, gal, axes=([2], [0])), self._den)

    def adjoint(self) -> ExactMatrix:
        """Conjugate transpose."""
        return self.conjugate().transpose()

    def is_unitary(self) -> bool:
        return self.is_square() and (self @ self.adjoint()).is_identity()

    def trace(self) -> CycloScalar:
        if not self.is_square():
            raise ValueError("trace of a non-square matrix")
        total = CycloScalar.rational(0, self.order)
        for i in range(self.rows):
            total = total + self[i, i]
        return total

    # --- elimination ---

    def _row_reduce(self) -> tuple[list[list[CycloScalar]], list[int]]:
        """Reduced row echelon form over the field, with pivot columns."""
        m = self.tolist()
        pivots: list[int] = []
        r = 0
        for c in range(self.cols):
            p = next((i for i in range(r, self.rows) if m[i][c]), None)
            if p is None:
                continue
            m[r], m[p] = m[p], m[r]
            inv = m[r][c].inverse()
            m[r] = [v * inv for v in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [x - f * y for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return m, pivots

    def rank(self) -> int:
        return len(self._row_reduce()[1])

    def is_singular(self) -> bool:
        if not self.is_square():
            raise ValueError("singularity is only defined for square matrices")
        return self.rank() < self.rows

    def inverse(self) -> ExactMatrix:
        """Exact inverse by Gauss-Jordan elimination on ``[A | I]``."""
        if not self.is_square():
            raise ValueError(f"cannot invert a {self.rows}x{self.cols} matrix")
        n = self.rows
        aug = hstack([self, ExactMatrix.identity(n, self.order)])
        m, pivots = aug._row_reduce()
        for stage in range(n):
            if stage >= len(pivots) or pivots[stage] != stage:
                raise SingularMatrixError(f"zero pivot at elimination stage {stage} (column {stage})")
        inv = ExactMatrix([row[n:] for row in m], self.order)
        if not (self @ inv).is_identity():
            raise ArithmeticError("inverse self-check failed")
        return inv

    # --- conversion ---

    def to_complex(self) -> np.ndarray:
        """Floating-point copy, for reporting and eigenvalue proposals only."""
        f = cyclotomic_field(self.order)
        roots = np.exp(2j * np.pi * np.arange(f.degree) / self.order)
        return np.tensordot(self._num.astype(float), roots, axes=([2], [0])) / self._den

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}x{self.cols}, order={self.order})"

    def __str__(self) -> str:
        cells = [[_short(self[i, j]) for j in range(self.cols)] for i in range(self.rows)]
        width = max(len(c) for r in cells for c in r)
        return "\n".join(" ".join(c.rjust(width) for c in r) for r in cells)


def _short(s: CycloScalar) -> str:
    if s.is_rational():
        return str(s.as_fraction())
    z = s.embed_complex()
    return f"{z.real:+.4f}{z.imag:+.4f}i"


def hstack(blocks: Sequence[ExactMatrix]) -> ExactMatrix:
    order = common_order(*(b.order for b in blocks))
    blocks = [b.promote(order) for b in blocks]
    den = math.lcm(*(b._den for b in blocks))
    parts = [_as_object(b._num) * (den // b._den) for b in blocks]
    return ExactMatrix._from_arrays(order, np.concatenate(parts, axis=1), den)


def kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Kronecker product: ``kron(a, b)[i*rb + k, j*cb + l] = a[i, j] * b[k, l]``."""
    rows, cols = a.rows * b.rows, a.cols * b.cols
    _check_size(rows, cols)
    a, b = a._aligned(b)
    table = cyclotomic_field(a.order).mul_table
    deg = table.shape[0]
    na, nb, tb = a._num, b._num, table
    if not _fits(_max_abs(na) * _max_abs(nb) * deg * deg * max(1, int(np.abs(table).max()))):
        na, nb, tb = _as_object(na), _as_object(nb), _as_object(table)
    outer = na[:, None, :, None, :, None] * nb[None, :, None, :, None, :]
    num = np.tensordot(outer, tb, axes=([4, 5], [0, 1]))  # (ra, rb, ca, cb, deg)
    return ExactMatrix._from_arrays(a.order, num.reshape(rows, cols, deg), a._den * b._den)


def kron_all(factors: Iterable[ExactMatrix]) -> ExactMatrix:
    return reduce(kron, factors)


def direct_sum(blocks: Sequence[ExactMatrix]) -> ExactMatrix:
    """Block-diagonal matrix of square blocks, in the given order."""
    if not blocks:
        raise ValueError("direct_sum of an empty list")
    for k, b in enumerate(blocks):
        if not b.is_square():
            raise ValueError(f"block {k} is {b.rows}x{b.cols}, not square")
    order = common_order(*(b.order for b in blocks))
    blocks = [b.promote(order) for b in blocks]
    n = sum(b.rows for b in blocks)
    _check_size(n, n)
    den = math.lcm(*(b._den for b in blocks))
    deg = cyclotomic_field(order).degree
    num = np.zeros((n, n, deg), dtype=object)
    at = 0
    for b in blocks:
        num[at : at + b.rows, at : at + b.rows] = _as_object(b._num) * (den // b._den)
        at += b.rows
    return ExactMatrix._from_arrays(order, num, den)


def identity_power(d: int, k: int, order: int | None = None) -> ExactMatrix:
    """Identity on ``V^(x)k`` for ``dim V = d``."""
    return ExactMatrix.identity(d**k, order)


def annihilation_check(m: ExactMatrix, roots: Sequence[CycloScalar]) -> bool:
    """True iff ``prod (m - r I)`` vanishes and every factor ``m - r I`` is singular."""
    if not roots:
        raise ValueError("annihilation_check needs at least one root")
    if not m.is_square():
        raise ValueError("annihilation_check needs a square matrix")
    eye = ExactMatrix.identity(m.rows, m.order)
    prod = eye
    for r in roots:
        shifted = m - eye.scale(r)
        if not shifted.is_singular():
            return False
        prod = prod @ shifted
    return prod.is_zero()


def propose_roots_of_unity(m: ExactMatrix, order: int | None = None, tol: float = _EIGEN_TOL) -> tuple[list[CycloScalar], list[complex]]:
    """Numerically propose eigenvalues that are N-th roots of unity.

    Returns the matched roots (exact, each listed once) and the numeric
    eigenvalues that matched no root.  Nothing here is a verdict; feed the
    proposals to an exact check.
    """
    order = m.order if order is None else order
    eigs = np.linalg.eigvals(m.to_complex())
    roots = np.exp(2j * np.pi * np.arange(order) / order)
    matched: list[int] = []
    unmatched: list[complex] = []
    for lam in eigs:
        dist = np.abs(roots - lam)
        k = int(np.argmin(dist))
        if dist[k] < tol:
            if k not in matched:
                matched.append(k)
        else:
            unmatched.append(complex(lam))
    return [CycloScalar.from_exponents(order, {k: 1}) for k in sorted(matched)], unmatched


# --- matrix file format ---

def matrix_to_json(m: ExactMatrix) -> dict:
    return {
        "cyclotomic_order": m.order,
        "rows": m.rows,
        "cols": m.cols,
        "entries": [s.to_terms() for s in m.entries()],
    }


def matrix_from_json(doc: dict, order: int | None = None) -> ExactMatrix:
    try:
        n = int(doc["cyclotomic_order"]) if order is None else order
        rows, cols = int(doc["rows"]), int(doc["cols"])
        entries = doc["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix document: {exc}") from None
    if len(entries) != rows * cols:
        raise ValueError(f"matrix document has {len(entries)} entries, expected {rows * cols}")
    _check_size(rows, cols)
    scalars = [CycloScalar.from_terms(t, n) for t in entries]
    return ExactMatrix([scalars[i * cols : (i + 1) * cols] for i in range(rows)], n)


def matrix_to_decimal_json(m: ExactMatrix, digits: int = 12) -> dict:
    """Human-readable decimal export; not an exact record."""
    z = m.to_complex()
    return {
        "non_authoritative": True,
        "note": "decimal approximation for inspection; use the exact export for any check",
        "rows": m.rows,
        "cols": m.cols,
        "entries": [[round(float(v.real), digits), round(float(v.imag), digits)] for v in z.flat],
    }


def save_matrix(m: ExactMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_json(m), fh)


def load_matrix(path) -> ExactMatrix:
    with open(path, encoding="utf-8") as fh:
        return matrix_from_json(json.load(fh))
