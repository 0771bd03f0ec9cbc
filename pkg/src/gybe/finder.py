"""Fusion-ring level analysis: Frobenius-Perron dimensions and gYBE objects.

An object ``X`` is a gYBE object with respect to distinct simples ``S`` when
``X (x) s`` is exactly the multiplicity-free sum of all of ``S`` for every
``s`` in ``S``.  Everything here needs only the fusion table.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from .fusion import FusionRing, ObjectExpr
from .linalg import ExactMatrix

POWER_ITER_MAX = 100_000
RAYLEIGH_TOL = 1e-13
INTEGER_SNAP_TOL = 1e-9
INTEGER_SNAP_MAX = 2**10
MULTIPLICATIVE_TOL = 1e-12


class DimensionError(ArithmeticError):
    """Raised when power iteration fails to converge."""


@dataclass(frozen=True)
class GybeCertificate:
    x: ObjectExpr
    s: tuple[str, ...]
    decompositions: Mapping[str, tuple[str, ...]] = field(repr=False)
    # some summand of x is not itself in s; allowed, but worth flagging
    x_outside_s: bool = False

    @property
    def d(self) -> int:
        return len(self.s)

    def to_json(self) -> dict:
        return {
            "object": list(self.x.summands),
            "set": list(self.s),
            "d": self.d,
            "decompositions": {i: list(v) for i, v in self.decompositions.items()},
            "object_outside_set": self.x_outside_s,
        }


@dataclass(frozen=True)
class GybeRefusal:
    """Why ``(x, s)`` is not a gYBE pair; ``label`` is the first failing element of ``s``."""

    reason: str
    label: str | None = None
    decomposition: Mapping[str, int] | None = None

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class FPDims:
    """Frobenius-Perron dimensions.

    ``values`` are floats; ``exact`` holds the labels whose dimension was
    certified to be an integer by an exact eigenvector or determinant check.
    """

    values: Mapping[str, float]
    exact: Mapping[str, int]
    error_bound: float

    def __getitem__(self, label: str) -> float | int:
        return self.exact.get(label, self.values[label])

    def is_exact(self, label: str) -> bool:
        return label in self.exact


def fp_dimensions(ring: FusionRing) -> FPDims:
    labels = ring.labels
    mats = {a: ring.fusion_matrix(a) for a in labels}
    # the unit contributes the identity, so the sum is primitive for a connected ring
    total = sum(mats.values()).astype(float)
    v = np.ones(len(labels))
    v /= np.linalg.norm(v)
    prev = None
    for _ in range(POWER_ITER_MAX):
        w = total @ v
        rq = float(v @ w)
        w /= np.linalg.norm(w)
        if prev is not None and abs(rq - prev) <= RAYLEIGH_TOL * max(1.0, abs(rq)) and np.abs(w - v).max() < 1e-12:
            v = w
            break
        prev, v = rq, w
    else:
        raise DimensionError(f"power iteration did not converge in {POWER_ITER_MAX} steps")
    # the eigenvector converges only linearly; polish it by inverse iteration at the Rayleigh quotient
    shift = float(v @ total @ v) * (1 + 1e-10)
    for _ in range(3):
        try:
            v = np.linalg.solve(total - shift * np.eye(len(labels)), v)
        except np.linalg.LinAlgError:
            break
        v /= np.linalg.norm(v)
    v = np.abs(v)
    v = v / v[ring.index(ring.unit)]
    values = {a: float(v[k]) for k, a in enumerate(labels)}

    for a in labels:
        for b in labels:
            lhs = values[a] * values[b]
            rhs = sum(values[c] for c in ring.fuse(a, b))
            if abs(lhs - rhs) > MULTIPLICATIVE_TOL * max(1.0, lhs):
                raise DimensionError(f"dimensions not multiplicative at {a} x {b}: {lhs} vs {rhs}")

    candidates = {}
    for a, val in values.items():
        n = round(val)
        if abs(val - n) < INTEGER_SNAP_TOL and 1 <= n <= INTEGER_SNAP_MAX:
            candidates[a] = n
    exact: dict[str, int] = {}
    if len(candidates) == len(labels):
        # an exact positive common eigenvector is the Perron vector
        vec = np.array([candidates[a] for a in labels], dtype=np.int64)
        if all(np.array_equal(mats[a] @ vec, candidates[a] * vec) for a in labels):
            exact = dict(candidates)
    else:
        for a, n in candidates.items():
            shifted = ExactMatrix((mats[a] - n * np.eye(len(labels), dtype=np.int64)).tolist())
            if shifted.is_singular():
                exact[a] = n
    return FPDims(values, exact, error_bound=1e-9)


def _check_labels(ring: FusionRing, labels: Sequence[str]) -> None:
    for a in labels:
        if a not in ring.labels:
            raise ValueError(f"unknown label {a!r}")


def is_gybe_object(ring: FusionRing, x: ObjectExpr, s: Sequence[str]) -> GybeCertificate | GybeRefusal:
    x.check(ring)
    s = tuple(s)
    _check_labels(ring, s)
    if len(set(s)) != len(s):
        return GybeRefusal(f"set {list(s)} repeats a label")
    if len(s) < 2:
        return GybeRefusal(f"set {list(s)} has fewer than two labels")
    target = Counter(s)
    decomps = {}
    for i in s:
        got = ring.fuse_objects(x.summands, [i])
        if got != target:
            return GybeRefusal(
                f"{x} x {i} = {_fmt(got, ring)} is not the sum over {list(s)}",
                label=i,
                decomposition=dict(got),
            )
        decomps[i] = tuple(c for c in ring.labels if c in got)
    return GybeCertificate(x, s, decomps, x_outside_s=any(a not in s for a in x.summands))


def _fmt(counter: Counter, ring: FusionRing) -> str:
    parts = []
    for c in ring.labels:
        n = counter.get(c, 0)
        if n:
            parts.append(c if n == 1 else f"{n}*{c}")
    return "+".join(parts) or "0"


def find_gybe_objects(ring: FusionRing, max_summands: int) -> list[GybeCertificate]:
    """All gYBE pairs ``(x, s)`` with ``x`` a sum of at most ``max_summands`` simples.

    Output is sorted lexicographically by the label positions of ``x`` then ``s``.
    """
    if max_summands < 1:
        raise ValueError("max_summands must be at least 1")
    if len(ring.labels) > 16 and max_summands > 2:
        raise ValueError(
            f"{len(ring.labels)} labels with max_summands={max_summands} is too many candidates; "
            "call is_gybe_object on specific pairs instead"
        )
    pos = {a: k for k, a in enumerate(ring.labels)}
    found: list[GybeCertificate] = []
    for size in range(1, min(max_summands, len(ring.labels)) + 1):
        for xs in combinations(ring.labels, size):
            x = ObjectExpr(xs)
            # any valid s equals x (x) i for each of its members i, so s is determined by one member
            seen: set[tuple[str, ...]] = set()
            for i in ring.labels:
                prod = ring.fuse_objects(xs, [i])
                if i not in prod or any(n > 1 for n in prod.values()) or len(prod) < 2:
                    continue
                s = tuple(c for c in ring.labels if c in prod)
                if s in seen:
                    continue
                seen.add(s)
                cert = is_gybe_object(ring, x, s)
                if isinstance(cert, GybeCertificate):
                    found.append(cert)
    found.sort(key=lambda c: ([pos[a] for a in c.x.summands], [pos[a] for a in c.s]))
    return found


def check_dim_integrality(cert: GybeCertificate, dims: FPDims) -> bool:
    """Whether the dimension of ``x`` equals ``|s|``."""
    if all(dims.is_exact(a) for a in cert.x.summands):
        return sum(dims.exact[a] for a in cert.x.summands) == cert.d
    total = math.fsum(dims.values[a] for a in cert.x.summands)
    return abs(total - cert.d) < 1e-9


def eigenvalue_bound_l(ring: FusionRing, x: ObjectExpr) -> int:
    """``sum_Y dim Hom(Y, x (x) x)``, counting ordered summand pairs with multiplicity."""
    x.check(ring)
    return sum(ring.fuse_objects(x.summands, x.summands).values())
