"""Exact checks: gYBE, far commutativity, braid relations, eigenvalues, group closure.

Every verdict is decided in exact arithmetic.  The ``*_violation`` helpers
return ``None`` on success and a witness ``(relation, row, col)`` otherwise:
``relation`` numbers the failing identity and ``(row, col)`` is the first
entry, in row-major order, where its two sides differ.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence, Union

from .linalg import ExactMatrix, SingularMatrixError, annihilation_check
from .rep import BraidRep, generator_matrix
from .scalar import CycloScalar

DEFAULT_CLOSURE_CAP = 100_000

Witness = tuple[int, int, int]


class ShapeError(ValueError):
    pass


def _first_difference(a: ExactMatrix, b: ExactMatrix) -> tuple[int, int] | None:
    if a == b:
        return None
    diff = a - b
    for r in range(diff.rows):
        for c in range(diff.cols):
            if diff[r, c]:
                return r, c
    raise AssertionError("matrices differ but no entry does")


def _check_shape(R: ExactMatrix, d: int, m: int) -> None:
    if d < 1 or m < 1:
        raise ShapeError(f"d and m must be positive, got d={d}, m={m}")
    if R.shape != (d**m, d**m):
        raise ShapeError(f"R is {R.rows}x{R.cols}, expected {d**m}x{d**m} for d={d}, m={m}")


def gybe_violation(R: ExactMatrix, d: int, m: int) -> Witness | None:
    """Compare ``(R(x)I)(I(x)R)(R(x)I)`` against ``(I(x)R)(R(x)I)(I(x)R)``."""
    _check_shape(R, d, m)
    a = generator_matrix(R, d, 1, m + 1)
    b = generator_matrix(R, d, 2, m + 1)
    hit = _first_difference(a @ b @ a, b @ a @ b)
    return None if hit is None else (0, *hit)


def check_gybe(R: ExactMatrix, d: int, m: int) -> bool:
    return gybe_violation(R, d, m) is None


def far_commutativity_violation(R: ExactMatrix, d: int, m: int) -> Witness | None:
    """``R_s1 R_sj = R_sj R_s1`` on ``V^(x)(j-1+m)`` for every ``2 < j < m+1``."""
    _check_shape(R, d, m)
    for j in range(3, m + 1):
        width = j - 1 + m
        a = generator_matrix(R, d, 1, width)
        b = generator_matrix(R, d, j, width)
        hit = _first_difference(a @ b, b @ a)
        if hit is not None:
            return (j, *hit)
    return None


def check_far_commutativity(R: ExactMatrix, d: int, m: int) -> bool:
    return far_commutativity_violation(R, d, m) is None


def braid_relation_violation(rep: BraidRep) -> Witness | None:
    """Relation number ``k`` (1-based) is the braid relation between ``s_k`` and ``s_{k+1}``;
    commutation of ``s_k, s_l`` with ``l >= k+2`` is numbered ``100*k + l``."""
    g = rep.generators
    for k in range(len(g) - 1):
        hit = _first_difference(g[k] @ g[k + 1] @ g[k], g[k + 1] @ g[k] @ g[k + 1])
        if hit is not None:
            return (k + 1, *hit)
    for k in range(len(g)):
        for l in range(k + 2, len(g)):
            hit = _first_difference(g[k] @ g[l], g[l] @ g[k])
            if hit is not None:
                return (100 * (k + 1) + (l + 1), *hit)
    return None


def check_braid_relations(rep: BraidRep) -> bool:
    return braid_relation_violation(rep) is None


@dataclass(frozen=True)
class EigenCertificate:
    certified: tuple[CycloScalar, ...]
    rejected: tuple[CycloScalar, ...]
    # prod over certified roots of (R - lambda I) is exactly zero
    annihilates: bool


def certify_eigenvalues(R: ExactMatrix, candidates: Sequence[CycloScalar]) -> EigenCertificate:
    """Keep the candidates ``lambda`` with ``R - lambda I`` singular, exactly."""
    if not R.is_square():
        raise ShapeError("eigenvalues need a square matrix")
    if not candidates:
        raise ValueError("certify_eigenvalues needs at least one candidate")
    eye = ExactMatrix.identity(R.rows, R.order)
    uniq: list[CycloScalar] = []
    for lam in candidates:
        if lam not in uniq:
            uniq.append(lam)
    certified, rejected = [], []
    for lam in uniq:
        (certified if (R - eye.scale(lam)).is_singular() else rejected).append(lam)
    annihilates = bool(certified) and annihilation_check(R, certified)
    return EigenCertificate(tuple(certified), tuple(rejected), annihilates)


@dataclass(frozen=True)
class GroupClosureReport:
    generator_count: int
    projective: bool
    order: Union[int, str]
    cap: int
    elements: tuple[ExactMatrix, ...] = field(default=(), repr=False)

    @property
    def finite(self) -> bool:
        return isinstance(self.order, int)

    def element_sample(self, k: int = 5) -> list[ExactMatrix]:
        return list(self.elements[:k])

    def to_json(self) -> dict:
        return {
            "check": "group_closure",
            "result": self.order,
            "generator_count": self.generator_count,
            "projective": self.projective,
            "cap": self.cap,
        }


def projective_normalize(m: ExactMatrix) -> ExactMatrix:
    """Scale so the first nonzero entry in row-major order is 1."""
    for r in range(m.rows):
        for c in range(m.cols):
            v = m[r, c]
            if v:
                return m if v == 1 else m.scale(v.inverse())
    raise ValueError("cannot normalize the zero matrix")


def group_closure(
    generators: Sequence[ExactMatrix], cap: int = DEFAULT_CLOSURE_CAP, projective: bool = False
) -> GroupClosureReport:
    """Breadth-first enumeration of the group generated by ``generators``.

    Stops with order ``"exceeded_cap"`` once more than ``cap`` distinct
    elements are found.  In a finite group, closure under right
    multiplication by the generators already gives closure under inverses.
    """
    if not generators:
        raise ValueError("need at least one generator")
    if cap < 1:
        raise ValueError("cap must be positive")
    n = generators[0].rows
    for k, g in enumerate(generators):
        if g.shape != (n, n):
            raise ShapeError(f"generator {k} has shape {g.shape}, expected {(n, n)}")
        if g.is_singular():
            raise SingularMatrixError(f"generator {k} is not invertible")
    order = generators[0].order
    gens = [g.promote(order) if g.order != order else g for g in generators]
    if projective:
        gens = [projective_normalize(g) for g in gens]
    norm = projective_normalize if projective else (lambda m: m)

    eye = ExactMatrix.identity(n, order)
    seen = {eye.key(): eye}
    queue = deque([eye])
    while queue:
        e = queue.popleft()
        for g in gens:
            p = norm(e @ g)
            k = p.key()
            if k not in seen:
                seen[k] = p
                if len(seen) > cap:
                    return GroupClosureReport(len(gens), projective, "exceeded_cap", cap)
                queue.append(p)
    return GroupClosureReport(len(gens), projective, len(seen), cap, tuple(seen.values()))


def verify_closure(report: GroupClosureReport, generators: Sequence[ExactMatrix]) -> bool:
    """Re-check that the reported element set is closed under each generator."""
    if not report.finite:
        return False
    norm = projective_normalize if report.projective else (lambda m: m)
    keys = {e.key() for e in report.elements}
    gens = [norm(g) for g in generators]
    return len(keys) == report.order and all(norm(e @ g).key() in keys for e in report.elements for g in gens)
