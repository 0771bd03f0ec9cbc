"""Fusion rings and braided category data (F- and R-symbols).

Only multiplicity-free fusion rules are supported: every ``N_ab^c`` is 0 or 1.
F-matrices carry explicit row and column channel orderings; these orderings
are data and are never re-sorted.

Conventions for ``F^{abc}_d``: columns are indexed by the left-associated
internal label ``f`` (``f in a(x)b``, ``d in f(x)c``), rows by the
right-associated label ``e`` (``e in b(x)c``, ``d in a(x)e``).
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from itertools import product
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .linalg import ExactMatrix, SingularMatrixError, matrix_from_json
from .scalar import CycloScalar, FieldOrderError, cyclotomic_field

BUILTIN_NAMES = ("ising", "jk6")

# X_0 -> 0, X_eps -> 1, X_1 -> 2, X_eps' -> 3, Z -> 4
JK_RELABEL = {"1": "0", "Xeps": "1", "X1": "2", "Xeps'": "3", "Z": "4"}


class FusionDataError(ValueError):
    """Base class for invalid fusion or category data."""


class MalformedCategoryError(FusionDataError):
    pass


class UnknownLabelError(FusionDataError):
    pass


class IncompleteFusionError(FusionDataError):
    pass


class NonCommutativeFusionError(FusionDataError):
    pass


class NonAssociativeFusionError(FusionDataError):
    pass


class FusionMultiplicityError(FusionDataError):
    pass


class UnitError(FusionDataError):
    pass


class DualError(FusionDataError):
    pass


class ChannelMismatchError(FusionDataError):
    pass


class SingularFMatrixError(FusionDataError):
    pass


class RSymbolError(FusionDataError):
    pass


@dataclass(frozen=True)
class FusionRing:
    """Labels, unit, duals and a multiplicity-free fusion table.

    ``fusion[(a, b)]`` is a tuple of the labels ``c`` with ``N_ab^c = 1``,
    listed in label order.
    """

    labels: tuple[str, ...]
    unit: str
    dual: Mapping[str, str]
    fusion: Mapping[tuple[str, str], tuple[str, ...]] = field(repr=False)

    @classmethod
    def from_rules(
        cls,
        labels: Sequence[str],
        unit: str,
        dual: Mapping[str, str],
        rules: Mapping[tuple[str, str], Iterable[str]],
    ) -> FusionRing:
        """Build and validate a ring; each unordered pair may be given once."""
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise MalformedCategoryError(f"duplicate labels in {labels}")
        known = set(labels)
        table: dict[tuple[str, str], tuple[str, ...]] = {}
        for (a, b), cs in rules.items():
            cs = list(cs)
            for lab in (a, b, *cs):
                if lab not in known:
                    raise UnknownLabelError(f"fusion rule {a} x {b}: unknown label {lab!r}")
            if len(set(cs)) != len(cs):
                dup = [c for c, n in Counter(cs).items() if n > 1]
                raise FusionMultiplicityError(
                    f"fusion rule {a} x {b}: channel(s) {dup} repeated; fusion multiplicities are not supported"
                )
            ordered = tuple(c for c in labels if c in cs)
            if (a, b) in table and table[(a, b)] != ordered:
                raise MalformedCategoryError(f"fusion rule {a} x {b} given twice with different channels")
            table[(a, b)] = ordered
        for a, b in product(labels, repeat=2):
            if (a, b) not in table:
                if (b, a) in table:
                    table[(a, b)] = table[(b, a)]
                else:
                    raise IncompleteFusionError(f"incomplete fusion table: no rule for {a} x {b}")
        ring = cls(labels, unit, dict(dual), table)
        ring.validate()
        return ring

    # --- queries ---

    def fuse(self, a: str, b: str) -> tuple[str, ...]:
        return self.fusion[(a, b)]

    def N(self, a: str, b: str, c: str) -> int:
        return int(c in self.fusion[(a, b)])

    def fuse_objects(self, xs: Iterable[str], ys: Iterable[str]) -> Counter:
        """Multiset fusion of two direct sums of simples."""
        ys = list(ys)
        out: Counter = Counter()
        for a in xs:
            for b in ys:
                out.update(self.fusion[(a, b)])
        return out

    def is_invertible(self, a: str) -> bool:
        return self.fusion[(a, self.dual[a])] == (self.unit,)

    def fusion_matrix(self, a: str) -> np.ndarray:
        """Integer matrix ``M[b, c] = N_ab^c`` in label order."""
        idx = {lab: k for k, lab in enumerate(self.labels)}
        m = np.zeros((len(self.labels), len(self.labels)), dtype=np.int64)
        for b in self.labels:
            for c in self.fusion[(a, b)]:
                m[idx[b], idx[c]] = 1
        return m

    def index(self, label: str) -> int:
        return self.labels.index(label)

    # --- validation ---

    def validate(self) -> None:
        labels = self.labels
        known = set(labels)
        if self.unit not in known:
            raise UnitError(f"unit {self.unit!r} is not a label")
        for a in labels:
            if a not in self.dual:
                raise DualError(f"no dual given for {a!r}")
            da = self.dual[a]
            if da not in known:
                raise UnknownLabelError(f"dual of {a!r} is unknown label {da!r}")
            if self.dual.get(da) != a:
                raise DualError(f"dual is not an involution at {a!r}")
        for a in labels:
            if self.fusion[(self.unit, a)] != (a,) or self.fusion[(a, self.unit)] != (a,):
                raise UnitError(f"unit {self.unit!r} does not act trivially on {a!r}")
            if self.unit not in self.fusion[(a, self.dual[a])]:
                raise DualError(f"unit does not appear in {a} x {self.dual[a]}")
        for a, b in product(labels, repeat=2):
            if Counter(self.fusion[(a, b)]) != Counter(self.fusion[(b, a)]):
                raise NonCommutativeFusionError(f"{a} x {b} differs from {b} x {a}")
        for a, b, c in product(labels, repeat=3):
            left: Counter = Counter()
            for x in self.fusion[(a, b)]:
                left.update(self.fusion[(x, c)])
            right: Counter = Counter()
            for y in self.fusion[(b, c)]:
                right.update(self.fusion[(a, y)])
            if left != right:
                raise NonAssociativeFusionError(
                    f"non-associative fusion at ({a}, {b}, {c}): "
                    f"(a x b) x c = {dict(left)} but a x (b x c) = {dict(right)}"
                )

    def relabel(self, mapping: Mapping[str, str], order: Sequence[str] | None = None) -> FusionRing:
        """Rename labels; ``order`` fixes the new label order (default: mapped order)."""
        new = [mapping[a] for a in self.labels]
        if order is not None:
            if sorted(order) != sorted(new):
                raise ValueError("relabel order must list exactly the new labels")
            new = list(order)
        rules = {(mapping[a], mapping[b]): [mapping[c] for c in cs] for (a, b), cs in self.fusion.items()}
        dual = {mapping[a]: mapping[b] for a, b in self.dual.items()}
        return FusionRing.from_rules(new, mapping[self.unit], dual, rules)


@dataclass(frozen=True)
class ObjectExpr:
    """A multiplicity-free direct sum of simple objects."""

    summands: tuple[str, ...]

    def __post_init__(self):
        if not self.summands:
            raise ValueError("an object needs at least one summand")
        if len(set(self.summands)) != len(self.summands):
            raise ValueError(f"repeated summand in {self.summands}; multiplicities are not supported")

    @classmethod
    def parse(cls, text: str | Sequence[str]) -> ObjectExpr:
        if isinstance(text, str):
            parts = [p.strip() for p in text.replace("+", ",").split(",")]
        else:
            parts = list(text)
        return cls(tuple(p for p in parts if p))

    def check(self, ring: FusionRing) -> None:
        for a in self.summands:
            if a not in ring.labels:
                raise UnknownLabelError(f"object summand {a!r} is not a label")

    def is_simple(self) -> bool:
        return len(self.summands) == 1

    def __str__(self) -> str:
        return "+".join(self.summands)


@dataclass(frozen=True)
class FMatrix:
    row_channels: tuple[str, ...]
    col_channels: tuple[str, ...]
    matrix: ExactMatrix


@dataclass(frozen=True)
class CategoryData:
    name: str
    ring: FusionRing
    field_order: int
    r_symbols: Mapping[tuple[str, str, str], CycloScalar] = field(repr=False)
    f_matrices: Mapping[tuple[str, str, str, str], FMatrix] = field(repr=False)
    kauffman_variable: CycloScalar | None = None
    unitary: bool = False

    def r_symbol(self, a: str, b: str, c: str) -> CycloScalar:
        try:
            return self.r_symbols[(a, b, c)]
        except KeyError:
            raise KeyError(f"missing R-symbol R^{{{a}{b}}}_{c}") from None

    def f_matrix(self, a: str, b: str, c: str, d: str) -> FMatrix:
        try:
            return self.f_matrices[(a, b, c, d)]
        except KeyError:
            raise KeyError(f"missing F-matrix F^{{{a}{b}{c}}}_{d}") from None

    def validate(self) -> None:
        ring = self.ring
        for (a, b, c), val in self.r_symbols.items():
            for lab in (a, b, c):
                if lab not in ring.labels:
                    raise UnknownLabelError(f"R^{{{a}{b}}}_{c}: unknown label {lab!r}")
            if c not in ring.fuse(a, b):
                raise RSymbolError(f"R^{{{a}{b}}}_{c}: {c} is not a fusion channel of {a} x {b}")
            if val.is_zero():
                raise RSymbolError(f"R^{{{a}{b}}}_{c} is zero")
            if self.unitary and not _is_root_of_unity_times_positive(val):
                raise RSymbolError(f"R^{{{a}{b}}}_{c} is not a root of unity times a positive real")
        for (a, b, c, d), fm in self.f_matrices.items():
            where = f"F^{{{a}{b}{c}}}_{d}"
            for lab in (a, b, c, d, *fm.row_channels, *fm.col_channels):
                if lab not in ring.labels:
                    raise UnknownLabelError(f"{where}: unknown label {lab!r}")
            rows, cols = admissible_channels(ring, a, b, c, d)
            if set(fm.row_channels) != set(rows) or len(fm.row_channels) != len(rows):
                raise ChannelMismatchError(
                    f"{where}: row channels {list(fm.row_channels)} do not match admissible {sorted(rows)}"
                )
            if set(fm.col_channels) != set(cols) or len(fm.col_channels) != len(cols):
                raise ChannelMismatchError(
                    f"{where}: column channels {list(fm.col_channels)} do not match admissible {sorted(cols)}"
                )
            if fm.matrix.shape != (len(rows), len(cols)):
                raise ChannelMismatchError(f"{where}: matrix shape {fm.matrix.shape} does not match channels")
            if fm.matrix.is_singular():
                raise SingularFMatrixError(f"singular F-matrix {where}")


def admissible_channels(ring: FusionRing, a: str, b: str, c: str, d: str) -> tuple[list[str], list[str]]:
    """Internal labels of the two trees of ``Hom(d, a(x)b(x)c)``: (rows e, columns f)."""
    rows = [e for e in ring.labels if e in ring.fuse(b, c) and d in ring.fuse(a, e)]
    cols = [f for f in ring.labels if f in ring.fuse(a, b) and d in ring.fuse(f, c)]
    return rows, cols


def _is_root_of_unity_times_positive(val: CycloScalar) -> bool:
    n = val.order
    for k in range(n):
        for sign in (1, -1):
            w = val * CycloScalar.from_exponents(n, {-k: sign})
            if w == w.conjugate() and w.embed_complex().real > 0:
                return True
    return False


# --- SO(2r+1)_2 fusion rules ---

def so_odd_level2_labels(r: int) -> tuple[str, ...]:
    return ("1", "Z", *(f"X{i}" for i in range(1, r + 1)), "Xeps", "Xeps'")


def gen_so_odd_level2(r: int) -> FusionRing:
    """Fusion ring of SO(2r+1) at level 2, rank r+4."""
    if r < 1:
        raise ValueError(f"r must be at least 1, got {r}")
    X = [None] + [f"X{i}" for i in range(1, r + 1)]
    eps, epsp = "Xeps", "Xeps'"
    xs = X[1:]
    rules: dict[tuple[str, str], list[str]] = {}
    for a in so_odd_level2_labels(r):
        rules[("1", a)] = [a]
    rules[(eps, eps)] = ["1", *xs]
    rules[(epsp, epsp)] = ["1", *xs]
    rules[(eps, epsp)] = ["Z", *xs]
    rules[("Z", eps)] = [epsp]
    rules[("Z", epsp)] = [eps]
    rules[("Z", "Z")] = ["1"]
    for i in range(1, r + 1):
        rules[(eps, X[i])] = [eps, epsp]
        rules[(epsp, X[i])] = [eps, epsp]
        rules[("Z", X[i])] = [X[i]]
        rules[(X[i], X[i])] = ["1", "Z", X[min(2 * i, 2 * r + 1 - 2 * i)]]
        for j in range(i + 1, r + 1):
            rules[(X[i], X[j])] = [X[j - i], X[min(i + j, 2 * r + 1 - i - j)]]
    labels = so_odd_level2_labels(r)
    return FusionRing.from_rules(labels, "1", {a: a for a in labels}, rules)


# --- file format ---

def _scalar(doc, order: int, where: str) -> CycloScalar:
    try:
        return CycloScalar.from_terms(doc, order)
    except (ValueError, TypeError) as exc:
        raise MalformedCategoryError(f"{where}: {exc}") from None


def category_from_json(doc: Mapping) -> CategoryData:
    """Build and validate category data from a parsed JSON document."""
    if not isinstance(doc, Mapping):
        raise MalformedCategoryError("category document must be a JSON object")
    try:
        name = str(doc.get("name", "unnamed"))
        order = int(doc["cyclotomic_order"])
        labels = [str(a) for a in doc["labels"]]
        unit = str(doc["unit"])
        dual = {str(k): str(v) for k, v in doc.get("dual", {a: a for a in labels}).items()}
        fusion = doc["fusion"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedCategoryError(f"category header: missing or malformed field {exc}") from None
    try:
        cyclotomic_field(order)
    except FieldOrderError as exc:
        raise MalformedCategoryError(f"category header: {exc}") from None
    rules: dict[tuple[str, str], list[str]] = {}
    for k, rule in enumerate(fusion):
        try:
            a, b, cs = str(rule["a"]), str(rule["b"]), [str(c) for c in rule["c"]]
        except (KeyError, TypeError) as exc:
            raise MalformedCategoryError(f"fusion[{k}]: missing field {exc}") from None
        if (a, b) in rules and rules[(a, b)] != cs:
            raise MalformedCategoryError(f"fusion[{k}]: {a} x {b} listed twice")
        rules[(a, b)] = cs
    ring = FusionRing.from_rules(labels, unit, dual, rules)

    r_symbols: dict[tuple[str, str, str], CycloScalar] = {}
    for k, entry in enumerate(doc.get("R", [])):
        try:
            key = (str(entry["a"]), str(entry["b"]), str(entry["c"]))
            value = entry["value"]
        except (KeyError, TypeError) as exc:
            raise MalformedCategoryError(f"R[{k}]: missing field {exc}") from None
        if key in r_symbols:
            raise MalformedCategoryError(f"R[{k}]: R^{{{key[0]}{key[1]}}}_{key[2]} listed twice")
        r_symbols[key] = _scalar(value, order, f"R[{k}]")

    f_matrices: dict[tuple[str, str, str, str], FMatrix] = {}
    for k, entry in enumerate(doc.get("F", [])):
        try:
            key = (str(entry["a"]), str(entry["b"]), str(entry["c"]), str(entry["d"]))
            rows = tuple(str(x) for x in entry["row_channels"])
            cols = tuple(str(x) for x in entry["col_channels"])
            entries = entry["entries"]
        except (KeyError, TypeError) as exc:
            raise MalformedCategoryError(f"F[{k}]: missing field {exc}") from None
        if key in f_matrices:
            raise MalformedCategoryError(f"F[{k}]: F^{{{''.join(key[:3])}}}_{key[3]} listed twice")
        if len(entries) != len(rows) * len(cols):
            raise MalformedCategoryError(
                f"F[{k}]: {len(entries)} entries for {len(rows)} row and {len(cols)} column channels"
            )
        try:
            mat = matrix_from_json(
                {"cyclotomic_order": order, "rows": len(rows), "cols": len(cols), "entries": entries}
            )
        except ValueError as exc:
            raise MalformedCategoryError(f"F[{k}]: {exc}") from None
        f_matrices[key] = FMatrix(rows, cols, mat)

    kv = doc.get("kauffman_variable")
    cat = CategoryData(
        name=name,
        ring=ring,
        field_order=order,
        r_symbols=r_symbols,
        f_matrices=f_matrices,
        kauffman_variable=None if kv is None else _scalar(kv, order, "kauffman_variable"),
        unitary=bool(doc.get("unitary", False)),
    )
    try:
        cat.validate()
    except SingularMatrixError as exc:
        raise SingularFMatrixError(str(exc)) from None
    return cat


def ring_to_json(ring: FusionRing, name: str = "unnamed", order: int = 24) -> dict:
    """Category document carrying only fusion data."""
    fusion = []
    for i, a in enumerate(ring.labels):
        for b in ring.labels[i:]:
            fusion.append({"a": a, "b": b, "c": list(ring.fuse(a, b))})
    return {
        "name": name,
        "cyclotomic_order": order,
        "labels": list(ring.labels),
        "unit": ring.unit,
        "dual": dict(ring.dual),
        "fusion": fusion,
    }


def category_to_json(cat: CategoryData) -> dict:
    doc = ring_to_json(cat.ring, cat.name, cat.field_order)
    if cat.unitary:
        doc["unitary"] = True
    if cat.kauffman_variable is not None:
        doc["kauffman_variable"] = cat.kauffman_variable.promote(cat.field_order).to_terms()
    doc["R"] = [
        {"a": a, "b": b, "c": c, "value": v.promote(cat.field_order).to_terms()}
        for (a, b, c), v in cat.r_symbols.items()
    ]
    doc["F"] = [
        {
            "a": a,
            "b": b,
            "c": c,
            "d": d,
            "row_channels": list(fm.row_channels),
            "col_channels": list(fm.col_channels),
            "entries": [s.promote(cat.field_order).to_terms() for s in fm.matrix.entries()],
        }
        for (a, b, c, d), fm in cat.f_matrices.items()
    ]
    return doc


def parse_category(path: str | Path) -> CategoryData:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedCategoryError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    try:
        return category_from_json(doc)
    except FusionDataError as exc:
        raise type(exc)(f"{path}: {exc}") from None


def write_category(cat: CategoryData, path: str | Path) -> None:
    Path(path).write_text(json.dumps(category_to_json(cat), indent=1) + "\n", encoding="utf-8")


def builtin_path(name: str) -> Path:
    if name not in BUILTIN_NAMES:
        raise ValueError(f"unknown built-in category {name!r}; choose from {BUILTIN_NAMES}")
    return Path(str(resources.files("gybe") / "data" / f"{name}.json"))


def builtin_category(name: str) -> CategoryData:
    return parse_category(builtin_path(name))
