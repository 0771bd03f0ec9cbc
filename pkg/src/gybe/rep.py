"""Tree bases, sector braiding matrices and the assembled 3-site R-matrix.

For a gYBE object ``X`` with label set ``S`` (size ``d``), the tree basis of
``V_{i, X^n, j}`` summed over ``i, j in S`` is the full tensor power
``(C^d)^(n+1)``: a basis tuple ``(i0, i1, ..., in)`` lists the leftmost leaf,
the internal edges and the root.  A braid generator on strands ``k, k+1``
rewrites slot ``k`` and reads slots ``k-1`` and ``k+1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .finder import GybeCertificate
from .fusion import CategoryData, FusionRing
from .linalg import MAX_ENTRIES, ExactMatrix, MatrixSizeError, SingularMatrixError, direct_sum, kron_all


class MissingDataError(KeyError):
    """Raised when the category lacks an F- or R-symbol the construction needs."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


def _check_dimension(dim: int) -> None:
    if dim * dim > MAX_ENTRIES:
        raise MatrixSizeError(f"dimension {dim} exceeds the {MAX_ENTRIES}-entry matrix cap")


@dataclass(frozen=True)
class TreeBasis:
    alphabet: tuple[str, ...]
    n: int
    sequences: tuple[tuple[str, ...], ...]

    @property
    def d(self) -> int:
        return len(self.alphabet)

    def index(self, seq: tuple[str, ...]) -> int:
        return self.sequences.index(tuple(seq))

    def __len__(self) -> int:
        return len(self.sequences)


def tree_basis(cert: GybeCertificate, n: int) -> TreeBasis:
    """Lexicographically ordered labelings ``(i0, ..., in)`` over the certificate's ``s``."""
    if n < 2:
        raise ValueError(f"need at least 2 strands, got {n}")
    _check_dimension(cert.d ** (n + 1))
    return TreeBasis(cert.s, n, tuple(product(cert.s, repeat=n + 1)))


def _simple_path(cat: CategoryData, cert: GybeCertificate, i: str, j: str) -> ExactMatrix:
    x = cert.x.summands[0]
    try:
        fm = cat.f_matrix(i, x, x, j)
        diag = [cat.r_symbol(x, x, c) for c in fm.row_channels]
    except KeyError as exc:
        raise MissingDataError(str(exc.args[0])) from None
    if set(fm.col_channels) != set(cert.s):
        raise MissingDataError(
            f"F^{{{i}{x}{x}}}_{j} columns {list(fm.col_channels)} are not the set {list(cert.s)}"
        )
    f = fm.matrix
    return f.inverse() @ ExactMatrix.diag(diag, cat.field_order) @ f


def _single(ring: FusionRing, a: str, b: str) -> str:
    out = ring.fuse(a, b)
    if len(out) != 1:
        raise ValueError(f"{a} x {b} is not a single simple")
    return out[0]


def _monomial_path(cat: CategoryData, cert: GybeCertificate, i: str, j: str) -> ExactMatrix:
    """Sector matrix when every summand of x is invertible.

    A basis vector through internal label ``m`` picks summands ``a`` (``m in i(x)a``)
    and ``b`` (``j in m(x)b``); the braiding swaps them, landing on ``i(x)b``
    with scalar ``R^{ab}_{a(x)b}``.
    """
    ring = cat.ring
    s = cert.s
    rows: list[list] = [[0] * len(s) for _ in s]
    for col, m in enumerate(s):
        a = next(y for y in cert.x.summands if m in ring.fuse(i, y))
        b = next(y for y in cert.x.summands if j in ring.fuse(m, y))
        target = _single(ring, i, b)
        try:
            scalar = cat.r_symbol(a, b, _single(ring, a, b))
        except KeyError as exc:
            raise MissingDataError(str(exc.args[0])) from None
        rows[s.index(target)][col] = scalar
    return ExactMatrix(rows, cat.field_order)


def construction_path(cat: CategoryData, cert: GybeCertificate) -> str:
    """``"simple"`` (F-conjugation) or ``"monomial"`` (sum of invertibles)."""
    x = cert.x.summands
    ring = cat.ring
    if len(x) == 1:
        has_f = all((i, x[0], x[0], j) in cat.f_matrices for i in cert.s for j in cert.s)
        if has_f or not ring.is_invertible(x[0]):
            return "simple"
    if all(ring.is_invertible(a) for a in x):
        return "monomial"
    raise ValueError(f"object {cert.x} is neither simple nor a sum of invertible simples")


def sector_matrix(cat: CategoryData, cert: GybeCertificate, i: str, j: str) -> ExactMatrix:
    """Braid action on the internal label of ``V_{i, X^2, j}``.

    On the simple path this is ``F^-1 D F`` with ``D`` the diagonal of
    ``R^{XX}_c`` over the stored row channels, indexed by the F-matrix's
    stored column order.  On the monomial path it is indexed by ``cert.s``.
    """
    if i not in cert.s or j not in cert.s:
        raise ValueError(f"sector ({i}, {j}) is outside {list(cert.s)}")
    if construction_path(cat, cert) == "simple":
        return _simple_path(cat, cert, i, j)
    return _monomial_path(cat, cert, i, j)


def _sector_in_s_order(cat: CategoryData, cert: GybeCertificate, i: str, j: str) -> ExactMatrix:
    m = sector_matrix(cat, cert, i, j)
    if construction_path(cat, cert) == "simple":
        cols = cat.f_matrix(i, cert.x.summands[0], cert.x.summands[0], j).col_channels
        if tuple(cols) != cert.s:
            perm = [cols.index(a) for a in cert.s]
            p = ExactMatrix.permutation(perm, m.order)
            m = p @ m @ p.transpose()
    return m


@dataclass(frozen=True)
class RAssembly:
    """The assembled R-matrix together with its intermediate pieces.

    ``B`` is block diagonal in sector order, ``P`` maps lexicographic
    coordinates to sector coordinates, and ``R = P^-1 B P``.
    """

    R: ExactMatrix
    B: ExactMatrix
    P: ExactMatrix
    sectors: tuple[tuple[str, str], ...]
    blocks: tuple[ExactMatrix, ...]
    path: str


def assemble(cat: CategoryData, cert: GybeCertificate) -> RAssembly:
    s = cert.s
    d = len(s)
    sectors = tuple(product(s, s))
    blocks = tuple(_sector_in_s_order(cat, cert, i, j) for i, j in sectors)
    for (i, j), blk in zip(sectors, blocks):
        try:
            blk.inverse()
        except SingularMatrixError:
            raise ValueError(f"sector ({i}, {j}) braiding is singular; check the category data") from None
    B = direct_sum(blocks)
    # sector-order position of basis vector (i0, i1, i2) -> its lexicographic position
    perm = []
    for i, j in sectors:
        for m in s:
            perm.append(s.index(i) * d * d + s.index(m) * d + s.index(j))
    P = ExactMatrix.permutation(perm, B.order)
    R = P.transpose() @ B @ P
    return RAssembly(R, B, P, sectors, blocks, construction_path(cat, cert))


def assemble_R(cat: CategoryData, cert: GybeCertificate) -> ExactMatrix:
    """The ``d^3 x d^3`` R-matrix in the lexicographic basis ``e_{i0 i1 i2}``."""
    return assemble(cat, cert).R


@dataclass(frozen=True)
class BraidRep:
    n: int
    d: int
    generators: tuple[ExactMatrix, ...]

    @property
    def dimension(self) -> int:
        return self.d ** (self.n + 1)


def generator_matrix(R: ExactMatrix, d: int, k: int, width: int) -> ExactMatrix:
    """``I^(k-1) (x) R (x) I^(width - k - m + 1)`` on ``V^(x)width`` with ``R`` on ``m`` sites."""
    m = _sites(R, d)
    left, right = k - 1, width - (k - 1) - m
    if left < 0 or right < 0:
        raise ValueError(f"generator {k} does not fit on {width} sites")
    factors = []
    if left:
        factors.append(ExactMatrix.identity(d**left, R.order))
    factors.append(R)
    if right:
        factors.append(ExactMatrix.identity(d**right, R.order))
    return kron_all(factors)


def _sites(R: ExactMatrix, d: int) -> int:
    if not R.is_square():
        raise ValueError(f"R must be square, got {R.shape}")
    m, size = 0, 1
    while size < R.rows:
        size *= d
        m += 1
    if size != R.rows or d < 1:
        raise ValueError(f"R of size {R.rows} is not a power of d={d}")
    return m


def braid_rep(R: ExactMatrix, d: int, n: int) -> BraidRep:
    """Generators of ``B_n`` on ``V^(x)(n+1)`` from a 3-site R-matrix."""
    if n < 2:
        raise ValueError(f"need at least 2 strands, got {n}")
    if _sites(R, d) != 3:
        raise ValueError(f"R must act on 3 sites of dimension {d}, got size {R.rows}")
    _check_dimension(d ** (n + 1))
    gens = tuple(generator_matrix(R, d, k, n + 1) for k in range(1, n))
    return BraidRep(n, d, gens)
