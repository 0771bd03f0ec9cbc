from __future__ import annotations

import json
from importlib import resources

import pytest

from gybe.finder import GybeCertificate, is_gybe_object
from gybe.fusion import ObjectExpr, builtin_category, builtin_path, category_from_json
from gybe.linalg import ExactMatrix, direct_sum, kron, load_matrix
from gybe.rep import (
    MissingDataError,
    assemble,
    assemble_R,
    braid_rep,
    construction_path,
    generator_matrix,
    sector_matrix,
    tree_basis,
)
from gybe.scalar import CycloScalar, root_of_unity

N = 24


def printed(name):
    return load_matrix(str(resources.files("gybe") / "data" / f"{name}_printed_R.json"))


def hadamard():
    h = CycloScalar.from_exponents(N, {3: 1, 21: 1}) / 2
    return ExactMatrix([[h, h], [h, -h]], N)


def jk6_cert(cat=None) -> GybeCertificate:
    cat = cat or builtin_category("jk6")
    return is_gybe_object(cat.ring, ObjectExpr(("2",)), ["1", "3"])


def ising_cert() -> GybeCertificate:
    cat = builtin_category("ising")
    return is_gybe_object(cat.ring, ObjectExpr(("1", "psi")), ["1", "psi"])


def jk6_doc() -> dict:
    return json.loads(builtin_path("jk6").read_text())


def w(p, q):
    return root_of_unity(p, q, N)


# --- tree basis ---


def test_tree_basis_order_and_size():
    basis = tree_basis(jk6_cert(), 3)
    assert len(basis) == 16
    assert basis.sequences[:3] == (("1", "1", "1", "1"), ("1", "1", "1", "3"), ("1", "1", "3", "1"))
    assert basis.index(("3", "3", "3", "3")) == 15
    with pytest.raises(ValueError):
        tree_basis(jk6_cert(), 1)


# --- sectors ---


def test_jk6_sector_matrices():
    cat = builtin_category("jk6")
    cert = jk6_cert(cat)
    h = hadamard()
    inner = h @ ExactMatrix.diag([w(1, 3), w(2, 3)], N) @ h
    outer = h @ ExactMatrix.diag([w(5, 6), w(2, 3)], N) @ h
    assert sector_matrix(cat, cert, "1", "1") == inner
    assert sector_matrix(cat, cert, "3", "1") == outer
    assert sector_matrix(cat, cert, "1", "3") == outer
    assert sector_matrix(cat, cert, "3", "3") == inner
    for i in cert.s:
        for j in cert.s:
            assert sector_matrix(cat, cert, i, j).is_unitary()
    with pytest.raises(ValueError):
        sector_matrix(cat, cert, "0", "1")


def test_paths():
    assert construction_path(builtin_category("jk6"), jk6_cert()) == "simple"
    assert construction_path(builtin_category("ising"), ising_cert()) == "monomial"


# --- assembled R ---


def test_jk6_reproduces_printed_matrix():
    asm = assemble(builtin_category("jk6"), jk6_cert())
    assert asm.R == printed("jk6")
    one = ExactMatrix([[1]], N)
    sx = ExactMatrix([[0, 1], [1, 0]], N)
    assert asm.P == direct_sum([one, sx, one, one, sx, one])
    assert asm.B == direct_sum(list(asm.blocks))
    assert asm.sectors == (("1", "1"), ("1", "3"), ("3", "1"), ("3", "3"))
    assert asm.R == asm.P.transpose() @ asm.B @ asm.P


def test_ising_reproduces_printed_matrix():
    R = assemble_R(builtin_category("ising"), ising_cert())
    assert R == printed("ising")
    # signed permutation: one nonzero per row, each +-1
    for r in range(8):
        nz = [R[r, c] for c in range(8) if R[r, c]]
        assert len(nz) == 1 and nz[0] in (1, -1)


def test_jk6_power_six_is_identity():
    R = assemble_R(builtin_category("jk6"), jk6_cert())
    assert (R**6).is_identity()
    assert not (R**3).is_identity()
    assert R.is_unitary()


def test_block_structure_invariant():
    # R only moves the middle label: <i0 i1 i2 | R | j0 j1 j2> = 0 unless i0 = j0 and i2 = j2
    R = assemble_R(builtin_category("jk6"), jk6_cert())
    for r in range(8):
        for c in range(8):
            if (r >> 2, r & 1) != (c >> 2, c & 1):
                assert R[r, c] == 0


def test_trivial_braiding_gives_identity():
    doc = jk6_doc()
    for entry in doc["R"]:
        entry["value"] = [{"p": 1, "q": 1, "k": 0}]
    cat = category_from_json(doc)
    assert assemble_R(cat, jk6_cert(cat)).is_identity()


def test_column_order_does_not_matter():
    doc = jk6_doc()
    for f in doc["F"]:
        f["col_channels"] = f["col_channels"][::-1]
        e = f["entries"]
        f["entries"] = [e[1], e[0], e[3], e[2]]
    cat = category_from_json(doc)
    assert assemble_R(cat, jk6_cert(cat)) == printed("jk6")


def test_row_order_does_not_matter():
    doc = jk6_doc()
    for f in doc["F"]:
        f["row_channels"] = f["row_channels"][::-1]
        e = f["entries"]
        f["entries"] = [e[2], e[3], e[0], e[1]]
    cat = category_from_json(doc)
    assert assemble_R(cat, jk6_cert(cat)) == printed("jk6")


def test_missing_symbols():
    doc = jk6_doc()
    doc["R"] = [e for e in doc["R"] if e["c"] != "4"]
    cat = category_from_json(doc)
    with pytest.raises(MissingDataError, match="R-symbol"):
        assemble_R(cat, jk6_cert(cat))
    doc = jk6_doc()
    doc["F"] = doc["F"][1:]
    cat = category_from_json(doc)
    with pytest.raises(MissingDataError, match="F-matrix"):
        assemble_R(cat, jk6_cert(cat))


# --- braid representations ---


def test_braid_rep_sizes():
    R = printed("jk6")
    rep4 = braid_rep(R, 2, 4)
    assert rep4.dimension == 32 and len(rep4.generators) == 3
    assert all(g.shape == (32, 32) for g in rep4.generators)
    rep3 = braid_rep(R, 2, 3)
    assert rep3.dimension == 16 and len(rep3.generators) == 2
    with pytest.raises(ValueError):
        braid_rep(ExactMatrix.identity(4, N), 2, 3)


def test_generator_matrix_placement():
    R = printed("ising")
    eye2 = ExactMatrix.identity(2, N)
    assert generator_matrix(R, 2, 1, 4) == kron(R, eye2)
    assert generator_matrix(R, 2, 2, 4) == kron(eye2, R)
    with pytest.raises(ValueError):
        generator_matrix(R, 2, 3, 4)
