from __future__ import annotations

import random
from importlib import resources

import numpy as np
import pytest

from gybe.finder import eigenvalue_bound_l, is_gybe_object
from gybe.fusion import ObjectExpr, builtin_category
from gybe.linalg import ExactMatrix, SingularMatrixError, kron, kron_all, load_matrix
from gybe.rep import BraidRep, assemble_R, braid_rep
from gybe.scalar import CycloScalar, root_of_unity
from gybe.verifier import (
    ShapeError,
    braid_relation_violation,
    certify_eigenvalues,
    check_braid_relations,
    check_far_commutativity,
    check_gybe,
    far_commutativity_violation,
    group_closure,
    gybe_violation,
    projective_normalize,
    verify_closure,
)

N = 24


def printed(name):
    return load_matrix(str(resources.files("gybe") / "data" / f"{name}_printed_R.json"))


def w(p, q):
    return root_of_unity(p, q, N)


def corrupt(m: ExactMatrix, r: int, c: int, delta) -> ExactMatrix:
    rows = m.tolist()
    rows[r][c] = rows[r][c] + delta
    return ExactMatrix(rows, m.order)


def swap(d):
    rows = [[0] * (d * d) for _ in range(d * d)]
    for i in range(d):
        for j in range(d):
            rows[j * d + i][i * d + j] = 1
    return ExactMatrix(rows, N)


def pauli():
    x = ExactMatrix([[0, 1], [1, 0]], N)
    zz = ExactMatrix([[1, 0], [0, -1]], N)
    return x, zz, ExactMatrix.identity(2, N)


# --- gYBE and far commutativity ---


@pytest.mark.parametrize("name", ["jk6", "ising"])
def test_printed_matrices_pass(name):
    R = printed(name)
    assert check_gybe(R, 2, 3)
    assert check_far_commutativity(R, 2, 3)


def test_identity_and_swap():
    assert check_gybe(ExactMatrix.identity(8, N), 2, 3)
    assert check_far_commutativity(ExactMatrix.identity(8, N), 2, 3)
    # the flip is the standard solution of the ordinary braid equation
    assert check_gybe(swap(2), 2, 2)
    assert check_gybe(swap(3), 3, 2)


@pytest.mark.parametrize("name", ["jk6", "ising"])
def test_corrupted_matrices_fail(name):
    R = corrupt(printed(name), 2, 1, CycloScalar.rational(1, N))
    hit = gybe_violation(R, 2, 3)
    assert hit is not None and hit[0] == 0
    assert not check_gybe(R, 2, 3)


def test_far_commutativity_negative_control():
    x, zz, eye = pauli()
    R = kron_all([x, eye, zz])
    hit = far_commutativity_violation(R, 2, 3)
    assert hit is not None and hit[0] == 3
    assert not check_far_commutativity(R, 2, 3)


def test_shape_errors():
    with pytest.raises(ShapeError):
        check_gybe(ExactMatrix.identity(6, N), 2, 3)
    with pytest.raises(ShapeError):
        check_gybe(ExactMatrix.identity(8, N), 0, 3)


def test_local_basis_change_preserves_gybe():
    # (Q(x)Q(x)Q) R (Q(x)Q(x)Q)^-1 solves the gYBE whenever R does
    h = (CycloScalar.from_exponents(N, {3: 1, 21: 1})) / 2
    for q in (ExactMatrix.diag([1, w(1, 8)], N), ExactMatrix([[h, h], [h, -h]], N)):
        qqq = kron_all([q, q, q])
        for name in ("jk6", "ising"):
            R = qqq @ printed(name) @ qqq.inverse()
            assert check_gybe(R, 2, 3)
            assert check_far_commutativity(R, 2, 3)


def test_random_invertible_matrix_fails():
    rng = random.Random(7)
    while True:
        rows = [[rng.randint(-3, 3) for _ in range(8)] for _ in range(8)]
        R = ExactMatrix(rows, N)
        if not R.is_singular():
            break
    assert not check_gybe(R, 2, 3)


# --- braid relations ---


def _numeric_braid_ok(rep: BraidRep) -> bool:
    g = [m.to_complex() for m in rep.generators]
    ok = True
    for k in range(len(g) - 1):
        ok &= np.allclose(g[k] @ g[k + 1] @ g[k], g[k + 1] @ g[k] @ g[k + 1], atol=1e-12)
    for k in range(len(g)):
        for l in range(k + 2, len(g)):
            ok &= np.allclose(g[k] @ g[l], g[l] @ g[k], atol=1e-12)
    return bool(ok)


@pytest.mark.parametrize("name", ["jk6", "ising"])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_braid_relations_hold(name, n):
    rep = braid_rep(printed(name), 2, n)
    assert check_braid_relations(rep)
    assert _numeric_braid_ok(rep)


def test_sign_flip_breaks_braid_relation():
    rep = braid_rep(printed("jk6"), 2, 3)
    flipped = BraidRep(rep.n, rep.d, (-rep.generators[0], rep.generators[1]))
    hit = braid_relation_violation(flipped)
    assert hit is not None and hit[0] == 1
    assert not _numeric_braid_ok(flipped)


def test_far_commutation_numbering():
    # transpositions (12), (23) of S_3 braid but do not commute
    a = ExactMatrix.permutation([1, 0, 2], N)
    b = ExactMatrix.permutation([0, 2, 1], N)
    rep = BraidRep(4, 3, (a, a, b))
    hit = braid_relation_violation(rep)
    assert hit is not None and hit[0] == 103


# --- eigenvalues ---


def test_jk6_eigenvalues():
    cat = builtin_category("jk6")
    R = printed("jk6")
    cands = [w(1, 3), w(2, 3), w(5, 6), CycloScalar.rational(1, N), w(1, 6)]
    cert = certify_eigenvalues(R, cands)
    assert set(cert.certified) == {w(1, 3), w(2, 3), w(5, 6)}
    assert set(cert.rejected) == {CycloScalar.rational(1, N), w(1, 6)}
    assert cert.annihilates
    assert len(cert.certified) == eigenvalue_bound_l(cat.ring, ObjectExpr(("2",))) == 3
    # numeric oracle
    numeric = np.linalg.eigvals(R.to_complex())
    for lam in numeric:
        assert min(abs(lam - c.embed_complex()) for c in cert.certified) < 1e-9


def test_ising_eigenvalues():
    cert = certify_eigenvalues(printed("ising"), [CycloScalar.rational(1, N), CycloScalar.rational(-1, N), w(1, 4)])
    assert set(cert.certified) == {1, -1}
    assert cert.annihilates
    assert len(cert.certified) <= eigenvalue_bound_l(builtin_category("ising").ring, ObjectExpr(("1", "psi")))


def test_eigenvalue_duplicates_and_errors():
    cert = certify_eigenvalues(ExactMatrix.identity(2, N), [1, 1])
    assert len(cert.certified) == 1
    with pytest.raises(ValueError):
        certify_eigenvalues(ExactMatrix.identity(2, N), [])


# --- group closure ---


def test_closure_of_identity():
    report = group_closure([ExactMatrix.identity(4, N)])
    assert report.order == 1 and report.finite


def test_closure_of_small_groups():
    x, zz, _ = pauli()
    assert group_closure([x, zz]).order == 8  # dihedral group of the square
    assert group_closure([ExactMatrix([[w(1, 6)]], N)]).order == 6
    assert group_closure([ExactMatrix([[w(1, 6)]], N)], projective=True).order == 1


def test_ising_closure_is_finite_and_closed():
    rep = braid_rep(printed("ising"), 2, 3)
    report = group_closure(rep.generators)
    assert report.finite
    assert verify_closure(report, rep.generators)
    assert report.to_json()["result"] == report.order


def test_jk6_projective_closure_is_finite():
    rep = braid_rep(printed("jk6"), 2, 3)
    report = group_closure(rep.generators, projective=True)
    assert report.finite
    assert verify_closure(report, rep.generators)


def test_exceeded_cap():
    g = ExactMatrix([[w(1, 24)]], N)
    report = group_closure([g], cap=5)
    assert report.order == "exceeded_cap" and not report.finite
    assert not verify_closure(report, [g])


def test_singular_generator_rejected():
    with pytest.raises(SingularMatrixError):
        group_closure([ExactMatrix([[1, 0], [0, 0]], N)])


def test_projective_normalize():
    m = ExactMatrix([[0, w(1, 4)], [2, 0]], N)
    n = projective_normalize(m)
    assert n[0, 1] == 1 and n[1, 0] == -2 * w(1, 4)


def test_assembled_matches_printed_under_verification():
    cat = builtin_category("jk6")
    cert = is_gybe_object(cat.ring, ObjectExpr(("2",)), ["1", "3"])
    R = assemble_R(cat, cert)
    assert check_gybe(R, 2, 3) and check_far_commutativity(R, 2, 3)
    assert kron(R, ExactMatrix.identity(2, N)).shape == (16, 16)
