from __future__ import annotations

import copy
import json
from itertools import product

import pytest

from gybe.fusion import (
    BUILTIN_NAMES,
    JK_RELABEL,
    ChannelMismatchError,
    FusionMultiplicityError,
    IncompleteFusionError,
    MalformedCategoryError,
    NonAssociativeFusionError,
    ObjectExpr,
    RSymbolError,
    SingularFMatrixError,
    UnknownLabelError,
    builtin_category,
    builtin_path,
    category_from_json,
    category_to_json,
    gen_so_odd_level2,
    parse_category,
    ring_to_json,
    so_odd_level2_labels,
    write_category,
)
from gybe.linalg import ExactMatrix
from gybe.scalar import CycloScalar, root_of_unity

N = 24


def jk6_doc() -> dict:
    return json.loads(builtin_path("jk6").read_text())


def hadamard():
    h = CycloScalar.from_exponents(N, {3: 1, 21: 1}) / 2
    return ExactMatrix([[h, h], [h, -h]], N)


# --- built-in data ---


def test_builtins_parse():
    for name in BUILTIN_NAMES:
        cat = builtin_category(name)
        assert cat.field_order == 24
        assert cat.unitary


def test_jk6_data_values():
    cat = builtin_category("jk6")
    fm = cat.f_matrix("1", "2", "2", "1")
    assert fm.row_channels == ("0", "2")
    assert fm.col_channels == ("1", "3")
    assert fm.matrix == hadamard()
    assert cat.f_matrix("3", "2", "2", "1").row_channels == ("4", "2")
    assert cat.r_symbol("2", "2", "0") == root_of_unity(1, 3)
    assert cat.r_symbol("2", "2", "2") == root_of_unity(2, 3)
    assert cat.r_symbol("2", "2", "4") == root_of_unity(5, 6)
    # A = i * exp(-pi i / 12)
    assert cat.kauffman_variable == root_of_unity(1, 4) * root_of_unity(-1, 24)


def test_missing_symbols_raise_key_error():
    cat = builtin_category("jk6")
    with pytest.raises(KeyError, match="missing R-symbol"):
        cat.r_symbol("1", "1", "0")
    with pytest.raises(KeyError, match="missing F-matrix"):
        cat.f_matrix("2", "2", "2", "2")


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtin_round_trip(name, tmp_path):
    cat = builtin_category(name)
    path = tmp_path / f"{name}.json"
    write_category(cat, path)
    again = parse_category(path)
    assert again.ring == cat.ring
    assert dict(again.r_symbols) == dict(cat.r_symbols)
    assert again.f_matrices == cat.f_matrices
    assert again.kauffman_variable == cat.kauffman_variable
    assert category_to_json(again) == category_to_json(cat)


# --- file-format errors ---


def test_incomplete_fusion():
    doc = jk6_doc()
    doc["fusion"] = [r for r in doc["fusion"] if (r["a"], r["b"]) != ("2", "3")]
    with pytest.raises(IncompleteFusionError, match="incomplete fusion table"):
        category_from_json(doc)


def test_singular_f_matrix():
    doc = jk6_doc()
    for f in doc["F"]:
        if (f["a"], f["b"], f["c"], f["d"]) == ("1", "2", "2", "1"):
            f["entries"] = [[{"p": 0, "q": 1, "k": 0}]] * 4
    with pytest.raises(SingularFMatrixError, match="singular F-matrix"):
        category_from_json(doc)


def test_unknown_label():
    doc = jk6_doc()
    doc["fusion"][0]["c"] = ["7"]
    with pytest.raises(UnknownLabelError):
        category_from_json(doc)


def test_non_associative():
    doc = jk6_doc()
    for r in doc["fusion"]:
        if (r["a"], r["b"]) == ("3", "4"):
            r["c"] = ["3"]  # then (1 x 4) x 4 = 3 but 1 x (4 x 4) = 1
    with pytest.raises(NonAssociativeFusionError):
        category_from_json(doc)


def test_multiplicity_rejected():
    doc = jk6_doc()
    for r in doc["fusion"]:
        if (r["a"], r["b"]) == ("2", "2"):
            r["c"] = ["0", "2", "2", "4"]
    with pytest.raises(FusionMultiplicityError):
        category_from_json(doc)


def test_channel_mismatch():
    doc = jk6_doc()
    doc["F"][0]["row_channels"] = ["0", "4"]
    with pytest.raises(ChannelMismatchError):
        category_from_json(doc)


def test_r_symbol_on_non_channel():
    doc = jk6_doc()
    doc["R"].append({"a": "2", "b": "2", "c": "1", "value": [{"p": 1, "q": 1, "k": 0}]})
    with pytest.raises(RSymbolError):
        category_from_json(doc)


def test_malformed_header_and_json(tmp_path):
    doc = jk6_doc()
    del doc["labels"]
    with pytest.raises(MalformedCategoryError):
        category_from_json(doc)
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(MalformedCategoryError, match="invalid JSON"):
        parse_category(bad)
    doc = jk6_doc()
    doc["cyclotomic_order"] = 1000
    with pytest.raises(MalformedCategoryError):
        category_from_json(doc)


def test_document_is_not_mutated_by_parse():
    doc = jk6_doc()
    before = copy.deepcopy(doc)
    category_from_json(doc)
    assert doc == before


# --- SO(2r+1)_2 ---


def test_gen_so_r1_matches_jk6_ring():
    ring = gen_so_odd_level2(1).relabel(JK_RELABEL, order=["0", "1", "2", "3", "4"])
    assert ring == builtin_category("jk6").ring


def test_gen_so_r2_examples():
    ring = gen_so_odd_level2(2)
    assert ring.labels == ("1", "Z", "X1", "X2", "Xeps", "Xeps'")
    assert ring.fuse("X1", "X1") == ("1", "Z", "X2")
    assert ring.fuse("X2", "X2") == ("1", "Z", "X1")
    assert ring.fuse("X1", "X2") == ("X1", "X2")
    assert ring.fuse("Xeps", "Xeps") == ("1", "X1", "X2")
    assert ring.fuse("Xeps", "Xeps'") == ("Z", "X1", "X2")
    assert ring.fuse("Z", "Xeps") == ("Xeps'",)


@pytest.mark.parametrize("r", range(1, 9))
def test_gen_so_is_associative_and_commutative(r):
    ring = gen_so_odd_level2(r)
    assert len(ring.labels) == r + 4
    assert ring.labels == so_odd_level2_labels(r)
    # independent associativity check over all triples
    for a, b, c in product(ring.labels, repeat=3):
        assert ring.fuse_objects(ring.fuse(a, b), [c]) == ring.fuse_objects([a], ring.fuse(b, c))
        assert ring.fuse(a, b) == ring.fuse(b, a)
    for i in range(1, r + 1):
        assert ring.fuse("Z", f"X{i}") == (f"X{i}",)


def test_ring_to_json_round_trip():
    ring = gen_so_odd_level2(3)
    again = category_from_json(ring_to_json(ring, "so7")).ring
    assert again == ring


def test_object_expr_parse():
    assert ObjectExpr.parse("1,psi").summands == ("1", "psi")
    assert ObjectExpr.parse("1+psi") == ObjectExpr.parse(["1", "psi"])
    with pytest.raises(ValueError):
        ObjectExpr.parse("a,a")
    with pytest.raises(ValueError):
        ObjectExpr.parse("")


def test_fusion_matrix_and_invertibility():
    ring = builtin_category("jk6").ring
    assert ring.is_invertible("4") and not ring.is_invertible("2")
    m = ring.fusion_matrix("2")
    assert m.sum() == 1 + 2 + 3 + 2 + 1
    assert ring.N("2", "2", "4") == 1 and ring.N("2", "2", "1") == 0
