"""Command-line front end.

Every subcommand writes one JSON report to stdout (``--pretty`` for an
indented rendering) and diagnostics to stderr.  Exit codes: 0 success,
1 a mathematical check returned false, 2 usage or data error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import resources
from pathlib import Path
from typing import Sequence

from .finder import (
    GybeCertificate,
    check_dim_integrality,
    eigenvalue_bound_l,
    find_gybe_objects,
    fp_dimensions,
    is_gybe_object,
)
from .fusion import (
    JK_RELABEL,
    CategoryData,
    FusionDataError,
    ObjectExpr,
    builtin_category,
    gen_so_odd_level2,
    parse_category,
    ring_to_json,
)
from .linalg import (
    ExactMatrix,
    MatrixSizeError,
    SingularMatrixError,
    direct_sum,
    load_matrix,
    matrix_to_decimal_json,
    matrix_to_json,
    propose_roots_of_unity,
    save_matrix,
)
from .rep import MissingDataError, assemble, braid_rep
from .scalar import CycloScalar, FieldOrderError, default_order, root_of_unity
from .verifier import (
    DEFAULT_CLOSURE_CAP,
    braid_relation_violation,
    certify_eigenvalues,
    far_commutativity_violation,
    group_closure,
    gybe_violation,
    verify_closure,
)


class UsageError(Exception):
    pass


def _scalar_json(s: CycloScalar) -> dict:
    z = s.embed_complex()
    return {"terms": s.to_terms(), "approx": [round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0]}


def _labels(text: str) -> list[str]:
    return [p.strip() for p in text.split(",") if p.strip()]


def _data_matrix(name: str) -> ExactMatrix:
    return load_matrix(str(resources.files("gybe") / "data" / f"{name}.json"))


def _certify(cat: CategoryData, obj: str, s: str | Sequence[str]):
    x = ObjectExpr.parse(obj)
    s = _labels(s) if isinstance(s, str) else list(s)
    try:
        x.check(cat.ring)
        return is_gybe_object(cat.ring, x, s)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# --- subcommands; each returns (exit_code, report) ---

def cmd_validate(args) -> tuple[int, dict]:
    cat = parse_category(args.category)
    return 0, {
        "command": "validate",
        "valid": True,
        "name": cat.name,
        "cyclotomic_order": cat.field_order,
        "labels": list(cat.ring.labels),
        "label_count": len(cat.ring.labels),
        "r_symbol_count": len(cat.r_symbols),
        "f_matrix_count": len(cat.f_matrices),
    }


def cmd_gen_so(args) -> tuple[int, dict]:
    ring = gen_so_odd_level2(args.r)
    name = f"SO({2 * args.r + 1})_2"
    if args.relabel == "jk":
        if args.r != 1:
            raise UsageError("--relabel jk only applies to r = 1")
        ring = ring.relabel(JK_RELABEL, order=["0", "1", "2", "3", "4"])
        name = "SO(3)_2 (Jones-Kauffman labels)"
    doc = ring_to_json(ring, name, default_order())
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
        return 0, {"command": "gen-so", "r": args.r, "labels": list(ring.labels), "out": args.out}
    return 0, doc


def cmd_find_gybe(args) -> tuple[int, dict]:
    cat = parse_category(args.category)
    dims = fp_dimensions(cat.ring)
    certs = find_gybe_objects(cat.ring, args.max_summands)
    out = []
    for c in certs:
        entry = c.to_json()
        entry["dimension_equals_d"] = check_dim_integrality(c, dims)
        out.append(entry)
    ok = all(e["dimension_equals_d"] for e in out)
    return (0 if ok else 1), {
        "command": "find-gybe",
        "max_summands": args.max_summands,
        "count": len(out),
        "certificates": out,
        "fp_dimensions": {a: dims[a] for a in cat.ring.labels},
    }


def cmd_build_r(args) -> tuple[int, dict]:
    cat = parse_category(args.category)
    cert = _certify(cat, args.object, args.set)
    report: dict = {"command": "build-r", "object": args.object, "set": _labels(args.set)}
    if not isinstance(cert, GybeCertificate):
        report.update(certificate=None, refusal={"reason": cert.reason, "label": cert.label})
        return 1, report
    asm = assemble(cat, cert)
    report.update(certificate=cert.to_json(), path=asm.path, d=cert.d)
    if args.out:
        save_matrix(asm.R, args.out)
        report["out"] = args.out
    else:
        report["matrix"] = matrix_to_json(asm.R)
    return 0, report


def _check_entry(name: str, witness, dims: int) -> dict:
    return {"check": name, "result": witness is None, "dimensions": dims, "witness": None if witness is None else list(witness)}


def cmd_verify(args) -> tuple[int, dict]:
    R = load_matrix(args.matrix)
    d, m = args.d, args.m
    checks = [_check_entry("gybe", gybe_violation(R, d, m), d ** (m + 1))]
    if args.far_comm:
        checks.append(_check_entry("far_commutativity", far_commutativity_violation(R, d, m), d ** (2 * m - 1)))
    if args.braid_rep is not None:
        if m != 3:
            raise UsageError("--braid-rep needs a 3-site R-matrix (m = 3)")
        rep = braid_rep(R, d, args.braid_rep)
        checks.append(_check_entry(f"braid_relations_B{args.braid_rep}", braid_relation_violation(rep), rep.dimension))
    ok = all(c["result"] for c in checks)
    return (0 if ok else 1), {"command": "verify", "d": d, "m": m, "checks": checks}


def cmd_eigs(args) -> tuple[int, dict]:
    R = load_matrix(args.matrix)
    report: dict = {"command": "eigs"}
    bound = None
    if args.category:
        if not args.object:
            raise UsageError("--category needs --object")
        cat = parse_category(args.category)
        x = ObjectExpr.parse(args.object)
        try:
            x.check(cat.ring)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        candidates = []
        for a in x.summands:
            for b in x.summands:
                for c in cat.ring.fuse(a, b):
                    if (a, b, c) in cat.r_symbols:
                        candidates.append(cat.r_symbols[(a, b, c)])
        if not candidates:
            raise UsageError(f"category has no R-symbols for {x} x {x}")
        bound = eigenvalue_bound_l(cat.ring, x)
        report.update(source="category", eigenvalue_bound_l=bound)
    else:
        candidates, unmatched = propose_roots_of_unity(R)
        report.update(source="numeric", unmatched_numeric=[[z.real, z.imag] for z in unmatched])
        if not candidates:
            report.update(certified=[], annihilates=False)
            return 1, report
    cert = certify_eigenvalues(R, candidates)
    report.update(
        certified=[_scalar_json(s) for s in cert.certified],
        rejected=[_scalar_json(s) for s in cert.rejected],
        count=len(cert.certified),
        annihilates=cert.annihilates,
    )
    ok = cert.annihilates
    if bound is not None:
        report["within_bound"] = len(cert.certified) <= bound
        ok = ok and report["within_bound"]
    return (0 if ok else 1), report


def cmd_group_order(args) -> tuple[int, dict]:
    R = load_matrix(args.matrix)
    rep = braid_rep(R, args.d, args.n)
    t0 = time.perf_counter()
    result = group_closure(rep.generators, cap=args.cap, projective=args.projective)
    report = result.to_json()
    report.update(command="group-order", n=args.n, d=args.d, dimensions=rep.dimension)
    report["closure_verified"] = verify_closure(result, rep.generators) if result.finite else False
    if args.timing:
        report["seconds"] = round(time.perf_counter() - t0, 3)
    return (0 if not result.finite or report["closure_verified"] else 1), report


def _hadamard(order: int) -> ExactMatrix:
    h = CycloScalar.from_exponents(order, {order // 8: 1, -(order // 8): 1}) / 2
    return ExactMatrix([[h, h], [h, -h]], order)


def demo_jk6() -> tuple[int, dict]:
    cat = builtin_category("jk6")
    cert = _certify(cat, "2", ["1", "3"])
    asm = assemble(cat, cert)
    order = cat.field_order
    H = _hadamard(order)
    w = lambda p, q: root_of_unity(p, q, order)  # noqa: E731
    # the blocks of B as displayed: H diag(.) H with the listed R-symbols
    inner = H @ ExactMatrix.diag([w(1, 3), w(2, 3)], order) @ H
    outer = H @ ExactMatrix.diag([w(5, 6), w(2, 3)], order) @ H
    expected_blocks = {("1", "1"): inner, ("3", "1"): outer, ("1", "3"): outer, ("3", "3"): inner}
    one = ExactMatrix([[1]], order)
    sx = ExactMatrix([[0, 1], [1, 0]], order)
    expected_P = direct_sum([one, sx, one, one, sx, one])
    printed = _data_matrix("jk6_printed_R")
    expected_eigs = [w(1, 3), w(2, 3), w(5, 6)]
    eig = certify_eigenvalues(asm.R, [cat.r_symbol("2", "2", c) for c in cat.ring.fuse("2", "2")])
    dims = fp_dimensions(cat.ring)
    checks = {
        "blocks_match_displayed_B": all(b == expected_blocks[s] for s, b in zip(asm.sectors, asm.blocks)),
        "B_is_direct_sum_of_blocks": asm.B == direct_sum(list(asm.blocks)),
        "P_matches_displayed_P": asm.P == expected_P,
        "P_is_involution": (asm.P @ asm.P).is_identity(),
        "R_matches_printed": asm.R == printed,
        "gybe": gybe_violation(asm.R, 2, 3) is None,
        "far_commutativity": far_commutativity_violation(asm.R, 2, 3) is None,
        "eigenvalues_match_stated_set": set(eig.certified) == set(expected_eigs) and len(eig.certified) == 3,
        "eigenvalues_annihilate": eig.annihilates,
        "eigenvalue_count_within_l": len(eig.certified) <= eigenvalue_bound_l(cat.ring, cert.x),
        "R_power_6_is_identity": (asm.R**6).is_identity(),
        "dimension_equals_d": check_dim_integrality(cert, dims),
    }
    report = {
        "command": "demo",
        "name": "jk6",
        "kauffman_variable": _scalar_json(cat.kauffman_variable),
        "certificate": cert.to_json(),
        "sectors": [
            {"i": i, "j": j, "block": matrix_to_decimal_json(b)["entries"]} for (i, j), b in zip(asm.sectors, asm.blocks)
        ],
        "P": matrix_to_decimal_json(asm.P)["entries"],
        "R": matrix_to_json(asm.R),
        "R_decimal": matrix_to_decimal_json(asm.R),
        "eigenvalues": [_scalar_json(s) for s in eig.certified],
        "eigenvalue_bound_l": eigenvalue_bound_l(cat.ring, cert.x),
        "checks": checks,
    }
    return (0 if all(checks.values()) else 1), report


def demo_ising() -> tuple[int, dict]:
    cat = builtin_category("ising")
    cert = _certify(cat, "1,psi", ["1", "psi"])
    asm = assemble(cat, cert)
    printed = _data_matrix("ising_printed_R")
    candidates = [v for (a, b, _), v in cat.r_symbols.items() if a in cert.x.summands and b in cert.x.summands]
    eig = certify_eigenvalues(asm.R, candidates)
    rep = braid_rep(asm.R, 2, 3)
    closure = group_closure(rep.generators)
    checks = {
        "R_matches_printed": asm.R == printed,
        "gybe": gybe_violation(asm.R, 2, 3) is None,
        "far_commutativity": far_commutativity_violation(asm.R, 2, 3) is None,
        "eigenvalues_annihilate": eig.annihilates,
        "eigenvalue_count_within_l": len(eig.certified) <= eigenvalue_bound_l(cat.ring, cert.x),
        "dimension_equals_d": check_dim_integrality(cert, fp_dimensions(cat.ring)),
        "B3_image_finite": closure.finite and verify_closure(closure, rep.generators),
    }
    report = {
        "command": "demo",
        "name": "ising",
        "certificate": cert.to_json(),
        "path": asm.path,
        "R": matrix_to_json(asm.R),
        "R_decimal": matrix_to_decimal_json(asm.R),
        "eigenvalues": [_scalar_json(s) for s in eig.certified],
        "eigenvalue_bound_l": eigenvalue_bound_l(cat.ring, cert.x),
        "B3_image_order": closure.order,
        "checks": checks,
    }
    return (0 if all(checks.values()) else 1), report


def cmd_demo(args) -> tuple[int, dict]:
    return demo_jk6() if args.name == "jk6" else demo_ising()


# --- parser ---

_SCHEMAS = {
    "validate": '{"command", "valid": true, "name", "cyclotomic_order", "labels": [str], "label_count", '
    '"r_symbol_count", "f_matrix_count"}',
    "gen-so": "without --out: a category file {name, cyclotomic_order, labels, unit, dual, fusion: [{a, b, c}]}; "
    'with --out: {"command", "r", "labels", "out"}',
    "find-gybe": '{"command", "max_summands", "count", "certificates": [{"object", "set", "d", "decompositions", '
    '"object_outside_set", "dimension_equals_d"}], "fp_dimensions": {label: number}}',
    "build-r": '{"command", "object", "set", "certificate": {...} | null, "refusal"?, "path", "d", '
    '"matrix"? (matrix file format) , "out"?}',
    "verify": '{"command", "d", "m", "checks": [{"check", "result": bool, "dimensions", '
    '"witness": [relation, row, col] | null}]}',
    "eigs": '{"command", "source": "category"|"numeric", "certified": [{"terms", "approx"}], "rejected", "count", '
    '"annihilates", "eigenvalue_bound_l"?, "within_bound"?, "unmatched_numeric"?}',
    "group-order": '{"check": "group_closure", "result": int | "exceeded_cap", "generator_count", "projective", '
    '"cap", "command", "n", "d", "dimensions", "closure_verified"}',
    "demo": '{"command", "name", "certificate", "R": matrix, "R_decimal", "eigenvalues", "eigenvalue_bound_l", '
    '"checks": {name: bool}, ...}',
}


def _sub(subs, name: str, help: str):
    p = subs.add_parser(
        name,
        help=help,
        description=help,
        epilog=f"JSON report: {_SCHEMAS[name]}",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS, help="indent the JSON report")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gybe",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="Environment: GYBE_FIELD_ORDER overrides the default cyclotomic order (24).",
    )
    parser.add_argument("--pretty", action="store_true", help="indent the JSON report")
    subs = parser.add_subparsers(dest="command", required=True)

    p = _sub(subs, "validate", "parse and validate a category file")
    p.add_argument("category")
    p.set_defaults(func=cmd_validate)

    p = _sub(subs, "gen-so", "emit the SO(2r+1)_2 fusion ring as a category file")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--relabel", choices=["jk"], help="use Jones-Kauffman labels 0..4 (r = 1 only)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_so)

    p = _sub(subs, "find-gybe", "list all gYBE objects of a fusion ring")
    p.add_argument("category")
    p.add_argument("--max-summands", type=int, default=1)
    p.set_defaults(func=cmd_find_gybe)

    p = _sub(subs, "build-r", "assemble the 3-site R-matrix of a gYBE object")
    p.add_argument("category")
    p.add_argument("--object", required=True, help="comma-separated summands")
    p.add_argument("--set", required=True, help="comma-separated labels of S")
    p.add_argument("--out")
    p.set_defaults(func=cmd_build_r)

    p = _sub(subs, "verify", "check the gYBE and optionally far commutativity / braid relations")
    p.add_argument("matrix")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--far-comm", action="store_true")
    p.add_argument("--braid-rep", type=int, metavar="N")
    p.set_defaults(func=cmd_verify)

    p = _sub(subs, "eigs", "certify eigenvalues exactly")
    p.add_argument("matrix")
    p.add_argument("--category")
    p.add_argument("--object")
    p.set_defaults(func=cmd_eigs)

    p = _sub(subs, "group-order", "enumerate the image of B_n generated by the braid generators")
    p.add_argument("matrix")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--projective", action="store_true")
    p.add_argument("--cap", type=int, default=DEFAULT_CLOSURE_CAP)
    p.add_argument("--timing", action="store_true", help="add wall-clock seconds (breaks byte-identical output)")
    p.set_defaults(func=cmd_group_order)

    p = _sub(subs, "demo", "reproduce a worked example end to end")
    p.add_argument("name", choices=["jk6", "ising"])
    p.set_defaults(func=cmd_demo)
    return parser


_DATA_ERRORS = (
    FusionDataError,
    FieldOrderError,
    MatrixSizeError,
    SingularMatrixError,
    MissingDataError,
    UsageError,
    FileNotFoundError,
    json.JSONDecodeError,
    ValueError,
)


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        code, report = args.func(args)
    except _DATA_ERRORS as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"gybe {args.command}: {msg}", file=stderr)
        return 2
    stdout.write(json.dumps(report, indent=2 if args.pretty else None, sort_keys=True) + "\n")
    return code


def main() -> None:
    sys.exit(run())
