"""Command-line front end (``wsa``).

Exit codes: 0 success / all checks pass, 1 a check failed or a degenerate
configuration was found, 2 invalid input or usage.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from pathlib import Path as FilePath

from .algebra import (
    FormDegenerate,
    FormNotSymmetric,
    NotSymmetricCandidate,
    TruncationUnstable,
    build_algebra,
)
from .document import QuiverDocument, document_from_data, document_from_presentation
from .field import FieldSpec, InvalidScalar
from .homology import check_period4, resolve, simple
from .presentation import gabriel_quiver, generate_relations
from .quiver import (
    CATALOG_NAMES,
    InvalidWeights,
    MalformedQuiver,
    QuiverError,
    catalog,
    find_qprime_configs,
    generate_glued,
    glued_weights,
)
from .verify import detect_extra_socle, verify_all

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

CATALOG_DESCRIPTIONS = {
    "T": "triangle quiver: virtual loops at 1 and 3 joined by a g-cycle of length 4",
    "S": "spherical quiver: two g-4-cycles and two virtual g-2-cycles",
    "LOOP-PAIR": "a virtual loop and a virtual 2-cycle in one quiver",
    "GLUED(n)": "cyclic quiver on n vertices with a Q' copy attached at each vertex",
}


class UsageError(Exception):
    pass


# -- input ---------------------------------------------------------------------------


def _parse_sets(items: list[str]) -> tuple[dict, dict]:
    c, m = {}, {}
    for item in items or []:
        kind, sep, rest = item.partition(":")
        key, eq, value = rest.partition("=")
        if not sep or not eq or kind not in ("c", "m") or not key or not value:
            raise UsageError(f"--set {item!r}: expected c:<arrow>=<value> or m:<arrow>=<k>")
        (c if kind == "c" else m)[key] = value
    return c, m


def _resolve_arrow(doc: QuiverDocument, key: str, flag: str) -> str:
    if key in doc.tq.f:
        return key
    if key.endswith("-cycle") and key[: -len("-cycle")] in doc.tq.f:
        return key[: -len("-cycle")]
    raise UsageError(f"{flag}: unknown arrow {key!r}")


def load_document(args) -> tuple[QuiverDocument, dict]:
    if bool(args.input) == bool(args.catalog):
        raise UsageError("give exactly one of an input file or --catalog NAME")
    if args.catalog:
        tq, m = catalog(args.catalog)
        doc = QuiverDocument(tq, m, None, FieldSpec(101))
        if args.field is not None:
            doc.field = _field(args.field)
    else:
        try:
            text = FilePath(args.input).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedQuiver(f"invalid JSON: {exc}") from None
        if args.field is not None and isinstance(data, dict):
            data["field"] = args.field
        doc = document_from_data(data)
    c_sets, m_sets = _parse_sets(getattr(args, "set", None))
    for key, value in m_sets.items():
        arrow = _resolve_arrow(doc, key, "--set")
        try:
            k = int(value)
        except ValueError:
            raise UsageError(f"--set m:{key}={value}: weight must be an integer") from None
        if k < 1:
            raise InvalidWeights(f"weight of the g-cycle of {arrow} must be positive", arrow)
        doc.weights[doc.tq.g_cycles.representative(arrow)] = k
    overrides = {_resolve_arrow(doc, key, "--set"): value for key, value in c_sets.items()}
    return doc, overrides


def _field(p: int) -> FieldSpec:
    try:
        return FieldSpec(p)
    except ValueError as exc:
        raise MalformedQuiver(str(exc), "field") from None


def load_presentation(args):
    doc, overrides = load_document(args)
    try:
        pres = doc.presentation(seed=args.seed, overrides=overrides)
    except InvalidScalar as exc:
        raise UsageError(f"--set: {exc}") from None
    return doc, pres


def _name(args) -> str:
    return args.catalog or args.input


def _build(args, pres):
    return build_algebra(pres, args.truncation)


# -- subcommands ---------------------------------------------------------------------------


def cmd_validate(args, out) -> int:
    doc, pres = load_presentation(args)
    tq = doc.tq
    out(f"valid: {len(tq.vertices)} vertices, {len(tq.arrows)} arrows, "
        f"{len(tq.f_cycles.cycles)} f-cycles, {len(tq.g_cycles.cycles)} g-cycles")
    return EXIT_OK


def _info_data(pres) -> dict:
    tq, F = pres.tq, pres.field
    rels = generate_relations(pres)
    gab = gabriel_quiver(pres)
    return {
        "f_cycles": [list(c) for c in tq.f_cycles.cycles],
        "g_cycles": [{"cycle": list(c), "n": len(c), "m": pres.m[c[0]], "c": F.to_json(pres.c[c[0]])}
                     for c in tq.g_cycles.cycles],
        "virtual": sorted(pres.virtual),
        "gabriel_quiver": [{"id": a.id, "source": a.source, "target": a.target}
                           for a in sorted(gab.arrows, key=lambda a: a.id)],
        "relations": {
            "commutativity": [r.format(F) for r in rels.commutativity],
            "zeta": [r.arrow for r in rels.zeta],
            "xi": [r.arrow for r in rels.xi],
        },
        "exceptions": [{"kind": k, "arrow": a, "clause": cl} for (k, a), cl in sorted(rels.exceptions.items())],
        "qprime_hits": [{"abar": h.abar, "alpha": h.alpha, "short_length": h.short_length,
                         "long_length": h.long_length} for h in find_qprime_configs(tq)],
    }


def cmd_info(args, out) -> int:
    doc, pres = load_presentation(args)
    data = _info_data(pres)
    if args.json:
        data = {"document": document_from_presentation(pres).to_dict(), **data}
        out(json.dumps(data, indent=2))
        return EXIT_OK
    fmt = lambda cyc: "(" + " ".join(cyc) + ")"
    out("f-cycles: " + "".join(fmt(c) for c in data["f_cycles"]))
    out("g-cycles: " + "".join(fmt(c["cycle"]) for c in data["g_cycles"]))
    for c in data["g_cycles"]:
        out(f"  {fmt(c['cycle'])}: n = {c['n']}, m = {c['m']}, c = {c['c']}")
    out("virtual: {" + ", ".join(data["virtual"]) + "}")
    out("gabriel quiver: " + ", ".join(f"{a['id']}: {a['source']}->{a['target']}"
                                      for a in data["gabriel_quiver"]))
    out("relations:")
    for line in generate_relations(pres).report(pres.field).splitlines():
        out("  " + line)
    hits = data["qprime_hits"]
    out(f"Q' hits: {len(hits)}")
    for h in hits:
        out(f"  abar = {h['abar']}, alpha = {h['alpha']}: g-cycle lengths {h['short_length']} and {h['long_length']}")
    return EXIT_OK


def cmd_build(args, out) -> int:
    doc, pres = load_presentation(args)
    A = _build(args, pres)
    if args.json:
        out(json.dumps({
            "dimension": A.dim,
            "bound": A.bound,
            "checked_bound": A.checked_bound,
            "vertex_dimensions": A.projective_dims(),
            "loewy_length": A.loewy_length(),
        }, indent=2))
    else:
        out(f"dimension: {A.dim}")
        out("vertex dimensions: " + ", ".join(f"{v}: {d}" for v, d in A.projective_dims().items()))
        out(f"truncation: {A.bound} (stable at {A.checked_bound})")
        out(f"loewy length: {A.loewy_length()}")
    if args.dump_basis:
        out(A.dump_basis())
    if args.dump_table:
        out(A.dump_table())
    return EXIT_OK


def cmd_basis(args, out) -> int:
    doc, pres = load_presentation(args)
    A = _build(args, pres)
    out(A.dump_basis())
    if args.dump_table:
        out(A.dump_table())
    return EXIT_OK


def cmd_socle(args, out) -> int:
    doc, pres = load_presentation(args)
    A = _build(args, pres)
    ok = True
    rows = []
    for v in pres.vertices:
        soc = A.socle_right(v)
        x, y = pres.tq.quiver.out_arrows(v)
        Bx, By = A.evaluate(pres.B(x)), A.evaluate(pres.B(y))
        ratio = Bx.proportional_to(By)
        good = soc.dim == 1 and not Bx.is_zero() and ratio is not None and soc.contains(Bx.vector())
        ok = ok and good
        rows.append({"vertex": v, "dimension": soc.dim, f"B_{x}": A.format_element(Bx),
                     f"B_{y}": A.format_element(By), "ok": good})
    status, configs = _extra(A)
    if args.json:
        out(json.dumps({"socles": rows, "extra_socle": status, "configurations": configs}, indent=2))
    else:
        for r in rows:
            bs = [f"{k} = {val}" for k, val in r.items() if k.startswith("B_")]
            out(f"{r['vertex']}: socle dimension {r['dimension']}; " + "; ".join(bs))
        out(f"extra socle: {status}")
        for cfg in configs:
            out(f"  {cfg}")
    return EXIT_OK if ok and status != "DEGENERATE" else EXIT_FAIL


def _extra(A):
    status, findings = detect_extra_socle(A)
    return status, [f"vertex {x.vertex}: {x.status}" + (f", witness {x.witness}" if x.witness else "")
                    for x in findings]


def cmd_symmetry(args, out) -> int:
    doc, pres = load_presentation(args)
    A = _build(args, pres)
    F = A.field
    try:
        form = A.symmetrizing_form()
    except (NotSymmetricCandidate, FormNotSymmetric, FormDegenerate) as exc:
        out(f"no symmetrizing form: {exc}")
        return EXIT_FAIL
    data = {
        "pairs_checked": form.pairs_checked,
        "socle_values": {v: F.to_json(w) for v, w in form.weights.items()},
        "values": {str(A.basis[k]): F.to_json(x) for k, x in sorted(form.values.items())},
        "symmetric": True,
        "nondegenerate": True,
    }
    if args.json:
        out(json.dumps(data, indent=2))
    else:
        out(f"symmetric on {form.pairs_checked} composable basis pairs; nondegenerate")
        for p, x in data["values"].items():
            out(f"  phi({p}) = {x}")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    doc, pres = load_presentation(args)
    report = verify_all(pres, _name(args), bound=args.truncation)
    if args.json:
        data = report.to_json()
        data["seed"] = args.seed
        data["field"] = pres.field.characteristic
        out(json.dumps(data, indent=2))
    else:
        out(report.text())
    degenerate = report.extra_socle == "DEGENERATE" or bool(report.singular)
    return EXIT_OK if report.verdict == "VERIFIED" and not degenerate else EXIT_FAIL


def cmd_resolve(args, out) -> int:
    doc, pres = load_presentation(args)
    A = _build(args, pres)
    vertices = [args.vertex] if args.vertex else list(pres.vertices)
    if args.vertex and args.vertex not in pres.vertices:
        raise UsageError(f"--vertex: unknown vertex {args.vertex!r}")
    results = []
    ok = True
    for v in vertices:
        rep = check_period4(A, v, raise_on_failure=False)
        cert = resolve(simple(A, v), 4).certificate
        ok = ok and rep.passed
        results.append((rep, cert))
    if args.json:
        out(json.dumps([{**rep.to_json(), "certificate": cert} for rep, cert in results], indent=2))
    else:
        for rep, cert in results:
            out(f"vertex {rep.vertex} ({rep.setting})")
            for k, t in enumerate(rep.terms):
                out(f"  P_{k} = " + " + ".join(f"P_{x}" for x in t))
            out("  syzygy dims: " + ", ".join(f"Omega^{k + 1}: {d}" for k, d in enumerate(rep.syzygy_dims)))
            for name, passed in rep.checks.items():
                out(f"  {'pass' if passed else 'FAIL'} {name}")
            for s in rep.singular:
                out(f"  singular: {s}")
            out(f"  period 4: {'yes' if rep.passed else 'no'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_catalog(args, out) -> int:
    if not args.name:
        for key in CATALOG_NAMES:
            out(f"{key}\t{CATALOG_DESCRIPTIONS[key]}")
        return EXIT_OK
    tq, m = catalog(args.name)
    out(QuiverDocument(tq, m, None, _field(args.field or 101)).to_json().rstrip("\n"))
    return EXIT_OK


def cmd_gen_glued(args, out) -> int:
    if args.n < 1:
        raise UsageError("gen-glued: n must be at least 1")
    tq = generate_glued(args.n)
    out(QuiverDocument(tq, glued_weights(tq, args.n), None, _field(args.field or 101)).to_json().rstrip("\n"))
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------


def _add_input(p: argparse.ArgumentParser):
    p.add_argument("input", nargs="?", help="quiver document (JSON)")
    p.add_argument("--catalog", metavar="NAME", help="catalog entry instead of a file")
    p.add_argument("--field", type=int, help="field characteristic (prime, or 0 for the rationals)")
    p.add_argument("--seed", type=int, default=0, help="seed for generic parameters (default 0)")
    p.add_argument("--truncation", type=int, help="override the path-length bound")
    p.add_argument("--set", action="append", metavar="c:ARROW=V|m:ARROW=K",
                   help="fix a g-cycle parameter or weight (repeatable)")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wsa", description="Weighted surface algebras: build and verify.")
    sub = parser.add_subparsers(dest="command", required=True)
    handlers = {}
    for name, fn, extra in [
        ("validate", cmd_validate, ()),
        ("info", cmd_info, ()),
        ("build", cmd_build, ("dump",)),
        ("basis", cmd_basis, ("table",)),
        ("socle", cmd_socle, ()),
        ("symmetry", cmd_symmetry, ()),
        ("verify", cmd_verify, ()),
        ("resolve", cmd_resolve, ("vertex",)),
    ]:
        p = sub.add_parser(name)
        _add_input(p)
        if "dump" in extra:
            p.add_argument("--dump-basis", action="store_true", help="print basis and normal forms")
            p.add_argument("--dump-table", action="store_true", help="print the multiplication table")
        if "table" in extra:
            p.add_argument("--dump-table", action="store_true", help="also print the multiplication table")
        if "vertex" in extra:
            p.add_argument("--vertex", help="only this vertex")
        p.set_defaults(handler=fn)
    p = sub.add_parser("catalog")
    p.add_argument("name", nargs="?", help="print this entry as a quiver document")
    p.add_argument("--field", type=int)
    p.set_defaults(handler=cmd_catalog)
    p = sub.add_parser("gen-glued")
    p.add_argument("n", type=int)
    p.add_argument("--field", type=int)
    p.set_defaults(handler=cmd_gen_glued)
    return parser


def main(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    def out(text: str):
        stdout.write(text + "\n")

    try:
        return args.handler(args, out)
    except UsageError as exc:
        stderr.write(f"wsa: error: {exc}\n")
        return EXIT_INPUT
    except QuiverError as exc:
        where = f" [{exc.subject}]" if exc.subject is not None else ""
        stderr.write(f"wsa: {exc.name}{where}: {exc}\n")
        return EXIT_INPUT
    except TruncationUnstable as exc:
        stderr.write(f"wsa: TruncationUnstable: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
