"""Command line front end.

Exit codes: 0 on success, 2 when an input document or matrix file cannot be
parsed, 3 when the request falls outside the supported domain (dimension cap,
invalid degree, singular matrix, zero volume).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from typing import Any

from .classify import (
    MAX_DIMENSION,
    catalog_entries,
    classify,
    fingerprint,
    sample_orbit_statistics,
)
from .docio import (
    ParseError,
    element_to_document,
    format_element,
    format_rational,
    parse_document,
    parse_rational,
)
from .exterior import (
    Form,
    FormError,
    InnerProduct,
    LinMap,
    Polyvector,
    VolumeForm,
    act,
    act_vectors,
    musical,
)
from .invariants import (
    is_multisymplectic,
    is_stable,
    kernel_vectors,
    length_and_sign,
    nilpotency_witness_degenerate,
    orbit_dimension,
    orientation_reversing_stabilizer_witness,
    rank,
    reduce_form,
    stabilizer_algebra,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3

MAX_TRIALS = 10**6


class DomainError(Exception):
    """The request is structurally valid but outside supported limits."""


def _read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _load_json(path: str) -> tuple[Any, str]:
    raw = _read_bytes(path)
    digest = hashlib.sha256(raw).hexdigest()
    try:
        return json.loads(raw.decode("utf-8")), digest
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: not valid JSON: {exc}") from exc


def _check_cap(n: int, k: int) -> None:
    if n < 1 or n > MAX_DIMENSION:
        raise DomainError(f"n must be within 1..{MAX_DIMENSION}, got {n}")
    if k < 0 or k > n:
        raise DomainError(f"k must satisfy 0 <= k <= n, got k={k} with n={n}")


def _load_element(args: argparse.Namespace):
    doc, digest = _load_json(args.input)
    element, doc_volume, doc_metric = parse_document(doc)
    _check_cap(element.n, element.k)
    volume = doc_volume
    if getattr(args, "volume", None) is not None:
        volume = parse_rational(args.volume, "--volume")
    metric_rows = doc_metric
    if getattr(args, "metric", None) is not None:
        mdoc, _ = _load_json(args.metric)
        if isinstance(mdoc, dict):
            mdoc = mdoc.get("matrix")
        if not isinstance(mdoc, list):
            raise ParseError("--metric: expected a matrix or an object with 'matrix'")
        metric_rows = [
            [parse_rational(x, f"--metric[{i + 1}][{j + 1}]") for j, x in enumerate(row)]
            for i, row in enumerate(mdoc)
        ]
    omega = None
    if volume is not None:
        if volume == 0:
            raise DomainError("volume must be nonzero")
        omega = VolumeForm(element.n, volume)
    mu = None
    if metric_rows is not None:
        try:
            mu = InnerProduct(metric_rows)
        except FormError as exc:
            raise DomainError(str(exc)) from exc
    meta = {
        "sha256": digest,
        "n": element.n,
        "k": element.k,
        "variance": "form" if isinstance(element, Form) else "vector",
    }
    return element, omega, mu, meta


def _fingerprint_json(fp) -> dict[str, Any] | None:
    if fp is None:
        return None
    return {
        "rank_profile": list(fp.rank_profile),
        "stab_dim": fp.stab_dim,
        "killing": list(fp.killing_signature),
    }


def _length_sign_json(ls) -> dict[str, Any] | None:
    if ls is None:
        return None
    return {
        "length": ls.length,
        "lambda": None if ls.lam is None else format_rational(ls.lam),
        "sign": ls.sign,
    }


def _matrix_json(m: LinMap) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in m.entries]


def _as_form(element, mu, notes: list[str]) -> Form:
    if isinstance(element, Form):
        return element
    phi = musical(mu if mu is not None else InnerProduct.identity(element.n), element)
    notes.append("vector input classified through its metric dual form")
    return phi


def cmd_classify(args: argparse.Namespace) -> dict[str, Any]:
    element, omega, mu, meta = _load_element(args)
    notes: list[str] = []
    phi = _as_form(element, mu, notes)
    report = classify(phi, omega)
    return {
        "command": "classify",
        "input": meta,
        "verdict": {
            "kind": report.kind,
            "orbit_id": report.orbit_id,
            "candidates": list(report.candidates),
        },
        "invariants": {
            "rank": report.rank,
            "fingerprint": _fingerprint_json(report.fingerprint),
            "length_sign": _length_sign_json(report.length_sign),
        },
        "canonical": None
        if report.canonical is None
        else element_to_document(report.canonical),
        "components": report.components,
        "open": report.open,
        "notes": notes + list(report.notes),
    }


def cmd_invariants(args: argparse.Namespace) -> dict[str, Any]:
    element, omega, mu, meta = _load_element(args)
    notes: list[str] = []
    n, k = element.n, element.k
    out: dict[str, Any] = {"command": "invariants", "input": meta}
    inv: dict[str, Any] = {}
    witnesses: dict[str, Any] = {}
    if k >= 1:
        r = rank(element)
        inv["rank"] = r
        if isinstance(element, Polyvector) and not element.is_zero and r < n:
            w = nilpotency_witness_degenerate(element)
            witnesses["nilpotency"] = {
                "exponents": list(w.exponents),
                "contraction_rate": w.rate,
                "basis": _matrix_json(w.basis),
            }
    else:
        inv["rank"] = None
    phi = _as_form(element, mu, notes)
    if k >= 1:
        inv["multisymplectic"] = is_multisymplectic(phi)
        inv["kernel"] = [element_to_document(v) for v in kernel_vectors(phi)]
        red = reduce_form(phi)
        inv["reduction"] = {"r": red.r, "reduced": element_to_document(red.reduced)}
        if red.r < n or phi.is_zero:
            g = orientation_reversing_stabilizer_witness(phi)
            witnesses["orientation_reversing"] = _matrix_json(g)
    S = stabilizer_algebra(phi)
    inv["stabilizer"] = {
        "dim": S.dim,
        "orbit_dimension": orbit_dimension(phi),
        "stable": is_stable(phi),
    }
    inv["fingerprint"] = _fingerprint_json(fingerprint(phi)) if k >= 1 else None
    if k == n - 2 and n >= 3:
        ls = length_and_sign(phi, omega if omega is not None else VolumeForm(n))
        inv["length_sign"] = _length_sign_json(ls)
    out["invariants"] = inv
    out["witnesses"] = witnesses
    out["notes"] = notes
    return out


def cmd_act(args: argparse.Namespace) -> dict[str, Any]:
    element, _omega, _mu, meta = _load_element(args)
    mdoc, _ = _load_json(args.matrix)
    if isinstance(mdoc, dict):
        mdoc = mdoc.get("matrix")
    if not isinstance(mdoc, list):
        raise ParseError("--matrix: expected a matrix or an object with 'matrix'")
    rows = [
        [parse_rational(x, f"--matrix[{i + 1}][{j + 1}]") for j, x in enumerate(row)]
        for i, row in enumerate(mdoc)
    ]
    try:
        g = LinMap(rows)
    except FormError as exc:
        raise ParseError(f"--matrix: {exc}") from exc
    if g.n != element.n:
        raise DomainError(f"matrix is {g.n}x{g.n} but the element lives on R^{element.n}")
    moved = act(g, element) if isinstance(element, Form) else act_vectors(g, element)
    return {
        "command": "act",
        "input": meta,
        "determinant": format_rational(g.det),
        "result": element_to_document(moved),
    }


def cmd_sample(args: argparse.Namespace) -> dict[str, Any]:
    _check_cap(args.n, args.k)
    if not (1 <= args.trials <= MAX_TRIALS):
        raise DomainError(f"trials must be within 1..{MAX_TRIALS}")
    if args.bound < 1:
        raise DomainError("bound must be at least 1")
    hist = sample_orbit_statistics(args.n, args.k, args.trials, args.bound, args.seed)
    rows = sorted(
        ({"fingerprint": str(fp), "count": c} for fp, c in hist.items()),
        key=lambda row: (-row["count"], row["fingerprint"]),
    )
    return {
        "command": "sample",
        "n": args.n,
        "k": args.k,
        "trials": args.trials,
        "bound": args.bound,
        "seed": args.seed,
        "histogram": rows,
    }


def cmd_catalog(args: argparse.Namespace) -> dict[str, Any]:
    try:
        entries = catalog_entries(args.n, args.k)
    except FormError as exc:
        raise DomainError(str(exc)) from exc
    rows = [
        {
            "name": e.name,
            "provenance": e.provenance,
            "components": e.components,
            "stabilizer_note": e.stabilizer_note,
            "representative": element_to_document(e.representative),
            "fingerprint": _fingerprint_json(e.fingerprint),
        }
        for e in entries
    ]
    out: dict[str, Any] = {
        "command": "catalog",
        "n": args.n,
        "k": args.k,
        "entries": rows,
    }
    if not rows:
        out["notes"] = [f"no catalog coverage for (n={args.n}, k={args.k})"]
    return out


def _render_text(report: dict[str, Any]) -> str:
    lines: list[str] = []
    command = report.get("command")
    meta = report.get("input")
    if meta:
        lines.append(
            f"input: n={meta['n']} k={meta['k']} variance={meta['variance']} sha256={meta['sha256'][:16]}"
        )
    if command == "classify":
        verdict = report["verdict"]
        if verdict["kind"] == "exact":
            lines.append(f"verdict: exact {verdict['orbit_id']}")
        elif verdict["kind"] == "candidates":
            lines.append("verdict: candidates " + ", ".join(verdict["candidates"]))
        else:
            lines.append("verdict: unknown")
        inv = report["invariants"]
        if inv["rank"] is not None:
            lines.append(f"rank: {inv['rank']}")
        if inv["fingerprint"] is not None:
            fp = inv["fingerprint"]
            lines.append(
                f"fingerprint: profile={tuple(fp['rank_profile'])} stab={fp['stab_dim']} killing={tuple(fp['killing'])}"
            )
        if inv["length_sign"] is not None:
            ls = inv["length_sign"]
            lines.append(
                f"length-sign: l={ls['length']} lambda={ls['lambda']} sign={ls['sign']}"
            )
        comp = report["components"]
        lines.append(f"components: {'undetermined' if comp is None else comp}")
        lines.append(f"open: {'yes' if report['open'] else 'no'}")
        if report["canonical"] is not None:
            terms = {
                tuple(t["idx"]): Fraction(t["num"], t["den"])
                for t in report["canonical"]["terms"]
            }
            canon = Form(report["canonical"]["n"], report["canonical"]["k"], terms)
            lines.append(f"canonical: {format_element(canon)}")
    elif command == "invariants":
        inv = report["invariants"]
        for key in ("rank", "multisymplectic"):
            if key in inv and inv[key] is not None:
                lines.append(f"{key}: {inv[key]}")
        if "reduction" in inv:
            lines.append(f"reduction rank: {inv['reduction']['r']}")
        stab = inv["stabilizer"]
        lines.append(
            f"stabilizer dim: {stab['dim']} orbit dim: {stab['orbit_dimension']} stable: {stab['stable']}"
        )
        if inv.get("fingerprint"):
            fp = inv["fingerprint"]
            lines.append(
                f"fingerprint: profile={tuple(fp['rank_profile'])} stab={fp['stab_dim']} killing={tuple(fp['killing'])}"
            )
        if inv.get("length_sign"):
            ls = inv["length_sign"]
            lines.append(
                f"length-sign: l={ls['length']} lambda={ls['lambda']} sign={ls['sign']}"
            )
        for name in sorted(report.get("witnesses", {})):
            lines.append(f"witness available: {name}")
    elif command == "act":
        lines.append(f"determinant: {report['determinant']}")
        doc = report["result"]
        cls = Form if doc["variance"] == "form" else Polyvector
        terms = {tuple(t["idx"]): Fraction(t["num"], t["den"]) for t in doc["terms"]}
        lines.append(f"result: {format_element(cls(doc['n'], doc['k'], terms))}")
    elif command == "sample":
        lines.append(
            f"sample: n={report['n']} k={report['k']} trials={report['trials']} bound={report['bound']} seed={report['seed']}"
        )
        for row in report["histogram"]:
            lines.append(f"  {row['count']:6d}  {row['fingerprint']}")
    elif command == "catalog":
        lines.append(f"catalog: n={report['n']} k={report['k']} entries={len(report['entries'])}")
        for row in report["entries"]:
            comp = row["components"]
            comp_text = "?" if comp is None else str(comp)
            lines.append(f"  {row['name']} [{row['provenance']}] components={comp_text}")
            terms = {
                tuple(t["idx"]): Fraction(t["num"], t["den"])
                for t in row["representative"]["terms"]
            }
            rep = Form(row["representative"]["n"], row["representative"]["k"], terms)
            lines.append(f"    representative: {format_element(rep)}")
    for note in report.get("notes", []):
        lines.append(f"note: {note}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="formlab",
        description="exact orbit invariants and classification for alternating forms",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--format",
            choices=("text", "structured"),
            default="text",
            help="text report or deterministic JSON",
        )

    p_classify = sub.add_parser("classify", help="orbit verdict for a document")
    p_classify.add_argument("input", help="JSON document path, or - for stdin")
    p_classify.add_argument("--volume", help="volume scale as a rational, e.g. 3/2")
    p_classify.add_argument("--metric", help="JSON file with an n x n matrix")
    add_common(p_classify)
    p_classify.set_defaults(func=cmd_classify)

    p_inv = sub.add_parser("invariants", help="exact invariants and witnesses")
    p_inv.add_argument("input", help="JSON document path, or - for stdin")
    p_inv.add_argument("--volume", help="volume scale as a rational")
    p_inv.add_argument("--metric", help="JSON file with an n x n matrix")
    add_common(p_inv)
    p_inv.set_defaults(func=cmd_invariants)

    p_act = sub.add_parser("act", help="apply a group element to a document")
    p_act.add_argument("input", help="JSON document path, or - for stdin")
    p_act.add_argument("--matrix", required=True, help="JSON file with the matrix")
    add_common(p_act)
    p_act.set_defaults(func=cmd_act)

    p_sample = sub.add_parser("sample", help="fingerprint histogram of random forms")
    p_sample.add_argument("n", type=int)
    p_sample.add_argument("k", type=int)
    p_sample.add_argument("--trials", type=int, default=100)
    p_sample.add_argument("--bound", type=int, default=9)
    p_sample.add_argument("--seed", type=int, default=0)
    add_common(p_sample)
    p_sample.set_defaults(func=cmd_sample)

    p_catalog = sub.add_parser("catalog", help="canonical forms known for (n, k)")
    p_catalog.add_argument("n", type=int)
    p_catalog.add_argument("k", type=int)
    add_common(p_catalog)
    p_catalog.set_defaults(func=cmd_catalog)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DomainError, FormError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.format == "structured":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(_render_text(report))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
