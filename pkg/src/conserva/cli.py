"""Command-line entry point: ``conserva <show|solve|construct|verify-paper>``.

Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra import BUILTIN_FILES, Algebra, SchemaError, builtin, load_algebra_file, multiply, save_algebra, to_document
from .biderivations import biderivation_space, skew_biderivation_space, symmetric_biderivation_space
from .derivations import centroid, delta_derivation_space
from .exactnum import format_rational, parse_rational
from .kantor import BilinearMap, build_wn, closure_failures, subalgebra, symmetric_subspace, trace_zero_subspace

MAP_KINDS = ("derivations", "delta-derivations", "centroid")
BILINEAR_KINDS = ("biderivations", "biderivations-sym", "biderivations-skew")


class UsageError(Exception):
    """Bad arguments or unreadable input; exit status 2."""


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False)


def resolve_algebra(spec: str, algebra_dir=None) -> Algebra:
    """A builtin name, or a path to a schema document."""
    try:
        if spec in BUILTIN_FILES:
            return builtin(spec, algebra_dir)
        path = Path(spec)
        if path.is_file():
            return load_algebra_file(path)
    except (OSError, SchemaError) as exc:
        raise UsageError(str(exc)) from exc
    raise UsageError(f"unknown algebra {spec!r}: not one of {', '.join(BUILTIN_FILES)} and not a file")


# -- show ------------------------------------------------------------------

def render_table(A: Algebra) -> str:
    labels = A.basis_labels
    basis = A.basis()
    cells = [[A.format_element(multiply(A, x, y)) for y in basis] for x in basis]
    width = max([len(s) for s in labels] + [len(c) for row in cells for c in row] + [1])
    lines = [f"{A.name} (dim {A.dim})"]
    lines.append(" | ".join([" " * width] + [s.rjust(width) for s in labels]))
    lines.append("-+-".join(["-" * width] * (A.dim + 1)))
    for label, row in zip(labels, cells):
        lines.append(" | ".join([label.rjust(width)] + [c.rjust(width) for c in row]))
    return "\n".join(lines)


def cmd_show(args) -> int:
    A = resolve_algebra(args.algebra, args.algebra_dir)
    text = save_algebra(A).rstrip("\n") if args.json else render_table(A)
    _emit(args, text)
    return 0


# -- solve -----------------------------------------------------------------

def _map_lines(A: Algebra, D) -> list[str]:
    return [f"  {label} -> {A.format_element(D.column(j))}" for j, label in enumerate(A.basis_labels)]


def _bilinear_lines(A: Algebra, b: BilinearMap) -> list[str]:
    m, labels = A.dim, A.basis_labels
    out = []
    for i in range(m):
        for j in range(m):
            v = b(A.basis_vector(i), A.basis_vector(j))
            if any(v):
                out.append(f"  ({labels[i]}, {labels[j]}) -> {A.format_element(v)}")
    return out or ["  0"]


def _bilinear_entries(b: BilinearMap) -> list[list]:
    n = b.n
    return [[i + 1, j + 1, k + 1, format_rational(b.t(i, j, k))]
            for i in range(n) for j in range(n) for k in range(n) if b.t(i, j, k)]


def cmd_solve(args) -> int:
    kind = args.kind
    if kind == "delta-derivations" and args.delta is None:
        raise UsageError("delta-derivations needs --delta P/Q")
    if kind != "delta-derivations" and args.delta is not None:
        raise UsageError(f"--delta only applies to delta-derivations, not {kind}")
    delta = None
    if args.delta is not None:
        try:
            delta = parse_rational(args.delta)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    A = resolve_algebra(args.algebra, args.algebra_dir)

    if kind in MAP_KINDS:
        if kind == "derivations":
            space = delta_derivation_space(A, 1)
        elif kind == "centroid":
            space = centroid(A)
        else:
            space = delta_derivation_space(A, delta)
        doc_basis = [[[format_rational(D[r, c]) for c in range(D.cols)] for r in range(D.rows)]
                     for D in space]
        convention = "matrix column j is the image of basis vector j"
        blocks = [[f"D{t + 1}:"] + _map_lines(A, D) for t, D in enumerate(space)]
    else:
        solver = {"biderivations": biderivation_space,
                  "biderivations-sym": symmetric_biderivation_space,
                  "biderivations-skew": skew_biderivation_space}[kind]
        space = solver(A)
        doc_basis = [_bilinear_entries(b) for b in space]
        convention = "entries [i, j, k, c]: the value at (e_i, e_j) has coefficient c on e_k"
        blocks = [[f"B{t + 1}:"] + _bilinear_lines(A, b) for t, b in enumerate(space)]

    if args.json:
        doc = {"algebra": A.name, "kind": kind, "dim": len(space), "convention": convention,
               "basis": doc_basis}
        if delta is not None:
            doc["delta"] = format_rational(delta)
        text = _dump(doc)
    else:
        head = f"{kind} of {A.name}" + (f" (delta = {format_rational(delta)})" if delta is not None else "")
        lines = [head, f"dim {len(space)}"]
        for block in blocks:
            lines.extend(block)
        text = "\n".join(lines)
    _emit(args, text)
    return 0


# -- construct -------------------------------------------------------------

def _parse_e(text: str | None, n: int):
    if text is None:
        return tuple([1] + [0] * (n - 1))
    try:
        return tuple(parse_rational(part.strip()) for part in text.split(","))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_construct(args) -> int:
    n = args.n
    e = _parse_e(args.e, n)
    try:
        W = build_wn(n, e)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    parts = {}
    for key, basis, title in (("symmetric", symmetric_subspace(W), "commutative"),
                              ("trace_zero", trace_zero_subspace(W), "commutative trace-zero")):
        failures = closure_failures(W, basis)
        entry = {"dim": len(basis), "closed": not failures}
        if not failures:
            entry["algebra"] = to_document(subalgebra(W, basis, f"{title} subalgebra of {W.result.name}"))
        parts[key] = entry
    if args.output:
        try:
            Path(args.output).write_text(save_algebra(W.result))
        except OSError as exc:
            raise UsageError(str(exc)) from exc
    if args.json:
        text = _dump({"n": n, "e": [format_rational(v) for v in W.e],
                      "algebra": to_document(W.result), **parts})
    else:
        lines = [f"{W.result.name}: dim {W.result.dim}"]
        for key, label in (("symmetric", "symmetric subspace"), ("trace_zero", "trace-zero subspace")):
            entry = parts[key]
            lines.append(f"{label}: dim {entry['dim']}, "
                         f"{'closed' if entry['closed'] else 'not closed'} under the Kantor product")
        if args.output:
            lines.append(f"algebra written to {args.output}")
        text = "\n".join(lines)
    print(text)
    return 0


# -- verify-paper ----------------------------------------------------------

def cmd_verify(args) -> int:
    from .verify import verify_paper

    if args.algebra_dir is not None and not Path(args.algebra_dir).is_dir():
        raise UsageError(f"not a directory: {args.algebra_dir}")
    try:
        report = verify_paper(args.algebra_dir)
    except (OSError, SchemaError) as exc:
        raise UsageError(str(exc)) from exc
    if args.json:
        text = _dump(report.to_json())
    else:
        lines = []
        for c in report.claims:
            lines.append(f"[{c.status}] {c.id}: {c.paper}")
            lines.append(f"    expected: {c.expected}")
            lines.append(f"    computed: {c.computed}")
        counts = {s: sum(c.status == s for c in report.claims) for s in ("pass", "discrepancy-flag", "fail")}
        lines.append(", ".join(f"{v} {k}" for k, v in counts.items()))
        text = "\n".join(lines)
    _emit(args, text)
    return 0 if report.ok else 1


# -- plumbing --------------------------------------------------------------

def _emit(args, text: str):
    if getattr(args, "output", None):
        try:
            Path(args.output).write_text(text + "\n")
        except OSError as exc:
            raise UsageError(str(exc)) from exc
    else:
        print(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--algebra-dir", metavar="PATH",
                        help="directory of table files overriding the packaged ones")
    common.add_argument("--output", metavar="FILE", help="write the output to FILE")

    parser = argparse.ArgumentParser(prog="conserva", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("show", parents=[common], help="print a multiplication table")
    p.add_argument("algebra", help="builtin name or JSON file")
    p.set_defaults(func=cmd_show)

    p = sub.add_parser("solve", parents=[common], help="solve for a space of maps")
    p.add_argument("kind", choices=MAP_KINDS + BILINEAR_KINDS)
    p.add_argument("algebra", help="builtin name or JSON file")
    p.add_argument("--delta", metavar="P/Q", help="the scalar of delta-derivations")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("construct", parents=[common], help="build W(n) under the Kantor product")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--e", metavar="CSV", help="coordinates of the fixed vector (default 1,0,...,0)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify-paper", parents=[common], help="check every published claim")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"conserva: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
