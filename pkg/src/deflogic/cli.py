"""Command-line front end.

Exit codes: 0 success, 1 the checked property failed, 2 unreadable or
malformed input, 3 enumeration bound exceeded, 4 contract violation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from .errors import (
    AlphabetError,
    ContractViolation,
    EnumerationBound,
    InconsistentBackground,
    MalformedProcess,
    ParseError,
    RenamingCollision,
    UndeclaredAtom,
    UnsupportedConstruction,
)
from .faithful import check_faithful, count_extensions, strongest_extensions
from .io import parse_formula, parse_qbf, parse_theory, render_theory
from .semantics import DEFAULT_SET_BOUND, Semantics, double_extensions, extensions
from .translate import (
    GENERATORS,
    add_known_extension,
    expected_extension_count,
    t_cr,
    t_jc,
    t_rc,
    t_rj,
)

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_BOUND, EXIT_CONTRACT = range(5)

_INPUT_ERRORS = (ParseError, InconsistentBackground, UndeclaredAtom, OSError, UnicodeDecodeError)
_CONTRACT_ERRORS = (
    ContractViolation,
    AlphabetError,
    UnsupportedConstruction,
    RenamingCollision,
    MalformedProcess,
)

SEMANTICS = [s.value for s in Semantics]
ROUTES = ["cr", "jc", "rc", "rj", "add-ext"]


class _Input:
    """A theory file read once, with its digest for the report."""

    def __init__(self, path: str):
        self.path = path
        data = Path(path).read_bytes()
        self.sha256 = hashlib.sha256(data).hexdigest()
        self.document = parse_theory(data.decode("utf-8"))
        self.theory = self.document.theory

    def to_json(self) -> dict:
        return {"path": self.path, "sha256": self.sha256}


def _extension_json(theory, ext) -> dict:
    return {"formula": str(ext.formula), "witness": theory.labels(ext.witness)}


def _emit(args, report: dict, lines: list[str], started: float) -> None:
    report["timing_ms"] = round((time.perf_counter() - started) * 1000, 3) if args.timing else None
    if args.json:
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("".join(line + "\n" for line in lines))


def _write_theory(theory, out: str | None) -> None:
    text = render_theory(theory)
    if out:
        Path(out).write_text(text, encoding="utf-8")


def cmd_extensions(args) -> int:
    started = time.perf_counter()
    src = _Input(args.theory)
    theory = src.theory
    report = {
        "command": "extensions",
        "inputs": [src.to_json()],
        "semantics": args.sem,
    }
    lines = []
    if args.double:
        doubles = double_extensions(theory, args.sem, args.max_defaults)
        report["double_extensions"] = [
            {
                "justifications": [str(j) for j in d.sorted_justs()],
                "formula": str(d.formula),
                "witness": theory.labels(d.witness),
            }
            for d in doubles
        ]
        report["extensions"] = [
            _extension_json(theory, e) for e in extensions(theory, args.sem, args.max_defaults)
        ]
        lines.append(f"{len(doubles)} {args.sem} double extension(s)")
        for d in doubles:
            justs = ", ".join(str(j) for j in d.sorted_justs())
            lines.append(f"  <{{{justs}}}, {d.formula}>  via [{' '.join(theory.labels(d.witness))}]")
    else:
        exts = extensions(theory, args.sem, args.max_defaults)
        report["extensions"] = [_extension_json(theory, e) for e in exts]
        lines.append(f"{len(exts)} {args.sem} extension(s)")
        for e in exts:
            lines.append(f"  {e.formula}  via [{' '.join(theory.labels(e.witness))}]")
    _emit(args, report, lines, started)
    return EXIT_OK


def cmd_translate(args) -> int:
    started = time.perf_counter()
    src = _Input(args.theory)
    theory = src.theory
    report = {"command": "translate", "inputs": [src.to_json()], "route": args.route}
    lines = []
    if args.route in ("rc", "rj"):
        sem = Semantics.RATIONAL if args.route == "rc" else Semantics.REITER
        report["semantics"] = sem.value
        no_extension = False
        ext = None
        if args.auto_strongest:
            strongest = strongest_extensions(theory, sem, args.max_defaults)
            if strongest:
                ext = strongest[0].formula
            else:
                no_extension = True
        elif args.strongest_ext is not None:
            ext = parse_formula(args.strongest_ext)
        else:
            raise ContractViolation(
                f"route {args.route} needs --strongest-ext or --auto-strongest"
            )
        fn = t_rc if args.route == "rc" else t_rj
        result = fn(
            theory,
            ext,
            no_extension=no_extension,
            bound=args.max_defaults,
            complete_guard=args.complete_guard,
        )
        report["strongest_extension"] = None if ext is None else str(ext)
    elif args.route == "cr":
        result = t_cr(theory)
    elif args.route == "jc":
        result = t_jc(theory)
    else:
        result = add_known_extension(theory)

    report["bottom"] = result.bottom
    report["fresh"] = result.fresh.to_json()
    report["out"] = args.out
    if result.bottom:
        report["theory"] = None
        lines.append("bottom: the source theory has no extension")
    else:
        _write_theory(result.theory, args.out)
        report["theory"] = render_theory(result.theory)
        if args.out:
            lines.append(f"wrote {args.out}")
        else:
            lines.append(render_theory(result.theory).rstrip("\n"))
        fresh = sorted(result.fresh.atoms())
        if fresh:
            lines.append(f"# fresh atoms: {' '.join(fresh)}")
    _emit(args, report, lines, started)
    return EXIT_OK


def cmd_verify(args) -> int:
    started = time.perf_counter()
    src, tgt = _Input(args.source), _Input(args.target)
    if args.vars == "auto":
        alphabet = None
    else:
        alphabet = [v for v in args.vars.replace(",", " ").split() if v]
    rep = check_faithful(
        src.theory, args.src_sem, tgt.theory, args.tgt_sem, alphabet, args.max_defaults
    )
    holds = rep.bijective if args.bijective else rep.faithful
    report = {
        "command": "verify",
        "inputs": [src.to_json(), tgt.to_json()],
        "semantics": {"source": args.src_sem, "target": args.tgt_sem},
        "property": "bijective" if args.bijective else "faithful",
        "holds": holds,
        "report": rep.to_json(),
    }
    lines = [
        f"source: {rep.source_count} {args.src_sem} extension(s); "
        f"target: {rep.target_count} {args.tgt_sem} extension(s)",
        f"faithful: {str(rep.faithful).lower()}",
        f"bijective: {str(rep.bijective).lower()}",
    ]
    for i, js in rep.matching:
        lines.append(f"  source {i} -> target {js}")
    _emit(args, report, lines, started)
    return EXIT_OK if holds else EXIT_FAILED


def _read_qbf(text_or_path: str) -> tuple[str, str | None]:
    p = Path(text_or_path)
    try:
        if p.is_file():
            return p.read_text(encoding="utf-8"), str(p)
    except OSError:
        pass
    return text_or_path, None


def cmd_gen(args) -> int:
    started = time.perf_counter()
    text, path = _read_qbf(args.qbf)
    q = parse_qbf(text)
    theory = GENERATORS[args.construction](q)
    _write_theory(theory, args.out)
    n, derivation = expected_extension_count(args.construction, q)
    report = {
        "command": "gen",
        "inputs": [
            {
                "path": path,
                "sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
            }
        ],
        "construction": args.construction,
        "expected_extensions": n,
        "expected": derivation,
        "out": args.out,
        "theory": render_theory(theory),
    }
    lines = []
    if args.out:
        lines.append(f"wrote {args.out}")
    else:
        lines.append(render_theory(theory).rstrip("\n"))
    lines.append(f"# expect {derivation}")
    _emit(args, report, lines, started)
    return EXIT_OK


def cmd_count(args) -> int:
    started = time.perf_counter()
    src = _Input(args.theory)
    k = 1 if args.geq is None else args.geq
    result = count_extensions(src.theory, args.sem, k, args.max_defaults)
    report = {
        "command": "count",
        "inputs": [src.to_json()],
        "semantics": args.sem,
        "count": result.count,
        "geq": None if args.geq is None else {"k": k, "holds": result.geq_k},
    }
    lines = [f"{result.count} {args.sem} extension(s)"]
    if args.geq is not None:
        lines.append(f"at least {k}: {str(result.geq_k).lower()}")
    _emit(args, report, lines, started)
    if args.geq is not None and not result.geq_k:
        return EXIT_FAILED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deflogic",
        description="Extensions, translations and faithfulness checks for propositional default logics.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument(
        "--timing", action="store_true", help="include wall-clock time in the report"
    )
    common.add_argument(
        "--max-defaults",
        type=int,
        default=DEFAULT_SET_BOUND,
        metavar="N",
        help=f"refuse to enumerate theories with more defaults (default {DEFAULT_SET_BOUND})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extensions", parents=[common], help="list extensions")
    p.add_argument("theory")
    p.add_argument("--sem", choices=SEMANTICS, required=True)
    p.add_argument("--double", action="store_true", help="list double extensions")
    p.set_defaults(func=cmd_extensions)

    p = sub.add_parser("translate", parents=[common], help="translate a theory")
    p.add_argument("theory")
    p.add_argument("--route", choices=ROUTES, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--strongest-ext", metavar="FORMULA")
    g.add_argument("--auto-strongest", action="store_true")
    p.add_argument(
        "--complete-guard",
        action="store_true",
        help="rc/rj: add the defaults that let simulations with underivable preconditions close",
    )
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("verify", parents=[common], help="check a translation is faithful")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--src-sem", choices=SEMANTICS, required=True)
    p.add_argument("--tgt-sem", choices=SEMANTICS, required=True)
    p.add_argument("--vars", default="auto", help="comma or space separated atoms, or 'auto'")
    p.add_argument("--bijective", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", parents=[common], help="generate a theory from a QBF")
    p.add_argument("--construction", choices=sorted(GENERATORS), required=True)
    p.add_argument("--qbf", required=True, help="QBF text or a file containing it")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("count", parents=[common], help="count extensions")
    p.add_argument("theory")
    p.add_argument("--sem", choices=SEMANTICS, required=True)
    p.add_argument("--geq", type=int, metavar="K")
    p.set_defaults(func=cmd_count)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EnumerationBound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except _CONTRACT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
