"""Command line front end.

Exit status: 0 on success (bound holds), 2 when a bound violation was
verified, 1 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional, Sequence

from .campaign import campaign, load_config
from .codes import Code
from .errors import ParseError, RingError
from .homweight import hom_weight, weight_bounds
from .mpc import build_counterexample, hypothesis_check, verify_dual, verify_theorem
from .pir import Pir, parse_pir
from .ringmatrix import RingMatrix, build_nsc, cput_check, is_nsc, nsc_via_residue_fields

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 2


def _load_json_text(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {what}: {exc.msg}", exc.lineno, exc.colno) from exc


def _load_json_file(path: str, what: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {what} {path!r}: {exc.strerror}") from exc
    return _load_json_text(text, f"{what} {path!r}")


def _matrix(ring: Pir, text: str) -> RingMatrix:
    return RingMatrix.from_json(ring, _load_json_text(text, "matrix"))


def _codes(ring: Pir, path: str) -> list[Code]:
    data = _load_json_file(path, "codes file")
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise ParseError("codes file must hold a list of codes")
    return [Code.from_json(ring, item) for item in data]


def _fmt_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
    return buf.getvalue()


def _emit(args, payload: dict, rows: Optional[list[dict]] = None) -> None:
    if args.format == "csv":
        text = _fmt_csv(rows if rows is not None else [payload])
    else:
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _ring(args) -> Pir:
    text = args.ring_opt or args.ring
    if not text:
        raise ParseError("a ring is required")
    return parse_pir(text)


def _need(value, flag_value, name):
    value = flag_value or value
    if value is None:
        raise ParseError(f"missing {name}")
    return value


# -- subcommands ------------------------------------------------------------------


def cmd_weights(args) -> int:
    ring = _ring(args)
    rows = []
    total = 0
    for x in ring.elements():
        w = hom_weight(ring, x)
        total += w
        rows.append({"element": ring.encode(x), "weight": str(w), "decimal": round(float(w), 12)})
    low, high = weight_bounds(ring)
    payload = {
        "ring": ring.name,
        "table": rows,
        "sum": str(total),
        "bounds": [str(low), str(high)],
    }
    _emit(args, payload, rows)
    return EXIT_OK


def cmd_nsc(args) -> int:
    ring = _ring(args)
    A = _matrix(ring, _need(args.matrix, args.matrix_opt, "matrix"))
    res = is_nsc(A)
    perm = cput_check(A)
    payload = {
        "ring": ring.name,
        "matrix": A.to_json(),
        "nsc": res.ok,
        "nsc_via_residue_fields": nsc_via_residue_fields(A),
        "failing_minor": None if res.ok else {"k": res.k, "columns": list(res.columns)},
        "column_permutation_upper_triangular": None if perm is None else list(perm),
    }
    _emit(args, payload)
    return EXIT_OK


def cmd_build_nsc(args) -> int:
    ring = _ring(args)
    A = build_nsc(ring, args.m, args.l)
    _emit(args, {"ring": ring.name, "matrix": A.to_json(), "nsc": bool(is_nsc(A))})
    return EXIT_OK


def cmd_verify(args) -> int:
    ring = _ring(args)
    A = _matrix(ring, _need(args.matrix, args.matrix_opt, "matrix"))
    codes = _codes(ring, _need(args.codes, args.codes_opt, "codes file"))
    report = verify_theorem(codes, A, strict=False)
    payload = report.to_json()
    payload["ring"] = ring.name
    payload["hypothesis_reason"] = hypothesis_check(ring).reason
    _emit(args, payload)
    return EXIT_OK if report.bound_holds else EXIT_VIOLATION


def cmd_dual_verify(args) -> int:
    ring = _ring(args)
    A = _matrix(ring, _need(args.matrix, args.matrix_opt, "matrix"))
    codes = _codes(ring, _need(args.codes, args.codes_opt, "codes file"))
    report = verify_dual(codes, A, strict=False)
    payload = report.to_json()
    payload["ring"] = ring.name
    _emit(args, payload)
    return EXIT_OK if report.bound_holds and report.identity_holds else EXIT_VIOLATION


def cmd_counterexample(args) -> int:
    ring = _ring(args)
    ce = build_counterexample(ring)
    _emit(args, ce.to_json())
    return EXIT_OK if ce.report.bound_holds else EXIT_VIOLATION


def cmd_campaign(args) -> int:
    config = load_config(_need(args.config, args.config_opt, "config file"))
    if args.seed is not None:
        config.seed = args.seed
    if args.trials is not None:
        config.trials = args.trials
    config.__post_init__()
    report = campaign(config)
    fmt = args.format or config.format
    text = report.render(fmt)
    out = args.out or config.out
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_VIOLATION if report.violations else EXIT_OK


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pirmpc",
        description="Homogeneous weights and matrix product codes over finite principal ideal rings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, ring=True, fmt_default="json"):
        if ring:
            p.add_argument("ring", nargs="?", help='ring, e.g. "Z6" or "Z4 x Z9 x F4"')
            p.add_argument("--ring", dest="ring_opt")
        p.add_argument("--format", choices=("json", "csv"), default=fmt_default)
        p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("weights", help="homogeneous weight of every ring element")
    common(p)
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("nsc", help="test a matrix for non-singularity by columns")
    common(p)
    p.add_argument("matrix", nargs="?", help="JSON list of rows")
    p.add_argument("--matrix", dest="matrix_opt")
    p.set_defaults(func=cmd_nsc)

    p = sub.add_parser("build-nsc", help="construct an m x l NSC matrix")
    common(p)
    p.add_argument("m", type=int)
    p.add_argument("l", type=int)
    p.set_defaults(func=cmd_build_nsc)

    for name, func, text in (
        ("verify", cmd_verify, "check the distance bound on one instance"),
        ("dual-verify", cmd_dual_verify, "check the dual-code statement on one instance"),
    ):
        p = sub.add_parser(name, help=text)
        common(p)
        p.add_argument("matrix", nargs="?")
        p.add_argument("--matrix", dest="matrix_opt")
        p.add_argument("codes", nargs="?", help="JSON file holding a list of codes")
        p.add_argument("--codes", dest="codes_opt")
        p.set_defaults(func=func)

    p = sub.add_parser("counterexample", help="build the sharpness example for q_2 = q_1 + 1")
    common(p)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("campaign", help="seeded randomized campaign")
    common(p, ring=False, fmt_default=None)
    p.add_argument("config", nargs="?", help="JSON config file")
    p.add_argument("--config", dest="config_opt")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.set_defaults(func=cmd_campaign)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
