"""Command-line entry point.

Exit codes: 0 success, 1 usage or config error, 2 the set is not B2,
3 a numeric certificate failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Optional, Sequence

from .constructions import FAMILIES, ConstructionError, construct
from .core import B2Set, make_b2_set
from .cosine import CertificationError, CosinePolynomial, cosine_from_b2, minimize, cosine_min_probe
from .experiment import COLUMNS, ExperimentConfig, ExperimentError, format_value, run_to_file
from .residue import analyze_set, summary
from .verify import NotB2Error, verify_b2

EXIT_OK, EXIT_USAGE, EXIT_NOT_B2, EXIT_CERT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


_DIRECTIVE = re.compile(r"\bN\s*=\s*(\d+)")
_FAMILY_REF = re.compile(r"^([a-z_]+):(\d+)$")


def parse_set_text(text: str) -> tuple[list[int], Optional[int]]:
    """Whitespace-separated integers with ``#`` comments; a comment ``N=<int>`` sets the bound."""
    values, bound = [], None
    for line in text.splitlines():
        body, _, comment = line.partition("#")
        hit = _DIRECTIVE.search(comment)
        if hit:
            bound = int(hit.group(1))
        for tok in body.split():
            try:
                values.append(int(tok))
            except ValueError:
                raise UsageError(f"not an integer: {tok!r}") from None
    return values, bound


def load_set(tokens: Sequence[str], N: Optional[int] = None) -> B2Set:
    """Build a set from inline integers, a file path, or ``family:param``."""
    bound = None
    if len(tokens) == 1 and _FAMILY_REF.match(tokens[0]):
        fam, param = _FAMILY_REF.match(tokens[0]).groups()
        try:
            return construct(fam, int(param)).set
        except ConstructionError as exc:
            raise UsageError(str(exc)) from None
    if len(tokens) == 1 and Path(tokens[0]).is_file():
        values, bound = parse_set_text(Path(tokens[0]).read_text(encoding="utf-8"))
    else:
        values, bound = parse_set_text(" ".join(tokens))
    N = N or bound or (max(values) if values else 1)
    try:
        return make_b2_set(values, N)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _int_list(tokens: Sequence[str]) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_construct(args) -> int:
    try:
        out = construct(args.family, args.param)
    except ConstructionError as exc:
        raise UsageError(str(exc)) from None
    if args.header:
        print(f"# {out.family} param={out.parameter} N={out.advertised_N} k={out.advertised_k}")
    print(" ".join(map(str, out.set.elements)))
    return EXIT_OK


def cmd_verify(args) -> int:
    A = load_set(args.set, args.N)
    verdict = verify_b2(A)
    print(verdict.describe())
    return EXIT_OK if verdict else EXIT_NOT_B2


def cmd_analyze(args) -> int:
    A = load_set(args.set, args.N)
    record = analyze_set(A, args.m, args.c)
    if args.json:
        print(json.dumps(summary(record), indent=1))
    else:
        row = record.row()
        for col in COLUMNS[2:]:
            print(f"{col}={format_value(row[col])}")
    return EXIT_OK


def cmd_cosmin(args) -> int:
    if args.freqs:
        freqs = _int_list(args.freqs)
        if sorted(set(freqs)) != freqs or freqs[0] < 1:
            raise UsageError("frequencies must be positive and strictly increasing")
        poly = CosinePolynomial.pure(freqs)
        try:
            probe = cosine_min_probe(freqs, args.grid_factor)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        poly = cosine_from_b2(load_set(args.from_set))
        probe = None
    grid = max(args.grid_factor * poly.lambda_max, 64)
    result = minimize(poly, grid)
    payload = {"minimization": asdict(result)}
    if probe is not None:
        payload["probe"] = asdict(probe)
    print(json.dumps(payload, indent=1))
    return EXIT_OK


def cmd_experiment(args) -> int:
    config = ExperimentConfig.load(args.config)
    if args.format:
        config.format = args.format
    path = run_to_file(config, args.output)
    print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sidonlab", description="Dense B2 sets and their residue-class uniformity.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="print a classical B2 set")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("param", type=int, help="prime p, or term count for mian_chowla")
    p.add_argument("--header", action="store_true", help="emit a '# ... N=<bound>' comment line first")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check the B2 property")
    p.add_argument("set", nargs="+", help="integers, a set file, or family:param")
    p.add_argument("--N", type=int, help="ambient bound (default: file directive or max element)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="residue-class deviation against the two-branch bound")
    p.add_argument("set", nargs="+", help="integers, a set file, or family:param")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--N", type=int, help="ambient bound (default: file directive or max element)")
    p.add_argument("--c", type=float, default=1.0, help="constant in epsilon = c (m / sqrt N)^(1/2)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("cosmin", help="certified minimum of a cosine sum")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--freqs", nargs="+")
    src.add_argument("--from-set", nargs="+")
    p.add_argument("--grid-factor", type=int, default=8)
    p.set_defaults(func=cmd_cosmin)

    p = sub.add_parser("experiment", help="run a batch described by a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--output")
    p.add_argument("--format", choices=("csv", "json"))
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if getattr(args, "grid_factor", 8) < 8:
            raise UsageError("--grid-factor must be at least 8")
        if getattr(args, "m", 1) < 1:
            raise UsageError("--m must be >= 1")
        return args.func(args)
    except (UsageError, ExperimentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotB2Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_B2
    except CertificationError as exc:
        print(f"certification failure: {exc}", file=sys.stderr)
        return EXIT_CERT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
