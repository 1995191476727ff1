"""Command-line front end.

Subcommands: generate, analyze, profile, verify, plot.  Exit codes are a
stable contract: 0 success, 1 verification failure, 2 usage or input
error, 3 resource budget exceeded.  Data goes to stdout unless -o names a
file, in which case a provenance sidecar ``<out>.meta.json`` is written
next to it; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import IO, Callable, Sequence

from .digital import MAX_SCALE, GeneratorPair, prefix
from .geometry import (
    DEFAULT_RESOLUTION,
    Norm,
    ResourceBudgetError,
    covering_certified,
    mesh_ratio_from_parts,
    separation,
    separation_profile,
)
from .gf2 import BitMatrix
from .reports import (
    read_separation_rows,
    render_scaling_plot,
    write_analyze_row,
    write_points,
    write_separation_rows,
    write_sidecar,
    write_verify_rows,
)
from .theory import CROSS_CHECK_CEILING, run_verify

__all__ = ["main", "load_generator"]

# Ceilings for the verify sweep: the default keeps the run at around a
# second; --exhaustive accepts minutes; --formula-only costs nothing per m.
EXHAUSTIVE_CEILING = 20
FORMULA_CEILING = MAX_SCALE

# Default prefix sizes stop here so a bare -m cannot ask for billions of rows.
DEFAULT_SIZE_CEILING = 20


def load_generator(path: str) -> GeneratorPair:
    """Read a generator pair from a text file.

    Format: first non-blank line holds m, followed by two blocks of m
    lines of 0/1 characters, the rows of the two matrices.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty matrix file")
    try:
        m = int(lines[0])
    except ValueError:
        raise ValueError(f"{path}: first line must be the size, got {lines[0]!r}") from None
    if len(lines) != 1 + 2 * m:
        raise ValueError(f"{path}: expected {2 * m} matrix rows, found {len(lines) - 1}")

    def block(rows: list[str], name: str) -> BitMatrix:
        parsed = []
        for r, text in enumerate(rows, start=1):
            if len(text) != m or set(text) - {"0", "1"}:
                raise ValueError(
                    f"{path}: {name} row {r} must be {m} characters of 0/1, got {text!r}"
                )
            parsed.append([int(ch) for ch in text])
        return BitMatrix.from_rows(parsed)

    c1 = block(lines[1 : 1 + m], "first matrix")
    c2 = block(lines[1 + m :], "second matrix")
    return GeneratorPair(m, c1, c2, label="file")


def _build_generator(args: argparse.Namespace) -> GeneratorPair:
    if args.matrices is not None:
        if args.sobol:
            raise ValueError("choose either --sobol or --matrices, not both")
        if args.m is not None:
            raise ValueError("-m comes from the matrix file; do not pass it")
        return load_generator(args.matrices)
    if not args.sobol:
        raise ValueError("select a generator: --sobol -m M or --matrices PATH")
    if args.m is None:
        raise ValueError("--sobol requires -m")
    return GeneratorPair.sobol(args.m)


def _default_size(g: GeneratorPair, requested: int | None) -> int:
    if requested is not None:
        return requested
    if g.m > DEFAULT_SIZE_CEILING:
        raise ValueError(
            f"at scale {g.m} the full prefix is over 2**{DEFAULT_SIZE_CEILING} points; "
            "pass -N explicitly"
        )
    return 1 << g.m


def _emit(args: argparse.Namespace, render: Callable[[IO[str]], None]) -> None:
    """Write a table to stdout or to -o plus its sidecar."""
    if args.output is None:
        render(sys.stdout)
        return
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        render(fh)
    write_sidecar(args.output, args.argv)


def _cmd_generate(args: argparse.Namespace) -> int:
    g = _build_generator(args)
    ps = prefix(g, _default_size(g, args.n))
    _emit(args, lambda fh: write_points(ps, fh))
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    g = _build_generator(args)
    ps = prefix(g, _default_size(g, args.n))
    norm = Norm.parse(args.norm)
    sep = separation(ps, norm)
    cov = covering_certified(ps, norm, args.resolution)
    mesh = mesh_ratio_from_parts(sep, cov)
    _emit(args, lambda fh: write_analyze_row(sep, cov, mesh, fh))
    return 0


def _cmd_profile(args: argparse.Namespace) -> int:
    g = _build_generator(args)
    rows = separation_profile(g, _default_size(g, args.n), Norm.parse(args.norm))
    _emit(args, lambda fh: write_separation_rows(rows, fh))
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.formula_only and args.exhaustive:
        raise ValueError("--formula-only and --exhaustive are mutually exclusive")
    if args.formula_only:
        ceiling = FORMULA_CEILING
        cross = 0
    elif args.exhaustive:
        ceiling = EXHAUSTIVE_CEILING
        cross = args.m_max
    else:
        ceiling = CROSS_CHECK_CEILING
        cross = args.m_max
    if args.m_max > ceiling:
        raise ValueError(
            f"--m-max {args.m_max} is over the ceiling of {ceiling} for this mode; "
            "use --formula-only to skip the sweep or --exhaustive to extend it"
        )
    outcome = run_verify(args.m_max, cross_check_up_to=cross, seed=args.seed)
    _emit(args, lambda fh: write_verify_rows(outcome, fh))
    for problem in outcome.problems:
        print(f"verify: {problem}", file=sys.stderr)
    return 0 if outcome.passed else 1


def _cmd_plot(args: argparse.Namespace) -> int:
    with open(args.csv, "r", encoding="utf-8", newline="") as fh:
        rows = read_separation_rows(fh)
    out = args.output or "plot.svg"
    render_scaling_plot(rows, out)
    write_sidecar(out, args.argv)
    return 0


def _add_generator_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--sobol", action="store_true", help="identity/Pascal generator pair")
    sp.add_argument("--matrices", metavar="PATH", help="generator pair from a matrix file")
    sp.add_argument("-m", type=int, default=None, help="scale (with --sobol)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dyadnet",
        description="Exact separation, covering, and mesh-ratio analysis "
        "for two-dimensional digital sequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="emit a point-set table")
    _add_generator_flags(p)
    p.add_argument("-N", dest="n", type=int, default=None, help="points (default 2^m)")
    p.add_argument("-o", dest="output", default=None, help="output file")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("analyze", help="separation, covering, and mesh ratio of one prefix")
    _add_generator_flags(p)
    p.add_argument("-N", dest="n", type=int, default=None, help="points (default 2^m)")
    p.add_argument("--norm", default="linf", choices=["l1", "l2", "linf"])
    p.add_argument(
        "-k",
        dest="resolution",
        type=int,
        default=DEFAULT_RESOLUTION,
        help="covering grid exponent (4^k centers)",
    )
    p.add_argument("-o", dest="output", default=None, help="output file")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("profile", help="separation radius of every prefix size")
    _add_generator_flags(p)
    p.add_argument("-N", dest="n", type=int, default=None, help="largest prefix (default 2^m)")
    p.add_argument("--norm", default="linf", choices=["l1", "l2", "linf"])
    p.add_argument("-o", dest="output", default=None, help="output file")
    p.set_defaults(func=_cmd_profile)

    p = sub.add_parser("verify", help="closed form against independent computation")
    p.add_argument(
        "--m-max",
        type=int,
        default=CROSS_CHECK_CEILING,
        help=f"largest scale to verify (default {CROSS_CHECK_CEILING})",
    )
    p.add_argument(
        "--formula-only",
        action="store_true",
        help="skip the sweep cross-check entirely",
    )
    p.add_argument(
        "--exhaustive",
        action="store_true",
        help=f"extend the sweep cross-check up to --m-max (ceiling {EXHAUSTIVE_CEILING})",
    )
    p.add_argument("--seed", type=int, default=2024, help="seed for randomized suites")
    p.add_argument("-o", dest="output", default=None, help="output file")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("plot", help="render the scaling plot from a profile table")
    p.add_argument("csv", help="profile or analysis table to read")
    p.add_argument("-o", dest="output", default=None, help="output SVG (default plot.svg)")
    p.set_defaults(func=_cmd_plot)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    argv = list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed a message; 2 for usage errors, 0 for --help.
        return int(exc.code or 0)
    args.argv = argv
    try:
        return args.func(args)
    except ResourceBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
