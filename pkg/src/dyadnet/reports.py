"""Delimited-text serialization and the scaling plot.

Data files are deterministic: fixed column orders, no timestamps, exact
values rendered so they survive a text round-trip bit for bit.  Dyadic
rationals render as ``num/2^e`` (integers render bare), other rationals
as ``num/den``.  A ``log2`` column is filled only when the value is a
pure power of two; for Euclidean rows it describes the unsquared
distance, so it may be a half-integer such as ``-11/2``.  Euclidean rows
carry the exact squared distance in the ``min_dist_num`` column,
following the package-wide convention.

A sidecar ``<output>.meta.json`` carries run provenance, so data files
themselves stay byte-stable across reruns of the same configuration.
"""

from __future__ import annotations

import csv
import json
import math
import os
from fractions import Fraction
from typing import IO, Iterable, Sequence

from ._version import __version__
from .digital import PointSet
from .geometry import CoveringInterval, MeshRatioInterval, Norm, SeparationReport
from .theory import DecompositionKind, VerifyOutcome

__all__ = [
    "POINTS_HEADER",
    "SEPARATION_HEADER",
    "ANALYZE_HEADER",
    "VERIFY_HEADER",
    "format_exact",
    "parse_exact",
    "format_log2",
    "format_exponent",
    "write_points",
    "read_points",
    "separation_row",
    "write_separation_rows",
    "read_separation_rows",
    "analyze_row",
    "write_analyze_row",
    "write_verify_rows",
    "write_sidecar",
    "render_scaling_plot",
]

POINTS_HEADER = ["index", "nx", "ny", "scale"]
SEPARATION_HEADER = [
    "N",
    "norm",
    "min_dist_num",
    "min_dist_log2",
    "radius_log2",
    "witness_i",
    "witness_j",
]
COVERING_COLUMNS = ["h_lo", "h_hi", "k", "rho_lo", "rho_hi"]
ANALYZE_HEADER = SEPARATION_HEADER + COVERING_COLUMNS
VERIFY_HEADER = [
    "m",
    "kind",
    "v",
    "w",
    "c",
    "q_formula_log2",
    "q_exhaustive_log2",
    "match",
    "witness_p",
    "witness_q",
]


def format_exact(value: Fraction) -> str:
    """Render an exact rational: bare integer, ``num/2^e`` dyadic, or ``num/den``."""
    den = value.denominator
    if den == 1:
        return str(value.numerator)
    e = den.bit_length() - 1
    if (1 << e) == den:
        return f"{value.numerator}/2^{e}"
    return f"{value.numerator}/{den}"


def parse_exact(text: str) -> Fraction:
    """Inverse of format_exact."""
    text = text.strip()
    if not text:
        raise ValueError("empty field where an exact value was expected")
    if "/" not in text:
        return Fraction(int(text))
    num, _, den = text.partition("/")
    if den.startswith("2^"):
        return Fraction(int(num), 1 << int(den[2:]))
    return Fraction(int(num), int(den))


def format_exponent(value: Fraction) -> str:
    """Render a rational exponent: bare integer or ``num/den``."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _log2_exact(value: Fraction) -> int | None:
    """The integer g with value = 2**g, or None when there is none."""
    num, den = value.numerator, value.denominator
    if num <= 0:
        return None
    if num & (num - 1) or den & (den - 1):
        return None
    return num.bit_length() - den.bit_length()


def format_log2(value: Fraction) -> str:
    """Exact log2 of a dyadic power, empty for anything else."""
    g = _log2_exact(value)
    return "" if g is None else str(g)


def _writer(stream: IO[str]):
    # Byte-stable across platforms: plain newlines.
    return csv.writer(stream, lineterminator="\n")


def write_points(ps: PointSet, stream: IO[str]) -> None:
    w = _writer(stream)
    w.writerow(POINTS_HEADER)
    for i, (nx, ny) in enumerate(zip(ps.xs, ps.ys)):
        w.writerow([i, nx, ny, ps.scale])


def read_points(stream: IO[str], provenance: str = "csv") -> PointSet:
    """Parse a points table; indices must run 0..N-1 at one shared scale."""
    reader = csv.reader(stream)
    header = next(reader, None)
    if header != POINTS_HEADER:
        raise ValueError(f"expected header {','.join(POINTS_HEADER)}")
    xs: list[int] = []
    ys: list[int] = []
    scale: int | None = None
    for row in reader:
        if not row:
            continue
        idx, nx, ny, sc = (int(f) for f in row)
        if idx != len(xs):
            raise ValueError(f"index {idx} out of order at row {len(xs)}")
        if scale is None:
            scale = sc
        elif sc != scale:
            raise ValueError(f"mixed scales {scale} and {sc}")
        xs.append(nx)
        ys.append(ny)
    if scale is None:
        raise ValueError("no point rows found")
    return PointSet(scale, xs, ys, provenance=provenance)


def _dist_fields(report: SeparationReport) -> tuple[str, str, str]:
    """(min_dist_num, min_dist_log2, radius_log2) cells for one report."""
    if report.norm.squared:
        sq = report.min_dist_sq
        cell = format_exact(sq)
        g = _log2_exact(sq)
        if g is None:
            return cell, "", ""
        return (
            cell,
            format_exponent(Fraction(g, 2)),
            format_exponent(Fraction(g, 2) - 1),
        )
    d = report.min_dist
    cell = format_exact(d)
    g = _log2_exact(d)
    if g is None:
        return cell, "", ""
    return cell, str(g), str(g - 1)


def separation_row(report: SeparationReport) -> list[str]:
    num, dlog, rlog = _dist_fields(report)
    return [
        str(report.n),
        report.norm.value,
        num,
        dlog,
        rlog,
        str(report.witness[0]),
        str(report.witness[1]),
    ]


def write_separation_rows(reports: Iterable[SeparationReport], stream: IO[str]) -> None:
    w = _writer(stream)
    w.writerow(SEPARATION_HEADER)
    for report in reports:
        w.writerow(separation_row(report))


def read_separation_rows(stream: IO[str]) -> list[tuple[int, Norm, Fraction]]:
    """Parse (N, norm, distance value) from a separation or analysis table.

    The third element is the exact ``min_dist_num`` cell: the distance for
    the max and taxicab norms, the squared distance for the Euclidean one.
    """
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or header[: len(SEPARATION_HEADER)] != SEPARATION_HEADER:
        raise ValueError(
            f"expected a table starting with columns {','.join(SEPARATION_HEADER)}"
        )
    out: list[tuple[int, Norm, Fraction]] = []
    for row in reader:
        if not row:
            continue
        out.append((int(row[0]), Norm.parse(row[1]), parse_exact(row[2])))
    if not out:
        raise ValueError("no data rows found")
    return out


def analyze_row(
    sep: SeparationReport, cov: CoveringInterval, mesh: MeshRatioInterval
) -> list[str]:
    return separation_row(sep) + [
        format_exact(cov.lo),
        format_exact(cov.hi),
        str(cov.resolution),
        format_exact(mesh.lo),
        format_exact(mesh.hi),
    ]


def write_analyze_row(
    sep: SeparationReport,
    cov: CoveringInterval,
    mesh: MeshRatioInterval,
    stream: IO[str],
) -> None:
    w = _writer(stream)
    w.writerow(ANALYZE_HEADER)
    w.writerow(analyze_row(sep, cov, mesh))


def _log2_or_exact(value: Fraction) -> str:
    """log2 when the value is a dyadic power; the exact value otherwise.

    The fallback only appears when a cross-check caught a minimum that is
    not a power of two, in which case the row is already flagged.
    """
    g = _log2_exact(value)
    return format_exact(value) if g is None else str(g)


def write_verify_rows(outcome: VerifyOutcome, stream: IO[str]) -> None:
    """One row per m; see VERIFY_HEADER.

    The witness columns carry the exhaustively found minimal pair when the
    cross-check ran, otherwise the closed-form pair where one exists.
    """
    w = _writer(stream)
    w.writerow(VERIFY_HEADER)
    for row in outcome.rows:
        d = row.decomposition
        if row.computed is not None:
            exhaustive = _log2_or_exact(row.computed.radius)
            match = "yes" if row.match else "no"
            witness = row.computed.witness
        else:
            exhaustive = ""
            match = ""
            witness = row.formula_witness
        w.writerow(
            [
                str(d.m),
                d.kind.value,
                str(d.v),
                "" if d.w is None else str(d.w),
                "" if d.c is None else str(d.c),
                str(_log2_exact(row.formula_radius)),
                exhaustive,
                match,
                "" if witness is None else str(witness[0]),
                "" if witness is None else str(witness[1]),
            ]
        )


def write_sidecar(out_path: str, argv: Sequence[str]) -> str:
    """Provenance sidecar next to a data file; deterministic for one argv."""
    meta = {
        "tool": "dyadnet",
        "version": __version__,
        "command": list(argv),
        "output": os.path.basename(out_path),
    }
    sidecar = out_path + ".meta.json"
    with open(sidecar, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return sidecar


def render_scaling_plot(
    rows: Sequence[tuple[int, Norm, Fraction]], out_path: str
) -> None:
    """Log2-log2 scatter of the separation radius against prefix size.

    Reference lines of slope -1/2 (the square-root packing rate) and
    -3/4, both anchored at the constant 2**(-1/2) valid for every N >= 2.
    Rendering is pinned for byte-identical SVG output: fixed hash salt, no
    embedded date, 800x600 user-unit canvas.
    """
    if not rows:
        raise ValueError("nothing to plot")
    import matplotlib

    matplotlib.use("Agg")
    from matplotlib import pyplot as plt

    xs = [math.log2(n) for n, _, _ in rows]
    ys = []
    for _, norm, value in rows:
        if value <= 0:
            raise ValueError("cannot plot zero distances on a log scale")
        # The stored value is squared for the Euclidean norm; halving the
        # log and shifting by -1 turns a distance into a radius.
        vlog = math.log2(value.numerator) - math.log2(value.denominator)
        if norm.squared:
            vlog /= 2
        ys.append(vlog - 1)
    with matplotlib.rc_context({"svg.hashsalt": "dyadnet"}):
        fig = plt.figure(figsize=(800 / 72, 600 / 72), dpi=72)
        ax = fig.add_subplot(111)
        ax.scatter(xs, ys, s=12, color="#1f77b4", label="separation radius", zorder=3)
        x0, x1 = min(xs), max(xs)
        pad = 0.5 if x0 == x1 else 0.0
        line_x = [x0 - pad, x1 + pad]
        ax.plot(
            line_x,
            [-0.5 - 0.5 * x for x in line_x],
            color="#888888",
            linestyle="--",
            linewidth=1,
            label="slope -1/2",
        )
        ax.plot(
            line_x,
            [-0.5 - 0.75 * x for x in line_x],
            color="#d62728",
            linestyle=":",
            linewidth=1,
            label="slope -3/4",
        )
        ax.set_xlabel("log2 N")
        ax.set_ylabel("log2 radius")
        ax.set_title("Separation scaling")
        ax.legend(loc="lower left")
        ax.grid(True, linewidth=0.3, alpha=0.5)
        fig.savefig(out_path, format="svg", metadata={"Date": None})
        plt.close(fig)
