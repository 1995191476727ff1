"""Separation radii, certified covering radii, and mesh ratios, all exact.

Distances between points at a shared dyadic scale are integers: max-norm
and taxicab distances scale by 2**m, squared Euclidean distances by
2**(2m).  Every comparison in this module happens on those integers;
fractions appear only in reported values.  Euclidean results are carried
as exact squares (a sum of two squares is rarely dyadic), with certified
dyadic enclosures materialized where a plain number is required.
"""

from __future__ import annotations

import math
from bisect import bisect_left, insort
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .digital import GeneratorPair, PointSet, prefix

__all__ = [
    "GRID_BUDGET",
    "DEFAULT_RESOLUTION",
    "Norm",
    "ResourceBudgetError",
    "SeparationReport",
    "CoveringInterval",
    "MeshRatioInterval",
    "separation",
    "separation_naive",
    "separation_profile",
    "covering_certified",
    "cell_coradius",
    "mesh_ratio",
    "mesh_ratio_from_parts",
    "distance_to_set",
]

# Ceiling on 4**resolution covering-grid centers.
GRID_BUDGET = 1 << 26
DEFAULT_RESOLUTION = 11

# Largest working scale for which the vectorized covering path stays inside
# int64, padding sentinels included (linear keys grow like 2**(s+4), squared
# keys like 2**(2s+6)).
_VECTOR_SCALE_LINEAR = 58
_VECTOR_SCALE_SQUARED = 28


class ResourceBudgetError(RuntimeError):
    """A covering grid would exceed the configured center budget."""


class Norm(Enum):
    L1 = "l1"
    L2 = "l2"
    LINF = "linf"

    @classmethod
    def parse(cls, text: str) -> "Norm":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown norm {text!r}; expected one of l1, l2, linf"
            ) from None

    @property
    def squared(self) -> bool:
        """Whether this norm's integer comparison key is a squared distance."""
        return self is Norm.L2


def _key_linf(dx: int, dy: int) -> int:
    return max(abs(dx), abs(dy))


def _key_l1(dx: int, dy: int) -> int:
    return abs(dx) + abs(dy)


def _key_l2(dx: int, dy: int) -> int:
    return dx * dx + dy * dy


_KEY_FUNCS = {Norm.LINF: _key_linf, Norm.L1: _key_l1, Norm.L2: _key_l2}


@dataclass(frozen=True, slots=True)
class SeparationReport:
    """Exact minimum pairwise distance of a point set.

    ``key`` is the minimum as an integer at the set's scale: the distance
    numerator over 2**scale for the max and taxicab norms, the squared
    numerator over 2**(2*scale) for the Euclidean norm.  ``witness`` is
    the lexicographically smallest index pair attaining it.
    """

    norm: Norm
    n: int
    scale: int
    witness: tuple[int, int]
    key: int

    @property
    def min_dist(self) -> Fraction | None:
        """Exact minimum distance; None for the Euclidean norm."""
        if self.norm.squared:
            return None
        return Fraction(self.key, 1 << self.scale)

    @property
    def min_dist_sq(self) -> Fraction | None:
        """Exact squared minimum distance; Euclidean norm only."""
        if not self.norm.squared:
            return None
        return Fraction(self.key, 1 << (2 * self.scale))

    @property
    def radius(self) -> Fraction | None:
        """Half the minimum distance; None for the Euclidean norm."""
        d = self.min_dist
        return None if d is None else d / 2

    @property
    def radius_sq(self) -> Fraction | None:
        d = self.min_dist_sq
        return None if d is None else d / 4

    @property
    def dist_float(self) -> float:
        """Decimal approximation of the minimum distance, any norm."""
        if self.norm.squared:
            return math.sqrt(self.key) / (1 << self.scale)
        return self.key / (1 << self.scale)

    @property
    def radius_float(self) -> float:
        return self.dist_float / 2


def separation(ps: PointSet, norm: Norm) -> SeparationReport:
    """Exact minimum pairwise distance with a deterministic witness.

    Plane sweep in x order over an active strip whose width tracks the
    best distance found so far; strip members are scanned through a
    y-sorted list.  Both windows are closed, so every pair attaining the
    minimum is examined and the reported witness is the lexicographically
    smallest one.  Duplicate points yield a zero distance, not an error.
    """
    n = len(ps)
    if n < 2:
        raise ValueError("separation needs at least two points")
    keyf = _KEY_FUNCS[norm]
    xs, ys = ps.xs, ps.ys
    order = sorted(range(n), key=lambda i: (xs[i], ys[i], i))

    def candidate(i: int, j: int) -> tuple[int, int, int]:
        a, b = (i, j) if i < j else (j, i)
        return keyf(xs[i] - xs[j], ys[i] - ys[j]), a, b

    # Seeding from x-adjacent pairs keeps the strip narrow from the start;
    # any pair attaining the final minimum is re-examined by the sweep, so
    # the seed only has to be an upper bound.
    best = min(candidate(order[t - 1], order[t]) for t in range(1, n))
    window = math.isqrt(best[0]) if norm.squared else best[0]
    active: list[tuple[int, int, int]] = []  # (y, x, index), sorted
    head = 0
    for t in range(n):
        i = order[t]
        x, y = xs[i], ys[i]
        while xs[order[head]] < x - window:
            j = order[head]
            active.pop(bisect_left(active, (ys[j], xs[j], j)))
            head += 1
        pos = bisect_left(active, (y - window,))
        while pos < len(active):
            yy, _, j = active[pos]
            if yy > y + window:
                break
            cand = candidate(i, j)
            if cand < best:
                best = cand
                window = math.isqrt(best[0]) if norm.squared else best[0]
            pos += 1
        insort(active, (y, x, i))
    return SeparationReport(
        norm=norm, n=n, scale=ps.scale, witness=(best[1], best[2]), key=best[0]
    )


def separation_naive(ps: PointSet, norm: Norm) -> SeparationReport:
    """Quadratic reference: first minimal pair in index order wins."""
    n = len(ps)
    if n < 2:
        raise ValueError("separation needs at least two points")
    keyf = _KEY_FUNCS[norm]
    xs, ys = ps.xs, ps.ys
    best: tuple[int, int, int] | None = None
    for i in range(n):
        for j in range(i + 1, n):
            k = keyf(xs[i] - xs[j], ys[i] - ys[j])
            if best is None or k < best[0]:
                best = (k, i, j)
    assert best is not None
    return SeparationReport(
        norm=norm, n=n, scale=ps.scale, witness=(best[1], best[2]), key=best[0]
    )


def separation_profile(g: GeneratorPair, n_max: int, norm: Norm) -> list[SeparationReport]:
    """Exact separation for every prefix size 2..n_max of a digital sequence.

    Points arrive one at a time and are hashed into a uniform grid whose
    cell side tracks the current minimum, so each arrival inspects only
    its 3x3 cell neighborhood.  The grid is rebuilt with smaller cells
    once the minimum has halved.

    Amortized cost.  Write w for the current minimum in grid units and s
    for the cell side; the rebuild rule keeps w <= s <= 2w.  All stored
    points are pairwise at distance >= the current minimum, hence at
    max-norm distance >= w/2 in every norm handled here, so a cell of
    side at most 2w holds at most 25 points and each arrival does O(1)
    work.  A rebuild rehashes all points present but fires only when the
    minimum has halved since the last one, so its total cost is the sum
    of the prefix sizes at which halvings occur.  For the sequences this
    routine profiles the minimum decays polynomially in the prefix size,
    those sizes grow geometrically, and the sum telescopes to O(n_max);
    an adversarial insertion order pays at most one O(n) pass per
    halving of the minimum.
    """
    if not 2 <= n_max <= (1 << g.m):
        raise ValueError(f"profile size {n_max} out of range 2..2**{g.m}")
    ps = prefix(g, n_max)
    keyf = _KEY_FUNCS[norm]
    xs, ys = ps.xs, ps.ys

    def width(key: int) -> int:
        return math.isqrt(key) if norm.squared else key

    best = (keyf(xs[0] - xs[1], ys[0] - ys[1]), 0, 1)
    side = max(width(best[0]), 1)
    grid: dict[tuple[int, int], list[int]] = {}
    for j in (0, 1):
        grid.setdefault((xs[j] // side, ys[j] // side), []).append(j)
    reports = [
        SeparationReport(norm=norm, n=2, scale=ps.scale, witness=(0, 1), key=best[0])
    ]
    for i in range(2, n_max):
        x, y = xs[i], ys[i]
        gx, gy = x // side, y // side
        for cx in (gx - 1, gx, gx + 1):
            for cy in (gy - 1, gy, gy + 1):
                for j in grid.get((cx, cy), ()):
                    cand = (keyf(x - xs[j], y - ys[j]), j, i)
                    if cand < best:
                        best = cand
        grid.setdefault((gx, gy), []).append(i)
        w = width(best[0])
        if 2 * w < side:
            side = max(w, 1)
            grid = {}
            for j in range(i + 1):
                grid.setdefault((xs[j] // side, ys[j] // side), []).append(j)
        reports.append(
            SeparationReport(
                norm=norm,
                n=i + 1,
                scale=ps.scale,
                witness=(best[1], best[2]),
                key=best[0],
            )
        )
    return reports


@dataclass(frozen=True, slots=True)
class CoveringInterval:
    """Certified enclosure of the covering radius at a fixed grid resolution.

    ``lo`` and ``hi`` are exact dyadic rationals with lo <= h <= hi.  The
    lower bound is the largest distance to the set over the cell centers
    ((2a+1)/2**(resolution+1), (2b+1)/2**(resolution+1)); the upper bound
    adds the co-radius of one grid cell, which is valid because the
    distance-to-set function is 1-Lipschitz in its own norm.  ``center``
    holds the first maximizing center in row-major (a, b) order, as odd
    numerators over 2**(resolution+1).
    """

    norm: Norm
    n: int
    resolution: int
    lo: Fraction
    hi: Fraction
    center: tuple[int, int]

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def center_point(self) -> tuple[Fraction, Fraction]:
        d = 1 << (self.resolution + 1)
        return (Fraction(self.center[0], d), Fraction(self.center[1], d))


def cell_coradius(norm: Norm, resolution: int) -> Fraction:
    """Largest distance from a cell center to its own cell, bounded above.

    Exact for the max and taxicab norms.  The Euclidean value is
    sqrt(2)/2**(resolution+1); 1449/1024 over-approximates sqrt(2) tightly
    enough that the flooring slack of the reported lower bound fits inside
    the enclosure (see covering_certified).
    """
    if resolution < 1:
        raise ValueError(f"resolution must be >= 1, got {resolution}")
    if norm is Norm.LINF:
        return Fraction(1, 1 << (resolution + 1))
    if norm is Norm.L1:
        return Fraction(1, 1 << resolution)
    return Fraction(1449, 1 << (resolution + 11))


def covering_certified(
    ps: PointSet,
    norm: Norm,
    resolution: int = DEFAULT_RESOLUTION,
    budget: int = GRID_BUDGET,
) -> CoveringInterval:
    """Certified covering-radius interval from a dyadic center grid.

    Evaluates the exact distance to the set at all 4**resolution cell
    centers.  The maximum is a lower bound for the covering radius; adding
    the cell co-radius gives an upper bound since every point of the
    square lies within that distance of some center and the distance
    function is 1-Lipschitz.  Ties for the maximizing center resolve to
    the smallest (a, b) in row-major order, independent of batch sizes.
    """
    if resolution < 1:
        raise ValueError(f"resolution must be >= 1, got {resolution}")
    if not len(ps):
        raise ValueError("covering needs at least one point")
    if (1 << (2 * resolution)) > budget:
        raise ResourceBudgetError(
            f"4**{resolution} grid centers exceed the budget of {budget}"
        )
    k = resolution
    s = max(ps.scale, k + 1)
    limit = _VECTOR_SCALE_SQUARED if norm.squared else _VECTOR_SCALE_LINEAR
    if s <= limit:
        max_key, cid = _covering_grid_max(ps, norm, k, s)
    else:
        # Big-integer fallback for scales past the int64 window; quadratic,
        # so it gets its own much smaller budget.
        if (1 << (2 * k)) * len(ps) > (1 << 24):
            raise ResourceBudgetError(
                f"a 4**{k} grid at scale {s} is past the vectorized range; "
                "reduce the resolution or the scale"
            )
        max_key, cid = _covering_brute_max(ps, norm, k, s)
    a, b = cid >> k, cid & ((1 << k) - 1)
    lo = _key_root_lower(max_key, s, k, norm)
    hi = lo + cell_coradius(norm, k)
    return CoveringInterval(
        norm=norm,
        n=len(ps),
        resolution=k,
        lo=lo,
        hi=hi,
        center=(2 * a + 1, 2 * b + 1),
    )


def _key_root_lower(key: int, s: int, k: int, norm: Norm) -> Fraction:
    if not norm.squared:
        return Fraction(key, 1 << s)
    # Floor square root carrying k+12 fractional bits: the rounding loss is
    # at most 2**-(k+12), and the co-radius over-approximation leaves room
    # for it: 1 + sqrt(2)*2**11 < 2*1449.
    t = max(1, k + 12 - s)
    return Fraction(math.isqrt(key << (2 * t)), 1 << (s + t))


def _ring_offsets(r: int) -> list[tuple[int, int]]:
    if r == 0:
        return [(0, 0)]
    offs = [(-r, j) for j in range(-r, r + 1)]
    offs += [(r, j) for j in range(-r, r + 1)]
    offs += [(i, -r) for i in range(-r + 1, r)]
    offs += [(i, r) for i in range(-r + 1, r)]
    return offs


def _covering_grid_max(ps: PointSet, norm: Norm, k: int, s: int) -> tuple[int, int]:
    """Max over grid centers of the distance key to the set, vectorized.

    Returns (key, center_id) with center_id = a * 2**k + b minimal among
    the maximizers.  Points are bucketed on a 2**gb by 2**gb grid; each
    center scans buckets in expanding Chebyshev rings and retires once no
    farther ring can hold a nearer point: a point r+1 rings away is at
    distance strictly greater than r bucket sides.  Bucket indices are
    clipped at the border, which only re-reads an already-scanned bucket
    and never affects a minimum.
    """
    n = len(ps)
    shift = s - ps.scale
    pxs = np.array(ps.xs, dtype=np.int64) << shift
    pys = np.array(ps.ys, dtype=np.int64) << shift
    gb = max(0, min((n.bit_length() - 1) // 2, s - 1, 10))
    while True:
        grid_n = 1 << gb
        bside = 1 << (s - gb)
        bid = ((pxs >> (s - gb)) << gb) | (pys >> (s - gb))
        order = np.argsort(bid, kind="stable")
        sorted_bid = bid[order]
        counts = np.bincount(sorted_bid, minlength=grid_n * grid_n)
        cap = int(counts.max())
        # The padded table trades memory for gather speed; clumpy sets get
        # coarser buckets until it fits.
        if gb == 0 or grid_n * grid_n * cap <= (1 << 23):
            break
        gb -= 1
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    # Padded slots point far outside the square so they never win a min.
    sentinel = np.int64(1 << (s + 2))
    bucket_x = np.full((grid_n * grid_n, cap), sentinel, dtype=np.int64)
    bucket_y = np.full((grid_n * grid_n, cap), sentinel, dtype=np.int64)
    slot = np.arange(n) - starts[sorted_bid]
    bucket_x[sorted_bid, slot] = pxs[order]
    bucket_y[sorted_bid, slot] = pys[order]

    total = 1 << (2 * k)
    tile = max(1, min(1 << 21, (1 << 24) // max(cap, 1)))
    cshift = s - k - 1
    best_key = -1
    best_cid = -1
    for t0 in range(0, total, tile):
        cid = np.arange(t0, min(t0 + tile, total), dtype=np.int64)
        cx = (((cid >> k) << 1) + 1) << cshift
        cy = (((cid & ((1 << k) - 1)) << 1) + 1) << cshift
        d = _tile_min_key(cx, cy, bucket_x, bucket_y, gb, bside, norm)
        arg = int(np.argmax(d))
        key = int(d[arg])
        if key > best_key:
            best_key = key
            best_cid = t0 + arg
    return best_key, best_cid


def _tile_min_key(
    cx: np.ndarray,
    cy: np.ndarray,
    bucket_x: np.ndarray,
    bucket_y: np.ndarray,
    gb: int,
    bside: int,
    norm: Norm,
) -> np.ndarray:
    grid_n = 1 << gb
    best = np.full(cx.shape[0], np.int64(1) << 62, dtype=np.int64)
    cbx = cx // bside
    cby = cy // bside
    alive = np.arange(cx.shape[0])
    for r in range(grid_n):
        if alive.size == 0:
            break
        acx = cx[alive]
        acy = cy[alive]
        cur = best[alive]
        for di, dj in _ring_offsets(r):
            nbx = np.clip(cbx[alive] + di, 0, grid_n - 1)
            nby = np.clip(cby[alive] + dj, 0, grid_n - 1)
            nb = (nbx << gb) | nby
            dx = bucket_x[nb] - acx[:, None]
            dy = bucket_y[nb] - acy[:, None]
            if norm is Norm.LINF:
                d = np.maximum(np.abs(dx), np.abs(dy)).min(axis=1)
            elif norm is Norm.L1:
                d = (np.abs(dx) + np.abs(dy)).min(axis=1)
            else:
                d = (dx * dx + dy * dy).min(axis=1)
            np.minimum(cur, d, out=cur)
        best[alive] = cur
        lim = r * bside
        if norm.squared:
            lim = lim * lim
        alive = alive[cur > lim]
    return best


def _covering_brute_max(ps: PointSet, norm: Norm, k: int, s: int) -> tuple[int, int]:
    """Reference grid maximum: scan every center against every point."""
    keyf = _KEY_FUNCS[norm]
    shift = s - ps.scale
    pts = [(x << shift, y << shift) for x, y in zip(ps.xs, ps.ys)]
    cshift = s - k - 1
    best_key = -1
    best_cid = -1
    for cid in range(1 << (2 * k)):
        a, b = cid >> k, cid & ((1 << k) - 1)
        cx = ((a << 1) + 1) << cshift
        cy = ((b << 1) + 1) << cshift
        d = min(keyf(cx - px, cy - py) for px, py in pts)
        if d > best_key:
            best_key = d
            best_cid = cid
    return best_key, best_cid


def distance_to_set(ps: PointSet, x: Fraction, y: Fraction, norm: Norm) -> Fraction:
    """Exact distance from (x, y) to the nearest set point.

    Euclidean distances come back squared, matching the module-wide
    convention for exact comparison.
    """
    best: Fraction | None = None
    denom = 1 << ps.scale
    for nx, ny in zip(ps.xs, ps.ys):
        dx = x - Fraction(nx, denom)
        dy = y - Fraction(ny, denom)
        if norm is Norm.LINF:
            d = max(abs(dx), abs(dy))
        elif norm is Norm.L1:
            d = abs(dx) + abs(dy)
        else:
            d = dx * dx + dy * dy
        if best is None or d < best:
            best = d
    if best is None:
        raise ValueError("distance to an empty set is undefined")
    return best


@dataclass(frozen=True, slots=True)
class MeshRatioInterval:
    """Certified enclosure of covering radius over separation radius."""

    norm: Norm
    n: int
    lo: Fraction
    hi: Fraction
    separation: SeparationReport
    covering: CoveringInterval

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def mesh_ratio_from_parts(
    sep: SeparationReport, cov: CoveringInterval
) -> MeshRatioInterval:
    """Combine an exact separation radius with a covering enclosure.

    For the max and taxicab norms the ratio bounds are exact rationals.
    The Euclidean radius is irrational in general, so it is first enclosed
    between dyadic rationals 24 bits apart and the division is oriented to
    keep the result a true enclosure.
    """
    if sep.key == 0:
        raise ValueError("mesh ratio undefined for sets with duplicate points")
    if sep.norm is not cov.norm:
        raise ValueError(
            f"separation norm {sep.norm.value} differs from covering norm {cov.norm.value}"
        )
    if not sep.norm.squared:
        q = sep.radius
        lo = cov.lo / q
        hi = cov.hi / q
    else:
        t = 24
        root = math.isqrt(sep.key << (2 * t))
        denom = 1 << (sep.scale + 1 + t)
        q_lo = Fraction(root, denom)
        q_hi = Fraction(root + 1, denom)
        lo = cov.lo / q_hi
        hi = cov.hi / q_lo
    return MeshRatioInterval(
        norm=sep.norm, n=sep.n, lo=lo, hi=hi, separation=sep, covering=cov
    )


def mesh_ratio(
    ps: PointSet,
    norm: Norm,
    resolution: int = DEFAULT_RESOLUTION,
    budget: int = GRID_BUDGET,
) -> MeshRatioInterval:
    """Certified mesh-ratio interval of a point set."""
    if len(ps) < 2:
        raise ValueError("mesh ratio needs at least two points")
    sep = separation(ps, norm)
    cov = covering_certified(ps, norm, resolution, budget)
    return mesh_ratio_from_parts(sep, cov)
