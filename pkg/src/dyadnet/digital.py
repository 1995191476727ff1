"""Two-dimensional digital sequences in base 2, kept exact end to end.

A point at scale m is the pair of dyadic rationals (nx / 2**m, ny / 2**m)
and is stored as the integer numerators.  The n-th point of a sequence with
generator matrices (C1, C2) has coordinates phi(C1 nvec) and phi(C2 nvec),
where nvec is the base-2 digit vector of n and phi maps a digit vector z to
sum(z[i] * 2**-i): the digit-reversed fraction.  The classical special case
pairs the identity matrix with the binary Pascal matrix.

Everything here is integer arithmetic; no floats appear anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .gf2 import BitMatrix, BitVector, binary_expand, matvec, pascal_matrix

__all__ = [
    "MAX_SCALE",
    "DyadicPoint",
    "GeneratorPair",
    "PointSet",
    "NetFailure",
    "NetReport",
    "bit_reverse",
    "sobol_point",
    "digital_point",
    "prefix",
    "prefix_naive",
    "check_elementary_intervals",
    "classify_close_pair",
    "ClosePairForm",
    "xor_prefix_is_block",
    "close_pair_structure_ok",
    "sample_close_pair",
]

# Coordinates are contracted to fit a single machine word as numerators so
# downstream consumers can rely on 64-bit integer paths.
MAX_SCALE = 64


def bit_reverse(value: int, width: int) -> int:
    """Reverse the low ``width`` bits of ``value``."""
    if width < 1:
        raise ValueError(f"width must be positive, got {width}")
    if not 0 <= value < (1 << width):
        raise ValueError(f"{value} does not fit in {width} bits")
    return int(format(value, f"0{width}b")[::-1], 2)


def _check_scale(m: int) -> None:
    if not 1 <= m <= MAX_SCALE:
        raise ValueError(f"scale must be in 1..{MAX_SCALE}, got {m}")


@dataclass(frozen=True, slots=True)
class DyadicPoint:
    """A point of the unit square with coordinates nx/2**scale, ny/2**scale."""

    scale: int
    nx: int
    ny: int

    def __post_init__(self) -> None:
        _check_scale(self.scale)
        top = 1 << self.scale
        if not (0 <= self.nx < top and 0 <= self.ny < top):
            raise ValueError(
                f"numerators ({self.nx}, {self.ny}) out of range for scale {self.scale}"
            )

    def rescaled(self, scale: int) -> "DyadicPoint":
        """The same point expressed over the finer denominator 2**scale."""
        if scale < self.scale:
            raise ValueError(f"cannot coarsen scale {self.scale} to {scale}")
        shift = scale - self.scale
        return DyadicPoint(scale, self.nx << shift, self.ny << shift)

    @property
    def x(self) -> Fraction:
        return Fraction(self.nx, 1 << self.scale)

    @property
    def y(self) -> Fraction:
        return Fraction(self.ny, 1 << self.scale)


@dataclass(frozen=True, slots=True)
class GeneratorPair:
    """A pair of square generator matrices over GF(2) at a fixed scale."""

    m: int
    c1: BitMatrix
    c2: BitMatrix
    label: str = "custom"

    def __post_init__(self) -> None:
        _check_scale(self.m)
        for name, mat in (("c1", self.c1), ("c2", self.c2)):
            if mat.rows != self.m or mat.cols != self.m:
                raise ValueError(
                    f"{name} must be {self.m}x{self.m}, got {mat.rows}x{mat.cols}"
                )

    @classmethod
    def sobol(cls, m: int) -> "GeneratorPair":
        _check_scale(m)
        return cls(m, BitMatrix.identity(m), pascal_matrix(m), label="sobol")


def _phi_numerator(word: int, m: int) -> int:
    # phi(z) = sum z[i] 2**-i, so the numerator over 2**m is the bit reversal.
    return bit_reverse(word, m) if word else 0


def sobol_point(n: int, m: int) -> DyadicPoint:
    """Point n of the identity/Pascal sequence at scale m."""
    _check_scale(m)
    if not 0 <= n < (1 << m):
        raise ValueError(f"index {n} out of range for scale {m}")
    nvec = binary_expand(n, m) if n else BitVector.zeros(m)
    yword = matvec(pascal_matrix(m), nvec).to_int()
    return DyadicPoint(m, _phi_numerator(n, m), _phi_numerator(yword, m))


def digital_point(g: GeneratorPair, n: int) -> DyadicPoint:
    """Point n of the sequence generated by ``g``, one matrix product per axis."""
    if not 0 <= n < (1 << g.m):
        raise ValueError(f"index {n} out of range for scale {g.m}")
    nvec = binary_expand(n, g.m) if n else BitVector.zeros(g.m)
    xw = matvec(g.c1, nvec).to_int()
    yw = matvec(g.c2, nvec).to_int()
    return DyadicPoint(g.m, _phi_numerator(xw, g.m), _phi_numerator(yw, g.m))


class PointSet:
    """An ordered, immutable collection of points sharing one scale.

    Numerators are stored columnar (two tuples of ints); DyadicPoint
    objects are materialized on demand.  This keeps million-point prefixes
    cheap while preserving the ordered-sequence contract.
    """

    __slots__ = ("scale", "xs", "ys", "provenance")

    def __init__(
        self,
        scale: int,
        xs: Sequence[int],
        ys: Sequence[int],
        provenance: str = "custom",
    ) -> None:
        _check_scale(scale)
        if len(xs) != len(ys):
            raise ValueError("coordinate arrays differ in length")
        if not xs:
            raise ValueError("a point set needs at least one point")
        top = 1 << scale
        for v in xs:
            if not 0 <= v < top:
                raise ValueError(f"x numerator {v} out of range for scale {scale}")
        for v in ys:
            if not 0 <= v < top:
                raise ValueError(f"y numerator {v} out of range for scale {scale}")
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "xs", tuple(xs))
        object.__setattr__(self, "ys", tuple(ys))
        object.__setattr__(self, "provenance", provenance)

    def __setattr__(self, name: str, value) -> None:
        raise AttributeError("PointSet is immutable")

    @classmethod
    def from_points(
        cls, scale: int, pairs: Sequence[tuple[int, int]], provenance: str = "custom"
    ) -> "PointSet":
        return cls(scale, [p[0] for p in pairs], [p[1] for p in pairs], provenance)

    def __len__(self) -> int:
        return len(self.xs)

    def point(self, i: int) -> DyadicPoint:
        return DyadicPoint(self.scale, self.xs[i], self.ys[i])

    def __iter__(self) -> Iterator[DyadicPoint]:
        for nx, ny in zip(self.xs, self.ys):
            yield DyadicPoint(self.scale, nx, ny)

    def head(self, n: int) -> "PointSet":
        if not 1 <= n <= len(self):
            raise ValueError(f"prefix length {n} out of range 1..{len(self)}")
        return PointSet(self.scale, self.xs[:n], self.ys[:n], self.provenance)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.scale == other.scale and self.xs == other.xs and self.ys == other.ys

    def __hash__(self) -> int:
        return hash((self.scale, self.xs, self.ys))

    def __repr__(self) -> str:
        return f"PointSet(scale={self.scale}, n={len(self)}, provenance={self.provenance!r})"


def _reversed_column_prefixes(mat: BitMatrix, m: int) -> list[int]:
    # table[t] = XOR of the phi-numerators of columns 1..t+1; incrementing an
    # index flips exactly the digit block 0..t where t counts trailing zeros.
    rev = [_phi_numerator(w, m) for w in mat.column_words()]
    out = []
    acc = 0
    for r in rev:
        acc ^= r
        out.append(acc)
    return out


def prefix(g: GeneratorPair, n: int) -> PointSet:
    """First ``n`` points of the sequence, built incrementally.

    Consecutive indices differ in the digit block 0..t with t the number of
    trailing zeros of the new index, and phi is linear over GF(2), so each
    step XORs one precomputed table entry per axis.  Total work is O(n)
    after an O(m^2 / wordsize) setup.
    """
    if not 1 <= n <= (1 << g.m):
        raise ValueError(f"prefix size {n} out of range 1..2**{g.m}")
    px = _reversed_column_prefixes(g.c1, g.m)
    py = _reversed_column_prefixes(g.c2, g.m)
    xs = [0] * n
    ys = [0] * n
    x = y = 0
    for i in range(1, n):
        t = (i & -i).bit_length() - 1
        x ^= px[t]
        y ^= py[t]
        xs[i] = x
        ys[i] = y
    return PointSet(g.m, xs, ys, provenance=f"{g.label}(m={g.m})")


def prefix_naive(g: GeneratorPair, n: int) -> PointSet:
    """Reference path: one matrix-vector product per index."""
    if not 1 <= n <= (1 << g.m):
        raise ValueError(f"prefix size {n} out of range 1..2**{g.m}")
    pts = [digital_point(g, i) for i in range(n)]
    return PointSet(
        g.m, [p.nx for p in pts], [p.ny for p in pts], provenance=f"{g.label}(m={g.m})"
    )


@dataclass(frozen=True, slots=True)
class NetFailure:
    k: int
    l: int
    a: int
    b: int
    count: int


@dataclass(frozen=True, slots=True)
class NetReport:
    """Outcome of the equidistribution check over all dyadic splits."""

    passed: bool
    scale: int
    size: int
    splits_checked: int
    failures: tuple[NetFailure, ...]


def check_elementary_intervals(ps: PointSet, exhaustive: bool = False) -> NetReport:
    """Verify one-point-per-cell for every dyadic split of the square.

    For each (k, l) with k + l = m the unit square divides into 2**m
    half-open rectangles of width 2**-k and height 2**-l; the first 2**m
    points must hit each exactly once.  Stops at the first failing split
    unless ``exhaustive`` is set, in which case every split is scanned and
    the first offending cell of each failing split is reported.  Offending
    cells are located in ascending (a, b) order; a count of zero means an
    empty cell.
    """
    m = ps.scale
    n = len(ps)
    if n != (1 << m):
        raise ValueError(f"need exactly 2**{m} points for scale {m}, got {n}")
    failures: list[NetFailure] = []
    splits = 0
    xs = ps.xs
    ys = ps.ys
    for k in range(m + 1):
        l = m - k
        splits += 1
        counts = bytearray(n)
        sx = m - k
        sy = m - l
        for nx, ny in zip(xs, ys):
            idx = ((nx >> sx) << l) | (ny >> sy)
            if counts[idx] < 255:
                counts[idx] += 1
        bad = next((i for i, c in enumerate(counts) if c != 1), None)
        if bad is not None:
            failures.append(NetFailure(k, l, bad >> l, bad & ((1 << l) - 1), counts[bad]))
            if not exhaustive:
                break
    return NetReport(
        passed=not failures,
        scale=m,
        size=n,
        splits_checked=splits,
        failures=tuple(failures),
    )


# --- structure of index pairs with close first coordinates ----------------
#
# For indices p, q at scale m whose digit-reversed fractions differ by less
# than 2**-(ell-1), the low ell-1 digits of p and q are constrained to a
# narrow carry pattern.  The helpers below state that pattern literally on
# the bit level; the test suite drives them with randomized instances.


@dataclass(frozen=True, slots=True)
class ClosePairForm:
    """Classification of a close index pair: which alternative matched."""

    case: str  # "prefix-equal" or "carry-run"
    k: int | None
    ok: bool
    violations: tuple[str, ...]


def _phi_gap(p: int, q: int, m: int) -> int:
    return bit_reverse(q, m) - bit_reverse(p, m)


def classify_close_pair(p: int, q: int, m: int, ell: int) -> ClosePairForm:
    """Match (p, q) against the two admissible low-digit patterns.

    Precondition: 0 <= phi(q) - phi(p) < 2**-(ell-1) with 2 <= ell <= m.
    Either the low ell-1 digits of p and q agree, or the first disagreeing
    digit k starts a carry run: p reads 0 then all ones up to digit ell-1
    while q reads 1 then all zeros, digit ell of p dominates q's, and the
    remaining digits ell..m cannot all agree.  Exactly one case applies.
    """
    if not 2 <= ell <= m:
        raise ValueError(f"need 2 <= ell <= m, got ell={ell}, m={m}")
    top = 1 << m
    if not (0 <= p < top and 0 <= q < top):
        raise ValueError(f"indices ({p}, {q}) out of range for scale {m}")
    gap = _phi_gap(p, q, m)
    if not 0 <= gap < (1 << (m - ell + 1)):
        raise ValueError(
            f"pair ({p}, {q}) violates the closeness precondition at ell={ell}"
        )
    prefix_mask = (1 << (ell - 1)) - 1
    diff = (p ^ q) & prefix_mask
    if diff == 0:
        return ClosePairForm("prefix-equal", None, True, ())
    k = (diff & -diff).bit_length()
    violations: list[str] = []
    if (p >> (k - 1)) & 1:
        violations.append(f"digit {k} of the lower index is set")
    if not (q >> (k - 1)) & 1:
        violations.append(f"digit {k} of the upper index is clear")
    run_mask = prefix_mask & ~((1 << k) - 1)
    if p & run_mask != run_mask:
        violations.append(f"digits {k + 1}..{ell - 1} of the lower index are not all ones")
    if q & run_mask != 0:
        violations.append(f"digits {k + 1}..{ell - 1} of the upper index are not all zeros")
    if ((p >> (ell - 1)) & 1) < ((q >> (ell - 1)) & 1):
        violations.append(f"digit {ell} decreases from lower to upper index")
    tail_mask = (top - 1) & ~((1 << (ell - 1)) - 1)
    if (p ^ q) & tail_mask == 0:
        violations.append(f"digits {ell}..{m} agree, which the carry case forbids")
    return ClosePairForm("carry-run", k, not violations, tuple(violations))


def xor_prefix_is_block(p: int, q: int, ell: int) -> bool:
    """True when the low ell-1 digits of p XOR q form 0...01...1 (possibly empty)."""
    x = (p ^ q) & ((1 << (ell - 1)) - 1)
    return x == 0 or x + (x & -x) == 1 << (ell - 1)


def close_pair_structure_ok(p: int, q: int, m: int, ell: int) -> bool:
    """Full structural check for pairs with |phi(q) - phi(p)| < 2**-(ell-1).

    Validates the block shape of the XOR prefix and, when the run starts
    above digit 1 or covers digit 1, the complementary digit patterns on
    the run together with the dominance rule at digit ell, oriented by the
    sign of the gap.
    """
    if not 2 <= ell <= m:
        raise ValueError(f"need 2 <= ell <= m, got ell={ell}, m={m}")
    gap = _phi_gap(p, q, m)
    if abs(gap) >= 1 << (m - ell + 1):
        raise ValueError(
            f"pair ({p}, {q}) violates the closeness precondition at ell={ell}"
        )
    if not xor_prefix_is_block(p, q, ell):
        return False
    if p == q:
        return True
    lo, hi = (p, q) if gap >= 0 else (q, p)
    diff = (p ^ q) & ((1 << (ell - 1)) - 1)
    if diff == 0:
        return True
    form = classify_close_pair(lo, hi, m, ell)
    if not form.ok:
        return False
    k = form.k
    assert k is not None
    tail_mask = ((1 << m) - 1) & ~((1 << (ell - 1)) - 1)
    run_full = ((1 << (ell - 1)) - 1) & ~((1 << (k - 1)) - 1)
    if diff != run_full:
        return False
    if (p ^ q) & tail_mask == 0:
        return False
    return True


def sample_close_pair(rng, m_low: int = 4, m_high: int = 20) -> tuple[int, int, int, int]:
    """Draw (p, q, m, ell) satisfying 0 <= phi(q) - phi(p) < 2**-(ell-1)."""
    m = rng.randint(m_low, m_high)
    ell = rng.randint(2, m)
    gap = rng.randrange(1 << (m - ell + 1))
    rp = rng.randrange((1 << m) - gap)
    p = bit_reverse(rp, m)
    q = bit_reverse(rp + gap, m)
    return p, q, m, ell
