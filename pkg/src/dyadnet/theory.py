"""Closed forms for the max-norm separation of dyadic prefixes.

The exact separation radius of the first 2**m points of the classical
identity/Pascal sequence depends only on the binary shape of m: powers of
two and their predecessors sit at one extreme with radius 2**(-m-1), and
every other m splits uniquely as 2**v + 2**w + c with v > w >= 0 and
0 <= c < 2**w, where the radius is 2**(-2**v - 2**w).  This module
exposes the shape analysis, the formula, the closed-form index pair that
attains the minimum, the decay and mesh-growth bounds derived from the
formula, and a verification harness that replays all of it against the
independent geometry engine.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .digital import (
    GeneratorPair,
    classify_close_pair,
    close_pair_structure_ok,
    prefix,
    sample_close_pair,
    sobol_point,
    xor_prefix_is_block,
)
from .geometry import Norm, SeparationReport, separation
from .gf2 import pascal_structure_failures

__all__ = [
    "CROSS_CHECK_CEILING",
    "DecompositionKind",
    "MDecomposition",
    "Pow2",
    "DecayBounds",
    "VerifyRow",
    "VerifyOutcome",
    "decompose",
    "separation_exponent",
    "separation_formula",
    "witness_pair",
    "witness_distance",
    "decay_bounds",
    "separation_envelope",
    "envelope_holds",
    "mesh_growth_holds",
    "run_verify",
]

# Largest m the exhaustive cross-check accepts by default; the sweep over
# 2**14 points runs in about a second, and each further step doubles it.
CROSS_CHECK_CEILING = 14


class DecompositionKind(Enum):
    POW2 = "pow2"
    POW2_MINUS1 = "pow2_minus1"
    GENERAL = "general"


@dataclass(frozen=True, slots=True)
class MDecomposition:
    """Binary-shape classification of a prefix exponent m.

    For the general shape, m = 2**v + 2**w + c with v > w >= 0 and
    0 <= c < 2**w; the other two shapes carry only v (m = 2**v or
    m = 2**v - 1) and leave w and c as None.
    """

    m: int
    kind: DecompositionKind
    v: int
    w: int | None
    c: int | None


def decompose(m: int) -> MDecomposition:
    """Classify m by its binary shape.

    m = 1 fits both extreme shapes (2**0 and 2**1 - 1) and is classified
    as a power of two; the choice is observationally irrelevant because
    both branches share the same separation value.
    """
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    if m & (m - 1) == 0:
        return MDecomposition(m, DecompositionKind.POW2, m.bit_length() - 1, None, None)
    if (m + 1) & m == 0:
        return MDecomposition(m, DecompositionKind.POW2_MINUS1, m.bit_length(), None, None)
    v = m.bit_length() - 1
    rest = m - (1 << v)
    w = rest.bit_length() - 1
    return MDecomposition(m, DecompositionKind.GENERAL, v, w, rest - (1 << w))


def separation_exponent(m: int) -> int:
    """The exponent e such that the max-norm separation radius of the
    first 2**m points is exactly 2**-e."""
    d = decompose(m)
    if d.kind is DecompositionKind.GENERAL:
        return (1 << d.v) + (1 << d.w)
    return m + 1


def separation_formula(m: int) -> Fraction:
    """Exact max-norm separation radius of the first 2**m points."""
    return Fraction(1, 1 << separation_exponent(m))


def witness_pair(m: int) -> tuple[int, int] | None:
    """Closed-form index pair attaining the minimum distance.

    Available for the general shape only: with V = 2**v and W = 2**w, the
    pair is (2**(V+W-1) + 2**(W-1), 2**(V+W) - 2**W), two indices below
    2**m whose points are at max-norm distance exactly 2**(-V-W+1), twice
    the separation radius.  For the two extreme shapes no closed-form
    in-range pair is published here; the exhaustive search supplies one.
    """
    d = decompose(m)
    if d.kind is not DecompositionKind.GENERAL:
        return None
    big = 1 << d.v
    small = 1 << d.w
    p = (1 << (big + small - 1)) + (1 << (small - 1))
    q = (1 << (big + small)) - (1 << small)
    return p, q


def witness_distance(m: int) -> Fraction | None:
    """Exact max-norm distance between the closed-form witness points."""
    pair = witness_pair(m)
    if pair is None:
        return None
    a = sobol_point(pair[0], m)
    b = sobol_point(pair[1], m)
    return Fraction(max(abs(a.nx - b.nx), abs(a.ny - b.ny)), 1 << m)


class Pow2:
    """The exact real number 2**exponent for a rational exponent.

    Order comparisons against positive rationals are exact: both sides are
    raised to the exponent's denominator and compared as integers after
    cross-multiplication.  No rounding anywhere.
    """

    __slots__ = ("exponent",)

    def __init__(self, exponent: Fraction | int) -> None:
        object.__setattr__(self, "exponent", Fraction(exponent))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Pow2 is immutable")

    def _cmp(self, other: Fraction) -> int:
        """Sign of self - other for a rational other."""
        if other <= 0:
            return 1
        d = self.exponent.denominator
        n = self.exponent.numerator
        # 2**(n/d) vs a/b  <=>  2**n * b**d vs a**d for positive a/b.
        lhs = other.denominator**d
        rhs = other.numerator**d
        if n >= 0:
            lhs <<= n
        else:
            rhs <<= -n
        return (lhs > rhs) - (lhs < rhs)

    def _coerce(self, other: object) -> int | None:
        if isinstance(other, Pow2):
            e = self.exponent - other.exponent
            return (e > 0) - (e < 0)
        if isinstance(other, (int, Fraction)):
            return self._cmp(Fraction(other))
        return None

    def __eq__(self, other: object) -> bool:
        c = self._coerce(other)
        return NotImplemented if c is None else c == 0

    def __le__(self, other: object) -> bool:
        c = self._coerce(other)
        return NotImplemented if c is None else c <= 0

    def __lt__(self, other: object) -> bool:
        c = self._coerce(other)
        return NotImplemented if c is None else c < 0

    def __ge__(self, other: object) -> bool:
        c = self._coerce(other)
        return NotImplemented if c is None else c >= 0

    def __gt__(self, other: object) -> bool:
        c = self._coerce(other)
        return NotImplemented if c is None else c > 0

    def __hash__(self) -> int:
        # Integral exponents make a genuine rational; hash like one so
        # equal Fractions and Pow2 values collide as required.
        if self.exponent.denominator == 1:
            return hash(Fraction(2) ** self.exponent.numerator)
        return hash(("pow2", self.exponent))

    def __float__(self) -> float:
        return math.pow(2.0, float(self.exponent))

    def __repr__(self) -> str:
        return f"Pow2({self.exponent})"


@dataclass(frozen=True, slots=True)
class DecayBounds:
    """Upper bounds on the separation radius of 2**m points.

    ``general`` (2**(-3m/4 - 5/4)) holds for every m; ``strong``
    (2**(-3m/4 - 3/2)) holds for every m except 1 and 5 and is None
    there; ``equality_expected`` marks m = 2**v - 2 (v >= 2), where the
    strong bound is attained exactly.
    """

    m: int
    general: Pow2
    strong: Pow2 | None
    equality_expected: bool


def decay_bounds(m: int) -> DecayBounds:
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    general = Pow2(Fraction(-3 * m - 5, 4))
    strong = None if m in (1, 5) else Pow2(Fraction(-3 * m - 6, 4))
    equality = m >= 2 and (m + 2) & (m + 1) == 0
    return DecayBounds(m=m, general=general, strong=strong, equality_expected=equality)


def separation_envelope(n: int) -> Pow2:
    """The constant C with radius <= C * N**(-3/4), by range of N."""
    if n < 2:
        raise ValueError(f"envelope needs N >= 2, got {n}")
    return Pow2(Fraction(-3, 4)) if n >= 64 else Pow2(Fraction(-1, 2))


def envelope_holds(n: int, radius: Fraction) -> bool:
    """Exact check of radius <= C * N**(-3/4) via fourth powers."""
    if n < 2:
        raise ValueError(f"envelope needs N >= 2, got {n}")
    c4 = Fraction(1, 8) if n >= 64 else Fraction(1, 4)
    return radius**4 * n**3 <= c4


def mesh_growth_holds(n: int, rho_lower: Fraction) -> bool:
    """Exact check of rho >= C * N**(1/4) via fourth powers.

    C is 2**(-1/2) for N >= 2 and improves to 2**(-1/4) for N >= 64,
    mirroring the envelope split.
    """
    if n < 2:
        raise ValueError(f"mesh growth needs N >= 2, got {n}")
    c4 = Fraction(1, 2) if n >= 64 else Fraction(1, 4)
    return rho_lower**4 >= c4 * n


@dataclass(frozen=True, slots=True)
class VerifyRow:
    """One verification record: the formula at m, optionally cross-checked."""

    decomposition: MDecomposition
    formula_radius: Fraction
    computed: SeparationReport | None
    formula_witness: tuple[int, int] | None

    @property
    def m(self) -> int:
        return self.decomposition.m

    @property
    def match(self) -> bool | None:
        """Whether the cross-check agreed; None when it did not run."""
        if self.computed is None:
            return None
        return self.computed.radius == self.formula_radius


@dataclass(frozen=True)
class VerifyOutcome:
    rows: tuple[VerifyRow, ...]
    problems: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.problems


def run_verify(
    m_max: int,
    cross_check_up_to: int | None = None,
    seed: int = 2024,
    structure_samples: int = 200,
) -> VerifyOutcome:
    """Replay the closed form against independent computation.

    For each m up to m_max: evaluate the formula, cross-check it against
    the plane sweep over all 2**m points when m <= cross_check_up_to
    (default: everything), and confirm the closed-form witness distance
    for the general shape.  Afterwards run the decay-bound checks and the
    seeded randomized structure suites (Pascal-matrix identities and
    close-index digit patterns).  Problems come back as human-readable
    strings; an empty tuple means everything agreed.
    """
    if m_max < 1:
        raise ValueError(f"m_max must be positive, got {m_max}")
    if cross_check_up_to is None:
        cross_check_up_to = m_max
    if structure_samples < 0:
        raise ValueError("structure_samples must be non-negative")

    rows: list[VerifyRow] = []
    problems: list[str] = []
    for m in range(1, m_max + 1):
        d = decompose(m)
        formula = separation_formula(m)
        computed = None
        if m <= cross_check_up_to:
            ps = prefix(GeneratorPair.sobol(m), 1 << m)
            computed = separation(ps, Norm.LINF)
            if computed.radius != formula:
                problems.append(
                    f"m={m}: computed radius {computed.radius} differs from "
                    f"formula value {formula}"
                )
        pair = witness_pair(m)
        if pair is not None:
            dist = witness_distance(m)
            if dist != 2 * formula:
                problems.append(
                    f"m={m}: closed-form pair {pair} sits at distance {dist}, "
                    f"expected {2 * formula}"
                )
        bounds = decay_bounds(m)
        if not bounds.general >= formula:
            problems.append(f"m={m}: general decay bound fails")
        if bounds.strong is not None:
            if not bounds.strong >= formula:
                problems.append(f"m={m}: strong decay bound fails")
            if bounds.equality_expected != (bounds.strong == formula):
                problems.append(
                    f"m={m}: strong-bound equality expectation "
                    f"({bounds.equality_expected}) not met"
                )
        # Radius times 2**(m/2) stays at most 1: 2e >= m exactly.
        if 2 * separation_exponent(m) < m:
            problems.append(f"m={m}: radius exceeds the square-root scaling ceiling")
        rows.append(
            VerifyRow(
                decomposition=d,
                formula_radius=formula,
                computed=computed,
                formula_witness=pair,
            )
        )

    if structure_samples:
        rng = random.Random(seed)
        for v in range(1, 6):
            for w in range(v):
                for text in pascal_structure_failures(v, w, rng, structure_samples):
                    problems.append(f"pascal structure (v={v}, w={w}): {text}")
        for _ in range(structure_samples):
            p, q, m, ell = sample_close_pair(rng)
            if not xor_prefix_is_block(p, q, ell):
                problems.append(
                    f"close pair (p={p}, q={q}, m={m}, ell={ell}): "
                    "xor prefix is not a block"
                )
                break
            if not close_pair_structure_ok(p, q, m, ell):
                problems.append(
                    f"close pair (p={p}, q={q}, m={m}, ell={ell}): "
                    "digit pattern violated"
                )
                break
            if p != q and not classify_close_pair(p, q, m, ell).ok:
                problems.append(
                    f"close pair (p={p}, q={q}, m={m}, ell={ell}): "
                    "carry-run classification violated"
                )
                break

    return VerifyOutcome(rows=tuple(rows), problems=tuple(problems))
